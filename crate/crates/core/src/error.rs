use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph has directed edges; this pipeline requires a purely undirected graph")]
    NonUndirectedGraph,
    #[error("undirected edge {a}-{b} has asymmetric weights; the pairing pipeline requires w_ab = w_ba")]
    AsymmetricWeights { a: usize, b: usize },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("multigraph has no Eulerian circuit")]
    NoEulerianCircuit,
    #[error("assignment length {got} does not match variable count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("graph has no odd-degree vertices; an Eulerian circuit is already optimal")]
    NoOddVertices,
    #[error("assignment does not encode a perfect pairing (vertex {vertex} covered {count} times)")]
    NotPerfectPairing { vertex: usize, count: usize },
    #[error("{0} odd-degree vertices exceeds the exhaustive pairing limit of 12")]
    TooManyOddVertices(usize),
    #[error("invalid problem spec: {0}")]
    InvalidSpec(String),
    #[error("endpoint pruning leaves step {step} without variables")]
    InfeasibleEndpoints { step: usize },
    #[error("unsupported variant combination: {0}")]
    UnsupportedCombination(String),
    #[error("exact search exceeded its budget of {0} nodes")]
    SearchBudgetExceeded(u64),
    #[error("no legal walk within the step bound")]
    NoFeasibleWalk,
    #[error("{n} variables exceeds the exhaustive search limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("no valid solution after {retunes} penalty retunes")]
    NoValidSolution { retunes: usize },
    #[error("the required edges admit an Euler trail; the route needs no QUBO")]
    ShortcutApplies,
    #[error("format error: {0}")]
    Format(String),
}
