//! Closed undirected postman routes via odd-vertex pairing.
//!
//! Every closed covering walk must re-use edges at odd-degree vertices. The
//! cheapest repair pairs the odd vertices up and duplicates a shortest path
//! per pair; the pairing itself is the binary decision compiled to a QUBO.
//! Once decoded, the augmented multigraph is Eulerian and its circuit, with
//! each stand-in edge expanded back into its path, is the route.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{
    eulerian_circuit, odd_degree_vertices, shortest_paths, EdgeTag, Graph, MultiGraph,
    ShortestPaths,
};
use crate::qubo::{CompiledQubo, ConstraintFamily, PenaltyConfig, Qubo, StepMode, VarLabel, VariableRegistry};
use crate::route::{RouteSolution, RouteStep, Validity};
use crate::scalar::Scalar;

/// Largest odd-vertex count the exhaustive oracle accepts.
pub const MAX_ORACLE_ODD_VERTICES: usize = 12;

/// Disjoint vertex pairs, each stored `(low, high)`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        Self { pairs }
    }

    /// True when the pairs partition `vertices` exactly.
    pub fn is_perfect_for(&self, vertices: &[usize]) -> bool {
        let mut covered: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        covered.sort_unstable();
        let mut expected = vertices.to_vec();
        expected.sort_unstable();
        covered == expected
    }

    pub fn added_weight<S: Scalar>(&self, sp: &ShortestPaths<S>) -> S {
        self.pairs.iter().fold(S::zero(), |acc, &(a, b)| acc + sp.dist(a, b))
    }
}

fn check_pairing_graph<S: Scalar>(g: &Graph<S>) -> Result<()> {
    if !g.is_undirected() {
        return Err(Error::NonUndirectedGraph);
    }
    if let Some(e) = g.undirected_edges().iter().find(|e| e.w_ab != e.w_ba) {
        return Err(Error::AsymmetricWeights { a: e.a, b: e.b });
    }
    Ok(())
}

/// Five times the largest shortest-path distance between odd vertices.
pub fn default_pairing_penalty<S: Scalar>(odd: &[usize], sp: &ShortestPaths<S>) -> S {
    let mut max = S::zero();
    for (k, &a) in odd.iter().enumerate() {
        for &b in &odd[k + 1..] {
            max = max.max_value_of(sp.dist(a, b));
        }
    }
    let base = if max > S::zero() { max } else { S::one() };
    S::from_usize_lossy(5) * base
}

/// Pairing QUBO: `sum_{i<j} W_ij x_ij + p * sum_i (1 - sum_{j != i} x_ij)^2`
/// over the odd vertices, with `W_ij` the shortest-path distance. Vertex rows
/// that coincide (the two rows of a two-vertex instance) are counted once.
pub fn build_pairing_qubo<S: Scalar>(g: &Graph<S>, p: S) -> Result<CompiledQubo<S>> {
    check_pairing_graph(g)?;
    let odd = odd_degree_vertices(g)?;
    if odd.is_empty() {
        return Err(Error::NoOddVertices);
    }
    let sp = shortest_paths(g)?;
    Ok(pairing_qubo_from_parts(&odd, &sp, p))
}

fn pairing_qubo_from_parts<S: Scalar>(odd: &[usize], sp: &ShortestPaths<S>, p: S) -> CompiledQubo<S> {
    let mut labels = Vec::new();
    for (k, &a) in odd.iter().enumerate() {
        for &b in &odd[k + 1..] {
            labels.push(VarLabel::pair(a, b));
        }
    }
    let registry = VariableRegistry::from_labels(labels);
    let n = registry.len();
    let idx = |a: usize, b: usize| registry.index_of(&VarLabel::pair(a, b)).expect("registered");

    let mut objective = Qubo::new(n);
    for (k, &a) in odd.iter().enumerate() {
        for &b in &odd[k + 1..] {
            objective.add_linear(idx(a, b), sp.dist(a, b));
        }
    }

    let rows: BTreeSet<Vec<usize>> = odd
        .iter()
        .map(|&a| {
            let mut row: Vec<usize> = odd.iter().filter(|&&b| b != a).map(|&b| idx(a, b)).collect();
            row.sort_unstable();
            row
        })
        .collect();
    let mut constraint = Qubo::new(n);
    for row in rows {
        let terms: Vec<(usize, S)> = row.into_iter().map(|i| (i, -S::one())).collect();
        constraint.add_square_penalty(&terms, S::one(), S::one());
    }

    let mut penalties = PenaltyConfig::uniform(p);
    penalties.p_pairing = p;
    CompiledQubo::assemble(registry, objective, vec![(ConstraintFamily::Pairing, constraint)], penalties)
}

/// Reads the pairs set to one. Every vertex named by the registry must be
/// covered exactly once.
pub fn decode_pairing(x: &[bool], reg: &VariableRegistry) -> Result<Pairing> {
    if x.len() != reg.len() {
        return Err(Error::LengthMismatch { expected: reg.len(), got: x.len() });
    }
    let mut vertices = BTreeSet::new();
    let mut pairs = Vec::new();
    for (i, label) in reg.iter() {
        if let VarLabel::PairVar { i: a, j: b } = *label {
            vertices.insert(a);
            vertices.insert(b);
            if x[i] {
                pairs.push((a, b));
            }
        }
    }
    for &v in &vertices {
        let count = pairs.iter().filter(|&&(a, b)| a == v || b == v).count();
        if count != 1 {
            return Err(Error::NotPerfectPairing { vertex: v, count });
        }
    }
    Ok(Pairing::new(pairs))
}

/// Encodes a pairing as bits over `reg`.
pub fn encode_pairing(pairing: &Pairing, reg: &VariableRegistry) -> Vec<bool> {
    let mut x = vec![false; reg.len()];
    for &(a, b) in &pairing.pairs {
        if let Some(i) = reg.index_of(&VarLabel::pair(a, b)) {
            x[i] = true;
        }
    }
    x
}

/// Duplicates one shortest path per pair, walks the Euler circuit of the
/// augmented multigraph and expands each stand-in edge back into its path.
pub fn augment_and_route<S: Scalar>(g: &Graph<S>, pairing: &Pairing) -> Result<RouteSolution<S>> {
    check_pairing_graph(g)?;
    let odd = odd_degree_vertices(g)?;
    if !pairing.is_perfect_for(&odd) {
        let vertex = odd
            .iter()
            .copied()
            .find(|v| pairing.pairs.iter().filter(|&&(a, b)| a == *v || b == *v).count() != 1)
            .unwrap_or(0);
        let count = pairing.pairs.iter().filter(|&&(a, b)| a == vertex || b == vertex).count();
        return Err(Error::NotPerfectPairing { vertex, count });
    }
    let sp = shortest_paths(g)?;
    route_with_paths(g, pairing, &sp)
}

fn route_with_paths<S: Scalar>(g: &Graph<S>, pairing: &Pairing, sp: &ShortestPaths<S>) -> Result<RouteSolution<S>> {
    let mut mg = MultiGraph::from_undirected(g);
    for (k, &(a, b)) in pairing.pairs.iter().enumerate() {
        mg.push(a, b, sp.dist(a, b), EdgeTag::Added(k));
    }
    let tour = eulerian_circuit(&mg)?;

    let mut steps = Vec::new();
    let mut weight = S::zero();
    for (&(from, to), &e) in tour.walk.steps.iter().zip(&tour.edge_order) {
        match mg.edges[e].tag {
            EdgeTag::Original(edge) => {
                let arc = g.arc(edge, from, to).expect("edge orientation exists");
                weight += arc.weight;
                steps.push(RouteStep { from, to, mode: StepMode::Plain, edge });
            }
            EdgeTag::Added(_) => {
                for arc in sp.path(from, to) {
                    weight += arc.weight;
                    steps.push(RouteStep { from: arc.from, to: arc.to, mode: StepMode::Plain, edge: arc.edge });
                }
            }
        }
    }

    let mut validity = Validity::all_true();
    validity.contiguous = steps.windows(2).all(|w| w[0].to == w[1].from);
    validity.endpoints = steps.first().zip(steps.last()).map_or(true, |(f, l)| f.from == l.to);
    validity.required_covered = g.edges().all(|e| steps.iter().any(|s| s.edge == e));
    Ok(RouteSolution { walks: vec![steps], objective_weight: weight, turn_extra: S::zero(), validity })
}

/// Minimum-weight perfect pairing by exhaustive enumeration of all
/// `(d - 1)!!` pairings. Ties go to the lexicographically smallest pairing.
pub fn exact_pairing_oracle<S: Scalar>(g: &Graph<S>) -> Result<(Pairing, S)> {
    check_pairing_graph(g)?;
    let odd = odd_degree_vertices(g)?;
    if odd.len() > MAX_ORACLE_ODD_VERTICES {
        return Err(Error::TooManyOddVertices(odd.len()));
    }
    let sp = shortest_paths(g)?;
    Ok(best_pairing(&odd, &sp))
}

fn best_pairing<S: Scalar>(odd: &[usize], sp: &ShortestPaths<S>) -> (Pairing, S) {
    fn recurse<S: Scalar>(
        remaining: &mut Vec<usize>,
        sp: &ShortestPaths<S>,
        current: &mut Vec<(usize, usize)>,
        weight: S,
        best: &mut Option<(Vec<(usize, usize)>, S)>,
    ) {
        if remaining.is_empty() {
            // enumeration order is lexicographic, so strict improvement keeps the smallest tie
            if best.as_ref().map_or(true, |(_, w)| weight < *w) {
                *best = Some((current.clone(), weight));
            }
            return;
        }
        let first = remaining.remove(0);
        for k in 0..remaining.len() {
            let partner = remaining.remove(k);
            current.push((first, partner));
            recurse(remaining, sp, current, weight + sp.dist(first, partner), best);
            current.pop();
            remaining.insert(k, partner);
        }
        remaining.insert(0, first);
    }

    let mut remaining = odd.to_vec();
    remaining.sort_unstable();
    let mut best = None;
    recurse(&mut remaining, sp, &mut Vec::new(), S::zero(), &mut best);
    let (pairs, w) = best.expect("even vertex count has a pairing");
    (Pairing::new(pairs), w)
}

/// Precomputed pairing instance: odd vertices and distances of one graph.
#[derive(Debug, Clone)]
pub struct PairingProblem<S> {
    pub graph: Graph<S>,
    pub odd: Vec<usize>,
    pub paths: ShortestPaths<S>,
}

impl<S: Scalar> PairingProblem<S> {
    pub fn new(graph: Graph<S>) -> Result<Self> {
        check_pairing_graph(&graph)?;
        let odd = odd_degree_vertices(&graph)?;
        let paths = shortest_paths(&graph)?;
        Ok(Self { graph, odd, paths })
    }

    pub fn default_penalty(&self) -> S {
        default_pairing_penalty(&self.odd, &self.paths)
    }

    pub fn compile(&self, p: S) -> Result<CompiledQubo<S>> {
        if self.odd.is_empty() {
            return Err(Error::NoOddVertices);
        }
        Ok(pairing_qubo_from_parts(&self.odd, &self.paths, p))
    }

    pub fn route(&self, pairing: &Pairing) -> Result<RouteSolution<S>> {
        if !pairing.is_perfect_for(&self.odd) {
            return Err(Error::NotPerfectPairing { vertex: self.odd.first().copied().unwrap_or(0), count: 0 });
        }
        route_with_paths(&self.graph, pairing, &self.paths)
    }

    /// Route for an already Eulerian graph.
    pub fn euler_route(&self) -> Result<RouteSolution<S>> {
        self.route(&Pairing::default())
    }

    pub fn oracle(&self) -> Result<(Pairing, S)> {
        if self.odd.len() > MAX_ORACLE_ODD_VERTICES {
            return Err(Error::TooManyOddVertices(self.odd.len()));
        }
        Ok(best_pairing(&self.odd, &self.paths))
    }
}
