//! Classical samplers for binary quadratic models and the solve/decode loop.
//!
//! All samplers are deterministic for a fixed seed. Multi-read samplers give
//! every read its own ChaCha stream, so results do not depend on how reads
//! are scheduled across threads.

mod anneal;
mod brute;
mod local;
mod pipeline;
mod tabu;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::qubo::{Assignment, Qubo};
use crate::scalar::Scalar;

pub use anneal::{simulated_annealing, SaParams};
pub use brute::{brute_force, for_each_assignment, BRUTE_FORCE_MAX_VARS};
pub use local::{descend, greedy_descent, greedy_post};
pub use pipeline::{solve_with_retune, GeneralPipeline, PairingPipeline, Pipeline, RetuneOutcome};
pub use tabu::{tabu_search, TabuParams};

/// Best assignment found by one sampler run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<S> {
    pub best_energy: S,
    pub best_assignment: Assignment,
    pub samples_evaluated: u64,
    pub wall_time: f64,
    pub solver_name: String,
    pub seed: u64,
    pub retunes: usize,
}

impl<S: Scalar> SolveReport<S> {
    /// Builds a report, recomputing the energy from scratch so that it never
    /// carries incremental rounding error.
    pub(crate) fn finish(
        q: &Qubo<S>,
        x: Assignment,
        samples: u64,
        started: Instant,
        name: &str,
        seed: u64,
    ) -> Result<Self> {
        Ok(Self {
            best_energy: q.energy(&x)?,
            best_assignment: x,
            samples_evaluated: samples,
            wall_time: started.elapsed().as_secs_f64(),
            solver_name: name.to_string(),
            seed,
            retunes: 0,
        })
    }
}

/// RNG for read `stream` of a run seeded with `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sampler selection with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Sampler {
    Brute,
    Greedy { starts: usize },
    Sa(SaParams),
    Tabu(TabuParams),
    SaGreedy(SaParams),
    TabuGreedy(TabuParams),
}

impl Sampler {
    /// Parses the command-line names, using default parameters.
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "brute" => Sampler::Brute,
            "greedy" => Sampler::Greedy { starts: 100 },
            "sa" => Sampler::Sa(SaParams::default()),
            "tabu" => Sampler::Tabu(TabuParams::default()),
            "sa+greedy" => Sampler::SaGreedy(SaParams::default()),
            "tabu+greedy" => Sampler::TabuGreedy(TabuParams::default()),
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Sampler::Brute => "brute",
            Sampler::Greedy { .. } => "greedy",
            Sampler::Sa(_) => "sa",
            Sampler::Tabu(_) => "tabu",
            Sampler::SaGreedy(_) => "sa+greedy",
            Sampler::TabuGreedy(_) => "tabu+greedy",
        }
    }

    pub fn sample<S: Scalar>(&self, q: &Qubo<S>, seed: u64) -> Result<SolveReport<S>> {
        let mut report = match self {
            Sampler::Brute => brute_force(q)?,
            Sampler::Greedy { starts } => greedy_descent(q, *starts, seed)?,
            Sampler::Sa(p) => simulated_annealing(q, p, seed)?,
            Sampler::Tabu(p) => tabu_search(q, p, seed)?,
            Sampler::SaGreedy(p) => greedy_post(q, &simulated_annealing(q, p, seed)?)?,
            Sampler::TabuGreedy(p) => greedy_post(q, &tabu_search(q, p, seed)?)?,
        };
        report.solver_name = self.name().to_string();
        Ok(report)
    }
}

/// True when `a` is below `b` by more than rounding noise.
pub(crate) fn clearly_below<S: Scalar>(a: S, b: S) -> bool {
    let scale = b.abs_value().to_f64_lossy().max(1.0);
    (b - a).to_f64_lossy() > 1e-9 * scale
}
