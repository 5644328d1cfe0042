use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::{clearly_below, stream_rng, SolveReport};
use crate::error::{Error, Result};
use crate::qubo::{Couplings, Qubo};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct TabuParams {
    /// `None` uses `max(10, n / 10)`.
    pub tenure: Option<usize>,
    /// `None` uses `max(1000, 100 n)`.
    pub iterations: Option<usize>,
    pub restarts: usize,
}

impl Default for TabuParams {
    fn default() -> Self {
        Self { tenure: None, iterations: None, restarts: 10 }
    }
}

impl TabuParams {
    pub fn tenure_for(&self, n: usize) -> usize {
        self.tenure.unwrap_or((n / 10).max(10))
    }

    pub fn iterations_for(&self, n: usize) -> usize {
        self.iterations.unwrap_or((100 * n).max(1000))
    }
}

fn tabu_run<S: Scalar>(c: &Couplings<S>, tenure: usize, iterations: usize, seed: u64, run: usize) -> Vec<bool> {
    let mut rng = stream_rng(seed, run as u64);
    let n = c.num_vars();
    let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    if n == 0 {
        return x;
    }
    let mut fields = c.fields(&x);
    let mut energy = S::zero();
    let mut best = (energy, x.clone());
    let mut tabu_until = vec![0usize; n];
    for it in 0..iterations {
        // best admissible move; the best move overall is the fallback
        let mut admissible: Option<(S, usize, u32)> = None;
        let mut overall: Option<(S, usize)> = None;
        for k in 0..n {
            let d = c.delta(&x, &fields, k);
            if overall.map_or(true, |(b, _)| d < b) {
                overall = Some((d, k));
            }
            let allowed = tabu_until[k] <= it || clearly_below(energy + d, best.0);
            if !allowed {
                continue;
            }
            admissible = match admissible {
                None => Some((d, k, 1)),
                Some((b, _, _)) if clearly_below(d, b) => Some((d, k, 1)),
                Some((b, bk, ties)) if !clearly_below(b, d) => {
                    // reservoir choice among equal moves
                    if rng.gen_range(0..=ties) == 0 {
                        Some((b, k, ties + 1))
                    } else {
                        Some((b, bk, ties + 1))
                    }
                }
                keep => keep,
            };
        }
        let k = admissible.map(|(_, k, _)| k).or(overall.map(|(_, k)| k)).expect("n > 0");
        energy += c.flip(&mut x, &mut fields, k);
        tabu_until[k] = it + 1 + tenure;
        if clearly_below(energy, best.0) {
            best = (energy, x.clone());
        }
    }
    best.1
}

/// Single-flip tabu search with aspiration, restarted from `restarts`
/// random assignments. Each restart uses its own RNG stream.
pub fn tabu_search<S: Scalar>(q: &Qubo<S>, p: &TabuParams, seed: u64) -> Result<SolveReport<S>> {
    if p.restarts == 0 || p.tenure == Some(0) {
        return Err(Error::InvalidSpec(format!("invalid tabu parameters {p:?}")));
    }
    let started = Instant::now();
    let n = q.num_vars();
    let (tenure, iterations) = (p.tenure_for(n), p.iterations_for(n));
    let c = q.couplings();
    let runs: Vec<Vec<bool>> = (0..p.restarts)
        .into_par_iter()
        .map(|r| tabu_run(&c, tenure, iterations, seed, r))
        .collect();
    let mut best: Option<(S, Vec<bool>)> = None;
    for x in runs {
        let e = q.energy(&x)?;
        if best.as_ref().map_or(true, |(b, _)| clearly_below(e, *b)) {
            best = Some((e, x));
        }
    }
    let (_, x) = best.expect("at least one restart");
    SolveReport::finish(q, x, (p.restarts * iterations) as u64, started, "tabu", seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::brute_force;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_tenure() {
        let p = TabuParams::default();
        assert_eq!(p.tenure_for(5), 10);
        assert_eq!(p.tenure_for(250), 25);
    }

    #[test]
    fn large_tenure_still_finds_local_optimum() {
        let mut q = Qubo::new(3);
        q.add_linear(0, -1.0);
        q.add_linear(1, 2.0);
        q.add_quadratic(0, 2, -3.0);
        let p = TabuParams { tenure: Some(5), iterations: Some(50), restarts: 1 };
        let r = tabu_search(&q, &p, 0).unwrap();
        assert_eq!(r.best_energy, brute_force(&q).unwrap().best_energy);
    }

    #[test]
    fn reproducible_and_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut q = Qubo::new(16);
        for i in 0..16 {
            q.add_linear(i, rng.gen_range(-3.0..3.0));
            for j in i + 1..16 {
                q.add_quadratic(i, j, rng.gen_range(-3.0..3.0));
            }
        }
        let a = tabu_search(&q, &TabuParams::default(), 4).unwrap();
        let b = tabu_search(&q, &TabuParams::default(), 4).unwrap();
        assert_eq!(a.best_assignment, b.best_assignment);
        assert_eq!(a.best_energy, q.energy(&a.best_assignment).unwrap());
        assert_eq!(a.best_energy, brute_force(&q).unwrap().best_energy);
    }
}
