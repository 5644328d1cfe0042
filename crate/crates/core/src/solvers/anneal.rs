use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::{clearly_below, stream_rng, SolveReport};
use crate::error::{Error, Result};
use crate::qubo::{Couplings, Qubo};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    pub reads: usize,
    pub sweeps: usize,
    pub beta_min: f64,
    pub beta_max: f64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self { reads: 1000, sweeps: 1000, beta_min: 0.1, beta_max: 10.0 }
    }
}

impl SaParams {
    fn validate(&self) -> Result<()> {
        let ok = self.reads >= 1
            && self.sweeps >= 1
            && self.beta_min > 0.0
            && self.beta_min <= self.beta_max
            && self.beta_max.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("invalid annealing parameters {self:?}")))
        }
    }

    /// Inverse temperature of sweep `s`, geometric from `beta_min` to `beta_max`.
    pub fn beta(&self, s: usize) -> f64 {
        if self.sweeps == 1 {
            return self.beta_max;
        }
        let t = s as f64 / (self.sweeps - 1) as f64;
        self.beta_min * (self.beta_max / self.beta_min).powf(t)
    }
}

fn anneal_read<S: Scalar>(c: &Couplings<S>, p: &SaParams, seed: u64, read: usize) -> (f64, Vec<bool>) {
    let mut rng = stream_rng(seed, read as u64);
    let n = c.num_vars();
    let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut fields = c.fields(&x);
    let mut energy = 0.0;
    let mut best = (energy, x.clone());
    for s in 0..p.sweeps {
        let beta = p.beta(s);
        for k in 0..n {
            let d = c.delta(&x, &fields, k).to_f64_lossy();
            // exp(-40) is below the resolution of a uniform f64 draw
            if d <= 0.0 || (beta * d < 40.0 && rng.gen::<f64>() < (-beta * d).exp()) {
                c.flip(&mut x, &mut fields, k);
                energy += d;
            }
        }
        if energy < best.0 {
            best = (energy, x.clone());
        }
    }
    best
}

/// Metropolis annealing with a geometric inverse-temperature ramp.
///
/// Each read starts from a uniformly random assignment and keeps the best
/// state seen at the end of any sweep. Reads run in parallel on their own
/// RNG streams; the lowest read wins, earliest read on ties.
pub fn simulated_annealing<S: Scalar>(q: &Qubo<S>, p: &SaParams, seed: u64) -> Result<SolveReport<S>> {
    p.validate()?;
    let started = Instant::now();
    let c = q.couplings();
    let reads: Vec<Vec<bool>> = (0..p.reads)
        .into_par_iter()
        .map(|r| anneal_read(&c, p, seed, r).1)
        .collect();
    let mut best: Option<(S, Vec<bool>)> = None;
    for x in reads {
        let e = q.energy(&x)?;
        if best.as_ref().map_or(true, |(b, _)| clearly_below(e, *b)) {
            best = Some((e, x));
        }
    }
    let (_, x) = best.expect("at least one read");
    let evaluated = (p.reads * p.sweeps * q.num_vars()) as u64;
    SolveReport::finish(q, x, evaluated, started, "sa", seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn schedule_endpoints() {
        let p = SaParams { sweeps: 5, ..SaParams::default() };
        assert!((p.beta(0) - 0.1).abs() < 1e-12);
        assert!((p.beta(4) - 10.0).abs() < 1e-12);
        assert!((p.beta(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut q = Qubo::new(20);
        for i in 0..20 {
            q.add_linear(i, rng.gen_range(-3.0..3.0));
            for j in i + 1..20 {
                q.add_quadratic(i, j, rng.gen_range(-3.0..3.0));
            }
        }
        let p = SaParams { reads: 20, sweeps: 50, ..SaParams::default() };
        let a = simulated_annealing(&q, &p, 42).unwrap();
        let b = simulated_annealing(&q, &p, 42).unwrap();
        assert_eq!(a.best_assignment, b.best_assignment);
        assert_eq!(a.best_energy, q.energy(&a.best_assignment).unwrap());
    }

    #[test]
    fn frozen_schedule_is_locally_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut q = Qubo::new(12);
        for i in 0..12 {
            q.add_linear(i, rng.gen_range(-3.0..3.0));
            for j in i + 1..12 {
                q.add_quadratic(i, j, rng.gen_range(-3.0..3.0));
            }
        }
        let p = SaParams { reads: 3, sweeps: 200, beta_min: 1e6, beta_max: 1e6 };
        let r = simulated_annealing(&q, &p, 9).unwrap();
        for k in 0..12 {
            assert!(q.energy_delta(&r.best_assignment, k).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let q = Qubo::<f64>::new(2);
        let p = SaParams { beta_min: 2.0, beta_max: 1.0, ..SaParams::default() };
        assert!(simulated_annealing(&q, &p, 0).is_err());
    }
}
