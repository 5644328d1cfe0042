use std::time::Instant;

use rand::Rng;

use super::{clearly_below, stream_rng, SolveReport};
use crate::error::{Error, Result};
use crate::qubo::{Couplings, Qubo};
use crate::scalar::Scalar;

/// Steepest descent from `x` in place: flips the bit with the most negative
/// energy change (lowest index on ties) until no flip improves. Returns the
/// number of flips made.
pub fn descend<S: Scalar>(c: &Couplings<S>, x: &mut [bool]) -> u64 {
    let mut fields = c.fields(x);
    let mut flips = 0;
    loop {
        let mut best: Option<(usize, S)> = None;
        for k in 0..x.len() {
            let d = c.delta(x, &fields, k);
            if clearly_below(d, S::zero()) && best.map_or(true, |(_, b)| d < b) {
                best = Some((k, d));
            }
        }
        let Some((k, _)) = best else { return flips };
        c.flip(x, &mut fields, k);
        flips += 1;
    }
}

/// Steepest descent from `starts` uniformly random assignments.
pub fn greedy_descent<S: Scalar>(q: &Qubo<S>, starts: usize, seed: u64) -> Result<SolveReport<S>> {
    if starts == 0 {
        return Err(Error::InvalidSpec("greedy descent needs at least one start".into()));
    }
    let started = Instant::now();
    let c = q.couplings();
    let n = q.num_vars();
    let mut best: Option<(S, Vec<bool>)> = None;
    let mut evaluated = 0;
    for s in 0..starts {
        let mut rng = stream_rng(seed, s as u64);
        let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        evaluated += 1 + descend(&c, &mut x);
        let e = q.energy(&x)?;
        if best.as_ref().map_or(true, |(b, _)| clearly_below(e, *b)) {
            best = Some((e, x));
        }
    }
    let (_, x) = best.expect("at least one start");
    SolveReport::finish(q, x, evaluated, started, "greedy", seed)
}

/// Polishes a sampler result by steepest descent from its best assignment.
pub fn greedy_post<S: Scalar>(q: &Qubo<S>, report: &SolveReport<S>) -> Result<SolveReport<S>> {
    if report.best_assignment.len() != q.num_vars() {
        return Err(Error::LengthMismatch { expected: q.num_vars(), got: report.best_assignment.len() });
    }
    let started = Instant::now();
    let mut x = report.best_assignment.clone();
    let flips = descend(&q.couplings(), &mut x);
    let mut out = SolveReport::finish(q, x, report.samples_evaluated + flips, started, &report.solver_name, report.seed)?;
    out.wall_time += report.wall_time;
    out.retunes = report.retunes;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::brute_force;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_qubo(rng: &mut ChaCha8Rng, n: usize) -> Qubo<f64> {
        let mut q = Qubo::new(n);
        for i in 0..n {
            q.add_linear(i, rng.gen_range(-10.0..10.0));
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    q.add_quadratic(i, j, rng.gen_range(-10.0..10.0));
                }
            }
        }
        q
    }

    #[test]
    fn textbook_from_zero() {
        let mut q = Qubo::new(1);
        q.add_linear(0, 9.0);
        q.add_square_penalty(&[(0, -1.0)], 1.0, 10.0);
        let mut x = vec![false];
        descend(&q.couplings(), &mut x);
        assert_eq!(x, vec![true]);
    }

    #[test]
    fn outputs_are_local_minima_and_never_worse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let q = random_qubo(&mut rng, 15);
            let x0: Vec<bool> = (0..15).map(|_| rng.gen()).collect();
            let mut x = x0.clone();
            descend(&q.couplings(), &mut x);
            let e = q.energy(&x).unwrap();
            assert!(e <= q.energy(&x0).unwrap());
            for k in 0..15 {
                assert!(q.energy_delta(&x, k).unwrap() >= -1e-9);
            }
        }
    }

    #[test]
    fn post_processing_is_monotone_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let q = random_qubo(&mut rng, 12);
        let raw = SolveReport::finish(&q, vec![true; 12], 1, Instant::now(), "x", 0).unwrap();
        let once = greedy_post(&q, &raw).unwrap();
        assert!(once.best_energy <= raw.best_energy);
        let twice = greedy_post(&q, &once).unwrap();
        assert_eq!(twice.best_assignment, once.best_assignment);
    }

    #[test]
    fn one_flip_above_ground_reaches_ground() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = random_qubo(&mut rng, 10);
        let ground = brute_force(&q).unwrap();
        let mut x = ground.best_assignment.clone();
        x[3] = !x[3];
        let raw = SolveReport::finish(&q, x, 1, Instant::now(), "x", 0).unwrap();
        assert_eq!(greedy_post(&q, &raw).unwrap().best_energy, ground.best_energy);
    }

    #[test]
    fn greedy_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let q = random_qubo(&mut rng, 14);
        let a = greedy_descent(&q, 10, 3).unwrap();
        let b = greedy_descent(&q, 10, 3).unwrap();
        assert_eq!(a.best_assignment, b.best_assignment);
    }
}
