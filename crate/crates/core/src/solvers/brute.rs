use std::time::Instant;

use super::{clearly_below, SolveReport};
use crate::error::{Error, Result};
use crate::qubo::Qubo;
use crate::scalar::Scalar;

/// Largest variable count [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 30;

/// Visits all `2^n` assignments in Gray-code order, passing each one with
/// its energy. The energy is tracked incrementally through dense local
/// fields, so each visit costs `O(n)`.
pub fn for_each_assignment<S: Scalar>(q: &Qubo<S>, mut visit: impl FnMut(&[bool], S)) -> Result<()> {
    let n = q.num_vars();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_MAX_VARS });
    }
    let mut rows = vec![S::zero(); n * n];
    for (i, j, c) in q.quadratic_terms() {
        rows[i * n + j] = c;
        rows[j * n + i] = c;
    }
    let mut fields: Vec<S> = (0..n).map(|i| q.linear(i)).collect();
    let mut x = vec![false; n];
    let mut energy = q.offset();
    visit(&x, energy);
    for t in 1u64..(1u64 << n) {
        let k = n - 1 - t.trailing_zeros() as usize;
        let row = &rows[k * n..(k + 1) * n];
        if x[k] {
            energy -= fields[k];
            for (f, &c) in fields.iter_mut().zip(row) {
                *f -= c;
            }
        } else {
            energy += fields[k];
            for (f, &c) in fields.iter_mut().zip(row) {
                *f += c;
            }
        }
        x[k] = !x[k];
        visit(&x, energy);
    }
    Ok(())
}

/// Exhaustive minimum. Ties go to the lexicographically smallest assignment
/// (variable 0 most significant).
pub fn brute_force<S: Scalar>(q: &Qubo<S>) -> Result<SolveReport<S>> {
    let started = Instant::now();
    let n = q.num_vars();
    let mut best: Option<(S, Vec<bool>)> = None;
    for_each_assignment(q, |x, e| {
        let better = match &best {
            None => true,
            Some((b, bx)) => clearly_below(e, *b) || (!clearly_below(*b, e) && x < bx.as_slice()),
        };
        if better {
            best = Some((e, x.to_vec()));
        }
    })?;
    let (_, x) = best.expect("at least one assignment");
    SolveReport::finish(q, x, 1u64 << n, started, "brute", 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn textbook_instance() {
        let mut q = Qubo::new(1);
        q.add_linear(0, 9.0);
        q.add_square_penalty(&[(0, -1.0)], 1.0, 10.0);
        let r = brute_force(&q).unwrap();
        assert_eq!((r.best_assignment, r.best_energy), (vec![true], 9.0));
    }

    #[test]
    fn zero_qubo_prefers_all_zero() {
        let r = brute_force(&Qubo::<f64>::new(3)).unwrap();
        assert_eq!(r.best_assignment, vec![false; 3]);
        assert_eq!(r.best_energy, 0.0);
    }

    #[test]
    fn ties_break_lexicographically() {
        // x0 xor x1 both cost -1: 01 beats 10
        let mut q = Qubo::new(2);
        q.add_linear(0, -1.0);
        q.add_linear(1, -1.0);
        q.add_quadratic(0, 1, 2.0);
        assert_eq!(brute_force(&q).unwrap().best_assignment, vec![false, true]);
    }

    #[test]
    fn rejects_too_many_variables() {
        assert!(matches!(brute_force(&Qubo::<f64>::new(31)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn random_qubos_match_reverse_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let n = 12;
            let mut q = Qubo::new(n);
            for i in 0..n {
                q.add_linear(i, rng.gen_range(-5..=5) as f64);
                for j in i + 1..n {
                    if rng.gen_bool(0.4) {
                        q.add_quadratic(i, j, rng.gen_range(-5..=5) as f64);
                    }
                }
            }
            // independent pass: plain counting from the top, direct evaluation
            let mut best = (f64::INFINITY, Vec::new());
            for code in (0u32..1 << n).rev() {
                let x: Vec<bool> = (0..n).map(|i| code >> (n - 1 - i) & 1 == 1).collect();
                let e = q.energy(&x).unwrap();
                if e <= best.0 {
                    best = (e, x);
                }
            }
            let r = brute_force(&q).unwrap();
            assert_eq!(r.best_energy, best.0);
            assert_eq!(r.best_assignment, best.1);
        }
    }

    #[test]
    fn visits_every_assignment_with_exact_energy() {
        let mut q = Qubo::new(4);
        q.add_offset(1.5);
        q.add_linear(2, -3.0);
        q.add_quadratic(0, 3, 2.0);
        q.add_quadratic(1, 2, -1.25);
        let mut seen = std::collections::BTreeSet::new();
        for_each_assignment(&q, |x, e| {
            assert_eq!(e, q.energy(x).unwrap());
            seen.insert(x.to_vec());
        })
        .unwrap();
        assert_eq!(seen.len(), 16);
    }
}
