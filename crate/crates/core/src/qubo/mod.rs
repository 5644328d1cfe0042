//! Sparse quadratic forms over binary variables.
//!
//! A [`Qubo`] stores `offset + sum_i linear[i] x_i + sum_{i<j} q[i][j] x_i x_j`.
//! The constant offset is kept so that squared penalty terms evaluate to
//! their exact constraint value.

mod compiled;
mod label;
mod penalty;
mod text;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use compiled::CompiledQubo;
pub use label::{StepMode, VarLabel, VariableRegistry};
pub use penalty::{ConstraintFamily, PenaltyConfig};
pub use text::{parse_qubo_text, parse_registry_text, registry_to_text, to_text};

/// Bit assignment, one entry per variable.
pub type Assignment = Vec<bool>;

#[derive(Debug, Clone, PartialEq)]
pub struct Qubo<S> {
    linear: Vec<S>,
    // symmetric adjacency; both (i, j) and (j, i) are stored
    neighbors: Vec<BTreeMap<usize, S>>,
    offset: S,
}

impl<S: Scalar> Qubo<S> {
    pub fn new(n: usize) -> Self {
        Self { linear: vec![S::zero(); n], neighbors: vec![BTreeMap::new(); n], offset: S::zero() }
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn offset(&self) -> S {
        self.offset
    }

    pub fn linear(&self, i: usize) -> S {
        self.linear[i]
    }

    pub fn quadratic(&self, i: usize, j: usize) -> S {
        self.neighbors[i].get(&j).copied().unwrap_or_else(S::zero)
    }

    /// Non-zero linear coefficients in index order.
    pub fn linear_terms(&self) -> impl Iterator<Item = (usize, S)> + '_ {
        self.linear
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_negligible())
            .map(|(i, &c)| (i, c))
    }

    /// Quadratic coefficients `(i, j, c)` with `i < j`, row-major.
    pub fn quadratic_terms(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(i, row)| {
            row.range(i + 1..).map(move |(&j, &c)| (i, j, c))
        })
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, S)> + '_ {
        self.neighbors[i].iter().map(|(&j, &c)| (j, c))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn add_offset(&mut self, c: S) {
        self.offset += c;
    }

    pub fn add_linear(&mut self, i: usize, c: S) {
        let v = self.linear[i] + c;
        self.linear[i] = if v.is_negligible() { S::zero() } else { v };
    }

    /// Adds `c * x_i * x_j`; `i == j` folds into the linear term since `x^2 = x`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, c: S) {
        if i == j {
            self.add_linear(i, c);
            return;
        }
        let v = self.quadratic(i, j) + c;
        if v.is_negligible() {
            self.neighbors[i].remove(&j);
            self.neighbors[j].remove(&i);
        } else {
            self.neighbors[i].insert(j, v);
            self.neighbors[j].insert(i, v);
        }
    }

    /// Adds `scale * (constant + sum_k c_k x_k)^2`, expanded with `x^2 = x`.
    /// Repeated indices in `terms` are merged first.
    pub fn add_square_penalty(&mut self, terms: &[(usize, S)], constant: S, scale: S) {
        let mut merged: BTreeMap<usize, S> = BTreeMap::new();
        for &(i, c) in terms {
            *merged.entry(i).or_insert_with(S::zero) += c;
        }
        let merged: Vec<(usize, S)> = merged.into_iter().filter(|(_, c)| !c.is_negligible()).collect();
        let two = S::one() + S::one();
        self.add_offset(scale * constant * constant);
        for (k, &(i, ci)) in merged.iter().enumerate() {
            self.add_linear(i, scale * (ci * ci + two * constant * ci));
            for &(j, cj) in &merged[k + 1..] {
                self.add_quadratic(i, j, scale * two * ci * cj);
            }
        }
    }

    /// Adds `scale * other` term by term.
    pub fn add_scaled(&mut self, other: &Qubo<S>, scale: S) {
        assert_eq!(self.num_vars(), other.num_vars(), "variable count mismatch");
        self.add_offset(scale * other.offset);
        for (i, c) in other.linear_terms() {
            self.add_linear(i, scale * c);
        }
        for (i, j, c) in other.quadratic_terms() {
            self.add_quadratic(i, j, scale * c);
        }
    }

    fn check_len(&self, x: &[bool]) -> Result<()> {
        if x.len() != self.num_vars() {
            return Err(Error::LengthMismatch { expected: self.num_vars(), got: x.len() });
        }
        Ok(())
    }

    /// Value of the quadratic form, offset included.
    pub fn energy(&self, x: &[bool]) -> Result<S> {
        self.check_len(x)?;
        let mut e = self.offset;
        for (i, c) in self.linear_terms() {
            if x[i] {
                e += c;
            }
        }
        for (i, j, c) in self.quadratic_terms() {
            if x[i] && x[j] {
                e += c;
            }
        }
        Ok(e)
    }

    /// `energy(x with bit flipped) - energy(x)`, in time linear in the
    /// variable's degree.
    pub fn energy_delta(&self, x: &[bool], flip: usize) -> Result<S> {
        self.check_len(x)?;
        if flip >= self.num_vars() {
            return Err(Error::IndexOutOfRange { index: flip, n: self.num_vars() });
        }
        let mut field = self.linear[flip];
        for (&j, &c) in &self.neighbors[flip] {
            if x[j] {
                field += c;
            }
        }
        Ok(if x[flip] { -field } else { field })
    }

    /// Relabels variables: old index `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Qubo<S> {
        assert_eq!(perm.len(), self.num_vars());
        let mut out = Qubo::new(self.num_vars());
        out.offset = self.offset;
        for (i, c) in self.linear_terms() {
            out.add_linear(perm[i], c);
        }
        for (i, j, c) in self.quadratic_terms() {
            out.add_quadratic(perm[i], perm[j], c);
        }
        out
    }

    /// Largest absolute coefficient (offset excluded).
    pub fn max_abs_coefficient(&self) -> S {
        let lin = self.linear_terms().map(|(_, c)| c.abs_value());
        let quad = self.quadratic_terms().map(|(_, _, c)| c.abs_value());
        lin.chain(quad).fold(S::zero(), |m, c| m.max_value_of(c))
    }

    /// Dense view for the sampler hot loops.
    pub fn couplings(&self) -> Couplings<S> {
        Couplings {
            linear: self.linear.clone(),
            neighbors: self
                .neighbors
                .iter()
                .map(|row| row.iter().map(|(&j, &c)| (j, c)).collect())
                .collect(),
        }
    }
}

/// Flattened adjacency used by samplers: `h_i = linear_i + sum_j J_ij x_j`.
#[derive(Debug, Clone)]
pub struct Couplings<S> {
    pub linear: Vec<S>,
    pub neighbors: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> Couplings<S> {
    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    /// Local fields for assignment `x`.
    pub fn fields(&self, x: &[bool]) -> Vec<S> {
        (0..self.num_vars())
            .map(|i| {
                self.neighbors[i]
                    .iter()
                    .filter(|(j, _)| x[*j])
                    .fold(self.linear[i], |acc, &(_, c)| acc + c)
            })
            .collect()
    }

    /// Flips bit `k`, updating `fields`, and returns the energy change.
    #[inline]
    pub fn flip(&self, x: &mut [bool], fields: &mut [S], k: usize) -> S {
        let delta = if x[k] { -fields[k] } else { fields[k] };
        x[k] = !x[k];
        if x[k] {
            for &(j, c) in &self.neighbors[k] {
                fields[j] += c;
            }
        } else {
            for &(j, c) in &self.neighbors[k] {
                fields[j] -= c;
            }
        }
        delta
    }

    #[inline]
    pub fn delta(&self, x: &[bool], fields: &[S], k: usize) -> S {
        if x[k] {
            -fields[k]
        } else {
            fields[k]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use proptest::prelude::*;

    fn naive_energy(n: usize, terms: &[(usize, usize, f64)], offset: f64, x: &[bool]) -> f64 {
        let _ = n;
        offset
            + terms
                .iter()
                .filter(|(i, j, _)| x[*i] && x[*j])
                .map(|(_, _, c)| c)
                .sum::<f64>()
    }

    fn all_assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u32..(1 << n)).map(move |m| (0..n).map(|k| m & (1 << k) != 0).collect())
    }

    #[test]
    fn example_single_variable_penalty() {
        // 9x + 10(1 - x)^2 = 10x^2 - 11x + 10
        let mut q = Qubo::new(1);
        q.add_linear(0, 9.0);
        q.add_square_penalty(&[(0, -1.0)], 1.0, 10.0);
        assert_eq!(q.offset(), 10.0);
        assert_eq!(q.linear(0), -1.0);
        assert_eq!(q.energy(&[false]).unwrap(), 10.0);
        assert_eq!(q.energy(&[true]).unwrap(), 9.0);
        assert_eq!(q.energy_delta(&[false], 0).unwrap(), -1.0);
    }

    #[test]
    fn plain_square_has_no_offset() {
        let mut q = Qubo::new(1);
        q.add_square_penalty(&[(0, 1.0)], 0.0, 1.0);
        assert_eq!(q.offset(), 0.0);
        assert_eq!(q.linear(0), 1.0);
    }

    #[test]
    fn two_variable_expansion_matches_direct_formula() {
        let mut q = Qubo::new(2);
        q.add_square_penalty(&[(0, -1.0), (1, -1.0)], 1.0, 2.0);
        assert_eq!(q.offset(), 2.0);
        assert_eq!(q.linear(0), -2.0);
        assert_eq!(q.linear(1), -2.0);
        assert_eq!(q.quadratic(0, 1), 4.0);
        for x in all_assignments(2) {
            let direct = 2.0 * (1.0 - x[0] as u8 as f64 - x[1] as u8 as f64).powi(2);
            assert_eq!(q.energy(&x).unwrap(), direct);
        }
    }

    #[test]
    fn repeated_indices_merge() {
        let mut q = Qubo::new(1);
        q.add_square_penalty(&[(0, 1.0), (0, 1.0)], -1.0, 1.0);
        // (2x - 1)^2 = 1 at both assignments
        assert_eq!(q.energy(&[false]).unwrap(), 1.0);
        assert_eq!(q.energy(&[true]).unwrap(), 1.0);
    }

    #[test]
    fn penalty_only_all_zero() {
        let p = 7.0;
        let mut q = Qubo::new(4);
        q.add_square_penalty(&[(0, -1.0), (1, -1.0)], 1.0, p);
        q.add_square_penalty(&[(2, -1.0), (3, -1.0)], 1.0, p);
        q.add_square_penalty(&[(1, -1.0), (3, -1.0)], 1.0, p);
        assert_eq!(q.energy(&[false; 4]).unwrap(), 3.0 * p);
    }

    #[test]
    fn zero_qubo_delta() {
        let q = Qubo::<f64>::new(3);
        for k in 0..3 {
            assert_eq!(q.energy_delta(&[true, false, true], k).unwrap(), 0.0);
        }
    }

    #[test]
    fn errors() {
        let q = Qubo::<f64>::new(2);
        assert_eq!(q.energy(&[true]), Err(Error::LengthMismatch { expected: 2, got: 1 }));
        assert_eq!(q.energy_delta(&[true, true], 2), Err(Error::IndexOutOfRange { index: 2, n: 2 }));
    }

    #[test]
    fn cancellation_prunes_entries() {
        let mut q = Qubo::new(3);
        q.add_quadratic(0, 2, 1.5);
        q.add_quadratic(2, 0, -1.5);
        q.add_linear(1, 1e-13);
        assert_eq!(q.quadratic_terms().count(), 0);
        assert_eq!(q.linear_terms().count(), 0);
    }

    #[test]
    fn exact_rational_scale_linearity() {
        let terms = [(0, Rational64::from_integer(-1)), (1, Rational64::new(3, 2))];
        let c = Rational64::new(1, 3);
        let mut unit = Qubo::new(2);
        unit.add_square_penalty(&terms, c, Rational64::from_integer(1));
        let s = Rational64::new(7, 5);
        let mut scaled = Qubo::new(2);
        scaled.add_square_penalty(&terms, c, s);
        for x in all_assignments(2) {
            assert_eq!(scaled.energy(&x).unwrap(), s * unit.energy(&x).unwrap());
        }
    }

    fn arb_qubo() -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>, f64)> {
        (1usize..9).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n, -10.0f64..10.0), 0..30),
                -5.0f64..5.0,
            )
        })
    }

    fn build(n: usize, terms: &[(usize, usize, f64)], offset: f64) -> Qubo<f64> {
        let mut q = Qubo::new(n);
        q.add_offset(offset);
        for &(i, j, c) in terms {
            q.add_quadratic(i, j, c);
        }
        q
    }

    proptest! {
        #[test]
        fn energy_matches_naive_sum((n, terms, offset) in arb_qubo(), bits in any::<u16>()) {
            let q = build(n, &terms, offset);
            let x: Vec<bool> = (0..n).map(|k| bits & (1 << k) != 0).collect();
            let e = q.energy(&x).unwrap();
            prop_assert!((e - naive_energy(n, &terms, offset, &x)).abs() < 1e-9);
        }

        #[test]
        fn delta_matches_reevaluation((n, terms, offset) in arb_qubo(), bits in any::<u16>(), flips in prop::collection::vec(any::<prop::sample::Index>(), 1..20)) {
            let q = build(n, &terms, offset);
            let mut x: Vec<bool> = (0..n).map(|k| bits & (1 << k) != 0).collect();
            let start = q.energy(&x).unwrap();
            let mut acc = 0.0;
            for f in flips {
                let k = f.index(n);
                let d = q.energy_delta(&x, k).unwrap();
                let before = q.energy(&x).unwrap();
                x[k] = !x[k];
                prop_assert!((q.energy(&x).unwrap() - before - d).abs() < 1e-9);
                acc += d;
            }
            prop_assert!((q.energy(&x).unwrap() - start - acc).abs() < 1e-9);
        }

        #[test]
        fn relabeling_preserves_energy((n, terms, offset) in arb_qubo(), bits in any::<u16>(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let q = build(n, &terms, offset);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let p = q.permuted(&perm);
            let x: Vec<bool> = (0..n).map(|k| bits & (1 << k) != 0).collect();
            let mut y = vec![false; n];
            for i in 0..n {
                y[perm[i]] = x[i];
            }
            prop_assert!((q.energy(&x).unwrap() - p.energy(&y).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn couplings_flip_tracks_energy((n, terms, offset) in arb_qubo(), bits in any::<u16>(), k in any::<prop::sample::Index>()) {
            let q = build(n, &terms, offset);
            let c = q.couplings();
            let mut x: Vec<bool> = (0..n).map(|b| bits & (1 << b) != 0).collect();
            let mut f = c.fields(&x);
            let before = q.energy(&x).unwrap();
            let k = k.index(n);
            let d = c.flip(&mut x, &mut f, k);
            prop_assert!((q.energy(&x).unwrap() - before - d).abs() < 1e-9);
            let fresh = c.fields(&x);
            for (a, b) in f.iter().zip(&fresh) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
