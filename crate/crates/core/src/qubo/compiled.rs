use super::{Assignment, ConstraintFamily, PenaltyConfig, Qubo, VariableRegistry};
use crate::error::Result;
use crate::scalar::Scalar;

/// A QUBO kept alongside its unscaled parts:
/// `qubo = objective + sum_f penalties[f] * constraints[f]`.
#[derive(Debug, Clone)]
pub struct CompiledQubo<S> {
    pub registry: VariableRegistry,
    pub objective: Qubo<S>,
    pub constraints: Vec<(ConstraintFamily, Qubo<S>)>,
    pub penalties: PenaltyConfig<S>,
    pub qubo: Qubo<S>,
}

impl<S: Scalar> CompiledQubo<S> {
    pub fn assemble(
        registry: VariableRegistry,
        objective: Qubo<S>,
        constraints: Vec<(ConstraintFamily, Qubo<S>)>,
        penalties: PenaltyConfig<S>,
    ) -> Self {
        let mut qubo = objective.clone();
        for (family, part) in &constraints {
            qubo.add_scaled(part, penalties.get(*family));
        }
        Self { registry, objective, constraints, penalties, qubo }
    }

    pub fn num_vars(&self) -> usize {
        self.registry.len()
    }

    pub fn constraint(&self, family: ConstraintFamily) -> Option<&Qubo<S>> {
        self.constraints.iter().find(|(f, _)| *f == family).map(|(_, q)| q)
    }

    /// Unscaled value of every constraint family present.
    pub fn constraint_values(&self, x: &[bool]) -> Result<Vec<(ConstraintFamily, S)>> {
        self.constraints.iter().map(|(f, q)| Ok((*f, q.energy(x)?))).collect()
    }

    /// Sum of the unscaled hard-constraint values; zero exactly on legal assignments.
    pub fn hard_violation(&self, x: &[bool]) -> Result<S> {
        let mut total = S::zero();
        for (f, v) in self.constraint_values(x)? {
            if f.is_hard() {
                total += v;
            }
        }
        Ok(total)
    }

    /// Hard families with a non-zero value at `x`.
    pub fn violated_families(&self, x: &[bool]) -> Result<Vec<ConstraintFamily>> {
        Ok(self
            .constraint_values(x)?
            .into_iter()
            .filter(|(f, v)| f.is_hard() && !v.is_negligible())
            .map(|(f, _)| f)
            .collect())
    }

    /// Unit-scale sum of the hard families.
    pub fn hard_constraint_qubo(&self) -> Qubo<S> {
        let mut q = Qubo::new(self.num_vars());
        for (f, part) in &self.constraints {
            if f.is_hard() {
                q.add_scaled(part, S::one());
            }
        }
        q
    }

    pub fn energy(&self, x: &[bool]) -> Result<S> {
        self.qubo.energy(x)
    }

    pub fn zero_assignment(&self) -> Assignment {
        vec![false; self.num_vars()]
    }
}
