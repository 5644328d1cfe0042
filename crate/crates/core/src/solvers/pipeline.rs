use super::{Sampler, SolveReport};
use crate::error::{Error, Result};
use crate::general::{build_from_layout, decode_walk, enumerate_variables, ProblemSpec, VariableLayout};
use crate::graph::Graph;
use crate::pairing::{decode_pairing, PairingProblem};
use crate::qubo::{CompiledQubo, ConstraintFamily, PenaltyConfig};
use crate::route::{RouteSolution, Validity};
use crate::scalar::Scalar;

/// A formulation that compiles to a QUBO and reads routes back out.
pub trait Pipeline<S: Scalar> {
    fn default_penalties(&self) -> PenaltyConfig<S>;
    fn compile(&self, penalties: &PenaltyConfig<S>) -> Result<CompiledQubo<S>>;
    fn decode(&self, compiled: &CompiledQubo<S>, x: &[bool]) -> Result<RouteSolution<S>>;
}

/// Odd-vertex pairing followed by an Euler circuit.
#[derive(Debug, Clone)]
pub struct PairingPipeline<S> {
    pub problem: PairingProblem<S>,
}

impl<S: Scalar> PairingPipeline<S> {
    pub fn new(graph: Graph<S>) -> Result<Self> {
        Ok(Self { problem: PairingProblem::new(graph)? })
    }
}

impl<S: Scalar> Pipeline<S> for PairingPipeline<S> {
    fn default_penalties(&self) -> PenaltyConfig<S> {
        PenaltyConfig::uniform(self.problem.default_penalty())
    }

    fn compile(&self, penalties: &PenaltyConfig<S>) -> Result<CompiledQubo<S>> {
        penalties.validate()?;
        self.problem.compile(penalties.p_pairing)
    }

    /// An assignment that is not a perfect pairing yields an empty,
    /// uncovered route rather than an error.
    fn decode(&self, compiled: &CompiledQubo<S>, x: &[bool]) -> Result<RouteSolution<S>> {
        match decode_pairing(x, &compiled.registry) {
            Ok(pairing) => self.problem.route(&pairing),
            Err(Error::NotPerfectPairing { .. }) => Ok(RouteSolution {
                walks: vec![Vec::new()],
                objective_weight: S::zero(),
                turn_extra: S::zero(),
                validity: Validity { required_covered: false, ..Validity::all_true() },
            }),
            Err(e) => Err(e),
        }
    }
}

/// Time-indexed formulation; the variable layout is fixed at construction.
#[derive(Debug, Clone)]
pub struct GeneralPipeline<S> {
    pub spec: ProblemSpec<S>,
    pub layout: VariableLayout<S>,
}

impl<S: Scalar> GeneralPipeline<S> {
    pub fn new(spec: ProblemSpec<S>) -> Result<Self> {
        let layout = enumerate_variables(&spec)?;
        Ok(Self { spec, layout })
    }

    pub fn with_layout(spec: ProblemSpec<S>, layout: VariableLayout<S>) -> Self {
        Self { spec, layout }
    }
}

impl<S: Scalar> Pipeline<S> for GeneralPipeline<S> {
    fn default_penalties(&self) -> PenaltyConfig<S> {
        self.spec.default_penalties()
    }

    fn compile(&self, penalties: &PenaltyConfig<S>) -> Result<CompiledQubo<S>> {
        build_from_layout(&self.spec, &self.layout, penalties)
    }

    fn decode(&self, _compiled: &CompiledQubo<S>, x: &[bool]) -> Result<RouteSolution<S>> {
        decode_walk(&self.spec, &self.layout, x)
    }
}

/// Result of [`solve_with_retune`].
#[derive(Debug, Clone)]
pub struct RetuneOutcome<S> {
    pub report: SolveReport<S>,
    pub route: RouteSolution<S>,
    /// Multipliers of the final, successful compile.
    pub penalties: PenaltyConfig<S>,
}

/// Solves, decodes and, while the route is invalid, doubles the multiplier
/// of every hard family that is non-zero at the best assignment before
/// solving again.
pub fn solve_with_retune<S: Scalar, P: Pipeline<S> + ?Sized>(
    pipeline: &P,
    penalties: PenaltyConfig<S>,
    sampler: &Sampler,
    seed: u64,
    max_retunes: usize,
) -> Result<RetuneOutcome<S>> {
    let two = S::one() + S::one();
    let mut penalties = penalties;
    for retunes in 0..=max_retunes {
        let compiled = pipeline.compile(&penalties)?;
        let mut report = sampler.sample(&compiled.qubo, seed)?;
        report.retunes = retunes;
        let route = pipeline.decode(&compiled, &report.best_assignment)?;
        let violated = compiled.violated_families(&report.best_assignment)?;
        if route.is_valid() && violated.is_empty() {
            return Ok(RetuneOutcome { report, route, penalties });
        }
        let to_raise: Vec<ConstraintFamily> = if violated.is_empty() {
            ConstraintFamily::ALL.into_iter().filter(|f| f.is_hard()).collect()
        } else {
            violated
        };
        for f in to_raise {
            penalties.set(f, penalties.get(f) * two);
        }
    }
    Err(Error::NoValidSolution { retunes: max_retunes })
}
