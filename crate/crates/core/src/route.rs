use serde::{Deserialize, Serialize};

use crate::graph::{EdgeRef, Walk};
use crate::qubo::StepMode;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteStep {
    pub from: usize,
    pub to: usize,
    pub mode: StepMode,
    pub edge: EdgeRef,
}

/// Which legality conditions a decoded route satisfies.
///
/// Each flag mirrors one hard constraint family of the general QUBO, so an
/// assignment decodes to a fully valid route exactly when every hard
/// penalty term is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub one_edge_per_step: bool,
    pub contiguous: bool,
    pub required_covered: bool,
    pub slack_consistent: bool,
    pub endpoints: bool,
    pub hierarchy: bool,
    pub capacity: bool,
    pub collisions: bool,
}

impl Validity {
    pub fn all_true() -> Self {
        Self {
            one_edge_per_step: true,
            contiguous: true,
            required_covered: true,
            slack_consistent: true,
            endpoints: true,
            hierarchy: true,
            capacity: true,
            collisions: true,
        }
    }

    pub fn is_valid(&self) -> bool {
        *self == Self::all_true()
    }

    /// Names of the failing checks.
    pub fn failures(&self) -> Vec<&'static str> {
        let checks = [
            (self.one_edge_per_step, "one_edge_per_step"),
            (self.contiguous, "contiguous"),
            (self.required_covered, "required_covered"),
            (self.slack_consistent, "slack_consistent"),
            (self.endpoints, "endpoints"),
            (self.hierarchy, "hierarchy"),
            (self.capacity, "capacity"),
            (self.collisions, "collisions"),
        ];
        checks.iter().filter(|(ok, _)| !ok).map(|(_, n)| *n).collect()
    }
}

/// Per-postman walks plus their weight and legality report.
///
/// Walks hold real edge traversals only: repeated-edge padding is collapsed,
/// terminal-vertex arcs and rest steps are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteSolution<S> {
    pub walks: Vec<Vec<RouteStep>>,
    pub objective_weight: S,
    /// Sum of the turn bonuses matched by consecutive steps.
    pub turn_extra: S,
    pub validity: Validity,
}

impl<S: Scalar> RouteSolution<S> {
    pub fn is_valid(&self) -> bool {
        self.validity.is_valid()
    }

    pub fn total_cost(&self) -> S {
        self.objective_weight + self.turn_extra
    }

    /// First postman's route in vertex-order notation.
    pub fn vertex_order(&self, postman: usize) -> Vec<usize> {
        let walk = &self.walks[postman];
        let mut out = Vec::with_capacity(walk.len() + 1);
        if let Some(first) = walk.first() {
            out.push(first.from);
        }
        out.extend(walk.iter().map(|s| s.to));
        out
    }

    pub fn as_walk(&self, postman: usize) -> Walk<S> {
        Walk {
            steps: self.walks[postman].iter().map(|s| (s.from, s.to)).collect(),
            weight: self.objective_weight,
        }
    }
}
