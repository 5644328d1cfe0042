use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{is_strongly_connected, Arc, EdgeRef, Graph};
use crate::qubo::{PenaltyConfig, StepMode};
use crate::scalar::Scalar;

/// Extra weight charged when arc `from -> via` is followed by `via -> to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnPenalty<S> {
    pub from: usize,
    pub via: usize,
    pub to: usize,
    pub bonus: S,
}

/// Service and traversal weights of one required edge. A missing traversal
/// weight falls back to the graph weight of the direction taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceWeight<S> {
    pub edge: EdgeRef,
    pub service: S,
    pub traverse: Option<S>,
}

/// Per-postman override of one arc weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostmanWeight<S> {
    pub postman: usize,
    pub edge: EdgeRef,
    pub from: usize,
    pub to: usize,
    pub weight: S,
}

/// Variant selector for the time-indexed compiler.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<S> {
    pub graph: Graph<S>,
    pub start: Option<usize>,
    pub stop: Option<usize>,
    /// `None` requires every edge.
    pub required: Option<Vec<EdgeRef>>,
    pub turns: Vec<TurnPenalty<S>>,
    pub service_mode: bool,
    pub service_weights: Vec<ServiceWeight<S>>,
    /// `(a, b)`: edge `a` must be serviced before edge `b`.
    pub hierarchy: Vec<(EdgeRef, EdgeRef)>,
    pub postmen: usize,
    /// Empty, or one entry per postman (`None` = unlimited).
    pub capacities: Vec<Option<S>>,
    pub postman_weights: Vec<PostmanWeight<S>>,
    pub forbid_edge_collisions: bool,
    /// `None` uses `2 |E|`.
    pub i_max: Option<usize>,
}

impl<S: Scalar> ProblemSpec<S> {
    /// Every edge required, no endpoints, one postman.
    pub fn new(graph: Graph<S>) -> Self {
        Self {
            graph,
            start: None,
            stop: None,
            required: None,
            turns: Vec::new(),
            service_mode: false,
            service_weights: Vec::new(),
            hierarchy: Vec::new(),
            postmen: 1,
            capacities: Vec::new(),
            postman_weights: Vec::new(),
            forbid_edge_collisions: false,
            i_max: None,
        }
    }

    pub fn with_start(mut self, v: usize) -> Self {
        self.start = Some(v);
        self
    }

    pub fn with_stop(mut self, v: usize) -> Self {
        self.stop = Some(v);
        self
    }

    pub fn closed_at(self, v: usize) -> Self {
        self.with_start(v).with_stop(v)
    }

    pub fn with_required(mut self, edges: Vec<EdgeRef>) -> Self {
        self.required = Some(edges);
        self
    }

    pub fn with_i_max(mut self, i_max: usize) -> Self {
        self.i_max = Some(i_max);
        self
    }

    pub fn i_max(&self) -> usize {
        self.i_max.unwrap_or(2 * self.graph.edge_count()).max(1)
    }

    /// Required edges, de-duplicated, in edge order.
    pub fn required_edges(&self) -> Vec<EdgeRef> {
        match &self.required {
            None => self.graph.edges().collect(),
            Some(list) => list.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
        }
    }

    pub fn is_required(&self, edge: EdgeRef) -> bool {
        match &self.required {
            None => edge != EdgeRef::Terminal,
            Some(list) => list.contains(&edge),
        }
    }

    /// True when the rest-state (multi-postman) formulation applies.
    pub fn uses_rest_encoding(&self) -> bool {
        self.postmen > 1 || self.capacities.iter().any(Option::is_some)
    }

    pub fn capacity(&self, postman: usize) -> Option<S> {
        self.capacities.get(postman).copied().flatten()
    }

    /// Weight of taking `arc` in `mode` for `postman`.
    pub fn step_weight(&self, postman: usize, arc: &Arc<S>, mode: StepMode) -> S {
        if arc.edge == EdgeRef::Terminal {
            return S::zero();
        }
        let sw = self.service_weights.iter().find(|w| w.edge == arc.edge);
        match mode {
            StepMode::Service => sw.map_or(arc.weight, |w| w.service),
            StepMode::Traverse => sw.and_then(|w| w.traverse).unwrap_or(arc.weight),
            StepMode::Plain => self
                .postman_weights
                .iter()
                .find(|w| w.postman == postman && w.edge == arc.edge && w.from == arc.from && w.to == arc.to)
                .map_or(arc.weight, |w| w.weight),
        }
    }

    /// Largest weight any step can carry.
    pub fn max_step_weight(&self) -> S {
        let mut max = self.graph.max_weight();
        for w in &self.service_weights {
            max = max.max_value_of(w.service);
            if let Some(t) = w.traverse {
                max = max.max_value_of(t);
            }
        }
        for w in &self.postman_weights {
            max = max.max_value_of(w.weight);
        }
        max
    }

    /// Default multipliers: five times the largest step weight, turns at face value.
    pub fn default_penalties(&self) -> PenaltyConfig<S> {
        PenaltyConfig::default_for_max_weight(self.max_step_weight())
    }

    /// Summed bonus for the turn `from -> via -> to`.
    pub fn turn_bonus(&self, from: usize, via: usize, to: usize) -> S {
        self.turns
            .iter()
            .filter(|t| t.from == from && t.via == via && t.to == to)
            .fold(S::zero(), |acc, t| acc + t.bonus)
    }

    /// Transitive closure of the hierarchy relation.
    pub fn hierarchy_closure(&self) -> Vec<(EdgeRef, EdgeRef)> {
        let mut rel: BTreeSet<(EdgeRef, EdgeRef)> = self.hierarchy.iter().copied().collect();
        loop {
            let mut added = Vec::new();
            for &(a, b) in &rel {
                for &(c, d) in &rel {
                    if b == c && !rel.contains(&(a, d)) {
                        added.push((a, d));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            rel.extend(added);
        }
        rel.into_iter().collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.graph.num_vertices();
        let bad = |m: String| Err(Error::InvalidSpec(m));
        for (name, v) in [("start", self.start), ("stop", self.stop)] {
            if let Some(v) = v {
                if v >= n {
                    return bad(format!("{name} vertex {v} is not in the graph"));
                }
            }
        }
        if let Some(list) = &self.required {
            if let Some(e) = list.iter().find(|e| !self.graph.contains_edge(**e)) {
                return bad(format!("required edge {e:?} is not in the graph"));
            }
        }
        if self.i_max == Some(0) {
            return bad("i_max must be positive".into());
        }
        if self.postmen == 0 {
            return bad("at least one postman is required".into());
        }
        if self.service_mode && self.postmen > 1 {
            return Err(Error::UnsupportedCombination("service mode with more than one postman".into()));
        }
        if !self.hierarchy.is_empty() && !self.service_mode {
            return Err(Error::UnsupportedCombination("hierarchy requires service mode".into()));
        }
        if self.uses_rest_encoding() && self.stop.is_some() {
            return Err(Error::UnsupportedCombination(
                "stop vertex with the multi-postman formulation (walks end at rest)".into(),
            ));
        }
        for t in &self.turns {
            if t.from >= n || t.via >= n || t.to >= n {
                return bad("turn penalty references a missing vertex".into());
            }
            if !(t.bonus >= S::zero()) || !t.bonus.is_finite_value() {
                return bad("turn bonuses must be finite and non-negative".into());
            }
        }
        for w in &self.service_weights {
            if !self.graph.contains_edge(w.edge) {
                return bad(format!("service weight for missing edge {:?}", w.edge));
            }
            let ok = |x: S| x >= S::zero() && x.is_finite_value();
            if !ok(w.service) || !w.traverse.map_or(true, ok) {
                return bad("service weights must be finite and non-negative".into());
            }
        }
        for (a, b) in &self.hierarchy {
            if !self.is_required(*a) || !self.is_required(*b) {
                return bad("hierarchy pairs must reference required edges".into());
            }
        }
        if self.hierarchy_closure().iter().any(|(a, b)| a == b) {
            return bad("hierarchy contains a cycle".into());
        }
        if !self.capacities.is_empty() && self.capacities.len() != self.postmen {
            return bad("capacities must list one entry per postman".into());
        }
        for w in &self.postman_weights {
            if w.postman >= self.postmen || self.graph.arc(w.edge, w.from, w.to).is_none() {
                return bad("postman weight references a missing postman or arc".into());
            }
            if !(w.weight >= S::zero()) || !w.weight.is_finite_value() {
                return bad("postman weights must be finite and non-negative".into());
            }
        }
        if self.capacities.iter().any(Option::is_some) {
            for c in self.capacities.iter().flatten() {
                if !c.is_integral() || *c < S::zero() {
                    return bad(format!("capacity {c} must be a non-negative integer"));
                }
            }
            let weights_integral = self.graph.arcs().iter().all(|a| a.weight.is_integral())
                && self.postman_weights.iter().all(|w| w.weight.is_integral());
            if !weights_integral {
                return bad("capacities require integer-valued weights".into());
            }
        }
        if !is_strongly_connected(&self.graph) {
            return Err(Error::NotStronglyConnected);
        }
        Ok(())
    }
}

/// Number of power-of-two slack bits `r in 0..=ceil(log2(bound))`.
pub fn slack_bits(bound: u64) -> usize {
    if bound == 0 {
        return 0;
    }
    let ceil_log2 = 64 - (bound - 1).leading_zeros() as usize;
    if bound == 1 {
        1
    } else {
        ceil_log2 + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::example_graph;

    #[test]
    fn slack_bit_counts() {
        assert_eq!(slack_bits(0), 0);
        assert_eq!(slack_bits(1), 1);
        assert_eq!(slack_bits(2), 2);
        assert_eq!(slack_bits(3), 3);
        assert_eq!(slack_bits(4), 3);
        assert_eq!(slack_bits(5), 4);
        assert_eq!(slack_bits(14), 5);
    }

    #[test]
    fn default_i_max_is_twice_edge_count() {
        assert_eq!(ProblemSpec::new(example_graph()).i_max(), 14);
    }

    #[test]
    fn validation_errors() {
        let g = example_graph();
        assert!(ProblemSpec::new(g.clone()).validate().is_ok());
        assert!(ProblemSpec::new(g.clone()).with_start(9).validate().is_err());
        assert!(ProblemSpec::new(g.clone()).with_required(vec![EdgeRef::Directed(0)]).validate().is_err());

        let mut s = ProblemSpec::new(g.clone());
        s.service_mode = true;
        s.postmen = 2;
        assert!(matches!(s.validate(), Err(Error::UnsupportedCombination(_))));

        let mut s = ProblemSpec::new(g.clone());
        s.hierarchy = vec![(EdgeRef::Undirected(0), EdgeRef::Undirected(1))];
        assert!(matches!(s.validate(), Err(Error::UnsupportedCombination(_))));
        s.service_mode = true;
        assert!(s.validate().is_ok());
        s.hierarchy.push((EdgeRef::Undirected(1), EdgeRef::Undirected(0)));
        assert!(s.validate().is_err());

        let mut s = ProblemSpec::new(g.clone());
        s.postmen = 2;
        s.capacities = vec![Some(10.5), None];
        assert!(s.validate().is_err());
        s.capacities = vec![Some(10.0), None];
        assert!(s.validate().is_ok());

        let broken = Graph::directed(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(ProblemSpec::new(broken).validate(), Err(Error::NotStronglyConnected));
    }

    #[test]
    fn closure_is_transitive() {
        let mut s = ProblemSpec::new(example_graph());
        let (a, b, c) = (EdgeRef::Undirected(0), EdgeRef::Undirected(1), EdgeRef::Undirected(2));
        s.hierarchy = vec![(a, b), (b, c)];
        assert_eq!(s.hierarchy_closure(), vec![(a, b), (a, c), (b, c)]);
    }
}
