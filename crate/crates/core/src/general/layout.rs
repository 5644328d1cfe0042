use std::collections::BTreeSet;

use super::spec::{slack_bits, ProblemSpec};
use crate::error::{Error, Result};
use crate::graph::{Arc, EdgeRef};
use crate::qubo::{StepMode, VarLabel, VariableRegistry};
use crate::scalar::Scalar;

/// How walks shorter than `i_max` are padded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// Consecutive steps may repeat the same arc; repeats are paid once.
    Repetition,
    /// The walk parks on an auxiliary terminal vertex.
    Terminal,
    /// Each postman has a rest variable per step; rest is absorbing.
    Rest,
}

/// One candidate move: an arc (real or terminal) taken in a mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move<S> {
    pub arc: Arc<S>,
    pub mode: StepMode,
}

impl<S> Move<S> {
    pub fn is_terminal(&self) -> bool {
        self.arc.edge == EdgeRef::Terminal
    }
}

/// An edge-step variable inside a layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepVar {
    pub index: usize,
    /// Index into [`VariableLayout::moves`].
    pub mv: usize,
}

/// Variables of a compiled general instance, grouped by role.
#[derive(Debug, Clone)]
pub struct VariableLayout<S> {
    pub encoding: Encoding,
    pub registry: VariableRegistry,
    pub i_max: usize,
    pub postmen: usize,
    /// Id of the auxiliary terminal vertex (the graph's vertex count).
    pub terminal: usize,
    pub moves: Vec<Move<S>>,
    /// `steps[postman][step]`: edge-step variables, ordered by index.
    pub steps: Vec<Vec<Vec<StepVar>>>,
    /// `rest[postman][step]`.
    pub rest: Vec<Vec<Option<usize>>>,
    /// Slack bits per required edge: `(edge, postman, bit, index)`.
    pub required_slack: Vec<(EdgeRef, usize, usize, usize)>,
    /// Slack bits per postman: `(postman, bit, index)`.
    pub capacity_slack: Vec<(usize, usize, usize)>,
}

impl<S: Scalar> VariableLayout<S> {
    pub fn num_vars(&self) -> usize {
        self.registry.len()
    }

    /// Repeating this move on consecutive steps is legal and counted once.
    pub fn repeatable(&self, mv: usize) -> bool {
        self.encoding == Encoding::Repetition
            && !self.moves[mv].is_terminal()
            && self.moves[mv].mode != StepMode::Service
    }

    /// Whether move `b` may follow move `a` on the next step.
    pub fn legal(&self, a: usize, b: usize) -> bool {
        legal_transition(&self.moves, self.encoding, a, b)
    }

    pub fn step_var(&self, postman: usize, step: usize, mv: usize) -> Option<usize> {
        self.steps[postman][step].iter().find(|v| v.mv == mv).map(|v| v.index)
    }
}

fn legal_transition<S: Scalar>(moves: &[Move<S>], encoding: Encoding, a: usize, b: usize) -> bool {
    let (ma, mb) = (&moves[a], &moves[b]);
    if ma.arc.to == mb.arc.from {
        return true;
    }
    a == b && encoding == Encoding::Repetition && !ma.is_terminal() && ma.mode != StepMode::Service
}

/// Picks the encoding and enumerates variables, pruning those that cannot
/// lie on any walk compatible with the fixed endpoints.
///
/// A single postman gets whichever of the repetition and terminal encodings
/// has fewer variables (repetition on ties); several postmen or capacities
/// use the rest encoding.
pub fn enumerate_variables<S: Scalar>(spec: &ProblemSpec<S>) -> Result<VariableLayout<S>> {
    spec.validate()?;
    if spec.uses_rest_encoding() {
        return layout_for(spec, Encoding::Rest);
    }
    let rep = layout_for(spec, Encoding::Repetition);
    let term = layout_for(spec, Encoding::Terminal);
    match (rep, term) {
        (Ok(r), Ok(t)) => Ok(if t.num_vars() < r.num_vars() { t } else { r }),
        (Ok(r), Err(_)) => Ok(r),
        (Err(_), Ok(t)) => Ok(t),
        (Err(e), Err(_)) => Err(e),
    }
}

/// Enumerates variables for a fixed encoding.
pub fn enumerate_variables_with<S: Scalar>(
    spec: &ProblemSpec<S>,
    encoding: Encoding,
) -> Result<VariableLayout<S>> {
    spec.validate()?;
    if (encoding == Encoding::Rest) != spec.uses_rest_encoding() {
        return Err(Error::UnsupportedCombination(format!(
            "{encoding:?} encoding for {} postmen{}",
            spec.postmen,
            if spec.capacities.iter().any(Option::is_some) { " with capacities" } else { "" }
        )));
    }
    layout_for(spec, encoding)
}

fn candidate_moves<S: Scalar>(spec: &ProblemSpec<S>, encoding: Encoding) -> Vec<Move<S>> {
    let n = spec.graph.num_vertices();
    let mut moves = Vec::new();
    for arc in spec.graph.arcs() {
        if spec.service_mode {
            if spec.is_required(arc.edge) {
                moves.push(Move { arc, mode: StepMode::Service });
            }
            moves.push(Move { arc, mode: StepMode::Traverse });
        } else {
            moves.push(Move { arc, mode: StepMode::Plain });
        }
    }
    if encoding == Encoding::Terminal {
        let sources: Vec<usize> = match spec.stop {
            Some(v) => vec![v],
            None => (0..n).collect(),
        };
        let term = |from| Arc { from, to: n, weight: S::zero(), edge: EdgeRef::Terminal };
        for v in sources {
            moves.push(Move { arc: term(v), mode: StepMode::Plain });
        }
        moves.push(Move { arc: term(n), mode: StepMode::Plain });
    }
    moves
}

fn layout_for<S: Scalar>(spec: &ProblemSpec<S>, encoding: Encoding) -> Result<VariableLayout<S>> {
    let n = spec.graph.num_vertices();
    let i_max = spec.i_max();
    let required = spec.required_edges();
    let moves = candidate_moves(spec, encoding);
    let allowed = |step: usize, m: usize| !moves[m].is_terminal() || step >= required.len();

    let mut keep: Vec<BTreeSet<usize>> = (0..i_max)
        .map(|i| (0..moves.len()).filter(|&m| allowed(i, m)).collect())
        .collect();

    if let Some(s) = spec.start {
        keep[0].retain(|&m| moves[m].arc.from == s);
        for i in 1..i_max {
            let prev = keep[i - 1].clone();
            keep[i].retain(|&b| prev.iter().any(|&a| legal_transition(&moves, encoding, a, b)));
        }
    }
    if let Some(t) = spec.stop {
        keep[i_max - 1].retain(|&m| moves[m].arc.to == t || moves[m].is_terminal());
        for i in (0..i_max - 1).rev() {
            let next = keep[i + 1].clone();
            keep[i].retain(|&a| next.iter().any(|&b| legal_transition(&moves, encoding, a, b)));
        }
    }
    if encoding != Encoding::Rest {
        if let Some(step) = keep.iter().position(BTreeSet::is_empty) {
            return Err(Error::InfeasibleEndpoints { step });
        }
    }

    let postmen = if encoding == Encoding::Rest { spec.postmen } else { 1 };
    let mut labels = Vec::new();
    for p in 0..postmen {
        for (i, set) in keep.iter().enumerate() {
            for &m in set {
                let mv = &moves[m];
                labels.push(VarLabel::EdgeStep {
                    step: i,
                    postman: p,
                    mode: mv.mode,
                    from: mv.arc.from,
                    to: mv.arc.to,
                    edge: mv.arc.edge,
                });
            }
            if encoding == Encoding::Rest {
                labels.push(VarLabel::RestVar { step: i, postman: p });
            }
        }
    }
    if !spec.service_mode {
        let bits = slack_bits(i_max as u64);
        for &e in &required {
            let (a, b) = spec.graph.endpoints(e);
            for p in 0..postmen {
                for bit in 0..bits {
                    labels.push(VarLabel::RequiredSlack { edge: e, postman: p, bit, from: a, to: b });
                }
            }
        }
    }
    if encoding == Encoding::Rest {
        for p in 0..postmen {
            if let Some(c) = spec.capacity(p) {
                for bit in 0..slack_bits(c.to_f64_lossy().round() as u64) {
                    labels.push(VarLabel::CapacitySlack { postman: p, bit });
                }
            }
        }
    }

    let registry = VariableRegistry::from_labels(labels);
    let mut steps = vec![vec![Vec::new(); i_max]; postmen];
    let mut rest = vec![vec![None; i_max]; postmen];
    let mut required_slack = Vec::new();
    let mut capacity_slack = Vec::new();
    for (index, label) in registry.iter() {
        match *label {
            VarLabel::EdgeStep { step, postman, mode, from, to, edge } => {
                let mv = moves
                    .iter()
                    .position(|m| m.mode == mode && m.arc.from == from && m.arc.to == to && m.arc.edge == edge)
                    .expect("label built from a move");
                steps[postman][step].push(StepVar { index, mv });
            }
            VarLabel::RestVar { step, postman } => rest[postman][step] = Some(index),
            VarLabel::RequiredSlack { edge, postman, bit, .. } => required_slack.push((edge, postman, bit, index)),
            VarLabel::CapacitySlack { postman, bit } => capacity_slack.push((postman, bit, index)),
            VarLabel::PairVar { .. } => unreachable!("pair variables are not part of general layouts"),
        }
    }
    Ok(VariableLayout {
        encoding,
        registry,
        i_max,
        postmen,
        terminal: n,
        moves,
        steps,
        rest,
        required_slack,
        capacity_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::example_graph;
    use crate::graph::Graph;

    #[test]
    fn unpruned_counts() {
        let g = Graph::undirected(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let spec = ProblemSpec::new(g).with_i_max(3);
        let rep = enumerate_variables_with(&spec, Encoding::Repetition).unwrap();
        // 6 arcs x 3 steps + 3 edges x 3 slack bits
        assert_eq!(rep.num_vars(), 18 + 9);
        let term = enumerate_variables_with(&spec, Encoding::Terminal).unwrap();
        // terminal arcs only at step >= 3, which does not exist
        assert_eq!(term.num_vars(), 27);
        assert_eq!(enumerate_variables(&spec).unwrap().encoding, Encoding::Repetition);
    }

    #[test]
    fn start_prunes_first_step() {
        let spec = ProblemSpec::new(example_graph()).with_start(3);
        let lay = enumerate_variables_with(&spec, Encoding::Repetition).unwrap();
        assert!(lay.steps[0][0].iter().all(|v| lay.moves[v.mv].arc.from == 3));
        assert_eq!(lay.steps[0][0].len(), 1);
        // step 1: repeat 3->2 or leave 2
        assert_eq!(lay.steps[0][1].len(), 1 + 4);
    }

    #[test]
    fn parity_makes_endpoints_infeasible() {
        // bipartite 4-cycle: a 2-step walk cannot join vertices of opposite colour
        let g = Graph::directed(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        let spec = ProblemSpec::new(g).with_start(0).with_stop(2).with_i_max(3);
        let err = enumerate_variables_with(&spec, Encoding::Terminal).unwrap_err();
        assert!(matches!(err, Error::InfeasibleEndpoints { .. }));
        // repetition can stall on an arc
        assert!(enumerate_variables_with(&spec, Encoding::Repetition).is_ok());
    }

    #[test]
    fn rest_layout_has_rest_and_capacity_bits() {
        let mut spec = ProblemSpec::new(example_graph()).with_i_max(4).with_start(2);
        spec.postmen = 2;
        spec.capacities = vec![Some(20.0), None];
        let lay = enumerate_variables(&spec).unwrap();
        assert_eq!(lay.encoding, Encoding::Rest);
        assert!(lay.rest.iter().flatten().all(Option::is_some));
        assert_eq!(lay.capacity_slack.len(), slack_bits(20));
        assert_eq!(lay.required_slack.len(), 7 * 2 * slack_bits(4));
    }
}
