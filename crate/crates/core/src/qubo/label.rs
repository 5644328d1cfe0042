use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::EdgeRef;

/// How an edge variable is used on its step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepMode {
    Plain,
    Service,
    Traverse,
}

impl fmt::Display for StepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepMode::Plain => "plain",
            StepMode::Service => "service",
            StepMode::Traverse => "traverse",
        })
    }
}

/// Semantic meaning of one binary variable.
///
/// The derived ordering (variant first, then fields in declaration order)
/// fixes the index assignment of a [`VariableRegistry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarLabel {
    /// Odd vertices `i < j` are paired.
    PairVar { i: usize, j: usize },
    /// Postman `postman` walks arc `from -> to` of `edge` on step `step`.
    EdgeStep { step: usize, postman: usize, mode: StepMode, from: usize, to: usize, edge: EdgeRef },
    /// Bit `bit` (weight `2^bit`) of the visit-count slack of a required edge.
    RequiredSlack { edge: EdgeRef, postman: usize, bit: usize, from: usize, to: usize },
    /// Postman `postman` is at rest on step `step`.
    RestVar { step: usize, postman: usize },
    /// Bit `bit` of the unused-capacity slack of a postman.
    CapacitySlack { postman: usize, bit: usize },
}

impl VarLabel {
    /// Pair variable with canonical vertex order.
    pub fn pair(a: usize, b: usize) -> Self {
        VarLabel::PairVar { i: a.min(b), j: a.max(b) }
    }
}

fn edge_code(edge: &EdgeRef) -> String {
    match edge {
        EdgeRef::Undirected(i) => format!("u{i}"),
        EdgeRef::Directed(i) => format!("d{i}"),
        EdgeRef::Terminal => "t".to_string(),
    }
}

impl fmt::Display for VarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarLabel::PairVar { i, j } => write!(f, "x[{i},{j}]"),
            VarLabel::EdgeStep { step, postman, mode, from, to, edge } => {
                write!(f, "e{step}.p{postman}.{mode}:{from}->{to}#{}", edge_code(edge))
            }
            VarLabel::RequiredSlack { edge, postman, bit, from, to } => {
                write!(f, "s{bit}.p{postman}:{from}-{to}#{}", edge_code(edge))
            }
            VarLabel::RestVar { step, postman } => write!(f, "rest{step}.p{postman}"),
            VarLabel::CapacitySlack { postman, bit } => write!(f, "cap{bit}.p{postman}"),
        }
    }
}

/// Bijection between labels and dense variable indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VariableRegistry {
    labels: Vec<VarLabel>,
    index: BTreeMap<VarLabel, usize>,
}

impl VariableRegistry {
    /// Sorts and de-duplicates `labels`, then numbers them in order.
    pub fn from_labels(labels: impl IntoIterator<Item = VarLabel>) -> Self {
        let mut labels: Vec<VarLabel> = labels.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        let index = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        Self { labels, index }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &VarLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, index: usize) -> VarLabel {
        self.labels[index]
    }

    pub fn labels(&self) -> &[VarLabel] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &VarLabel)> {
        self.labels.iter().enumerate()
    }
}
