//! JSON file formats.
//!
//! Vertices are named by labels (integers or strings) and edges are written
//! as arrays. A graph file looks like
//!
//! ```json
//! {"vertices": [0, 1, 2],
//!  "undirected": [[0, 1, 2.0], [1, 2, 1.0, 3.0]],
//!  "directed": [[2, 0, 4.0]]}
//! ```
//!
//! where a fourth undirected entry gives the weight in the `b -> a`
//! direction. Spec files embed a graph and select edges as
//! `[a, b, "u"]` (undirected) or `[from, to, "d"]` (directed). Unknown fields
//! are rejected everywhere.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::general::{PostmanWeight, ProblemSpec, ServiceWeight, TurnPenalty};
use crate::graph::{DirectedEdge, EdgeRef, Graph, UndirectedEdge};
use crate::qubo::StepMode;
use crate::route::{RouteSolution, RouteStep, Validity};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexLabel {
    Int(i64),
    Str(String),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Int(i) => write!(f, "{i}"),
            VertexLabel::Str(s) => f.write_str(s),
        }
    }
}

/// Bijection between file labels and dense vertex ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VertexLabels {
    labels: Vec<VertexLabel>,
    ids: BTreeMap<VertexLabel, usize>,
}

impl VertexLabels {
    pub fn new(labels: Vec<VertexLabel>) -> Result<Self> {
        let mut ids = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if ids.insert(l.clone(), i).is_some() {
                return Err(Error::Format(format!("duplicate vertex label {l}")));
            }
        }
        Ok(Self { labels, ids })
    }

    /// Labels `0..n`.
    pub fn numeric(n: usize) -> Self {
        Self::new((0..n as i64).map(VertexLabel::Int).collect()).expect("distinct")
    }

    pub fn id(&self, label: &VertexLabel) -> Result<usize> {
        self.ids.get(label).copied().ok_or_else(|| Error::Format(format!("unknown vertex {label}")))
    }

    pub fn label(&self, id: usize) -> &VertexLabel {
        &self.labels[id]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UndirectedEntry {
    Symmetric(VertexLabel, VertexLabel, f64),
    Windy(VertexLabel, VertexLabel, f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexLabel>,
    #[serde(default)]
    pub undirected: Vec<UndirectedEntry>,
    #[serde(default)]
    pub directed: Vec<(VertexLabel, VertexLabel, f64)>,
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<(Graph<f64>, VertexLabels)> {
        let labels = VertexLabels::new(self.vertices.clone())?;
        let mut undirected = Vec::new();
        for e in &self.undirected {
            let (a, b, w_ab, w_ba) = match e {
                UndirectedEntry::Symmetric(a, b, w) => (a, b, *w, *w),
                UndirectedEntry::Windy(a, b, w1, w2) => (a, b, *w1, *w2),
            };
            undirected.push(UndirectedEdge { a: labels.id(a)?, b: labels.id(b)?, w_ab, w_ba });
        }
        let mut directed = Vec::new();
        for (from, to, w) in &self.directed {
            directed.push(DirectedEdge { from: labels.id(from)?, to: labels.id(to)?, w: *w });
        }
        Ok((Graph::new(labels.len(), undirected, directed)?, labels))
    }

    pub fn from_graph(g: &Graph<f64>, labels: &VertexLabels) -> Self {
        let l = |v: usize| labels.label(v).clone();
        Self {
            vertices: (0..g.num_vertices()).map(l).collect(),
            undirected: g
                .undirected_edges()
                .iter()
                .map(|e| {
                    if e.w_ab == e.w_ba {
                        UndirectedEntry::Symmetric(l(e.a), l(e.b), e.w_ab)
                    } else {
                        UndirectedEntry::Windy(l(e.a), l(e.b), e.w_ab, e.w_ba)
                    }
                })
                .collect(),
            directed: g.directed_edges().iter().map(|e| (l(e.from), l(e.to), e.w)).collect(),
        }
    }
}

/// `"u"` for an undirected edge, `"d"` for a directed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    #[serde(rename = "u")]
    Undirected,
    #[serde(rename = "d")]
    Directed,
}

/// Edge selector `[a, b, kind]`. An undirected selector matches either
/// orientation; as an arc it means `a -> b`.
pub type EdgeSel = (VertexLabel, VertexLabel, EdgeKind);

fn resolve_edge(g: &Graph<f64>, labels: &VertexLabels, sel: &EdgeSel) -> Result<EdgeRef> {
    let (a, b) = (labels.id(&sel.0)?, labels.id(&sel.1)?);
    let found = match sel.2 {
        EdgeKind::Undirected => g
            .undirected_edges()
            .iter()
            .position(|e| (e.a, e.b) == (a, b) || (e.a, e.b) == (b, a))
            .map(EdgeRef::Undirected),
        EdgeKind::Directed => {
            g.directed_edges().iter().position(|e| (e.from, e.to) == (a, b)).map(EdgeRef::Directed)
        }
    };
    found.ok_or_else(|| Error::Format(format!("no {:?} edge between {} and {}", sel.2, sel.0, sel.1)))
}

fn edge_sel(labels: &VertexLabels, edge: EdgeRef, from: usize, to: usize) -> EdgeSel {
    let kind = match edge {
        EdgeRef::Directed(_) => EdgeKind::Directed,
        _ => EdgeKind::Undirected,
    };
    (labels.label(from).clone(), labels.label(to).clone(), kind)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceWeightEntry {
    pub edge: EdgeSel,
    pub service: f64,
    #[serde(default)]
    pub traverse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostmanWeightEntry {
    pub postman: usize,
    /// The arc `from -> to` of the selected edge.
    pub arc: EdgeSel,
    pub weight: f64,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub graph: GraphFile,
    #[serde(default)]
    pub start: Option<VertexLabel>,
    #[serde(default)]
    pub stop: Option<VertexLabel>,
    /// Omitted: every edge is required.
    #[serde(default)]
    pub required: Option<Vec<EdgeSel>>,
    /// `[[j, k], [k, r], bonus]`.
    #[serde(default)]
    pub turns: Vec<((VertexLabel, VertexLabel), (VertexLabel, VertexLabel), f64)>,
    #[serde(default)]
    pub service_mode: bool,
    #[serde(default)]
    pub service_weights: Vec<ServiceWeightEntry>,
    #[serde(default)]
    pub hierarchy: Vec<(EdgeSel, EdgeSel)>,
    #[serde(default = "one")]
    pub postmen: usize,
    #[serde(default)]
    pub capacities: Vec<Option<f64>>,
    #[serde(default)]
    pub postman_weights: Vec<PostmanWeightEntry>,
    #[serde(default)]
    pub forbid_edge_collisions: bool,
    #[serde(default)]
    pub i_max: Option<usize>,
}

impl SpecFile {
    pub fn to_spec(&self) -> Result<(ProblemSpec<f64>, VertexLabels)> {
        let (g, labels) = self.graph.to_graph()?;
        let id = |l: &VertexLabel| labels.id(l);
        let edge = |s: &EdgeSel| resolve_edge(&g, &labels, s);
        let mut spec = ProblemSpec::new(g.clone());
        spec.start = self.start.as_ref().map(id).transpose()?;
        spec.stop = self.stop.as_ref().map(id).transpose()?;
        spec.required = self.required.as_ref().map(|r| r.iter().map(edge).collect()).transpose()?;
        for ((j, k1), (k2, r), bonus) in &self.turns {
            if k1 != k2 {
                return Err(Error::Format(format!("turn [{j},{k1}] -> [{k2},{r}] does not share a vertex")));
            }
            spec.turns.push(TurnPenalty { from: id(j)?, via: id(k1)?, to: id(r)?, bonus: *bonus });
        }
        spec.service_mode = self.service_mode;
        for w in &self.service_weights {
            spec.service_weights.push(ServiceWeight { edge: edge(&w.edge)?, service: w.service, traverse: w.traverse });
        }
        for (a, b) in &self.hierarchy {
            spec.hierarchy.push((edge(a)?, edge(b)?));
        }
        spec.postmen = self.postmen;
        spec.capacities = self.capacities.clone();
        for w in &self.postman_weights {
            spec.postman_weights.push(PostmanWeight {
                postman: w.postman,
                edge: edge(&w.arc)?,
                from: id(&w.arc.0)?,
                to: id(&w.arc.1)?,
                weight: w.weight,
            });
        }
        spec.forbid_edge_collisions = self.forbid_edge_collisions;
        spec.i_max = self.i_max;
        Ok((spec, labels))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepEntry {
    pub from: VertexLabel,
    pub to: VertexLabel,
    pub kind: EdgeKind,
    pub mode: StepMode,
}

/// A decoded or oracle route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteFile {
    pub walks: Vec<Vec<StepEntry>>,
    pub vertex_order: Vec<Vec<VertexLabel>>,
    pub weight: f64,
    pub turn_extra: f64,
    pub validity: Validity,
}

impl RouteFile {
    pub fn from_route(labels: &VertexLabels, route: &RouteSolution<f64>) -> Self {
        let walks = route
            .walks
            .iter()
            .map(|w| {
                w.iter()
                    .map(|s| {
                        let (from, to, kind) = edge_sel(labels, s.edge, s.from, s.to);
                        StepEntry { from, to, kind, mode: s.mode }
                    })
                    .collect()
            })
            .collect();
        let vertex_order = (0..route.walks.len())
            .map(|p| route.vertex_order(p).into_iter().map(|v| labels.label(v).clone()).collect())
            .collect();
        Self {
            walks,
            vertex_order,
            weight: route.objective_weight,
            turn_extra: route.turn_extra,
            validity: route.validity,
        }
    }

    /// Resolves the stored steps against a graph.
    pub fn walks(&self, g: &Graph<f64>, labels: &VertexLabels) -> Result<Vec<Vec<RouteStep>>> {
        self.walks
            .iter()
            .map(|w| {
                w.iter()
                    .map(|s| {
                        let sel = (s.from.clone(), s.to.clone(), s.kind);
                        Ok(RouteStep {
                            from: labels.id(&s.from)?,
                            to: labels.id(&s.to)?,
                            mode: s.mode,
                            edge: resolve_edge(g, labels, &sel)?,
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Ground truth written by the oracle command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleFile {
    pub pipeline: String,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<(VertexLabel, VertexLabel)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub added_weight: Option<f64>,
    pub route: RouteFile,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{what}: {e}")))
}

pub fn parse_graph_json(text: &str) -> Result<(Graph<f64>, VertexLabels)> {
    parse::<GraphFile>(text, "graph file")?.to_graph()
}

pub fn parse_spec_json(text: &str) -> Result<(ProblemSpec<f64>, VertexLabels)> {
    parse::<SpecFile>(text, "spec file")?.to_spec()
}

pub fn parse_route_json(text: &str) -> Result<RouteFile> {
    parse(text, "route file")
}

pub fn parse_oracle_json(text: &str) -> Result<OracleFile> {
    parse(text, "oracle file")
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRAPH: &str = r#"{"vertices": [0, 1, 2, "hub"],
        "undirected": [[0, 1, 2.0], [1, 2, 1.0, 3.0], [2, "hub", 1]],
        "directed": [["hub", 0, 4.0]]}"#;

    #[test]
    fn graph_round_trip() {
        let (g, labels) = parse_graph_json(GRAPH).unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.undirected_edges()[1].w_ba, 3.0);
        assert_eq!(labels.id(&VertexLabel::Str("hub".into())).unwrap(), 3);
        let back = GraphFile::from_graph(&g, &labels);
        let (g2, _) = parse_graph_json(&to_json_pretty(&back)).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn strict_parsing() {
        assert!(parse_graph_json(r#"{"vertices": [0], "colour": 1}"#).is_err());
        assert!(parse_graph_json(r#"{"vertices": [0, 0]}"#).is_err());
        assert!(parse_graph_json(r#"{"vertices": [0, 1], "directed": [[0, 2, 1.0]]}"#).is_err());
        assert!(parse_graph_json("{").is_err());
    }

    #[test]
    fn spec_resolves_edges() {
        let text = format!(
            r#"{{"graph": {GRAPH}, "start": "hub", "required": [[1, 0, "u"], ["hub", 0, "d"]],
                "turns": [[[0, 1], [1, 2], 2.5]], "i_max": 6}}"#
        );
        let (spec, _) = parse_spec_json(&text).unwrap();
        assert_eq!(spec.start, Some(3));
        assert_eq!(spec.required, Some(vec![EdgeRef::Undirected(0), EdgeRef::Directed(0)]));
        assert_eq!(spec.turns[0], TurnPenalty { from: 0, via: 1, to: 2, bonus: 2.5 });
        assert_eq!(spec.i_max, Some(6));
        let bad = format!(r#"{{"graph": {GRAPH}, "required": [[0, 2, "u"]]}}"#);
        assert!(parse_spec_json(&bad).is_err());
        let unknown = format!(r#"{{"graph": {GRAPH}, "postmans": 2}}"#);
        assert!(parse_spec_json(&unknown).is_err());
    }

    #[test]
    fn route_file_round_trip() {
        let (g, labels) = parse_graph_json(GRAPH).unwrap();
        let walk = vec![
            RouteStep { from: 3, to: 0, mode: StepMode::Plain, edge: EdgeRef::Directed(0) },
            RouteStep { from: 0, to: 1, mode: StepMode::Plain, edge: EdgeRef::Undirected(0) },
        ];
        let route = RouteSolution { walks: vec![walk.clone()], objective_weight: 6.0, turn_extra: 0.0, validity: Validity::all_true() };
        let file = RouteFile::from_route(&labels, &route);
        assert_eq!(file.vertex_order[0], vec![VertexLabel::Str("hub".into()), VertexLabel::Int(0), VertexLabel::Int(1)]);
        let back = parse_route_json(&to_json_pretty(&file)).unwrap();
        assert_eq!(back.walks(&g, &labels).unwrap(), vec![walk]);
    }
}
