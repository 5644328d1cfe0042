//! Mixed windy weighted graphs and the classical algorithms the QUBO
//! pipelines lean on.
//!
//! Vertices are dense ids `0..n`. An undirected edge carries one weight per
//! traversal direction; a directed edge carries one weight. Both kinds may
//! join the same pair of vertices, in which case they are distinct edges.

mod euler;
mod paths;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use euler::{eulerian_circuit, EulerTour};
pub use paths::{is_strongly_connected, shortest_paths, ShortestPaths};

/// Identifies one user edge, or the synthetic arcs of the terminal-vertex
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeRef {
    Undirected(usize),
    Directed(usize),
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UndirectedEdge<S> {
    pub a: usize,
    pub b: usize,
    pub w_ab: S,
    pub w_ba: S,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedEdge<S> {
    pub from: usize,
    pub to: usize,
    pub w: S,
}

/// One traversal direction of an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc<S> {
    pub from: usize,
    pub to: usize,
    pub weight: S,
    pub edge: EdgeRef,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph<S> {
    num_vertices: usize,
    undirected: Vec<UndirectedEdge<S>>,
    directed: Vec<DirectedEdge<S>>,
}

impl<S: Scalar> Graph<S> {
    /// Builds a graph, rejecting self-loops, parallel edges of the same kind,
    /// dangling endpoints and negative or non-finite weights.
    pub fn new(
        num_vertices: usize,
        undirected: Vec<UndirectedEdge<S>>,
        directed: Vec<DirectedEdge<S>>,
    ) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("vertex set is empty".into()));
        }
        let check_weight = |w: S| -> Result<()> {
            if !w.is_finite_value() || w < S::zero() {
                return Err(Error::InvalidGraph(format!("weight {w} is negative or not finite")));
            }
            Ok(())
        };
        let check_vertex = |v: usize| -> Result<()> {
            if v >= num_vertices {
                return Err(Error::InvalidGraph(format!("endpoint {v} is not a vertex")));
            }
            Ok(())
        };
        let mut seen = BTreeSet::new();
        for e in &undirected {
            check_vertex(e.a)?;
            check_vertex(e.b)?;
            check_weight(e.w_ab)?;
            check_weight(e.w_ba)?;
            if e.a == e.b {
                return Err(Error::InvalidGraph(format!("self-loop at {}", e.a)));
            }
            if !seen.insert((e.a.min(e.b), e.a.max(e.b))) {
                return Err(Error::InvalidGraph(format!("duplicate undirected edge {}-{}", e.a, e.b)));
            }
        }
        let mut seen = BTreeSet::new();
        for e in &directed {
            check_vertex(e.from)?;
            check_vertex(e.to)?;
            check_weight(e.w)?;
            if e.from == e.to {
                return Err(Error::InvalidGraph(format!("self-loop at {}", e.from)));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate directed edge {}->{}",
                    e.from, e.to
                )));
            }
        }
        Ok(Self { num_vertices, undirected, directed })
    }

    /// Purely undirected graph with symmetric weights.
    pub fn undirected(num_vertices: usize, edges: &[(usize, usize, S)]) -> Result<Self> {
        let undirected = edges
            .iter()
            .map(|&(a, b, w)| UndirectedEdge { a, b, w_ab: w, w_ba: w })
            .collect();
        Self::new(num_vertices, undirected, Vec::new())
    }

    /// Purely directed graph.
    pub fn directed(num_vertices: usize, edges: &[(usize, usize, S)]) -> Result<Self> {
        let directed = edges.iter().map(|&(from, to, w)| DirectedEdge { from, to, w }).collect();
        Self::new(num_vertices, Vec::new(), directed)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn undirected_edges(&self) -> &[UndirectedEdge<S>] {
        &self.undirected
    }

    pub fn directed_edges(&self) -> &[DirectedEdge<S>] {
        &self.directed
    }

    pub fn edge_count(&self) -> usize {
        self.undirected.len() + self.directed.len()
    }

    /// All edge references, undirected first, in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        (0..self.undirected.len())
            .map(EdgeRef::Undirected)
            .chain((0..self.directed.len()).map(EdgeRef::Directed))
    }

    pub fn contains_edge(&self, edge: EdgeRef) -> bool {
        match edge {
            EdgeRef::Undirected(i) => i < self.undirected.len(),
            EdgeRef::Directed(i) => i < self.directed.len(),
            EdgeRef::Terminal => false,
        }
    }

    /// Endpoints as stored (`(a, b)` for undirected, `(from, to)` for directed).
    pub fn endpoints(&self, edge: EdgeRef) -> (usize, usize) {
        match edge {
            EdgeRef::Undirected(i) => (self.undirected[i].a, self.undirected[i].b),
            EdgeRef::Directed(i) => (self.directed[i].from, self.directed[i].to),
            EdgeRef::Terminal => panic!("terminal arcs have no stored endpoints"),
        }
    }

    /// The traversal directions of one edge: two for undirected, one for directed.
    pub fn arcs_of(&self, edge: EdgeRef) -> Vec<Arc<S>> {
        match edge {
            EdgeRef::Undirected(i) => {
                let e = &self.undirected[i];
                vec![
                    Arc { from: e.a, to: e.b, weight: e.w_ab, edge },
                    Arc { from: e.b, to: e.a, weight: e.w_ba, edge },
                ]
            }
            EdgeRef::Directed(i) => {
                let e = &self.directed[i];
                vec![Arc { from: e.from, to: e.to, weight: e.w, edge }]
            }
            EdgeRef::Terminal => Vec::new(),
        }
    }

    /// Every traversal direction of every edge.
    pub fn arcs(&self) -> Vec<Arc<S>> {
        self.edges().flat_map(|e| self.arcs_of(e)).collect()
    }

    /// Finds the arc `from -> to` belonging to `edge`, if that direction exists.
    pub fn arc(&self, edge: EdgeRef, from: usize, to: usize) -> Option<Arc<S>> {
        if !self.contains_edge(edge) {
            return None;
        }
        self.arcs_of(edge).into_iter().find(|a| a.from == from && a.to == to)
    }

    /// Any arc `from -> to`, preferring the lightest (then the first) one.
    pub fn lightest_arc(&self, from: usize, to: usize) -> Option<Arc<S>> {
        let mut best: Option<Arc<S>> = None;
        for arc in self.arcs() {
            if arc.from == from && arc.to == to && best.map_or(true, |b| arc.weight < b.weight) {
                best = Some(arc);
            }
        }
        best
    }

    pub fn max_weight(&self) -> S {
        self.arcs().iter().fold(S::zero(), |m, a| m.max_value_of(a.weight))
    }

    pub fn is_undirected(&self) -> bool {
        self.directed.is_empty()
    }
}

/// Per-vertex degree counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Degree {
    pub in_degree: usize,
    pub out_degree: usize,
    pub undirected_degree: usize,
}

/// Degree counts for every vertex, indexed by vertex id.
pub fn degree_profile<S: Scalar>(g: &Graph<S>) -> Vec<Degree> {
    let mut deg = vec![Degree::default(); g.num_vertices()];
    for e in g.undirected_edges() {
        deg[e.a].undirected_degree += 1;
        deg[e.b].undirected_degree += 1;
    }
    for e in g.directed_edges() {
        deg[e.from].out_degree += 1;
        deg[e.to].in_degree += 1;
    }
    deg
}

/// Vertices of odd undirected degree, ascending.
pub fn odd_degree_vertices<S: Scalar>(g: &Graph<S>) -> Result<Vec<usize>> {
    if !g.is_undirected() {
        return Err(Error::NonUndirectedGraph);
    }
    Ok(degree_profile(g)
        .iter()
        .enumerate()
        .filter(|(_, d)| d.undirected_degree % 2 == 1)
        .map(|(v, _)| v)
        .collect())
}

/// A walk as a list of traversed arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk<S> {
    pub steps: Vec<(usize, usize)>,
    pub weight: S,
}

impl<S: Scalar> Walk<S> {
    pub fn is_contiguous(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].1 == w[1].0)
    }

    pub fn is_closed(&self) -> bool {
        match (self.steps.first(), self.steps.last()) {
            (Some(f), Some(l)) => f.0 == l.1,
            _ => true,
        }
    }

    /// Vertex-order notation: `[v0, v1, ..., vn]`.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        if let Some(first) = self.steps.first() {
            out.push(first.0);
        }
        out.extend(self.steps.iter().map(|s| s.1));
        out
    }
}

/// Provenance of a multigraph edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeTag {
    Original(EdgeRef),
    /// Stand-in for a shortest path, indexed by the pair that produced it.
    Added(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiEdge<S> {
    pub from: usize,
    pub to: usize,
    pub weight: S,
    pub tag: EdgeTag,
}

/// Graph allowing parallel edges, used only while augmenting a user graph.
/// Either every edge is undirected or every edge is directed.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiGraph<S> {
    pub num_vertices: usize,
    pub directed: bool,
    pub edges: Vec<MultiEdge<S>>,
}

impl<S: Scalar> MultiGraph<S> {
    pub fn new(num_vertices: usize, directed: bool) -> Self {
        Self { num_vertices, directed, edges: Vec::new() }
    }

    /// Undirected multigraph holding every undirected edge of `g` (weight `w_ab`).
    pub fn from_undirected(g: &Graph<S>) -> Self {
        let mut mg = Self::new(g.num_vertices(), false);
        for (i, e) in g.undirected_edges().iter().enumerate() {
            mg.push(e.a, e.b, e.w_ab, EdgeTag::Original(EdgeRef::Undirected(i)));
        }
        mg
    }

    pub fn push(&mut self, from: usize, to: usize, weight: S, tag: EdgeTag) {
        self.edges.push(MultiEdge { from, to, weight, tag });
    }

    pub fn total_weight(&self) -> S {
        self.edges.iter().fold(S::zero(), |acc, e| acc + e.weight)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The six-vertex example graph used throughout the test suites.
    pub(crate) fn example_graph() -> Graph<f64> {
        Graph::undirected(
            6,
            &[
                (3, 2, 5.0),
                (2, 1, 1.0),
                (1, 0, 1.0),
                (0, 5, 2.0),
                (5, 4, 5.0),
                (4, 2, 5.0),
                (5, 2, 4.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(Graph::<f64>::undirected(2, &[(0, 0, 1.0)]).is_err());
        assert!(Graph::<f64>::undirected(2, &[(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(Graph::<f64>::undirected(2, &[(0, 2, 1.0)]).is_err());
        assert!(Graph::<f64>::undirected(2, &[(0, 1, -1.0)]).is_err());
        assert!(Graph::<f64>::undirected(2, &[(0, 1, f64::NAN)]).is_err());
        assert!(Graph::<f64>::directed(2, &[(0, 1, 1.0), (0, 1, 3.0)]).is_err());
        assert!(Graph::<f64>::undirected(0, &[]).is_err());
        // opposite directed arcs are distinct edges
        assert!(Graph::<f64>::directed(2, &[(0, 1, 1.0), (1, 0, 3.0)]).is_ok());
    }

    #[test]
    fn mixed_pair_is_two_edges() {
        let g = Graph::new(
            2,
            vec![UndirectedEdge { a: 0, b: 1, w_ab: 1.0, w_ba: 2.0 }],
            vec![DirectedEdge { from: 0, to: 1, w: 0.5 }],
        )
        .unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.arcs().len(), 3);
        assert_eq!(g.lightest_arc(0, 1).unwrap().edge, EdgeRef::Directed(0));
        assert_eq!(g.lightest_arc(1, 0).unwrap().weight, 2.0);
    }

    #[test]
    fn example_degrees() {
        let g = example_graph();
        let deg = degree_profile(&g);
        assert_eq!(deg[2].undirected_degree, 4);
        assert_eq!(odd_degree_vertices(&g).unwrap(), vec![3, 5]);
    }

    #[test]
    fn single_edge_degrees() {
        let g = Graph::undirected(2, &[(0, 1, 1.0)]).unwrap();
        let deg = degree_profile(&g);
        assert_eq!(deg[0].undirected_degree, 1);
        assert_eq!(deg[1].undirected_degree, 1);
    }

    #[test]
    fn cycle_has_no_odd_vertices() {
        let g = Graph::undirected(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        assert!(odd_degree_vertices(&g).unwrap().is_empty());
    }

    #[test]
    fn odd_vertices_rejects_directed() {
        let g = Graph::directed(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(odd_degree_vertices(&g), Err(Error::NonUndirectedGraph));
    }

    #[test]
    fn walk_helpers() {
        let w = Walk { steps: vec![(2, 4), (4, 5), (5, 2)], weight: 14.0 };
        assert!(w.is_contiguous());
        assert!(w.is_closed());
        assert_eq!(w.vertices(), vec![2, 4, 5, 2]);
    }
}
