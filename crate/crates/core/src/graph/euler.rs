use super::{MultiGraph, Walk};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An Euler circuit together with the multigraph edge used by each step.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerTour<S> {
    pub walk: Walk<S>,
    pub edge_order: Vec<usize>,
}

/// Hierholzer's algorithm. Starts at the lowest vertex incident to an edge
/// and always follows the lowest-numbered unused neighbour, so the output is
/// deterministic. An edgeless multigraph yields the empty walk.
pub fn eulerian_circuit<S: Scalar>(mg: &MultiGraph<S>) -> Result<EulerTour<S>> {
    let n = mg.num_vertices;
    if mg.edges.is_empty() {
        return Ok(EulerTour { walk: Walk { steps: Vec::new(), weight: S::zero() }, edge_order: Vec::new() });
    }

    // adjacency: (neighbour, edge index)
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut in_deg = vec![0usize; n];
    for (i, e) in mg.edges.iter().enumerate() {
        if e.from >= n || e.to >= n {
            return Err(Error::InvalidGraph(format!("edge {i} has an endpoint outside the vertex set")));
        }
        adj[e.from].push((e.to, i));
        in_deg[e.to] += 1;
        if !mg.directed && e.from != e.to {
            adj[e.to].push((e.from, i));
        } else if !mg.directed {
            // undirected loop contributes two to the degree
            adj[e.from].push((e.from, i));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let balanced = (0..n).all(|v| {
        if mg.directed {
            adj[v].len() == in_deg[v]
        } else {
            adj[v].len() % 2 == 0
        }
    });
    if !balanced {
        return Err(Error::NoEulerianCircuit);
    }

    let start = (0..n).find(|&v| !adj[v].is_empty()).expect("at least one edge");
    let mut used = vec![false; mg.edges.len()];
    let mut next = vec![0usize; n];
    // stack of (vertex, edge used to arrive)
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit: Vec<(usize, Option<usize>)> = Vec::with_capacity(mg.edges.len() + 1);
    while let Some(&(v, _)) = stack.last() {
        while next[v] < adj[v].len() && used[adj[v][next[v]].1] {
            next[v] += 1;
        }
        if next[v] < adj[v].len() {
            let (u, e) = adj[v][next[v]];
            used[e] = true;
            stack.push((u, Some(e)));
        } else {
            circuit.push(stack.pop().expect("non-empty"));
        }
    }
    if used.iter().any(|u| !u) {
        // edges in a second component
        return Err(Error::NoEulerianCircuit);
    }

    circuit.reverse();
    let mut steps = Vec::with_capacity(mg.edges.len());
    let mut edge_order = Vec::with_capacity(mg.edges.len());
    let mut weight = S::zero();
    for pair in circuit.windows(2) {
        let (from, _) = pair[0];
        let (to, e) = pair[1];
        let e = e.expect("every non-initial entry carries an edge");
        steps.push((from, to));
        edge_order.push(e);
        weight += mg.edges[e].weight;
    }
    Ok(EulerTour { walk: Walk { steps, weight }, edge_order })
}
