use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use super::{Arc, Graph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// All-pairs shortest path distances with a predecessor arc per (source, target).
#[derive(Debug, Clone)]
pub struct ShortestPaths<S> {
    dist: Vec<Vec<S>>,
    pred: Vec<Vec<Option<Arc<S>>>>,
}

impl<S: Scalar> ShortestPaths<S> {
    pub fn dist(&self, from: usize, to: usize) -> S {
        self.dist[from][to]
    }

    pub fn matrix(&self) -> &[Vec<S>] {
        &self.dist
    }

    /// Arcs of a shortest `from -> to` path, in walking order.
    pub fn path(&self, from: usize, to: usize) -> Vec<Arc<S>> {
        let mut arcs = Vec::new();
        let mut cur = to;
        while cur != from {
            let arc = self.pred[from][cur].expect("predecessor chain is complete");
            arcs.push(arc);
            cur = arc.from;
        }
        arcs.reverse();
        arcs
    }
}

struct Entry<S> {
    dist: S,
    vertex: usize,
}

impl<S: PartialOrd> PartialEq for Entry<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: PartialOrd> Eq for Entry<S> {}

impl<S: PartialOrd> PartialOrd for Entry<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: PartialOrd> Ord for Entry<S> {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

fn out_arcs<S: Scalar>(g: &Graph<S>) -> Vec<Vec<Arc<S>>> {
    let mut out = vec![Vec::new(); g.num_vertices()];
    for arc in g.arcs() {
        out[arc.from].push(arc);
    }
    out
}

fn dijkstra<S: Scalar>(out: &[Vec<Arc<S>>], source: usize) -> (Vec<Option<S>>, Vec<Option<Arc<S>>>) {
    let n = out.len();
    let mut dist: Vec<Option<S>> = vec![None; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(S::zero());
    heap.push(Entry { dist: S::zero(), vertex: source });
    while let Some(Entry { dist: d, vertex: v }) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for arc in &out[v] {
            let cand = d + arc.weight;
            if dist[arc.to].map_or(true, |cur| cand < cur) {
                dist[arc.to] = Some(cand);
                pred[arc.to] = Some(*arc);
                heap.push(Entry { dist: cand, vertex: arc.to });
            }
        }
    }
    (dist, pred)
}

/// Direction-aware all-pairs shortest paths. Undirected edges contribute
/// `w_ab` from `a` to `b` and `w_ba` back.
pub fn shortest_paths<S: Scalar>(g: &Graph<S>) -> Result<ShortestPaths<S>> {
    let out = out_arcs(g);
    let rows: Vec<_> = (0..g.num_vertices())
        .into_par_iter()
        .map(|s| dijkstra(&out, s))
        .collect();
    let mut dist = Vec::with_capacity(rows.len());
    let mut pred = Vec::with_capacity(rows.len());
    for (d, p) in rows {
        if d.iter().any(Option::is_none) {
            return Err(Error::NotStronglyConnected);
        }
        dist.push(d.into_iter().map(Option::unwrap).collect());
        pred.push(p);
    }
    Ok(ShortestPaths { dist, pred })
}

fn reaches_all(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn is_strongly_connected<S: Scalar>(g: &Graph<S>) -> bool {
    let n = g.num_vertices();
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for arc in g.arcs() {
        fwd[arc.from].push(arc.to);
        bwd[arc.to].push(arc.from);
    }
    reaches_all(&fwd) && reaches_all(&bwd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::example_graph;
    use crate::graph::{DirectedEdge, UndirectedEdge};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Floyd-Warshall reference over the same arc expansion.
    fn floyd_warshall(g: &Graph<f64>) -> Vec<Vec<f64>> {
        let n = g.num_vertices();
        let mut d = vec![vec![f64::INFINITY; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = 0.0;
        }
        for a in g.arcs() {
            if a.weight < d[a.from][a.to] {
                d[a.from][a.to] = a.weight;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    fn random_windy(rng: &mut ChaCha8Rng, n: usize) -> Graph<f64> {
        // ring of undirected edges keeps it strongly connected
        let mut und = Vec::new();
        for v in 0..n {
            let u = (v + 1) % n;
            und.push(UndirectedEdge {
                a: v,
                b: u,
                w_ab: rng.gen_range(1..10) as f64,
                w_ba: rng.gen_range(1..10) as f64,
            });
        }
        let mut dir = Vec::new();
        for _ in 0..n {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b && !dir.iter().any(|e: &DirectedEdge<f64>| e.from == a && e.to == b) {
                dir.push(DirectedEdge { from: a, to: b, w: rng.gen_range(0..6) as f64 });
            }
        }
        Graph::new(n, und, dir).unwrap()
    }

    #[test]
    fn example_distance() {
        let sp = shortest_paths(&example_graph()).unwrap();
        assert_eq!(sp.dist(3, 5), 9.0);
        let path: Vec<_> = sp.path(3, 5).iter().map(|a| (a.from, a.to)).collect();
        assert_eq!(path, vec![(3, 2), (2, 5)]);
        for v in 0..6 {
            assert_eq!(sp.dist(v, v), 0.0);
            assert!(sp.path(v, v).is_empty());
        }
    }

    #[test]
    fn matches_floyd_warshall_on_random_windy_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(3..8);
            let g = random_windy(&mut rng, n);
            let sp = shortest_paths(&g).unwrap();
            let fw = floyd_warshall(&g);
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(sp.dist(a, b), fw[a][b]);
                    let w: f64 = sp.path(a, b).iter().map(|x| x.weight).sum();
                    assert_eq!(w, sp.dist(a, b));
                    for c in 0..n {
                        assert!(sp.dist(a, c) <= sp.dist(a, b) + sp.dist(b, c));
                    }
                }
            }
        }
    }

    #[test]
    fn windy_weights_are_directional() {
        let g = Graph::new(
            2,
            vec![UndirectedEdge { a: 0, b: 1, w_ab: 1.0, w_ba: 7.0 }],
            vec![],
        )
        .unwrap();
        let sp = shortest_paths(&g).unwrap();
        assert_eq!(sp.dist(0, 1), 1.0);
        assert_eq!(sp.dist(1, 0), 7.0);
    }

    #[test]
    fn connectivity() {
        assert!(is_strongly_connected(&example_graph()));
        let isolated = Graph::<f64>::new(2, vec![], vec![]).unwrap();
        assert!(!is_strongly_connected(&isolated));
        let cycle = Graph::directed(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert!(is_strongly_connected(&cycle));
        let broken = Graph::directed(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(!is_strongly_connected(&broken));
        assert_eq!(shortest_paths(&broken).unwrap_err(), Error::NotStronglyConnected);
    }

    #[test]
    fn exhaustive_reachability_agrees_on_small_digraphs() {
        // every digraph on 3 vertices without loops: 2^6 arc subsets
        let pairs = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
        for mask in 0u32..64 {
            let arcs: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &(a, b))| (a, b, 1.0))
                .collect();
            let g = Graph::<f64>::directed(3, &arcs).unwrap();
            // transitive closure by repeated squaring
            let mut reach = [[false; 3]; 3];
            for (v, row) in reach.iter_mut().enumerate() {
                row[v] = true;
            }
            for &(a, b, _) in &arcs {
                reach[a][b] = true;
            }
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        reach[i][j] |= reach[i][k] && reach[k][j];
                    }
                }
            }
            let expected = reach.iter().all(|r| r.iter().all(|&x| x));
            assert_eq!(is_strongly_connected(&g), expected, "mask {mask}");
        }
    }
}
