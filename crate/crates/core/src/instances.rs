//! Seeded random instance generators for test and benchmark suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::general::{enumerate_variables, exact_walk_oracle, ProblemSpec};
use crate::graph::{is_strongly_connected, odd_degree_vertices, DirectedEdge, EdgeRef, Graph, UndirectedEdge};

fn weight(rng: &mut impl Rng, max: u32) -> f64 {
    f64::from(rng.gen_range(1..=max))
}

/// Connected undirected graph with symmetric integer weights in `1..=w_max`:
/// a random spanning tree plus `m - (n - 1)` extra distinct edges.
pub fn random_connected_undirected(rng: &mut impl Rng, n: usize, m: usize, w_max: u32) -> Graph<f64> {
    assert!(n >= 2 && m >= n - 1 && m <= n * (n - 1) / 2, "edge count out of range");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|k| (order[rng.gen_range(0..k)], order[k])).collect();
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !pairs.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b)))
        .collect();
    rest.shuffle(rng);
    pairs.extend(rest.into_iter().take(m - (n - 1)));
    let edges: Vec<(usize, usize, f64)> = pairs.into_iter().map(|(a, b)| (a, b, weight(rng, w_max))).collect();
    Graph::undirected(n, &edges).expect("generated graph is valid")
}

/// Connected undirected graph with exactly `d` odd-degree vertices.
pub fn random_pairing_graph(rng: &mut impl Rng, d: usize) -> Graph<f64> {
    assert!(d >= 2 && d % 2 == 0, "odd-vertex count must be even and positive");
    loop {
        let n = d + rng.gen_range(0..=2);
        let max_m = n * (n - 1) / 2;
        let m = rng.gen_range(n - 1..=(n + n / 2).min(max_m));
        let g = random_connected_undirected(rng, n, m, 10);
        if odd_degree_vertices(&g).map_or(false, |odd| odd.len() == d) {
            return g;
        }
    }
}

/// Shape of a generated single-postman spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecKind {
    ClosedUndirected,
    ClosedDirected,
    ClosedMixed,
    OpenWithEndpoints,
    OpenFree,
    StartOnly,
    Rural,
    Windy,
}

impl SpecKind {
    pub const ALL: [SpecKind; 8] = [
        SpecKind::ClosedUndirected,
        SpecKind::ClosedDirected,
        SpecKind::ClosedMixed,
        SpecKind::OpenWithEndpoints,
        SpecKind::OpenFree,
        SpecKind::StartOnly,
        SpecKind::Rural,
        SpecKind::Windy,
    ];
}

fn random_graph(rng: &mut impl Rng, kind: SpecKind) -> Graph<f64> {
    loop {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(n - 1..=(n + 1).min(5));
        let mut undirected = Vec::new();
        let mut directed = Vec::new();
        let mut used = std::collections::BTreeSet::new();
        for _ in 0..m {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a == b || !used.insert((a.min(b), a.max(b))) {
                continue;
            }
            let as_directed = match kind {
                SpecKind::ClosedDirected => true,
                SpecKind::ClosedMixed | SpecKind::OpenWithEndpoints | SpecKind::Rural => rng.gen_bool(0.5),
                _ => false,
            };
            if as_directed {
                directed.push(DirectedEdge { from: a, to: b, w: weight(rng, 9) });
            } else {
                let w = weight(rng, 9);
                let w_ba = if kind == SpecKind::Windy { weight(rng, 9) } else { w };
                undirected.push(UndirectedEdge { a, b, w_ab: w, w_ba });
            }
        }
        let Ok(g) = Graph::new(n, undirected, directed) else { continue };
        if g.edge_count() > 0 && is_strongly_connected(&g) {
            return g;
        }
    }
}

/// Random spec of the given kind whose layout has between `min_vars` and
/// `max_vars` variables and which has at least one feasible route.
pub fn random_small_spec(rng: &mut impl Rng, kind: SpecKind, min_vars: usize, max_vars: usize) -> ProblemSpec<f64> {
    for _ in 0..100_000 {
        let g = random_graph(rng, kind);
        let n = g.num_vertices();
        let edges: Vec<EdgeRef> = g.edges().collect();
        let mut spec = ProblemSpec::new(g);
        match kind {
            SpecKind::ClosedUndirected | SpecKind::ClosedDirected | SpecKind::ClosedMixed | SpecKind::Windy => {
                let v = rng.gen_range(0..n);
                spec = spec.closed_at(v);
            }
            SpecKind::OpenWithEndpoints => {
                let s = rng.gen_range(0..n);
                let t = (s + rng.gen_range(1..n)) % n;
                spec = spec.with_start(s).with_stop(t);
            }
            SpecKind::OpenFree => {}
            SpecKind::StartOnly => spec = spec.with_start(rng.gen_range(0..n)),
            SpecKind::Rural => {
                let k = rng.gen_range(1..=edges.len().min(2));
                let mut chosen = edges.clone();
                chosen.shuffle(rng);
                chosen.truncate(k);
                spec = spec.with_required(chosen);
                if rng.gen_bool(0.5) {
                    spec = spec.closed_at(rng.gen_range(0..n));
                }
            }
        }
        let required = spec.required_edges().len();
        spec = spec.with_i_max(rng.gen_range(required.max(2)..=6));
        let Ok(layout) = enumerate_variables(&spec) else { continue };
        if layout.num_vars() < min_vars || layout.num_vars() > max_vars {
            continue;
        }
        if exact_walk_oracle(&spec, 1_000_000).is_ok() {
            return spec;
        }
    }
    panic!("no {kind:?} spec with {min_vars}..={max_vars} variables found");
}
