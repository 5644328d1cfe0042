use super::decode::route_from_walks;
use super::spec::ProblemSpec;
use crate::graph::{eulerian_circuit, EdgeRef, EdgeTag, MultiGraph};
use crate::qubo::StepMode;
use crate::route::{RouteSolution, RouteStep};
use crate::scalar::Scalar;

/// Solves the instance directly when the required edges can be traversed
/// exactly once by a trail compatible with the endpoints.
///
/// Applies to a single postman without turns, hierarchy or capacities,
/// with required edges all undirected (and direction-independent weights)
/// or all directed. Returns `None` when any of this fails; such an instance
/// needs the QUBO pipeline.
pub fn euler_shortcut<S: Scalar>(spec: &ProblemSpec<S>) -> Option<RouteSolution<S>> {
    if spec.validate().is_err()
        || spec.uses_rest_encoding()
        || !spec.turns.is_empty()
        || !spec.hierarchy.is_empty()
    {
        return None;
    }
    let required = spec.required_edges();
    let mode = if spec.service_mode { StepMode::Service } else { StepMode::Plain };
    let directed = match required.first() {
        None => return route_from_walks(spec, vec![Vec::new()]).ok().filter(|r| r.is_valid()),
        Some(EdgeRef::Directed(_)) => true,
        Some(_) => false,
    };
    let n = spec.graph.num_vertices();
    let mut mg = MultiGraph::new(n, directed);
    for &e in &required {
        if matches!(e, EdgeRef::Directed(_)) != directed {
            return None;
        }
        let arcs = spec.graph.arcs_of(e);
        let w = spec.step_weight(0, &arcs[0], mode);
        if arcs.iter().any(|a| spec.step_weight(0, a, mode) != w) {
            return None;
        }
        mg.push(arcs[0].from, arcs[0].to, w, EdgeTag::Original(e));
    }

    let mut surplus = vec![0i64; n];
    for e in &mg.edges {
        surplus[e.from] += 1;
        surplus[e.to] += if directed { -1 } else { 1 };
    }
    let (tails, heads): (Vec<usize>, Vec<usize>) = if directed {
        (
            (0..n).filter(|&v| surplus[v] == 1).collect(),
            (0..n).filter(|&v| surplus[v] == -1).collect(),
        )
    } else {
        let odd: Vec<usize> = (0..n).filter(|&v| surplus[v] % 2 != 0).collect();
        (odd.iter().take(1).copied().collect(), odd.iter().skip(1).copied().collect())
    };
    let unbalanced = (0..n)
        .filter(|&v| if directed { surplus[v] != 0 } else { surplus[v] % 2 != 0 })
        .count();

    let steps: Vec<(usize, usize, EdgeRef)> = match (tails.as_slice(), heads.as_slice(), unbalanced) {
        ([], [], 0) => {
            let anchor = match (spec.start, spec.stop) {
                (Some(s), Some(t)) if s != t => return None,
                (s, t) => s.or(t),
            };
            let tour = eulerian_circuit(&mg).ok()?;
            let mut steps: Vec<_> = tour
                .walk
                .steps
                .iter()
                .zip(&tour.edge_order)
                .map(|(&(f, t), &e)| (f, t, original(&mg, e)))
                .collect();
            if let Some(a) = anchor {
                let k = steps.iter().position(|s| s.0 == a)?;
                steps.rotate_left(k);
            }
            steps
        }
        (&[s], &[t], 2) => {
            let (mut s, mut t) = (s, t);
            if !directed && (spec.start == Some(t) || spec.stop == Some(s)) {
                std::mem::swap(&mut s, &mut t);
            }
            if spec.start.is_some_and(|v| v != s) || spec.stop.is_some_and(|v| v != t) {
                return None;
            }
            let dummy = mg.edges.len();
            mg.push(t, s, S::zero(), EdgeTag::Added(0));
            let tour = eulerian_circuit(&mg).ok()?;
            let k = tour.edge_order.iter().position(|&e| e == dummy)?;
            let mut steps: Vec<_> = tour
                .walk
                .steps
                .iter()
                .zip(&tour.edge_order)
                .map(|(&(f, to), &e)| (f, to, if e == dummy { EdgeRef::Terminal } else { original(&mg, e) }))
                .collect();
            steps.rotate_left(k + 1);
            steps.pop();
            if steps.first().map(|x| x.0) != Some(s) {
                // the undirected circuit ran the dummy edge from s to t
                steps.reverse();
                for x in &mut steps {
                    std::mem::swap(&mut x.0, &mut x.1);
                }
            }
            steps
        }
        _ => return None,
    };
    if steps.len() > spec.i_max() {
        return None;
    }
    let walk = steps.into_iter().map(|(from, to, edge)| RouteStep { from, to, mode, edge }).collect();
    route_from_walks(spec, vec![walk]).ok().filter(|r| r.is_valid())
}

fn original<S>(mg: &MultiGraph<S>, e: usize) -> EdgeRef {
    match mg.edges[e].tag {
        EdgeTag::Original(edge) => edge,
        EdgeTag::Added(_) => EdgeRef::Terminal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn cycle_rotates_to_start() {
        let g = Graph::undirected(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (3, 0, 4.0)]).unwrap();
        let r = euler_shortcut(&ProblemSpec::new(g).closed_at(2)).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.objective_weight, 10.0);
        assert_eq!(r.vertex_order(0).first(), Some(&2));
        assert_eq!(r.vertex_order(0).last(), Some(&2));
    }

    #[test]
    fn path_gives_open_trail() {
        let g = Graph::undirected(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let r = euler_shortcut(&ProblemSpec::new(g.clone()).with_start(2)).unwrap();
        assert_eq!(r.vertex_order(0), vec![2, 1, 0]);
        assert!(euler_shortcut(&ProblemSpec::new(g.clone()).closed_at(0)).is_none());
        assert!(euler_shortcut(&ProblemSpec::new(g).with_start(1)).is_none());
    }

    #[test]
    fn directed_open_trail_and_turns_disable() {
        let g = Graph::directed(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let spec = ProblemSpec::new(g).with_required(vec![EdgeRef::Directed(0), EdgeRef::Directed(1)]);
        let r = euler_shortcut(&spec).unwrap();
        assert_eq!(r.vertex_order(0), vec![0, 1, 2]);
        let mut turned = spec.clone();
        turned.turns.push(super::super::spec::TurnPenalty { from: 0, via: 1, to: 2, bonus: 1.0 });
        assert!(euler_shortcut(&turned).is_none());
    }

    #[test]
    fn windy_weights_disable() {
        let g = Graph::new(
            2,
            vec![crate::graph::UndirectedEdge { a: 0, b: 1, w_ab: 1.0, w_ba: 2.0 }],
            Vec::new(),
        )
        .unwrap();
        assert!(euler_shortcut(&ProblemSpec::new(g)).is_none());
    }
}
