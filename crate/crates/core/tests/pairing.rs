use std::collections::BTreeMap;

use postman_core::graph::{degree_profile, odd_degree_vertices, EdgeRef, Graph};
use postman_core::instances::{random_connected_undirected, random_pairing_graph};
use postman_core::pairing::{decode_pairing, encode_pairing, Pairing, PairingProblem};
use postman_core::solvers::brute_force;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn floyd_warshall(g: &Graph<f64>) -> Vec<Vec<f64>> {
    let n = g.num_vertices();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for e in g.undirected_edges() {
        d[e.a][e.b] = d[e.a][e.b].min(e.w_ab);
        d[e.b][e.a] = d[e.b][e.a].min(e.w_ba);
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

fn all_pairings(vs: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let Some((&first, rest)) = vs.split_first() else { return vec![vec![]] };
    let mut out = Vec::new();
    for (k, &other) in rest.iter().enumerate() {
        let mut remaining = rest.to_vec();
        remaining.remove(k);
        for mut tail in all_pairings(&remaining) {
            tail.push((first, other));
            out.push(tail);
        }
    }
    out
}

#[test]
fn two_odd_vertices_pick_the_only_pair() {
    for seed in 0..10 {
        let g = random_pairing_graph(&mut ChaCha8Rng::seed_from_u64(seed), 2);
        let problem = PairingProblem::new(g).unwrap();
        let compiled = problem.compile(problem.default_penalty()).unwrap();
        assert_eq!(compiled.num_vars(), 1);
        assert_eq!(brute_force(&compiled.qubo).unwrap().best_assignment, vec![true]);
    }
}

proptest! {
    #[test]
    fn matchings_round_trip_through_bits(seed in 0u64..100_000, d in prop::sample::select(vec![2usize, 4, 6, 8])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_pairing_graph(&mut rng, d);
        let compiled = PairingProblem::new(g.clone()).unwrap().compile(1.0).unwrap();
        let mut odd = odd_degree_vertices(&g).unwrap();
        odd.shuffle(&mut rng);
        let pairing = Pairing::new(odd.chunks(2).map(|c| (c[0], c[1])));
        let x = encode_pairing(&pairing, &compiled.registry);
        prop_assert_eq!(decode_pairing(&x, &compiled.registry).unwrap(), pairing);
    }

    #[test]
    fn degree_profile_matches_edge_recount(seed in 0u64..100_000, n in 5usize..9) {
        let g = random_connected_undirected(&mut ChaCha8Rng::seed_from_u64(seed), n, 8, 9);
        let mut count = vec![0usize; n];
        for e in g.undirected_edges() {
            count[e.a] += 1;
            count[e.b] += 1;
        }
        let profile = degree_profile(&g);
        for v in 0..n {
            prop_assert_eq!(profile[v].undirected_degree, count[v]);
            prop_assert_eq!(profile[v].in_degree + profile[v].out_degree, 0);
        }
        let odd = odd_degree_vertices(&g).unwrap();
        prop_assert_eq!(odd.len() % 2, 0);
        prop_assert_eq!(odd, (0..n).filter(|&v| count[v] % 2 == 1).collect::<Vec<_>>());
    }
}

#[test]
fn oracle_is_the_cheapest_of_all_pairings() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for d in [2, 4, 6, 8, 10] {
        for _ in 0..6 {
            let g = random_pairing_graph(&mut rng, d);
            let dist = floyd_warshall(&g);
            let odd = odd_degree_vertices(&g).unwrap();
            let cheapest = all_pairings(&odd)
                .into_iter()
                .map(|p| p.iter().map(|&(a, b)| dist[a][b]).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            let (pairing, added) = PairingProblem::new(g).unwrap().oracle().unwrap();
            assert!(pairing.is_perfect_for(&odd));
            assert_eq!(added, cheapest);
        }
    }
}

#[test]
fn oracle_routes_are_closed_and_cover_every_edge() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..30 {
        let g = random_pairing_graph(&mut rng, [2, 4, 6][k % 3]);
        let problem = PairingProblem::new(g.clone()).unwrap();
        let (pairing, added) = problem.oracle().unwrap();
        let route = problem.route(&pairing).unwrap();
        assert!(route.is_valid());
        let walk = &route.walks[0];
        assert_eq!(walk.first().unwrap().from, walk.last().unwrap().to);
        assert!(walk.windows(2).all(|w| w[0].to == w[1].from));
        let mut uses: BTreeMap<EdgeRef, usize> = BTreeMap::new();
        for s in walk {
            *uses.entry(s.edge).or_default() += 1;
        }
        assert!(g.edges().all(|e| uses.contains_key(&e)));
        let base: f64 = g.undirected_edges().iter().map(|e| e.w_ab).sum();
        assert_eq!(route.total_cost(), base + added);
    }
}
