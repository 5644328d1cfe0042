use postman_core::general::ProblemSpec;
use postman_core::instances::{random_pairing_graph, random_small_spec, SpecKind};
use postman_core::pairing::PairingProblem;
use postman_core::solvers::{brute_force, solve_with_retune, GeneralPipeline, Pipeline, Sampler};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ground_hit_rate(sampler: &Sampler) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut hits = 0;
    for _ in 0..10 {
        let problem = PairingProblem::new(random_pairing_graph(&mut rng, 6)).unwrap();
        let q = problem.compile(problem.default_penalty()).unwrap().qubo;
        let ground = brute_force(&q).unwrap().best_energy;
        for seed in 0..10 {
            if (sampler.sample(&q, seed).unwrap().best_energy - ground).abs() < 1e-9 {
                hits += 1;
            }
        }
    }
    hits
}

#[test]
fn annealing_reaches_pairing_ground_states() {
    let hits = ground_hit_rate(&Sampler::from_name("sa").unwrap());
    assert!(hits >= 95, "{hits}/100");
}

#[test]
fn tabu_reaches_pairing_ground_states() {
    let hits = ground_hit_rate(&Sampler::from_name("tabu").unwrap());
    assert!(hits >= 95, "{hits}/100");
}

#[test]
fn retuning_makes_random_specs_valid() {
    let sampler = Sampler::from_name("sa+greedy").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(418);
    let mut solved = 0;
    for k in 0..100 {
        let spec: ProblemSpec<f64> = random_small_spec(&mut rng, SpecKind::ALL[k % SpecKind::ALL.len()], 8, 24);
        let pipeline = GeneralPipeline::new(spec).unwrap();
        if let Ok(out) = solve_with_retune(&pipeline, pipeline.default_penalties(), &sampler, k as u64, 5) {
            assert!(out.route.is_valid());
            solved += 1;
        }
    }
    assert!(solved >= 95, "{solved}/100");
}
