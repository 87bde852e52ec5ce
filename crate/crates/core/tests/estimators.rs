use domsearch::estimator::{exact_finite, weighted_dominator_sums};
use domsearch::problems::lookup;
use domsearch::ObjectiveVector;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Uniform estimate of D at `probe` from `n` fresh draws; the probe itself
/// carries no weight.
fn probe_estimate(rng: &mut ChaCha8Rng, problem: &str, probe: &[f64], n: usize) -> f64 {
    let p = lookup(problem).unwrap();
    let mut objectives: Vec<ObjectiveVector> = p
        .bounds()
        .sample_uniform(rng, n)
        .iter()
        .map(|x| p.evaluate(x).unwrap())
        .collect();
    objectives.push(ObjectiveVector::new(probe.to_vec()));
    let mut w = vec![1.0; n];
    w.push(0.0);
    weighted_dominator_sums(&objectives, &w).unwrap()[n] / n as f64
}

#[test]
fn batch_mean_is_unbiased_on_identity2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (a, b) in [(0.5, 0.5), (0.2, 0.7), (0.9, 0.1)] {
        let (batches, size) = (200, 1000);
        let mean = (0..batches)
            .map(|_| probe_estimate(&mut rng, "identity2d", &[a, b], size))
            .sum::<f64>()
            / batches as f64;
        let p = a * b;
        let se = (p * (1.0 - p) / (batches * size) as f64).sqrt();
        assert!((mean - p).abs() <= 4.0 * se, "({a}, {b}): {mean} vs {p}");
    }
}

#[test]
fn uniform_draws_from_a_finite_space_recover_exact_values() {
    let problem = lookup("discrete_example").unwrap();
    let space = problem.finite_space().unwrap().to_vec();
    let exact = exact_finite(&problem).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 50_000;
    let draws: Vec<ObjectiveVector> = (0..n)
        .map(|_| problem.evaluate(space.choose(&mut rng).unwrap()).unwrap())
        .collect();
    for (x, d) in exact.iter().step_by(7) {
        let mut objs = draws.clone();
        objs.push(problem.evaluate(x).unwrap());
        let mut w = vec![1.0; n];
        w.push(0.0);
        let est = weighted_dominator_sums(&objs, &w).unwrap()[n] / n as f64;
        let se = (d * (1.0 - d) / n as f64).sqrt().max(1e-12);
        assert!((est - d).abs() <= 5.0 * se, "x = {}: {est} vs {d}", x[0]);
    }
}
