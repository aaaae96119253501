mod common;

use holepred::rng::SeededRng;
use holepred::train::{backprop_gradient, jacobian, total_error, Gradient};
use holepred::{Network, NetworkTopology, Pattern, TrainingPattern};
use rand::{Rng, SeedableRng};

const STEP: f64 = 1e-5;

fn random_topology(rng: &mut SeededRng) -> NetworkTopology {
    let order = rng.random_range(1..=5);
    let layers = rng.random_range(0..=2);
    let hidden = (0..layers).map(|_| rng.random_range(1..=8)).collect();
    NetworkTopology::new(order, hidden, rng.random_range(1..=2)).unwrap()
}

fn random_pattern(t: &NetworkTopology, rng: &mut SeededRng) -> Pattern {
    let input = (0..t.order).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let target = (0..t.output_size)
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect();
    TrainingPattern::new(input, target).unwrap()
}

fn finite_difference(net: &Network, pattern: &Pattern) -> Vec<f64> {
    let patterns = std::slice::from_ref(pattern);
    (0..net.parameter_count())
        .map(|i| {
            let mut plus = net.clone();
            plus.params_mut()[i] += STEP;
            let mut minus = net.clone();
            minus.params_mut()[i] -= STEP;
            (total_error(&plus, patterns).unwrap() - total_error(&minus, patterns).unwrap())
                / (2.0 * STEP)
        })
        .collect()
}

fn assert_close_to_fd(net: &Network, pattern: &Pattern) {
    let analytic = backprop_gradient(net, pattern).unwrap().values;
    let numeric = finite_difference(net, pattern);
    for (i, (&g, &fd)) in analytic.iter().zip(&numeric).enumerate() {
        let allowed = (1e-6 * fd.abs()).max(1e-8);
        assert!(
            (g - fd).abs() <= allowed,
            "param {i} ({:?}): backprop {g} vs fd {fd}",
            net.slot(i)
        );
    }
}

#[test]
fn backprop_matches_finite_differences_on_random_networks() {
    let mut rng = SeededRng::seed_from_u64(2024);
    for case in 0..50 {
        let t = random_topology(&mut rng);
        let net = common::random_network(&t, 1000 + case);
        let pattern = random_pattern(&t, &mut rng);
        assert_close_to_fd(&net, &pattern);
    }
}

#[test]
fn backprop_matches_finite_differences_on_3_10_1() {
    let t = NetworkTopology::new(3, vec![10], 1).unwrap();
    let mut rng = SeededRng::seed_from_u64(7);
    for seed in 0..5 {
        let net = common::random_network(&t, seed);
        assert_close_to_fd(&net, &random_pattern(&t, &mut rng));
    }
}

#[test]
fn jacobian_transpose_residual_is_summed_gradient() {
    let mut rng = SeededRng::seed_from_u64(99);
    for case in 0..20 {
        let t = random_topology(&mut rng);
        let net = common::random_network(&t, 500 + case);
        let patterns: Vec<Pattern> = (0..rng.random_range(1..=6))
            .map(|_| random_pattern(&t, &mut rng))
            .collect();

        let jac = jacobian(&net, &patterns).unwrap();
        assert_eq!(jac.matrix.rows(), patterns.len() * t.output_size);
        assert_eq!(jac.matrix.cols(), net.parameter_count());
        let jt_e = jac.matrix.transpose_mul(&jac.residuals).unwrap();

        let mut summed = Gradient::zeros(net.parameter_count());
        for p in &patterns {
            summed.add_assign(&backprop_gradient(&net, p).unwrap());
        }
        for (a, b) in jt_e.iter().zip(&summed.values) {
            assert!((a - b).abs() <= 1e-10, "Jᵀe {a} vs Σ∇ {b}");
        }
    }
}

#[test]
fn jacobian_rows_match_residual_finite_differences() {
    // e = t - z, so ∂e/∂w is minus the output sensitivity.
    let t = NetworkTopology::new(2, vec![3], 2).unwrap();
    let net = common::random_network(&t, 3);
    let mut rng = SeededRng::seed_from_u64(3);
    let pattern = random_pattern(&t, &mut rng);
    let jac = jacobian(&net, std::slice::from_ref(&pattern)).unwrap();
    for i in 0..net.parameter_count() {
        let mut plus = net.clone();
        plus.params_mut()[i] += STEP;
        let mut minus = net.clone();
        minus.params_mut()[i] -= STEP;
        let zp = plus.output(&pattern.input).unwrap();
        let zm = minus.output(&pattern.input).unwrap();
        for k in 0..2 {
            let fd = -(zp[k] - zm[k]) / (2.0 * STEP);
            assert!((jac.matrix.get(k, i) - fd).abs() < 1e-8);
        }
    }
}

#[test]
fn gradient_agrees_in_single_precision() {
    let t = NetworkTopology::new(2, vec![3], 1).unwrap();
    let net = common::random_network(&t, 11);
    let net32 =
        holepred::Network32::from_flat(&t, net.params().iter().map(|&p| p as f32).collect())
            .unwrap();
    let p = TrainingPattern::bipolar(vec![1.0, -1.0], vec![1.0]).unwrap();
    let p32 = TrainingPattern::bipolar(vec![1.0f32, -1.0], vec![1.0]).unwrap();
    let g = backprop_gradient(&net, &p).unwrap().values;
    let g32 = backprop_gradient(&net32, &p32).unwrap().values;
    for (a, b) in g.iter().zip(&g32) {
        assert!((a - f64::from(*b)).abs() < 1e-5);
    }
}
