#![allow(dead_code)]

use holepred::rng::SeededRng;
use holepred::{Network, NetworkTopology, Pattern, TrainingPattern};
use rand::{Rng, SeedableRng};

/// XOR on bipolar inputs: +1 when the inputs differ.
pub fn xor_patterns() -> Vec<Pattern> {
    [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
        .iter()
        .map(|&(a, b)| {
            let t = if a != b { 1.0 } else { -1.0 };
            TrainingPattern::bipolar(vec![a, b], vec![t]).unwrap()
        })
        .collect()
}

pub fn xor_topology() -> NetworkTopology {
    NetworkTopology::new(2, vec![4], 1).unwrap()
}

pub fn random_network(topology: &NetworkTopology, seed: u64) -> Network {
    let mut rng = SeededRng::seed_from_u64(seed);
    Network::init_random(topology, -1.0, 1.0, &mut rng).unwrap()
}

pub fn random_bipolar_pattern(order: usize, outputs: usize, rng: &mut SeededRng) -> Pattern {
    let mut bit = || if rng.random::<bool>() { 1.0 } else { -1.0 };
    let input = (0..order).map(|_| bit()).collect();
    let target = (0..outputs).map(|_| bit()).collect();
    TrainingPattern::bipolar(input, target).unwrap()
}

/// Summed error computed straight from the layer equations, without the
/// crate's forward pass.
pub fn reference_error(net: &Network, patterns: &[Pattern]) -> f64 {
    let shapes = net.topology().layer_shapes();
    let mut total = 0.0;
    for p in patterns {
        let mut signal = p.input.clone();
        for (layer, &(inputs, neurons)) in shapes.iter().enumerate() {
            signal = (0..neurons)
                .map(|n| {
                    let mut v = net.threshold(layer, n);
                    for (i, &x) in signal.iter().enumerate().take(inputs) {
                        v += net.weight(layer, n, i) * x;
                    }
                    (1.0 - (-v).exp()) / (1.0 + (-v).exp())
                })
                .collect();
        }
        total += 0.5
            * p.target
                .iter()
                .zip(&signal)
                .map(|(t, z)| (t - z).powi(2))
                .sum::<f64>();
    }
    total
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Every accepted error in a Levenberg-Marquardt log must be strictly lower
/// than the one before it.
pub fn assert_lm_monotone(log: &holepred::train::TrainLog) {
    let accepted = log.accepted_errors();
    assert!(!accepted.is_empty(), "log has no starting row");
    for w in accepted.windows(2) {
        assert!(
            w[1] < w[0],
            "accepted errors not strictly decreasing: {accepted:?}"
        );
    }
}
