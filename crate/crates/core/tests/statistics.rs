use holepred::data::{bayes_floor, synth_generate_with_states, ChannelModel};
use holepred::ga::roulette_select;
use holepred::rng::SeededRng;
use rand::SeedableRng;

fn frequencies(fitness: &[f64], draws: usize, seed: u64) -> Vec<f64> {
    let mut rng = SeededRng::seed_from_u64(seed);
    let mut counts = vec![0usize; fitness.len()];
    for _ in 0..draws {
        counts[roulette_select(fitness, &mut rng)] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / draws as f64)
        .collect()
}

#[test]
fn roulette_frequencies_follow_fitness() {
    for f in frequencies(&[1.0, 1.0, 1.0, 1.0], 100_000, 1) {
        assert!((f - 0.25).abs() <= 0.02, "{f}");
    }
    let f = frequencies(&[3.0, 1.0], 100_000, 2);
    assert!((f[0] - 0.75).abs() <= 0.01, "{f:?}");
    let f = frequencies(&[0.0, 2.0, 0.0], 1000, 3);
    assert_eq!(f, vec![0.0, 1.0, 0.0]);
}

#[test]
fn synthetic_chain_matches_its_transition_law() {
    let model = ChannelModel::default();
    let slots = 100_000;
    let (sweeps, states) = synth_generate_with_states(&model, 2, slots, 16.0, 42).unwrap();
    assert_eq!(sweeps.len(), slots);
    for series in &states {
        let mut from = [0usize; 2];
        let mut flips = [0usize; 2];
        for w in series.bits.windows(2) {
            let s = usize::from(w[0]);
            from[s] += 1;
            if w[1] != w[0] {
                flips[s] += 1;
            }
        }
        for (s, p) in [(0, model.p_idle_to_busy), (1, model.p_busy_to_idle)] {
            let n = from[s] as f64;
            let observed = flips[s] as f64 / n;
            let sigma = (p * (1.0 - p) / n).sqrt();
            assert!(
                (observed - p).abs() <= 3.0 * sigma,
                "state {s}: {observed} vs {p}"
            );
        }
        let duty = series.duty_cycle();
        assert!((duty - model.stationary_busy()).abs() < 0.02, "duty {duty}");
    }
    // Channels are independent streams.
    assert_ne!(states[0].bits, states[1].bits);
}

#[test]
fn synthetic_powers_separate_at_the_midpoint() {
    let model = ChannelModel::default();
    let (sweeps, states) = synth_generate_with_states(&model, 1, 20_000, 16.0, 5).unwrap();
    let m = model.midpoint_threshold();
    let mismatches = sweeps
        .iter()
        .zip(&states[0].bits)
        .filter(|(s, &b)| u8::from(s.powers[0] >= m) != b)
        .count();
    // 3σ from each mean: about 0.13% of slots land on the wrong side.
    assert!(mismatches < 60, "{mismatches}");
}

#[test]
fn bayes_floor_of_the_reference_channels() {
    // Stationary busy share a/(a+b); the optimal rule repeats the last state.
    let oracle = |a: f64, b: f64| (b / (a + b)) * a + (a / (a + b)) * b;
    let model = ChannelModel::default();
    assert!((bayes_floor(&model) - oracle(0.1, 0.2)).abs() < 1e-15);
    assert!((bayes_floor(&model) - 2.0 / 15.0).abs() < 1e-15);
    let sticky = ChannelModel {
        p_idle_to_busy: 0.02,
        p_busy_to_idle: 0.02,
        ..ChannelModel::default()
    };
    assert!((bayes_floor(&sticky) - 0.02).abs() < 1e-15);
}
