//! Synthetic power sweeps from a two-state (idle/busy) Markov channel.

use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;

use super::{OccupancySeries, PowerSweep};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelModel {
    pub p_idle_to_busy: f64,
    pub p_busy_to_idle: f64,
    pub busy_power_mean: f64,
    pub busy_power_sigma: f64,
    pub noise_floor_mean: f64,
    pub noise_floor_sigma: f64,
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self {
            p_idle_to_busy: 0.1,
            p_busy_to_idle: 0.2,
            busy_power_mean: -83.0,
            busy_power_sigma: 2.0,
            noise_floor_mean: -95.0,
            noise_floor_sigma: 2.0,
        }
    }
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        for (what, p) in [
            ("p_idle_to_busy", self.p_idle_to_busy),
            ("p_busy_to_idle", self.p_busy_to_idle),
        ] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::invalid(what, format!("{p} is outside (0, 1)")));
            }
        }
        if !(self.busy_power_sigma >= 0.0) || !(self.noise_floor_sigma >= 0.0) {
            return Err(Error::invalid("power sigma", "must be non-negative"));
        }
        if !(self.busy_power_mean > self.noise_floor_mean) {
            return Err(Error::invalid(
                "busy_power_mean",
                "must exceed noise_floor_mean",
            ));
        }
        Ok(())
    }

    /// Long-run fraction of busy slots.
    pub fn stationary_busy(&self) -> f64 {
        self.p_idle_to_busy / (self.p_idle_to_busy + self.p_busy_to_idle)
    }

    /// Midpoint between the noise floor and busy power means.
    pub fn midpoint_threshold(&self) -> f64 {
        0.5 * (self.noise_floor_mean + self.busy_power_mean)
    }
}

/// Lowest achievable next-slot error for a known chain:
/// `Σ_s π_s · min(P(s→0), P(s→1))`.
pub fn bayes_floor(model: &ChannelModel) -> f64 {
    let busy = model.stationary_busy();
    let idle = 1.0 - busy;
    let a = model.p_idle_to_busy;
    let b = model.p_busy_to_idle;
    idle * a.min(1.0 - a) + busy * b.min(1.0 - b)
}

/// Generates `sweeps` sweeps over `channels` independent channels.
///
/// Channel `c` draws from stream `c` of a generator seeded with `seed`, so
/// adding channels never changes existing ones.
pub fn synth_generate(
    model: &ChannelModel,
    channels: usize,
    sweeps: usize,
    slot_duration_s: f64,
    seed: u64,
) -> Result<Vec<PowerSweep>> {
    Ok(synth_generate_with_states(model, channels, sweeps, slot_duration_s, seed)?.0)
}

/// As [`synth_generate`], also returning the simulated busy/idle states.
pub fn synth_generate_with_states(
    model: &ChannelModel,
    channels: usize,
    sweeps: usize,
    slot_duration_s: f64,
    seed: u64,
) -> Result<(Vec<PowerSweep>, Vec<OccupancySeries>)> {
    model.validate()?;
    if channels == 0 {
        return Err(Error::invalid("channels", "must be at least 1"));
    }
    if sweeps == 0 {
        return Err(Error::invalid("sweeps", "must be at least 1"));
    }
    let busy_power = Normal::new(model.busy_power_mean, model.busy_power_sigma)
        .map_err(|e| Error::invalid("busy power", e.to_string()))?;
    let idle_power = Normal::new(model.noise_floor_mean, model.noise_floor_sigma)
        .map_err(|e| Error::invalid("noise floor", e.to_string()))?;

    let mut powers = vec![vec![0.0; channels]; sweeps];
    let mut states = Vec::with_capacity(channels);
    for ch in 0..channels {
        let mut rng = SeededRng::seed_from_u64(seed);
        rng.set_stream(ch as u64);
        let mut busy = rng.random::<f64>() < model.stationary_busy();
        let mut bits = Vec::with_capacity(sweeps);
        for row in powers.iter_mut() {
            bits.push(u8::from(busy));
            row[ch] = if busy {
                busy_power.sample(&mut rng)
            } else {
                idle_power.sample(&mut rng)
            };
            let flip = if busy {
                model.p_busy_to_idle
            } else {
                model.p_idle_to_busy
            };
            if rng.random::<f64>() < flip {
                busy = !busy;
            }
        }
        states.push(OccupancySeries {
            channel_id: ch,
            bits,
        });
    }
    let sweeps = powers
        .into_iter()
        .enumerate()
        .map(|(sweep_index, powers)| PowerSweep {
            sweep_index,
            slot_duration_s,
            powers,
        })
        .collect();
    Ok((sweeps, states))
}
