//! End-to-end training on a windowed dataset, shared by the CLI and the
//! acceptance tests.

use std::fmt;
use std::str::FromStr;

use crate::data::{split, window, OccupancySeries, SplitMode, WindowedDataset};
use crate::error::{Error, Result};
use crate::ga::{ga_lm_train, GaConfig, GaLog};
use crate::net::{NetworkTopology, NetworkWeights};
use crate::rng::component_rng;
use crate::scalar::Scalar;
use crate::train::{train_gd, train_lm, GdConfig, LmConfig, Termination, TrainLog};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrainerKind {
    Gd,
    Lm,
    #[default]
    GaLm,
}

impl FromStr for TrainerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gd" => Ok(Self::Gd),
            "lm" => Ok(Self::Lm),
            "ga+lm" => Ok(Self::GaLm),
            other => Err(Error::invalid(
                "trainer",
                format!("{other:?} (expected gd, lm or ga+lm)"),
            )),
        }
    }
}

impl fmt::Display for TrainerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gd => "gd",
            Self::Lm => "lm",
            Self::GaLm => "ga+lm",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig<T> {
    pub seed: u64,
    pub topology: NetworkTopology,
    pub trainer: TrainerKind,
    /// Uniform range for random initialization (gd and lm trainers).
    pub init_range: (T, T),
    pub gd: GdConfig<T>,
    pub lm: LmConfig<T>,
    pub ga: GaConfig<T>,
    pub split_fraction: f64,
    pub split_mode: SplitMode,
}

impl<T: Scalar> Default for PipelineConfig<T> {
    fn default() -> Self {
        Self {
            seed: 0,
            topology: NetworkTopology::default(),
            trainer: TrainerKind::default(),
            init_range: (-T::one(), T::one()),
            gd: GdConfig::default(),
            lm: LmConfig::default(),
            ga: GaConfig::default(),
            split_fraction: 0.5,
            split_mode: SplitMode::Chronological,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainedModel<T> {
    pub weights: NetworkWeights<T>,
    pub termination: Termination,
    /// Summed error over the training patterns.
    pub final_error: T,
    pub ga_log: Option<GaLog>,
    pub train_log: TrainLog,
}

/// Windows `series` with the topology's order and splits it using the
/// `"split"` stream of the master seed.
pub fn prepare<T: Scalar>(
    series: &OccupancySeries,
    config: &PipelineConfig<T>,
) -> Result<(WindowedDataset<T>, WindowedDataset<T>)> {
    let dataset = window(series, config.topology.order)?;
    let mut rng = component_rng(config.seed, "split");
    split(&dataset, config.split_fraction, config.split_mode, &mut rng)
}

/// Trains a fresh network on `train` with the configured trainer.
pub fn train_model<T: Scalar>(
    train: &WindowedDataset<T>,
    config: &PipelineConfig<T>,
) -> Result<TrainedModel<T>> {
    let topology = &config.topology;
    let patterns = &train.patterns;
    let (lo, hi) = config.init_range;
    match config.trainer {
        TrainerKind::Gd => {
            let init = NetworkWeights::init_random(
                topology,
                lo,
                hi,
                &mut component_rng(config.seed, "init"),
            )?;
            let out = train_gd(
                init,
                patterns,
                &config.gd,
                &mut component_rng(config.seed, "gd"),
            )?;
            Ok(TrainedModel {
                weights: out.weights,
                termination: out.termination,
                final_error: out.final_error,
                ga_log: None,
                train_log: out.log,
            })
        }
        TrainerKind::Lm => {
            let init = NetworkWeights::init_random(
                topology,
                lo,
                hi,
                &mut component_rng(config.seed, "init"),
            )?;
            let out = train_lm(init, patterns, &config.lm)?;
            Ok(TrainedModel {
                weights: out.weights,
                termination: out.termination,
                final_error: out.final_error,
                ga_log: None,
                train_log: out.log,
            })
        }
        TrainerKind::GaLm => {
            let out = ga_lm_train(
                topology,
                patterns,
                &config.ga,
                &config.lm,
                &mut component_rng(config.seed, "ga"),
            )?;
            Ok(TrainedModel {
                weights: out.weights,
                termination: out.termination,
                final_error: out.final_error,
                ga_log: Some(out.ga_log),
                train_log: out.lm_log,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trainer_names() {
        for t in [TrainerKind::Gd, TrainerKind::Lm, TrainerKind::GaLm] {
            assert_eq!(t.to_string().parse::<TrainerKind>().unwrap(), t);
        }
        assert!("sgd".parse::<TrainerKind>().is_err());
    }

    #[test]
    fn lm_with_zero_iterations_returns_initialization() {
        let bits: Vec<u8> = (0..60).map(|i| ((i / 3) % 2) as u8).collect();
        let series = OccupancySeries::new(0, bits).unwrap();
        let mut config = PipelineConfig::<f64> {
            trainer: TrainerKind::Lm,
            topology: NetworkTopology::new(4, vec![3], 1).unwrap(),
            ..PipelineConfig::default()
        };
        config.lm.max_iterations = 0;
        let (train, _) = prepare(&series, &config).unwrap();
        let model = train_model(&train, &config).unwrap();
        let init =
            NetworkWeights::init_random(&config.topology, -1.0, 1.0, &mut component_rng(0, "init"))
                .unwrap();
        assert_eq!(model.weights, init);
    }
}
