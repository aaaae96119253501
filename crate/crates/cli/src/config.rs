//! Run configuration: defaults, `key = value` files and flag overrides.
//!
//! Keys are the long flag names without the leading dashes. The same text
//! format is written back out as `run_config`, so any output directory can
//! be replayed with `--config`.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use holepred::data::{ChannelModel, SplitMode};
use holepred::ga::{CrossoverKind, MutationKind};
use holepred::pipeline::TrainerKind;
use holepred::{NetworkTopology, PipelineConfig};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub order: usize,
    pub hidden: Vec<usize>,
    pub trainer: TrainerKind,
    pub eta: f64,
    pub theta: f64,
    pub mu0: f64,
    pub beta: f64,
    pub mu_max: f64,
    pub max_iter: usize,
    pub pop_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub crossover: CrossoverKind,
    pub mutation: MutationKind,
    pub mutation_sigma: f64,
    pub elitism: usize,
    pub fitness_patterns: Option<usize>,
    pub threshold_dbm: Option<f64>,
    pub split: f64,
    pub split_mode: SplitMode,
    pub band: Option<String>,
    pub channel: Vec<usize>,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    // generate
    pub channels: Option<usize>,
    pub sweeps: usize,
    pub slot_duration: f64,
    pub p_idle_to_busy: f64,
    pub p_busy_to_idle: f64,
    pub busy_power: f64,
    pub busy_sigma: f64,
    pub noise_floor: f64,
    pub noise_sigma: f64,
    // evaluate
    pub model: Option<PathBuf>,
    pub side: Side,
    pub format: holepred::eval::ReportFormat,
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    Train,
    #[default]
    Test,
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "train" => Ok(Self::Train),
            "test" => Ok(Self::Test),
            other => Err(format!("expected train or test, found {other:?}")),
        }
    }
}

impl Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Train => "train",
            Self::Test => "test",
        })
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        let pipeline = PipelineConfig::default();
        let model = ChannelModel::default();
        Self {
            seed: 0,
            order: pipeline.topology.order,
            hidden: pipeline.topology.hidden_sizes.clone(),
            trainer: pipeline.trainer,
            eta: pipeline.gd.eta,
            theta: pipeline.lm.theta,
            mu0: pipeline.lm.mu0,
            beta: pipeline.lm.beta,
            mu_max: pipeline.lm.mu_max,
            max_iter: pipeline.lm.max_iterations,
            pop_size: pipeline.ga.population_size,
            generations: pipeline.ga.generations,
            crossover_prob: pipeline.ga.crossover_prob,
            mutation_prob: pipeline.ga.mutation_prob,
            crossover: pipeline.ga.crossover_kind,
            mutation: pipeline.ga.mutation_kind,
            mutation_sigma: pipeline.ga.gaussian_sigma,
            elitism: pipeline.ga.elitism,
            fitness_patterns: pipeline.ga.fitness_patterns,
            threshold_dbm: None,
            split: pipeline.split_fraction,
            split_mode: pipeline.split_mode,
            band: None,
            channel: vec![0],
            input: None,
            out: None,
            channels: None,
            sweeps: 2700,
            slot_duration: holepred::data::DEFAULT_SLOT_DURATION_S,
            p_idle_to_busy: model.p_idle_to_busy,
            p_busy_to_idle: model.p_busy_to_idle,
            busy_power: model.busy_power_mean,
            busy_sigma: model.busy_power_sigma,
            noise_floor: model.noise_floor_mean,
            noise_sigma: model.noise_floor_sigma,
            model: None,
            side: Side::default(),
            format: Default::default(),
            trace: false,
        }
    }
}

/// Keys echoed by `generate`.
pub const GENERATE_KEYS: &[&str] = &[
    "seed",
    "band",
    "channels",
    "sweeps",
    "slot-duration",
    "p-idle-to-busy",
    "p-busy-to-idle",
    "busy-power",
    "busy-sigma",
    "noise-floor",
    "noise-sigma",
    "out",
];

/// Keys echoed by `train`; `evaluate` reads them back.
pub const TRAIN_KEYS: &[&str] = &[
    "seed",
    "in",
    "band",
    "channel",
    "threshold-dbm",
    "order",
    "hidden",
    "trainer",
    "eta",
    "theta",
    "mu0",
    "beta",
    "mu-max",
    "max-iter",
    "pop-size",
    "generations",
    "crossover-prob",
    "mutation-prob",
    "crossover",
    "mutation",
    "mutation-sigma",
    "elitism",
    "fitness-patterns",
    "split",
    "split-mode",
    "out",
];

/// Extra keys echoed by `evaluate`.
pub const EVALUATE_KEYS: &[&str] = &["model", "side", "format", "trace"];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("invalid value {value:?} for {key}: {e}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>, CliError> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse(key, v.trim())).collect()
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let k = key.as_str();
        match k {
            "seed" => self.seed = parse(k, value)?,
            "order" => self.order = parse(k, value)?,
            "hidden" => self.hidden = parse_list(k, value)?,
            "trainer" => self.trainer = parse(k, value)?,
            "eta" => self.eta = parse(k, value)?,
            "theta" => self.theta = parse(k, value)?,
            "mu0" => self.mu0 = parse(k, value)?,
            "beta" => self.beta = parse(k, value)?,
            "mu-max" => self.mu_max = parse(k, value)?,
            "max-iter" => self.max_iter = parse(k, value)?,
            "pop-size" => self.pop_size = parse(k, value)?,
            "generations" => self.generations = parse(k, value)?,
            "crossover-prob" => self.crossover_prob = parse(k, value)?,
            "mutation-prob" => self.mutation_prob = parse(k, value)?,
            "crossover" => self.crossover = parse(k, value)?,
            "mutation" => self.mutation = parse(k, value)?,
            "mutation-sigma" => self.mutation_sigma = parse(k, value)?,
            "elitism" => self.elitism = parse(k, value)?,
            "fitness-patterns" => {
                self.fitness_patterns = if value == "all" {
                    None
                } else {
                    Some(parse(k, value)?)
                }
            }
            "threshold-dbm" => self.threshold_dbm = Some(parse(k, value)?),
            "split" => self.split = parse(k, value)?,
            "split-mode" => self.split_mode = parse(k, value)?,
            "band" => self.band = Some(value.to_string()),
            "channel" => self.channel = parse_list(k, value)?,
            "in" => self.input = Some(PathBuf::from(value)),
            "out" => self.out = Some(PathBuf::from(value)),
            "channels" => self.channels = Some(parse(k, value)?),
            "sweeps" => self.sweeps = parse(k, value)?,
            "slot-duration" => self.slot_duration = parse(k, value)?,
            "p-idle-to-busy" => self.p_idle_to_busy = parse(k, value)?,
            "p-busy-to-idle" => self.p_busy_to_idle = parse(k, value)?,
            "busy-power" => self.busy_power = parse(k, value)?,
            "busy-sigma" => self.busy_sigma = parse(k, value)?,
            "noise-floor" => self.noise_floor = parse(k, value)?,
            "noise-sigma" => self.noise_sigma = parse(k, value)?,
            "model" => self.model = Some(PathBuf::from(value)),
            "side" => self.side = parse(k, value)?,
            "format" => self.format = parse(k, value)?,
            "trace" => self.trace = parse(k, value)?,
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Textual value of one key; `None` for unset optional keys.
    pub fn get(&self, key: &str) -> Option<String> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        Some(match key {
            "seed" => self.seed.to_string(),
            "order" => self.order.to_string(),
            "hidden" => join(&self.hidden),
            "trainer" => self.trainer.to_string(),
            "eta" => self.eta.to_string(),
            "theta" => self.theta.to_string(),
            "mu0" => self.mu0.to_string(),
            "beta" => self.beta.to_string(),
            "mu-max" => self.mu_max.to_string(),
            "max-iter" => self.max_iter.to_string(),
            "pop-size" => self.pop_size.to_string(),
            "generations" => self.generations.to_string(),
            "crossover-prob" => self.crossover_prob.to_string(),
            "mutation-prob" => self.mutation_prob.to_string(),
            "crossover" => self.crossover.to_string(),
            "mutation" => self.mutation.to_string(),
            "mutation-sigma" => self.mutation_sigma.to_string(),
            "elitism" => self.elitism.to_string(),
            "fitness-patterns" => self
                .fitness_patterns
                .map_or("all".into(), |n| n.to_string()),
            "threshold-dbm" => self.threshold_dbm?.to_string(),
            "split" => self.split.to_string(),
            "split-mode" => self.split_mode.to_string(),
            "band" => self.band.clone()?,
            "channel" => join(&self.channel),
            "in" => path(&self.input)?,
            "out" => path(&self.out)?,
            "channels" => self.channels?.to_string(),
            "sweeps" => self.sweeps.to_string(),
            "slot-duration" => self.slot_duration.to_string(),
            "p-idle-to-busy" => self.p_idle_to_busy.to_string(),
            "p-busy-to-idle" => self.p_busy_to_idle.to_string(),
            "busy-power" => self.busy_power.to_string(),
            "busy-sigma" => self.busy_sigma.to_string(),
            "noise-floor" => self.noise_floor.to_string(),
            "noise-sigma" => self.noise_sigma.to_string(),
            "model" => path(&self.model)?,
            "side" => self.side.to_string(),
            "format" => self.format.to_string(),
            "trace" => self.trace.to_string(),
            _ => return None,
        })
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str, source: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("{source}:{}: expected `key = value`", n + 1))
            })?;
            self.set(key, value)
                .map_err(|e| CliError::Usage(format!("{source}:{}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| holepred::Error::io(path, e))?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Applies flag overrides, which win over any config file.
    pub fn apply_overrides(&mut self, overrides: &[(&str, String)]) -> Result<(), CliError> {
        for (key, value) in overrides {
            self.set(key, value)?;
        }
        Ok(())
    }

    /// `key = value` lines for `keys`, skipping unset optional values.
    pub fn to_text(&self, keys: &[&str]) -> String {
        keys.iter()
            .filter_map(|k| self.get(k).map(|v| format!("{k} = {v}\n")))
            .collect()
    }

    pub fn topology(&self) -> Result<NetworkTopology, CliError> {
        Ok(NetworkTopology::new(self.order, self.hidden.clone(), 1)?)
    }

    pub fn pipeline(&self) -> Result<PipelineConfig, CliError> {
        let mut p = PipelineConfig {
            seed: self.seed,
            topology: self.topology()?,
            trainer: self.trainer,
            split_fraction: self.split,
            split_mode: self.split_mode,
            ..PipelineConfig::default()
        };
        p.gd.eta = self.eta;
        p.gd.theta = self.theta;
        p.gd.max_epochs = self.max_iter;
        p.lm.mu0 = self.mu0;
        p.lm.beta = self.beta;
        p.lm.mu_max = self.mu_max;
        p.lm.theta = self.theta;
        p.lm.max_iterations = self.max_iter;
        p.ga.population_size = self.pop_size;
        p.ga.generations = self.generations;
        p.ga.crossover_prob = self.crossover_prob;
        p.ga.mutation_prob = self.mutation_prob;
        p.ga.crossover_kind = self.crossover;
        p.ga.mutation_kind = self.mutation;
        p.ga.gaussian_sigma = self.mutation_sigma;
        p.ga.elitism = self.elitism;
        p.ga.fitness_patterns = self.fitness_patterns;
        p.gd.validate()?;
        p.lm.validate()?;
        p.ga.validate()?;
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(CliError::Usage(format!(
                "--split {} is outside (0, 1)",
                self.split
            )));
        }
        Ok(p)
    }

    pub fn channel_model(&self) -> Result<ChannelModel, CliError> {
        let model = ChannelModel {
            p_idle_to_busy: self.p_idle_to_busy,
            p_busy_to_idle: self.p_busy_to_idle,
            busy_power_mean: self.busy_power,
            busy_power_sigma: self.busy_sigma,
            noise_floor_mean: self.noise_floor,
            noise_floor_sigma: self.noise_sigma,
        };
        model.validate()?;
        Ok(model)
    }
}
