use std::ffi::OsString;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use holepred::data::{bayes_floor, BandDefinition, ChannelModel, OccupancySeries};
use holepred::data::{
    binarize, load_occupancy, load_sweeps, preset, presets, save_sweeps, synth_generate,
};
use holepred::eval::{band_means, emit_report, evaluate as evaluate_dataset};
use holepred::pipeline::{prepare, train_model};
use holepred::rng::sub_seed;
use holepred::{Error, Network, Termination};

use crate::config::{RunConfig, Side, EVALUATE_KEYS, GENERATE_KEYS, TRAIN_KEYS};
use crate::{BandsArgs, CliError, EvaluateArgs, GenerateArgs, TrainArgs};

/// Collects `Some` flag values as `(key, text)` overrides.
macro_rules! overrides {
    ($($key:literal => $value:expr),* $(,)?) => {{
        let mut out: Vec<(&str, String)> = Vec::new();
        $(if let Some(v) = &$value {
            out.push(($key, v.to_string()));
        })*
        out
    }};
}

fn sidecar_path(sweeps: &Path) -> PathBuf {
    let mut s: OsString = sweeps.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Core(Error::io(path, e)))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|e| CliError::Core(Error::io(path, e)))
}

fn require_band(name: &str) -> Result<BandDefinition, CliError> {
    preset(name).ok_or_else(|| {
        let known: Vec<String> = presets().into_iter().map(|b| b.service).collect();
        CliError::Usage(format!(
            "unknown band {name:?}; known bands: {}",
            known.join(", ")
        ))
    })
}

pub fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_overrides(&overrides! {
        "seed" => args.seed,
        "band" => args.band,
        "channels" => args.channels,
        "sweeps" => args.sweeps,
        "slot-duration" => args.slot_duration,
        "p-idle-to-busy" => args.p_idle_to_busy,
        "p-busy-to-idle" => args.p_busy_to_idle,
        "busy-power" => args.busy_power,
        "busy-sigma" => args.busy_sigma,
        "noise-floor" => args.noise_floor,
        "noise-sigma" => args.noise_sigma,
        "out" => args.out.as_ref().map(|p| p.display()),
    })?;

    let channels = match (&cfg.band, cfg.channels) {
        (Some(name), requested) => {
            let count = require_band(name)?.channel_count();
            if requested.is_some_and(|c| c != count) {
                return Err(CliError::Usage(format!(
                    "--channels conflicts with band {name} ({count} channels)"
                )));
            }
            count
        }
        (None, requested) => requested.unwrap_or(1),
    };
    cfg.channels = Some(channels);
    if channels == 0 {
        return Err(CliError::Usage("--channels must be at least 1".into()));
    }
    if cfg.sweeps == 0 {
        return Err(CliError::Usage("--sweeps must be at least 1".into()));
    }
    if !(cfg.slot_duration > 0.0 && cfg.slot_duration.is_finite()) {
        return Err(CliError::Usage("--slot-duration must be positive".into()));
    }
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Usage("--out is required".into()))?;
    let model = cfg.channel_model()?;

    let sweeps = synth_generate(
        &model,
        channels,
        cfg.sweeps,
        cfg.slot_duration,
        sub_seed(cfg.seed, "generate"),
    )?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    save_sweeps(&out, &sweeps, channels)?;
    let floor = bayes_floor(&model);
    let meta = serde_json::json!({
        "channel_model": model,
        "bayes_floor": floor,
        "run_config": cfg.to_text(GENERATE_KEYS),
    });
    let mut text = serde_json::to_string_pretty(&meta).map_err(Error::from)?;
    text.push('\n');
    write(&sidecar_path(&out), &text)?;

    println!(
        "wrote {} sweeps x {channels} channels to {}",
        cfg.sweeps,
        out.display()
    );
    println!("threshold_midpoint_dbm = {}", model.midpoint_threshold());
    println!("bayes_floor = {floor}");
    Ok(())
}

pub fn bands(args: &BandsArgs) -> Result<(), CliError> {
    let all = presets();
    let text = if args.format == "json" {
        let rows: Vec<serde_json::Value> = all
            .iter()
            .map(|b| {
                serde_json::json!({
                    "service": b.service,
                    "freq_lo_mhz": b.freq_lo_mhz,
                    "freq_hi_mhz": b.freq_hi_mhz,
                    "channel_width_khz": b.channel_width_khz,
                    "channels": b.channel_count(),
                })
            })
            .collect();
        serde_json::to_string_pretty(&rows).map_err(Error::from)? + "\n"
    } else {
        let mut text = String::from("service,freq_lo_mhz,freq_hi_mhz,channel_width_khz,channels\n");
        for b in &all {
            text += &format!(
                "{},{},{},{},{}\n",
                b.service,
                b.freq_lo_mhz,
                b.freq_hi_mhz,
                b.channel_width_khz,
                b.channel_count()
            );
        }
        text
    };
    // A closed pipe (`holepred bands | head`) is not an error.
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Error::io("<stdout>", e).into())
        }
        _ => Ok(()),
    }
}

enum InputKind {
    Sweeps,
    Occupancy,
}

fn input_kind(path: &Path) -> Result<InputKind, CliError> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut header = String::new();
    BufReader::new(file)
        .read_line(&mut header)
        .map_err(|e| Error::io(path, e))?;
    let first = header.split(',').next().unwrap_or("").trim();
    match first {
        "sweep_index" => Ok(InputKind::Sweeps),
        "slot" => Ok(InputKind::Occupancy),
        _ => Err(CliError::Core(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "expected a sweep header (sweep_index,...) or an occupancy header (slot,...)"
                .into(),
        })),
    }
}

/// Threshold stored by `generate` next to a synthetic sweep file.
fn sidecar_threshold(sweeps: &Path) -> Result<Option<f64>, CliError> {
    let path = sidecar_path(sweeps);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let meta: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    let model: ChannelModel =
        serde_json::from_value(meta["channel_model"].clone()).map_err(Error::from)?;
    Ok(Some(model.midpoint_threshold()))
}

/// Loads one channel's occupancy series; fills in the threshold used.
fn load_series(
    cfg: &mut RunConfig,
    path: &Path,
    channel: usize,
) -> Result<OccupancySeries, CliError> {
    match input_kind(path)? {
        InputKind::Sweeps => {
            let band = cfg.band.as_deref().map(require_band).transpose()?;
            let sweeps = load_sweeps(path, band.as_ref())?;
            let channels = sweeps.first().map_or(0, |s| s.powers.len());
            if sweeps.is_empty() {
                return Err(CliError::Core(Error::Parse {
                    path: path.display().to_string(),
                    line: 1,
                    message: "no sweeps".into(),
                }));
            }
            if channel >= channels {
                return Err(CliError::Usage(format!(
                    "--channel {channel} but the file has {channels} channels"
                )));
            }
            let threshold = match cfg.threshold_dbm {
                Some(t) => t,
                None => sidecar_threshold(path)?.ok_or_else(|| {
                    CliError::Usage("--threshold-dbm is required for measured sweep data".into())
                })?,
            };
            cfg.threshold_dbm = Some(threshold);
            Ok(binarize(&sweeps, channel, threshold)?)
        }
        InputKind::Occupancy => load_occupancy(path)?
            .into_iter()
            .find(|s| s.channel_id == channel)
            .ok_or_else(|| {
                CliError::Usage(format!("channel {channel} is not in {}", path.display()))
            }),
    }
}

fn single_channel(cfg: &RunConfig) -> Result<usize, CliError> {
    match cfg.channel.as_slice() {
        [c] => Ok(*c),
        _ => Err(CliError::Usage("train takes exactly one --channel".into())),
    }
}

pub fn train(args: &TrainArgs) -> Result<(), CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_overrides(&overrides! {
        "seed" => args.seed,
        "in" => args.input.as_ref().map(|p| p.display()),
        "out" => args.out.as_ref().map(|p| p.display()),
        "band" => args.band,
        "channel" => args.channel,
        "threshold-dbm" => args.threshold_dbm,
        "order" => args.order,
        "hidden" => args.hidden,
        "trainer" => args.trainer,
        "eta" => args.eta,
        "theta" => args.theta,
        "mu0" => args.mu0,
        "beta" => args.beta,
        "mu-max" => args.mu_max,
        "max-iter" => args.max_iter,
        "pop-size" => args.pop_size,
        "generations" => args.generations,
        "crossover-prob" => args.crossover_prob,
        "mutation-prob" => args.mutation_prob,
        "crossover" => args.crossover,
        "mutation" => args.mutation,
        "mutation-sigma" => args.mutation_sigma,
        "elitism" => args.elitism,
        "fitness-patterns" => args.fitness_patterns,
        "split" => args.split,
        "split-mode" => args.split_mode,
    })?;
    let input = cfg
        .input
        .clone()
        .ok_or_else(|| CliError::Usage("--in is required".into()))?;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Usage("--out is required".into()))?;
    let pipeline = cfg.pipeline()?;
    let channel = single_channel(&cfg)?;

    let series = load_series(&mut cfg, &input, channel)?;
    let (train_set, test_set) = prepare(&series, &pipeline)?;
    let model = train_model(&train_set, &pipeline)?;

    create_dir(&out)?;
    model.weights.save(&out.join("model.json"))?;
    write(&out.join("train_log.csv"), &model.train_log.to_csv())?;
    if let Some(log) = &model.ga_log {
        write(&out.join("ga_log.csv"), &log.to_csv())?;
    }
    write(&out.join("run_config"), &cfg.to_text(TRAIN_KEYS))?;

    let patterns = train_set.len();
    println!("trainer = {}", pipeline.trainer);
    println!("train_patterns = {patterns}");
    println!("test_patterns = {}", test_set.len());
    println!("termination = {}", model.termination);
    println!("final_error = {}", model.final_error);
    println!(
        "final_error_per_pattern = {}",
        model.final_error / patterns as f64
    );
    println!("wrote {}", out.display());
    if model.termination == Termination::Diverged {
        return Err(CliError::Diverged(format!(
            "training diverged; kept the last finite weights (error {}). Try a smaller --eta",
            model.final_error
        )));
    }
    Ok(())
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let weights = Network::load(&args.model)?;
    let dir = args
        .model
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut cfg = RunConfig::default();
    cfg.apply_file(&dir.join("run_config"))?;
    cfg.apply_overrides(&overrides! {
        "in" => args.input.as_ref().map(|p| p.display()),
        "band" => args.band,
        "channel" => args.channel,
        "threshold-dbm" => args.threshold_dbm,
        "order" => args.order,
    })?;
    cfg.apply_overrides(&[
        ("side", args.side.clone()),
        ("format", args.format.clone()),
        ("trace", args.trace.to_string()),
        ("model", args.model.display().to_string()),
        ("out", args.out.display().to_string()),
    ])?;
    let input = cfg
        .input
        .clone()
        .ok_or_else(|| CliError::Usage("no --in given and none recorded".into()))?;
    if cfg.order != weights.topology().order {
        return Err(CliError::Core(Error::shape(
            "window order vs model order",
            weights.topology().order,
            cfg.order,
        )));
    }
    let pipeline = cfg.pipeline()?;
    let label = cfg.band.clone().unwrap_or_else(|| {
        input
            .file_stem()
            .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned())
    });
    if cfg.channel.is_empty() {
        return Err(CliError::Usage("--channel lists no channels".into()));
    }

    let mut reports = Vec::new();
    for &channel in &cfg.channel.clone() {
        let series = load_series(&mut cfg, &input, channel)?;
        let (train_set, test_set) = prepare(&series, &pipeline)?;
        let side = match cfg.side {
            Side::Train => &train_set,
            Side::Test => &test_set,
        };
        reports.push(evaluate_dataset(&weights, side, &label, cfg.trace)?);
    }

    emit_report(&reports, &args.out, cfg.format)?;
    let keys: Vec<&str> = TRAIN_KEYS.iter().chain(EVALUATE_KEYS).copied().collect();
    write(&args.out.join("run_config"), &cfg.to_text(&keys))?;

    for r in &reports {
        println!(
            "{} ch{} {}: error_rate = {} ({} patterns)",
            r.band, r.channel, cfg.side, r.error_rate, r.pattern_count
        );
    }
    for (band, mean) in band_means(&reports) {
        println!("{band} mean error_rate = {mean}");
    }
    Ok(())
}
