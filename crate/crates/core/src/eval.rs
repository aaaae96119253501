//! Next-slot prediction and per-channel error reports.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::WindowedDataset;
use crate::error::{Error, Result};
use crate::net::NetworkWeights;
use crate::scalar::Scalar;

/// Busy if the first output is non-negative, idle otherwise. A zero output
/// counts as busy.
pub fn predict<T: Scalar>(weights: &NetworkWeights<T>, input: &[T]) -> Result<u8> {
    let z = weights.output(input)?;
    Ok(u8::from(z[0] >= T::zero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_busy: usize,
    pub true_idle: usize,
    pub false_busy: usize,
    pub false_idle: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_busy + self.true_idle + self.false_busy + self.false_idle
    }

    pub fn errors(&self) -> usize {
        self.false_busy + self.false_idle
    }

    fn tally(&mut self, predicted: u8, actual: u8) {
        match (predicted, actual) {
            (1, 1) => self.true_busy += 1,
            (0, 0) => self.true_idle += 1,
            (1, _) => self.false_busy += 1,
            _ => self.false_idle += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoint {
    pub slot: usize,
    pub predicted: u8,
    pub actual: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub band: String,
    pub channel: usize,
    pub pattern_count: usize,
    /// `(false_busy + false_idle) / pattern_count`.
    pub error_rate: f64,
    pub counts: ConfusionCounts,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<TracePoint>>,
}

impl PredictionReport {
    /// `1 - error_rate`, the quantity plotted as prediction accuracy.
    pub fn accuracy(&self) -> f64 {
        1.0 - self.error_rate
    }
}

/// Predicts every pattern of `dataset` and tallies the outcomes.
pub fn evaluate<T: Scalar>(
    weights: &NetworkWeights<T>,
    dataset: &WindowedDataset<T>,
    band: &str,
    keep_trace: bool,
) -> Result<PredictionReport> {
    if dataset.is_empty() {
        return Err(Error::invalid("evaluation set", "no patterns"));
    }
    if dataset.order != weights.topology().order {
        return Err(Error::shape(
            "window order vs model order",
            weights.topology().order,
            dataset.order,
        ));
    }
    let mut counts = ConfusionCounts::default();
    let mut trace = keep_trace.then(|| Vec::with_capacity(dataset.len()));
    for (pattern, &slot) in dataset.patterns.iter().zip(&dataset.target_slots) {
        let predicted = predict(weights, &pattern.input)?;
        let actual = u8::from(pattern.target[0] > T::zero());
        counts.tally(predicted, actual);
        if let Some(t) = trace.as_mut() {
            t.push(TracePoint {
                slot,
                predicted,
                actual,
            });
        }
    }
    let pattern_count = dataset.len();
    Ok(PredictionReport {
        band: band.to_string(),
        channel: dataset.provenance.channel,
        pattern_count,
        error_rate: counts.errors() as f64 / pattern_count as f64,
        counts,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::invalid("report format", other.to_string())),
        }
    }
}

impl std::fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

pub const SUMMARY_CSV_HEADER: &str = "band,channel,patterns,error_rate,tb,ti,fb,fi";

/// Summary table, one row per report in input order.
pub fn summary_csv(reports: &[PredictionReport]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let c = &r.counts;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            csv_field(&r.band),
            r.channel,
            r.pattern_count,
            r.error_rate,
            c.true_busy,
            c.true_idle,
            c.false_busy,
            c.false_idle
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Mean error rate per band, bands in first-seen order.
pub fn band_means(reports: &[PredictionReport]) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64, usize)> = Vec::new();
    for r in reports {
        match out.iter_mut().find(|(b, _, _)| *b == r.band) {
            Some((_, sum, n)) => {
                *sum += r.error_rate;
                *n += 1;
            }
            None => out.push((r.band.clone(), r.error_rate, 1)),
        }
    }
    out.into_iter()
        .map(|(b, sum, n)| (b, sum / n as f64))
        .collect()
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    reports: Vec<JsonRow<'a>>,
    band_means: Vec<BandMean>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    band: &'a str,
    channel: usize,
    patterns: usize,
    error_rate: f64,
    tb: usize,
    ti: usize,
    fb: usize,
    fi: usize,
}

#[derive(Serialize)]
struct BandMean {
    band: String,
    mean_error_rate: f64,
}

pub fn summary_json(reports: &[PredictionReport]) -> Result<String> {
    let summary = JsonSummary {
        reports: reports
            .iter()
            .map(|r| JsonRow {
                band: &r.band,
                channel: r.channel,
                patterns: r.pattern_count,
                error_rate: r.error_rate,
                tb: r.counts.true_busy,
                ti: r.counts.true_idle,
                fb: r.counts.false_busy,
                fi: r.counts.false_idle,
            })
            .collect(),
        band_means: band_means(reports)
            .into_iter()
            .map(|(band, mean_error_rate)| BandMean {
                band,
                mean_error_rate,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    Ok(text)
}

/// Per-slot trace CSV: `slot,predicted,actual`.
pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("slot,predicted,actual\n");
    for p in trace {
        out.push_str(&format!("{},{},{}\n", p.slot, p.predicted, p.actual));
    }
    out
}

/// File name used for a report's trace.
pub fn trace_file_name(report: &PredictionReport) -> String {
    let band: String = report
        .band
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    format!("trace_{band}_ch{}.csv", report.channel)
}

/// Writes `summary.csv` or `summary.json` into `dir`, plus one trace file
/// per report that carries a trace. Returns the written paths.
pub fn emit_report(
    reports: &[PredictionReport],
    dir: &Path,
    format: ReportFormat,
) -> Result<Vec<PathBuf>> {
    if reports.is_empty() {
        return Err(Error::invalid("reports", "nothing to emit"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let (name, body) = match format {
        ReportFormat::Csv => ("summary.csv", summary_csv(reports)),
        ReportFormat::Json => ("summary.json", summary_json(reports)?),
    };
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    for r in reports {
        if let Some(trace) = &r.trace {
            let path = dir.join(trace_file_name(r));
            std::fs::write(&path, trace_csv(trace)).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
