//! Binary occupancy series, sliding-window datasets and train/test splits.

use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::train::TrainingPattern;

use super::PowerSweep;

/// Busy (1) / idle (0) state of one channel per time slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancySeries {
    pub channel_id: usize,
    pub bits: Vec<u8>,
}

impl OccupancySeries {
    pub fn new(channel_id: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::invalid("occupancy series", "bits must be 0 or 1"));
        }
        Ok(Self { channel_id, bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Fraction of busy slots.
    pub fn duty_cycle(&self) -> f64 {
        if self.bits.is_empty() {
            return 0.0;
        }
        self.bits.iter().map(|&b| f64::from(b)).sum::<f64>() / self.bits.len() as f64
    }
}

/// Thresholds one channel: a slot is busy iff its power is at least `threshold_dbm`.
pub fn binarize(
    sweeps: &[PowerSweep],
    channel: usize,
    threshold_dbm: f64,
) -> Result<OccupancySeries> {
    let mut bits = Vec::with_capacity(sweeps.len());
    for s in sweeps {
        let power = *s
            .powers
            .get(channel)
            .ok_or_else(|| Error::shape("channel index", s.powers.len(), channel))?;
        bits.push(u8::from(power >= threshold_dbm));
    }
    Ok(OccupancySeries {
        channel_id: channel,
        bits,
    })
}

/// Maps an occupancy bit to the bipolar network encoding (0 → -1, 1 → +1).
pub fn bipolar<T: Scalar>(bit: u8) -> T {
    if bit == 0 {
        -T::one()
    } else {
        T::one()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    pub channel: usize,
    pub threshold_dbm: Option<f64>,
    pub source: String,
}

/// Next-slot prediction patterns cut from one occupancy series.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedDataset<T> {
    pub order: usize,
    pub patterns: Vec<TrainingPattern<T>>,
    /// Series slot of each pattern's target; its inputs are the `order`
    /// slots immediately before it.
    pub target_slots: Vec<usize>,
    pub provenance: Provenance,
}

impl<T: Scalar> WindowedDataset<T> {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    fn subset(&self, indices: &[usize]) -> Self {
        Self {
            order: self.order,
            patterns: indices.iter().map(|&i| self.patterns[i].clone()).collect(),
            target_slots: indices.iter().map(|&i| self.target_slots[i]).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Copy with every target bit flipped.
    pub fn with_flipped_targets(&self) -> Self {
        let mut out = self.clone();
        for p in &mut out.patterns {
            for t in &mut p.target {
                *t = -*t;
            }
        }
        out
    }
}

/// Sliding windows of length `order`; pattern `i` predicts slot `i + order`.
pub fn window<T: Scalar>(series: &OccupancySeries, order: usize) -> Result<WindowedDataset<T>> {
    if order == 0 {
        return Err(Error::invalid("window order", "must be at least 1"));
    }
    if series.len() <= order {
        return Err(Error::invalid(
            "occupancy series",
            format!("length {} is too short for order {order}", series.len()),
        ));
    }
    let patterns = series
        .bits
        .windows(order + 1)
        .map(|w| TrainingPattern {
            input: w[..order].iter().map(|&b| bipolar(b)).collect(),
            target: vec![bipolar(w[order])],
        })
        .collect();
    Ok(WindowedDataset {
        order,
        patterns,
        target_slots: (order..series.len()).collect(),
        provenance: Provenance {
            channel: series.channel_id,
            ..Provenance::default()
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitMode {
    /// Earliest patterns train, the rest test.
    #[default]
    Chronological,
    /// Random membership; each side stays in slot order.
    Shuffled,
}

impl std::str::FromStr for SplitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chrono" | "chronological" => Ok(Self::Chronological),
            "shuffle" | "shuffled" => Ok(Self::Shuffled),
            other => Err(Error::invalid("split mode", other.to_string())),
        }
    }
}

impl std::fmt::Display for SplitMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Chronological => "chrono",
            Self::Shuffled => "shuffle",
        })
    }
}

/// Splits into `(train, test)` with `round(train_fraction * len)` training patterns.
pub fn split<T: Scalar, R: Rng + ?Sized>(
    dataset: &WindowedDataset<T>,
    train_fraction: f64,
    mode: SplitMode,
    rng: &mut R,
) -> Result<(WindowedDataset<T>, WindowedDataset<T>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(
            "split fraction",
            format!("{train_fraction} is outside (0, 1)"),
        ));
    }
    let n = dataset.len();
    let n_train = (train_fraction * n as f64).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::invalid(
            "split fraction",
            format!("{train_fraction} of {n} patterns leaves one side empty"),
        ));
    }
    let mut indices: Vec<usize> = (0..n).collect();
    if mode == SplitMode::Shuffled {
        indices.shuffle(rng);
    }
    let (train, test) = indices.split_at_mut(n_train);
    train.sort_unstable();
    test.sort_unstable();
    Ok((dataset.subset(train), dataset.subset(test)))
}

/// Writes series side by side: header `slot,ch_<id>,...`.
pub fn write_occupancy<W: Write>(mut out: W, series: &[OccupancySeries]) -> Result<()> {
    let len = series.first().map_or(0, OccupancySeries::len);
    if let Some(bad) = series.iter().find(|s| s.len() != len) {
        return Err(Error::shape("occupancy series length", len, bad.len()));
    }
    let mut text = String::from("slot");
    for s in series {
        text.push_str(&format!(",ch_{}", s.channel_id));
    }
    text.push('\n');
    for slot in 0..len {
        text.push_str(&slot.to_string());
        for s in series {
            text.push_str(if s.bits[slot] == 1 { ",1" } else { ",0" });
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<occupancy output>", e))
}

/// Reads either the wide form (`slot,ch_0,...`) or the single-channel
/// form (`slot,bit`, read as channel 0).
pub fn read_occupancy<R: Read>(reader: R, source: &str) -> Result<Vec<OccupancySeries>> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = csv
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.len() < 2 || &header[0] != "slot" {
        return Err(parse_err(1, "header must start with slot".into()));
    }
    let ids: Vec<usize> = if header.len() == 2 && &header[1] == "bit" {
        vec![0]
    } else {
        header
            .iter()
            .skip(1)
            .map(|name| {
                name.strip_prefix("ch_")
                    .and_then(|id| id.parse().ok())
                    .ok_or_else(|| parse_err(1, format!("bad channel column {name:?}")))
            })
            .collect::<Result<_>>()?
    };
    let mut series: Vec<OccupancySeries> = ids
        .iter()
        .map(|&channel_id| OccupancySeries {
            channel_id,
            bits: Vec::new(),
        })
        .collect();
    for (expected, record) in csv.records().enumerate() {
        let record =
            record.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record[0].parse::<usize>().ok() != Some(expected) {
            return Err(parse_err(
                line,
                format!("expected slot {expected}, found {:?}", &record[0]),
            ));
        }
        for (s, field) in series.iter_mut().zip(record.iter().skip(1)) {
            let bit = match field {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(parse_err(
                        line,
                        format!("occupancy bit must be 0 or 1, found {other:?}"),
                    ))
                }
            };
            s.bits.push(bit);
        }
    }
    Ok(series)
}

pub fn load_occupancy(path: &Path) -> Result<Vec<OccupancySeries>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_occupancy(file, &path.display().to_string())
}
