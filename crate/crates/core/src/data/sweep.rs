//! Power-sweep CSV files.
//!
//! Layout: header `sweep_index,slot_duration_s,ch_0,...,ch_{N-1}`, then one
//! row per sweep with powers in decimal dBm.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::BandDefinition;

/// Revisit time of one full sweep, in seconds.
pub const DEFAULT_SLOT_DURATION_S: f64 = 16.0;

/// One pass of the analyzer over a band: a power reading per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSweep {
    pub sweep_index: usize,
    pub slot_duration_s: f64,
    /// dBm, one per channel.
    pub powers: Vec<f64>,
}

/// Reads a sweep file. When `band` is given the channel count must match it.
pub fn load_sweeps(path: &Path, band: Option<&BandDefinition>) -> Result<Vec<PowerSweep>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_sweeps(file, &path.display().to_string(), band)
}

pub fn read_sweeps<R: Read>(
    reader: R,
    source: &str,
    band: Option<&BandDefinition>,
) -> Result<Vec<PowerSweep>> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = csv
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.len() < 3 || &header[0] != "sweep_index" || &header[1] != "slot_duration_s" {
        return Err(parse_err(
            1,
            "header must start with sweep_index,slot_duration_s and list at least one channel"
                .into(),
        ));
    }
    let channels = header.len() - 2;
    for (i, name) in header.iter().skip(2).enumerate() {
        if name != format!("ch_{i}") {
            return Err(parse_err(
                1,
                format!("expected column ch_{i}, found {name:?}"),
            ));
        }
    }
    if let Some(band) = band {
        if band.channel_count() != channels {
            return Err(parse_err(
                1,
                format!(
                    "file has {channels} channels but band {} has {}",
                    band.service,
                    band.channel_count()
                ),
            ));
        }
    }

    let mut rows: Vec<(u64, PowerSweep)> = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != channels + 2 {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", channels + 2, record.len()),
            ));
        }
        let sweep_index: usize = record[0]
            .parse()
            .map_err(|_| parse_err(line, format!("bad sweep_index {:?}", &record[0])))?;
        let slot_duration_s = parse_finite(&record[1])
            .ok_or_else(|| parse_err(line, format!("bad slot_duration_s {:?}", &record[1])))?;
        let powers = record
            .iter()
            .skip(2)
            .enumerate()
            .map(|(ch, field)| {
                parse_finite(field).ok_or_else(|| {
                    parse_err(line, format!("non-numeric power {field:?} in ch_{ch}"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((
            line,
            PowerSweep {
                sweep_index,
                slot_duration_s,
                powers,
            },
        ));
    }
    rows.sort_by_key(|(_, s)| s.sweep_index);
    for (expected, (line, sweep)) in rows.iter().enumerate() {
        if sweep.sweep_index != expected {
            return Err(parse_err(
                *line,
                format!(
                    "sweep indices must be contiguous from 0: expected {expected}, found {}",
                    sweep.sweep_index
                ),
            ));
        }
    }
    Ok(rows.into_iter().map(|(_, s)| s).collect())
}

fn parse_finite(field: &str) -> Option<f64> {
    field.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Writes sweeps in the canonical layout; all sweeps must share one channel count.
pub fn write_sweeps<W: Write>(mut out: W, sweeps: &[PowerSweep], channels: usize) -> Result<()> {
    let mut text = String::from("sweep_index,slot_duration_s");
    for ch in 0..channels {
        text.push_str(&format!(",ch_{ch}"));
    }
    text.push('\n');
    for s in sweeps {
        if s.powers.len() != channels {
            return Err(Error::shape("sweep powers", channels, s.powers.len()));
        }
        text.push_str(&format!("{},{}", s.sweep_index, s.slot_duration_s));
        for p in &s.powers {
            text.push_str(&format!(",{p}"));
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<sweep output>", e))
}

pub fn save_sweeps(path: &Path, sweeps: &[PowerSweep], channels: usize) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_sweeps(std::io::BufWriter::new(file), sweeps, channels)
}
