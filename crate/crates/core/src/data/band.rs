use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PRESETS_JSON: &str = include_str!("bands.json");

/// Default channel raster in kHz.
pub const DEFAULT_CHANNEL_WIDTH_KHZ: f64 = 200.0;

/// A licensed service band split into equal-width channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandDefinition {
    pub service: String,
    pub freq_lo_mhz: f64,
    pub freq_hi_mhz: f64,
    #[serde(default = "default_width")]
    pub channel_width_khz: f64,
}

fn default_width() -> f64 {
    DEFAULT_CHANNEL_WIDTH_KHZ
}

impl BandDefinition {
    pub fn new(
        service: impl Into<String>,
        freq_lo_mhz: f64,
        freq_hi_mhz: f64,
        channel_width_khz: f64,
    ) -> Result<Self> {
        let band = Self {
            service: service.into(),
            freq_lo_mhz,
            freq_hi_mhz,
            channel_width_khz,
        };
        band.validate()?;
        Ok(band)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.freq_lo_mhz < self.freq_hi_mhz) {
            return Err(Error::invalid(
                "band",
                format!("{}: freq_lo must be below freq_hi", self.service),
            ));
        }
        if !(self.channel_width_khz > 0.0) {
            return Err(Error::invalid(
                "band",
                format!("{}: channel width must be positive", self.service),
            ));
        }
        if self.channel_count() == 0 {
            return Err(Error::invalid(
                "band",
                format!("{}: narrower than one channel", self.service),
            ));
        }
        Ok(())
    }

    /// `floor((hi - lo) * 1000 / width)`, tolerant of decimal round-off.
    pub fn channel_count(&self) -> usize {
        let exact = (self.freq_hi_mhz - self.freq_lo_mhz) * 1000.0 / self.channel_width_khz;
        (exact + 1e-9).floor().max(0.0) as usize
    }

    /// Centre frequency of channel `index` in MHz.
    pub fn channel_center_mhz(&self, index: usize) -> f64 {
        self.freq_lo_mhz + (index as f64 + 0.5) * self.channel_width_khz / 1000.0
    }
}

/// The five built-in service bands, in listing order.
pub fn presets() -> Vec<BandDefinition> {
    serde_json::from_str(PRESETS_JSON).expect("built-in band presets parse")
}

/// Looks up a preset by service name, ignoring case, spaces, '-' and '_'.
pub fn preset(name: &str) -> Option<BandDefinition> {
    let key = normalize(name);
    presets().into_iter().find(|b| normalize(&b.service) == key)
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !matches!(c, ' ' | '-' | '_'))
        .flat_map(char::to_lowercase)
        .collect()
}

/// Reads a JSON array of band definitions.
pub fn load_band_file(path: &Path) -> Result<Vec<BandDefinition>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bands: Vec<BandDefinition> = serde_json::from_str(&text)?;
    for b in &bands {
        b.validate()?;
    }
    Ok(bands)
}
