//! Measurement ingestion: band presets, sweep files, thresholding into
//! occupancy bits, windowing, splitting, and the synthetic channel source.

mod band;
mod occupancy;
mod sweep;
mod synth;

pub use band::{load_band_file, preset, presets, BandDefinition, DEFAULT_CHANNEL_WIDTH_KHZ};
pub use occupancy::{
    binarize, bipolar, load_occupancy, read_occupancy, split, window, write_occupancy,
    OccupancySeries, Provenance, SplitMode, WindowedDataset,
};
pub use sweep::{
    load_sweeps, read_sweeps, save_sweeps, write_sweeps, PowerSweep, DEFAULT_SLOT_DURATION_S,
};
pub use synth::{bayes_floor, synth_generate, synth_generate_with_states, ChannelModel};
