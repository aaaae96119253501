//! Spectrum-hole prediction with a multilayer perceptron.
//!
//! Power sweeps are thresholded into per-channel busy/idle series, cut into
//! sliding windows, and used to train a bipolar-sigmoid MLP whose initial
//! weights come from a genetic algorithm and are then refined with
//! Levenberg-Marquardt. The trained network predicts whether a channel
//! will be busy in the next slot.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`, which the CLI uses.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod eval;
pub mod ga;
pub mod linalg;
pub mod net;
pub mod pipeline;
pub mod rng;
pub mod scalar;
pub mod train;

pub use error::{Error, Result};
pub use net::{activation, activation_derivative, ForwardTrace, NetworkTopology, NetworkWeights};
pub use scalar::Scalar;
pub use train::{Termination, TrainingPattern};

/// Double-precision network.
pub type Network = NetworkWeights<f64>;
/// Single-precision network.
pub type Network32 = NetworkWeights<f32>;
pub type Pattern = TrainingPattern<f64>;
pub type Dataset = data::WindowedDataset<f64>;
pub type Chromosome = ga::Chromosome<f64>;
pub type GaConfig = ga::GaConfig<f64>;
pub type LmConfig = train::LmConfig<f64>;
pub type GdConfig = train::GdConfig<f64>;
pub type PipelineConfig = pipeline::PipelineConfig<f64>;
