//! Feed-forward network model: topology, parameters and the forward pass.
//!
//! Parameters live in one flat vector in *canonical order*: computing
//! layers first to last, neuron by neuron within a layer, and for each
//! neuron its incoming weights in input order followed by its threshold.
//! The GA chromosome, the Jacobian column order and the gradient layout
//! all share this order.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Current version of the JSON model file layout.
pub const MODEL_ENCODING_VERSION: u32 = 1;

/// Bipolar sigmoid `(1 - e^-v) / (1 + e^-v)`, i.e. `tanh(v / 2)`.
///
/// Evaluated on the branch that only exponentiates non-positive numbers,
/// and clamped so the magnitude stays strictly below one.
pub fn activation<T: Scalar>(v: T) -> T {
    let one = T::one();
    let e = (-v.abs()).exp();
    let magnitude = ((one - e) / (one + e)).min(one - T::half_epsilon());
    if v < T::zero() {
        -magnitude
    } else {
        magnitude
    }
}

/// Derivative of [`activation`] with respect to its input, written in terms
/// of the output `y`: `(1 - y^2) / 2`.
pub fn activation_derivative<T: Scalar>(y: T) -> T {
    (T::one() - y * y) / (T::one() + T::one())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkTopology {
    /// Number of inputs (the window length).
    pub order: usize,
    pub hidden_sizes: Vec<usize>,
    pub output_size: usize,
}

impl Default for NetworkTopology {
    fn default() -> Self {
        Self {
            order: 10,
            hidden_sizes: vec![10],
            output_size: 1,
        }
    }
}

impl NetworkTopology {
    pub fn new(order: usize, hidden_sizes: Vec<usize>, output_size: usize) -> Result<Self> {
        let topology = Self {
            order,
            hidden_sizes,
            output_size,
        };
        topology.validate()?;
        Ok(topology)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::invalid("topology", "order must be at least 1"));
        }
        if self.hidden_sizes.contains(&0) {
            return Err(Error::invalid(
                "topology",
                "hidden layer sizes must be at least 1",
            ));
        }
        if self.output_size == 0 {
            return Err(Error::invalid("topology", "output size must be at least 1"));
        }
        Ok(())
    }

    /// Number of computing layers (hidden layers plus the output layer).
    pub fn layer_count(&self) -> usize {
        self.hidden_sizes.len() + 1
    }

    /// `(inputs, neurons)` for each computing layer.
    pub fn layer_shapes(&self) -> Vec<(usize, usize)> {
        let mut shapes = Vec::with_capacity(self.layer_count());
        let mut fan_in = self.order;
        for &size in self
            .hidden_sizes
            .iter()
            .chain(std::iter::once(&self.output_size))
        {
            shapes.push((fan_in, size));
            fan_in = size;
        }
        shapes
    }

    /// Total number of weights plus thresholds.
    pub fn parameter_count(&self) -> usize {
        self.layer_shapes()
            .iter()
            .map(|&(inputs, neurons)| neurons * (inputs + 1))
            .sum()
    }
}

/// Where a canonical parameter index points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamSlot {
    Weight {
        layer: usize,
        neuron: usize,
        input: usize,
    },
    Threshold {
        layer: usize,
        neuron: usize,
    },
}

/// All adaptive weights and thresholds of one network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkWeights<T> {
    topology: NetworkTopology,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    params: Vec<T>,
}

/// Activations recorded by [`NetworkWeights::forward`].
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace<T> {
    /// Pre-activation sums, one vector per computing layer.
    pub pre: Vec<Vec<T>>,
    /// Activations, one vector per computing layer.
    pub act: Vec<Vec<T>>,
}

impl<T: Scalar> ForwardTrace<T> {
    /// Network output `z` (activations of the last layer).
    pub fn output(&self) -> &[T] {
        self.act.last().expect("a network has at least one layer")
    }
}

impl<T: Scalar> NetworkWeights<T> {
    pub fn zeros(topology: &NetworkTopology) -> Result<Self> {
        topology.validate()?;
        Self::from_flat(topology, vec![T::zero(); topology.parameter_count()])
    }

    /// Builds a network from parameters in canonical order.
    pub fn from_flat(topology: &NetworkTopology, params: Vec<T>) -> Result<Self> {
        topology.validate()?;
        let expected = topology.parameter_count();
        if params.len() != expected {
            return Err(Error::shape("parameter vector", expected, params.len()));
        }
        let shapes = topology.layer_shapes();
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut offset = 0;
        for &(inputs, neurons) in &shapes {
            offsets.push(offset);
            offset += neurons * (inputs + 1);
        }
        Ok(Self {
            topology: topology.clone(),
            shapes,
            offsets,
            params,
        })
    }

    /// Every weight and threshold drawn independently from `U[lo, hi]`.
    pub fn init_random<R: Rng + ?Sized>(
        topology: &NetworkTopology,
        lo: T,
        hi: T,
        rng: &mut R,
    ) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(
                "initialization range",
                format!("need finite lo < hi, got [{lo}, {hi}]"),
            ));
        }
        let params = uniform_vec(topology.parameter_count(), lo, hi, rng);
        Self::from_flat(topology, params)
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    /// Parameters in canonical order.
    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [T] {
        &mut self.params
    }

    pub fn into_params(self) -> Vec<T> {
        self.params
    }

    pub fn parameter_count(&self) -> usize {
        self.params.len()
    }

    /// Canonical index of `w[layer][neuron][input]`.
    pub fn weight_index(&self, layer: usize, neuron: usize, input: usize) -> usize {
        let (inputs, _) = self.shapes[layer];
        self.offsets[layer] + neuron * (inputs + 1) + input
    }

    /// Canonical index of `b[layer][neuron]`.
    pub fn threshold_index(&self, layer: usize, neuron: usize) -> usize {
        let (inputs, _) = self.shapes[layer];
        self.offsets[layer] + neuron * (inputs + 1) + inputs
    }

    pub fn weight(&self, layer: usize, neuron: usize, input: usize) -> T {
        self.params[self.weight_index(layer, neuron, input)]
    }

    pub fn threshold(&self, layer: usize, neuron: usize) -> T {
        self.params[self.threshold_index(layer, neuron)]
    }

    /// Inverse of the canonical index functions.
    pub fn slot(&self, index: usize) -> Option<ParamSlot> {
        if index >= self.params.len() {
            return None;
        }
        let layer = self.offsets.partition_point(|&o| o <= index) - 1;
        let (inputs, _) = self.shapes[layer];
        let local = index - self.offsets[layer];
        let neuron = local / (inputs + 1);
        let input = local % (inputs + 1);
        Some(if input == inputs {
            ParamSlot::Threshold { layer, neuron }
        } else {
            ParamSlot::Weight {
                layer,
                neuron,
                input,
            }
        })
    }

    pub(crate) fn layer_shape(&self, layer: usize) -> (usize, usize) {
        self.shapes[layer]
    }

    pub(crate) fn layer_params(&self, layer: usize) -> &[T] {
        let (inputs, neurons) = self.shapes[layer];
        let start = self.offsets[layer];
        &self.params[start..start + neurons * (inputs + 1)]
    }

    pub(crate) fn layer_offset(&self, layer: usize) -> usize {
        self.offsets[layer]
    }

    pub fn is_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }

    /// Forward pass recording every layer's sums and activations.
    pub fn forward(&self, input: &[T]) -> Result<ForwardTrace<T>> {
        if input.len() != self.topology.order {
            return Err(Error::shape(
                "network input",
                self.topology.order,
                input.len(),
            ));
        }
        let layers = self.shapes.len();
        let mut pre = Vec::with_capacity(layers);
        let mut act: Vec<Vec<T>> = Vec::with_capacity(layers);
        for layer in 0..layers {
            let (inputs, neurons) = self.shapes[layer];
            let source = if layer == 0 { input } else { &act[layer - 1] };
            let params = self.layer_params(layer);
            let sums: Vec<T> = params
                .chunks_exact(inputs + 1)
                .take(neurons)
                .map(|row| {
                    let (weights, threshold) = row.split_at(inputs);
                    weights
                        .iter()
                        .zip(source)
                        .fold(threshold[0], |acc, (&w, &x)| acc + w * x)
                })
                .collect();
            act.push(sums.iter().map(|&v| activation(v)).collect());
            pre.push(sums);
        }
        Ok(ForwardTrace { pre, act })
    }

    /// Output vector only.
    pub fn output(&self, input: &[T]) -> Result<Vec<T>> {
        Ok(self.forward(input)?.act.pop().unwrap_or_default())
    }

    pub fn to_model_file(&self) -> ModelFile {
        let mut weights = Vec::with_capacity(self.shapes.len());
        let mut thresholds = Vec::with_capacity(self.shapes.len());
        for (layer, &(inputs, _)) in self.shapes.iter().enumerate() {
            let rows = self.layer_params(layer).chunks_exact(inputs + 1);
            let mut w = Vec::new();
            let mut b = Vec::new();
            for row in rows {
                w.push(row[..inputs].iter().map(|x| x.as_f64()).collect());
                b.push(row[inputs].as_f64());
            }
            weights.push(w);
            thresholds.push(b);
        }
        ModelFile {
            encoding_version: MODEL_ENCODING_VERSION,
            topology: self.topology.clone(),
            weights,
            thresholds,
        }
    }

    pub fn from_model_file(file: &ModelFile) -> Result<Self> {
        if file.encoding_version != MODEL_ENCODING_VERSION {
            return Err(Error::invalid(
                "model file",
                format!("unsupported encoding_version {}", file.encoding_version),
            ));
        }
        let topology = &file.topology;
        topology.validate()?;
        let shapes = topology.layer_shapes();
        if file.weights.len() != shapes.len() {
            return Err(Error::shape(
                "model weight layers",
                shapes.len(),
                file.weights.len(),
            ));
        }
        if file.thresholds.len() != shapes.len() {
            return Err(Error::shape(
                "model threshold layers",
                shapes.len(),
                file.thresholds.len(),
            ));
        }
        let mut params = Vec::with_capacity(topology.parameter_count());
        for (layer, &(inputs, neurons)) in shapes.iter().enumerate() {
            let rows = &file.weights[layer];
            let thresholds = &file.thresholds[layer];
            if rows.len() != neurons {
                return Err(Error::shape("model weight rows", neurons, rows.len()));
            }
            if thresholds.len() != neurons {
                return Err(Error::shape("model thresholds", neurons, thresholds.len()));
            }
            for (row, &b) in rows.iter().zip(thresholds) {
                if row.len() != inputs {
                    return Err(Error::shape("model weight row", inputs, row.len()));
                }
                params.extend(row.iter().map(|&w| T::of(w)));
                params.push(T::of(b));
            }
        }
        let net = Self::from_flat(topology, params)?;
        if !net.is_finite() {
            return Err(Error::invalid("model file", "non-finite parameter"));
        }
        Ok(net)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_model_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        Self::from_model_file(&file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// On-disk model layout. Weights are nested per layer, row-major
/// (`weights[layer][neuron][input]`); numbers are written in shortest
/// round-trip decimal form, so reloading an `f64` network is bit-exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub topology: NetworkTopology,
    pub weights: Vec<Vec<Vec<f64>>>,
    pub thresholds: Vec<Vec<f64>>,
    pub encoding_version: u32,
}

pub(crate) fn uniform_vec<T: Scalar, R: Rng + ?Sized>(
    len: usize,
    lo: T,
    hi: T,
    rng: &mut R,
) -> Vec<T> {
    let (lo, hi) = (lo.as_f64(), hi.as_f64());
    (0..len)
        .map(|_| T::of(lo + (hi - lo) * rng.random::<f64>()))
        .collect()
}
