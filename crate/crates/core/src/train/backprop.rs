use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::net::{activation_derivative, ForwardTrace, NetworkWeights};
use crate::scalar::Scalar;

use super::{check_patterns, TrainingPattern};

/// Half the squared distance between target and output.
pub fn error_sse<T: Scalar>(target: &[T], output: &[T]) -> Result<T> {
    if target.len() != output.len() {
        return Err(Error::shape("error_sse", target.len(), output.len()));
    }
    let sum: T = target
        .iter()
        .zip(output)
        .map(|(&t, &z)| (t - z) * (t - z))
        .sum();
    Ok(sum / (T::one() + T::one()))
}

/// Summed [`error_sse`] over a pattern set.
pub fn total_error<T: Scalar>(
    net: &NetworkWeights<T>,
    patterns: &[TrainingPattern<T>],
) -> Result<T> {
    let mut total = T::zero();
    for p in patterns {
        let z = net.output(&p.input)?;
        total += error_sse(&p.target, &z)?;
    }
    Ok(total)
}

/// `∂J/∂w` for every parameter, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> Gradient<T> {
    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![T::zero(); len],
        }
    }

    pub fn add_assign(&mut self, other: &Gradient<T>) {
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
    }
}

/// Residuals `e = t - z` and the Jacobian `∂e/∂w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobian<T> {
    /// Row `p * outputs + k` holds `∂e_k^p / ∂w` in canonical column order.
    pub matrix: Matrix<T>,
    pub residuals: Vec<T>,
}

/// Propagates `∂objective/∂z` (one entry per output neuron) back through
/// the network and writes `∂objective/∂w` into `out` in canonical order.
fn backward_into<T: Scalar>(
    net: &NetworkWeights<T>,
    input: &[T],
    trace: &ForwardTrace<T>,
    output_seed: &[T],
    out: &mut [T],
) -> Result<()> {
    let layers = trace.act.len();
    let mut delta: Vec<T> = output_seed
        .iter()
        .zip(&trace.act[layers - 1])
        .map(|(&s, &z)| s * activation_derivative(z))
        .collect();
    for layer in (0..layers).rev() {
        if delta.iter().any(|d| !d.is_finite()) {
            return Err(Error::Numerical {
                stage: "backprop",
                layer: Some(layer),
                detail: "non-finite sensitivity".into(),
            });
        }
        let (inputs, neurons) = net.layer_shape(layer);
        let source: &[T] = if layer == 0 {
            input
        } else {
            &trace.act[layer - 1]
        };
        let offset = net.layer_offset(layer);
        for (n, &d) in delta.iter().enumerate().take(neurons) {
            let row = &mut out[offset + n * (inputs + 1)..offset + (n + 1) * (inputs + 1)];
            for (g, &x) in row[..inputs].iter_mut().zip(source) {
                *g = d * x;
            }
            row[inputs] = d;
        }
        if layer > 0 {
            let params = net.layer_params(layer);
            delta = (0..inputs)
                .map(|j| {
                    let back: T = delta
                        .iter()
                        .enumerate()
                        .map(|(n, &d)| d * params[n * (inputs + 1) + j])
                        .sum();
                    back * activation_derivative(source[j])
                })
                .collect();
        }
    }
    Ok(())
}

/// Gradient of the single-pattern error with respect to every weight and
/// threshold. Gradient descent applies `Δw = -η · gradient`.
pub fn backprop_gradient<T: Scalar>(
    net: &NetworkWeights<T>,
    pattern: &TrainingPattern<T>,
) -> Result<Gradient<T>> {
    check_patterns(net, std::slice::from_ref(pattern))?;
    let trace = net.forward(&pattern.input)?;
    // ∂J/∂z_k = -(t_k - z_k)
    let seed: Vec<T> = pattern
        .target
        .iter()
        .zip(trace.output())
        .map(|(&t, &z)| z - t)
        .collect();
    let mut grad = Gradient::zeros(net.parameter_count());
    backward_into(net, &pattern.input, &trace, &seed, &mut grad.values)?;
    Ok(grad)
}

/// Residual vector and Jacobian over all patterns.
pub fn jacobian<T: Scalar>(
    net: &NetworkWeights<T>,
    patterns: &[TrainingPattern<T>],
) -> Result<Jacobian<T>> {
    check_patterns(net, patterns)?;
    let outputs = net.topology().output_size;
    let cols = net.parameter_count();
    let mut matrix = Matrix::zeros(patterns.len() * outputs, cols);
    let mut residuals = Vec::with_capacity(patterns.len() * outputs);
    let mut seed = vec![T::zero(); outputs];
    for (p, pattern) in patterns.iter().enumerate() {
        let trace = net.forward(&pattern.input)?;
        for k in 0..outputs {
            residuals.push(pattern.target[k] - trace.output()[k]);
            // ∂e_k/∂z = -unit_k
            seed.fill(T::zero());
            seed[k] = -T::one();
            backward_into(
                net,
                &pattern.input,
                &trace,
                &seed,
                matrix.row_mut(p * outputs + k),
            )?;
        }
    }
    Ok(Jacobian { matrix, residuals })
}
