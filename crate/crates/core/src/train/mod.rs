//! Error function, backpropagation, and the two trainers: per-pattern
//! gradient descent and batch Levenberg-Marquardt.

mod backprop;
mod gd;
mod lm;

pub use backprop::{backprop_gradient, error_sse, jacobian, total_error, Gradient, Jacobian};
pub use gd::{train_gd, GdConfig};
pub use lm::{damped_step, lm_step, train_lm, LmConfig};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::net::NetworkWeights;
use crate::scalar::Scalar;

/// One supervised example: a window of past slots and the next slot.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingPattern<T> {
    pub input: Vec<T>,
    pub target: Vec<T>,
}

impl<T: Scalar> TrainingPattern<T> {
    /// Any finite input and target values.
    pub fn new(input: Vec<T>, target: Vec<T>) -> Result<Self> {
        if input.iter().chain(&target).any(|v| !v.is_finite()) {
            return Err(Error::invalid("training pattern", "non-finite entry"));
        }
        Ok(Self { input, target })
    }

    /// Occupancy pattern; every entry must be exactly -1 or +1.
    pub fn bipolar(input: Vec<T>, target: Vec<T>) -> Result<Self> {
        let one = T::one();
        if input.iter().chain(&target).any(|&v| v != one && v != -one) {
            return Err(Error::invalid(
                "training pattern",
                "entries must be -1 or +1",
            ));
        }
        Ok(Self { input, target })
    }
}

pub(crate) fn check_patterns<T: Scalar>(
    net: &NetworkWeights<T>,
    patterns: &[TrainingPattern<T>],
) -> Result<()> {
    if patterns.is_empty() {
        return Err(Error::invalid("training set", "no patterns"));
    }
    let topology = net.topology();
    for p in patterns {
        if p.input.len() != topology.order {
            return Err(Error::shape("pattern input", topology.order, p.input.len()));
        }
        if p.target.len() != topology.output_size {
            return Err(Error::shape(
                "pattern target",
                topology.output_size,
                p.target.len(),
            ));
        }
    }
    Ok(())
}

/// Error goal for a training set: the per-pattern, per-output goal scaled
/// by pattern and output count.
pub fn error_goal<T: Scalar>(theta_per_pattern: T, patterns: usize, outputs: usize) -> T {
    theta_per_pattern * T::of((patterns * outputs) as f64)
}

/// Why a trainer stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Total error fell below the goal.
    Goal,
    /// Iteration or epoch budget exhausted.
    MaxIter,
    /// Levenberg-Marquardt damping grew past its ceiling.
    Stalled,
    /// Gradient descent error blew up; weights are the last finite state.
    Diverged,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Goal => "goal",
            Termination::MaxIter => "max_iter",
            Termination::Stalled => "stalled",
            Termination::Diverged => "diverged",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "goal" => Ok(Termination::Goal),
            "max_iter" => Ok(Termination::MaxIter),
            "stalled" => Ok(Termination::Stalled),
            "diverged" => Ok(Termination::Diverged),
            other => Err(Error::invalid("termination reason", other.to_string())),
        }
    }
}

/// One row of a trainer log. For gradient descent `step` is η and every
/// row is accepted; for Levenberg-Marquardt it is the μ the step used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub iteration: usize,
    pub error: f64,
    pub step: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainLog {
    pub rows: Vec<LogRow>,
}

impl TrainLog {
    pub const CSV_HEADER: &'static str = "iteration,error,mu_or_eta,accepted";

    pub(crate) fn push(&mut self, iteration: usize, error: f64, step: f64, accepted: bool) {
        self.rows.push(LogRow {
            iteration,
            error,
            step,
            accepted,
        });
    }

    /// Errors of the accepted rows, in order.
    pub fn accepted_errors(&self) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.accepted)
            .map(|r| r.error)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.iteration,
                r.error,
                r.step,
                u8::from(r.accepted)
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome<T> {
    pub weights: NetworkWeights<T>,
    pub termination: Termination,
    /// Total (summed) error of `weights` over the training set.
    pub final_error: T,
    pub log: TrainLog,
}
