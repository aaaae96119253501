use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::net::NetworkWeights;
use crate::scalar::Scalar;

use super::{backprop_gradient, check_patterns, error_goal, total_error};
use super::{Termination, TrainLog, TrainOutcome, TrainingPattern};

/// Epoch error above which gradient descent is considered divergent.
const DIVERGENCE_LIMIT: f64 = 1e12;

/// Per-pattern (stochastic) gradient descent settings.
#[derive(Debug, Clone, PartialEq)]
pub struct GdConfig<T> {
    /// Learning rate η.
    pub eta: T,
    /// Error goal per pattern and output.
    pub theta: T,
    pub max_epochs: usize,
}

impl<T: Scalar> Default for GdConfig<T> {
    fn default() -> Self {
        Self {
            eta: T::of(0.1),
            theta: T::of(0.01),
            max_epochs: 1000,
        }
    }
}

impl<T: Scalar> GdConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= T::zero()) || !self.eta.is_finite() {
            return Err(Error::invalid(
                "eta",
                "learning rate must be finite and non-negative",
            ));
        }
        if !(self.theta > T::zero()) {
            return Err(Error::invalid("theta", "error goal must be positive"));
        }
        Ok(())
    }
}

/// Trains with `w ← w - η ∂J/∂w` after every pattern, visiting patterns in
/// a freshly shuffled order each epoch.
///
/// The log holds the starting error as row 0 and the error after each
/// epoch. Training stops as soon as the summed error is below the goal.
/// A blow-up (non-finite or above 1e12) ends the run with
/// [`Termination::Diverged`] and the weights from before the failing epoch.
pub fn train_gd<T: Scalar, R: Rng + ?Sized>(
    weights: NetworkWeights<T>,
    patterns: &[TrainingPattern<T>],
    config: &GdConfig<T>,
    rng: &mut R,
) -> Result<TrainOutcome<T>> {
    config.validate()?;
    check_patterns(&weights, patterns)?;
    let goal = error_goal(config.theta, patterns.len(), weights.topology().output_size);
    let mut net = weights;
    let mut error = total_error(&net, patterns)?;
    let mut log = TrainLog::default();
    log.push(0, error.as_f64(), config.eta.as_f64(), true);
    if !error.is_finite() {
        return Err(Error::Numerical {
            stage: "train_gd",
            layer: None,
            detail: "initial error is not finite".into(),
        });
    }

    let mut order: Vec<usize> = (0..patterns.len()).collect();
    let mut epoch = 0;
    let termination = loop {
        if error < goal {
            break Termination::Goal;
        }
        if epoch == config.max_epochs {
            break Termination::MaxIter;
        }
        epoch += 1;
        order.shuffle(rng);
        let previous = net.clone();
        let mut blown = false;
        for &i in &order {
            let grad = match backprop_gradient(&net, &patterns[i]) {
                Ok(g) => g,
                Err(Error::Numerical { .. }) => {
                    blown = true;
                    break;
                }
                Err(e) => return Err(e),
            };
            for (w, &g) in net.params_mut().iter_mut().zip(&grad.values) {
                *w -= config.eta * g;
            }
        }
        let epoch_error = if blown {
            T::nan()
        } else {
            total_error(&net, patterns)?
        };
        log.push(epoch, epoch_error.as_f64(), config.eta.as_f64(), true);
        if !epoch_error.is_finite() || epoch_error.as_f64() > DIVERGENCE_LIMIT || !net.is_finite() {
            net = previous;
            break Termination::Diverged;
        }
        error = epoch_error;
    };

    Ok(TrainOutcome {
        weights: net,
        termination,
        final_error: error,
        log,
    })
}
