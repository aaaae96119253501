use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve_shifted, Matrix};
use crate::net::NetworkWeights;
use crate::scalar::Scalar;

use super::{check_patterns, error_goal, jacobian, total_error, Jacobian};
use super::{Termination, TrainLog, TrainOutcome, TrainingPattern};

/// Batch Levenberg-Marquardt settings.
#[derive(Debug, Clone, PartialEq)]
pub struct LmConfig<T> {
    /// Initial damping μ.
    pub mu0: T,
    /// Damping factor: μ is divided by β after an improving step and
    /// multiplied by β otherwise.
    pub beta: T,
    /// Training stalls once μ exceeds this.
    pub mu_max: T,
    /// Error goal per pattern and output.
    pub theta: T,
    /// Budget of step attempts, accepted or not.
    pub max_iterations: usize,
}

impl<T: Scalar> Default for LmConfig<T> {
    fn default() -> Self {
        Self {
            mu0: T::of(1e-3),
            beta: T::of(10.0),
            mu_max: T::of(1e10),
            theta: T::of(0.01),
            max_iterations: 1000,
        }
    }
}

impl<T: Scalar> LmConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu0 > T::zero()) {
            return Err(Error::invalid("mu0", "must be positive"));
        }
        if !(self.beta > T::one()) {
            return Err(Error::invalid("beta", "must be greater than 1"));
        }
        if !(self.mu_max > self.mu0) {
            return Err(Error::invalid("mu_max", "must exceed mu0"));
        }
        if !(self.theta > T::zero()) {
            return Err(Error::invalid("theta", "error goal must be positive"));
        }
        Ok(())
    }
}

/// Normal-equation pieces reused across rejected steps at one point.
struct NormalEquations<T> {
    gram: Matrix<T>,
    gradient: Vec<T>,
}

impl<T: Scalar> NormalEquations<T> {
    fn new(jac: &Jacobian<T>) -> Result<Self> {
        Ok(Self {
            gram: jac.matrix.gram(),
            // ∇E = Jᵀe with J = ∂e/∂w
            gradient: jac.matrix.transpose_mul(&jac.residuals)?,
        })
    }

    fn step(&self, mu: T) -> Result<Vec<T>> {
        let d = cholesky_solve_shifted(&self.gram, mu, &self.gradient)?;
        Ok(d.into_iter().map(|x| -x).collect())
    }
}

/// Damped Gauss-Newton increment `Δw = -(JᵀJ + μI)⁻¹ Jᵀe` for a Jacobian of
/// the residuals `e`.
pub fn damped_step<T: Scalar>(jac: &Jacobian<T>, mu: T) -> Result<Vec<T>> {
    if !(mu > T::zero()) {
        return Err(Error::invalid("mu", "damping must be positive"));
    }
    NormalEquations::new(jac)?.step(mu)
}

/// One Levenberg-Marquardt candidate from `weights` with damping `mu`.
pub fn lm_step<T: Scalar>(
    weights: &NetworkWeights<T>,
    patterns: &[TrainingPattern<T>],
    mu: T,
) -> Result<NetworkWeights<T>> {
    let jac = jacobian(weights, patterns)?;
    let delta = damped_step(&jac, mu)?;
    apply(weights, &delta)
}

fn apply<T: Scalar>(weights: &NetworkWeights<T>, delta: &[T]) -> Result<NetworkWeights<T>> {
    let params = weights
        .params()
        .iter()
        .zip(delta)
        .map(|(&w, &d)| w + d)
        .collect();
    NetworkWeights::from_flat(weights.topology(), params)
}

/// Batch Levenberg-Marquardt over all patterns.
///
/// Each iteration is one step attempt. An attempt is accepted only if it
/// strictly lowers the summed error, and then μ ← μ/β; otherwise the
/// weights are kept and μ ← μ·β. Row 0 of the log is the starting point.
/// A step whose factorization fails or whose error is not finite counts
/// as rejected.
pub fn train_lm<T: Scalar>(
    weights: NetworkWeights<T>,
    patterns: &[TrainingPattern<T>],
    config: &LmConfig<T>,
) -> Result<TrainOutcome<T>> {
    config.validate()?;
    check_patterns(&weights, patterns)?;
    let goal = error_goal(config.theta, patterns.len(), weights.topology().output_size);
    let mut net = weights;
    let mut error = total_error(&net, patterns)?;
    if !error.is_finite() {
        return Err(Error::Numerical {
            stage: "train_lm",
            layer: None,
            detail: "initial error is not finite".into(),
        });
    }
    let mut mu = config.mu0;
    let mut log = TrainLog::default();
    log.push(0, error.as_f64(), mu.as_f64(), true);

    let mut equations: Option<NormalEquations<T>> = None;
    let mut iteration = 0;
    let termination = loop {
        if error < goal {
            break Termination::Goal;
        }
        if iteration == config.max_iterations {
            break Termination::MaxIter;
        }
        iteration += 1;
        if equations.is_none() {
            equations = Some(NormalEquations::new(&jacobian(&net, patterns)?)?);
        }
        let system = equations.as_ref().expect("just computed");
        let candidate = match system.step(mu) {
            Ok(delta) => Some(apply(&net, &delta)?),
            Err(Error::Numerical { .. }) => None,
            Err(e) => return Err(e),
        };
        let candidate_error = match &candidate {
            Some(c) if c.is_finite() => total_error(c, patterns)?,
            _ => T::nan(),
        };
        let used_mu = mu;
        // NaN compares false, so a failed candidate is rejected.
        if candidate_error < error {
            net = candidate.expect("finite error implies a candidate");
            error = candidate_error;
            equations = None;
            mu /= config.beta;
            log.push(iteration, error.as_f64(), used_mu.as_f64(), true);
        } else {
            mu *= config.beta;
            log.push(iteration, candidate_error.as_f64(), used_mu.as_f64(), false);
            if mu > config.mu_max {
                break Termination::Stalled;
            }
        }
    };

    Ok(TrainOutcome {
        weights: net,
        termination,
        final_error: error,
        log,
    })
}
