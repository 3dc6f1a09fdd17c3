//! Maximum-likelihood estimation with Hessian-based standard errors.
//!
//! The log-likelihood is maximized over log-parameters with a restarted
//! Nelder-Mead simplex, so every candidate stays inside the parameter space.
//! The covariance matrix is the negative inverse of the natural-scale Hessian,
//! obtained by central differences at the estimate.

mod hessian;
mod nelder_mead;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hessian::central_hessian;
pub use nelder_mead::{minimize, Minimum, SimplexOptions};

use crate::corpus::Dataset;
use crate::distributions::{DistributionError, DistributionSpec, Family};
use crate::special::sorted_median;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(String),
    #[error("{family} needs at least {needed} observations, got {got}")]
    TooFewObservations {
        family: Family,
        needed: usize,
        got: usize,
    },
    #[error("all observations are equal; the likelihood has no finite maximum")]
    DegenerateData,
    #[error("log-likelihood is not finite at the starting point {0:?}")]
    InfeasibleStart(Vec<f64>),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Simplex iterations allowed per (re)start.
    pub max_iterations: usize,
    /// Relative log-likelihood spread across the simplex at convergence.
    pub tolerance: f64,
    /// Number of simplex runs; runs after the first start from a jittered copy
    /// of the best point so far.
    pub restarts: usize,
    /// Relative finite-difference step for the Hessian.
    pub hessian_step: f64,
    /// Seed for the restart jitter.
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            tolerance: 1e-10,
            restarts: 5,
            hessian_step: 1e-4,
            seed: 0,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<(), FitError> {
        if !(self.tolerance > 0.0) {
            return Err(FitError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.restarts < 1 {
            return Err(FitError::InvalidConfig(
                "restarts must be at least 1".into(),
            ));
        }
        if self.max_iterations < 1 {
            return Err(FitError::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(self.hessian_step > 0.0 && self.hessian_step < 0.1) {
            return Err(FitError::InvalidConfig(format!(
                "hessian_step must be in (0, 0.1), got {}",
                self.hessian_step
            )));
        }
        Ok(())
    }
}

/// Estimates with their sampling uncertainty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub spec: DistributionSpec,
    /// Absent when the Hessian is not negative definite.
    pub std_errors: Option<Vec<f64>>,
    pub covariance: Option<Vec<Vec<f64>>>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    pub n: usize,
    /// Why standard errors or convergence are missing, if they are.
    pub diagnostic: Option<String>,
}

impl FitResult {
    pub fn family(&self) -> Family {
        self.spec.family()
    }

    pub fn params(&self) -> Vec<f64> {
        self.spec.params()
    }
}

/// Point estimate without standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub spec: DistributionSpec,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Starting values for the simplex, natural scale and canonical order.
///
/// - Davies: `K = median`, `a = b = 0.5` (`K` is then exactly the model median).
/// - Singh-Maddala, Dagum: `a = 1.5`, `b = median`, `q = p = 1`.
/// - Fisk: `b = median`, `a = π / (√3 · sd(ln x))`, the log-logistic
///   method-of-moments shape; falls back to 1.5 when the log-spread is zero.
pub fn profile_start(family: Family, data: &Dataset) -> Vec<f64> {
    let sorted = data.sorted_values();
    let median = sorted_median(&sorted);
    match family {
        Family::Davies => vec![median, 0.5, 0.5],
        Family::SinghMaddala | Family::Dagum => vec![1.5, median, 1.0],
        Family::Fisk => {
            let logs: Vec<f64> = sorted.iter().map(|x| x.ln()).collect();
            let n = logs.len() as f64;
            let mean = logs.iter().sum::<f64>() / n;
            let sd = if logs.len() > 1 {
                (logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            let shape = std::f64::consts::PI / (3f64.sqrt() * sd);
            vec![
                if shape.is_finite() && shape > 0.0 {
                    shape
                } else {
                    1.5
                },
                median,
            ]
        }
    }
}

fn check_inputs(family: Family, data: &Dataset, config: &FitConfig) -> Result<(), FitError> {
    config.validate()?;
    let needed = family.parameter_count() + 1;
    if data.len() < needed {
        return Err(FitError::TooFewObservations {
            family,
            needed,
            got: data.len(),
        });
    }
    let first = data.values()[0];
    if data.values().iter().all(|&v| v == first) {
        return Err(FitError::DegenerateData);
    }
    Ok(())
}

/// Maximizes the log-likelihood from [`profile_start`].
pub fn estimate(family: Family, data: &Dataset, config: &FitConfig) -> Result<Estimate, FitError> {
    estimate_from(family, data, &profile_start(family, data), config)
}

/// Maximizes the log-likelihood from a caller-supplied start.
pub fn estimate_from(
    family: Family,
    data: &Dataset,
    start: &[f64],
    config: &FitConfig,
) -> Result<Estimate, FitError> {
    check_inputs(family, data, config)?;
    DistributionSpec::from_params(family, start)?;
    let sorted = data.sorted_values();
    let objective = |log_params: &[f64]| -> f64 {
        let params: Vec<f64> = log_params.iter().map(|p| p.exp()).collect();
        match DistributionSpec::from_params(family, &params) {
            Ok(spec) => -spec.log_likelihood(&sorted),
            Err(_) => f64::INFINITY,
        }
    };

    let log_start: Vec<f64> = start.iter().map(|p| p.ln()).collect();
    if !objective(&log_start).is_finite() {
        return Err(FitError::InfeasibleStart(start.to_vec()));
    }
    let options = SimplexOptions {
        max_iterations: config.max_iterations,
        f_tol: config.tolerance,
        ..SimplexOptions::default()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best = minimize(&objective, &log_start, &options);
    let mut iterations = best.iterations;
    let mut converged = best.converged;
    for _ in 1..config.restarts {
        let from: Vec<f64> = best
            .x
            .iter()
            .map(|x| x + rng.random_range(-0.1..0.1))
            .collect();
        let run = minimize(&objective, &from, &options);
        iterations += run.iterations;
        if run.value < best.value {
            // a restart that still improves by more than the tolerance means
            // the earlier "convergence" was premature
            let material = best.value - run.value > config.tolerance * run.value.abs().max(1.0);
            converged = run.converged || (converged && !material);
            best = run;
        } else {
            converged |= run.converged;
        }
    }

    let params: Vec<f64> = best.x.iter().map(|p| p.exp()).collect();
    let spec = DistributionSpec::from_params(family, &params)?;
    let log_likelihood = spec.log_likelihood(data.values());
    Ok(Estimate {
        spec,
        log_likelihood,
        converged: converged && log_likelihood.is_finite(),
        iterations,
    })
}

/// Maximum-likelihood fit of `family` to `data`.
///
/// Non-convergence is reported through [`FitResult::converged`] rather than
/// an error. A Hessian that is not negative definite leaves the standard
/// errors absent and fills [`FitResult::diagnostic`].
pub fn fit(family: Family, data: &Dataset, config: &FitConfig) -> Result<FitResult, FitError> {
    let est = estimate(family, data, config)?;
    Ok(with_standard_errors(est, data, config))
}

/// Adds Hessian-based standard errors to a point estimate.
pub fn with_standard_errors(est: Estimate, data: &Dataset, config: &FitConfig) -> FitResult {
    let family = est.spec.family();
    let theta = est.spec.params();
    let sorted = data.sorted_values();
    let steps: Vec<f64> = theta
        .iter()
        .map(|t| (config.hessian_step * t.abs().max(1.0)).min(0.25 * t))
        .collect();
    let loglik = |p: &[f64]| match DistributionSpec::from_params(family, p) {
        Ok(spec) => spec.log_likelihood(&sorted),
        Err(_) => f64::NEG_INFINITY,
    };
    let hessian = central_hessian(loglik, &theta, &steps);

    let mut diagnostic = None;
    let (std_errors, covariance) = match invert_negative_hessian(&hessian) {
        Ok(cov) => {
            let se = (0..cov.len()).map(|i| cov[i][i].sqrt()).collect();
            (Some(se), Some(cov))
        }
        Err(msg) => {
            diagnostic = Some(msg);
            (None, None)
        }
    };
    if !est.converged {
        let note = "optimizer did not converge within the iteration limit";
        diagnostic = Some(match diagnostic {
            Some(d) => format!("{note}; {d}"),
            None => note.to_string(),
        });
    }
    FitResult {
        spec: est.spec,
        std_errors,
        covariance,
        log_likelihood: est.log_likelihood,
        converged: est.converged,
        iterations: est.iterations,
        n: data.len(),
        diagnostic,
    }
}

/// `-H⁻¹` when `-H` is positive definite.
fn invert_negative_hessian(hessian: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, String> {
    let dim = hessian.len();
    if hessian.iter().flatten().any(|v| !v.is_finite()) {
        return Err("Hessian has non-finite entries".into());
    }
    let neg = DMatrix::from_fn(dim, dim, |i, j| -hessian[i][j]);
    let chol = neg.cholesky().ok_or_else(|| {
        "Hessian is not negative definite; standard errors unavailable".to_string()
    })?;
    let inv = chol.inverse();
    let cov: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| 0.5 * (inv[(i, j)] + inv[(j, i)]))
                .collect()
        })
        .collect();
    if (0..dim).any(|i| !(cov[i][i] > 0.0) || !cov[i][i].is_finite()) {
        return Err("covariance diagonal is not positive".into());
    }
    Ok(cov)
}
