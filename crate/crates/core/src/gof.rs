//! Kolmogorov-Smirnov goodness of fit with parametric-bootstrap p-values.
//!
//! Because the model parameters are estimated from the data, the KS statistic
//! has no parameter-free null distribution. It is simulated instead:
//!
//! 1. fit `θ̂` to the data;
//! 2. compute `KS_org` against `F(·; θ̂)`;
//! 3. draw `B` samples of the original size from `F(·; θ̂)`, refit each one
//!    from scratch and compute its `KS_b` against its own refitted model;
//! 4. report `p = #{KS_b > KS_org} / B`.
//!
//! Replicate `i` draws from a stream seeded with [`derive_seed`]`(seed, i)`,
//! so the result is the same whether replicates run sequentially or on the
//! rayon pool.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Dataset;
use crate::distributions::{DistributionSpec, Family};
use crate::estimation::{estimate, FitConfig, FitError};
use crate::rng::derive_seed;

/// Rejection threshold used for the goodness-of-fit decision by default.
pub const DEFAULT_GOF_THRESHOLD: f64 = 0.1;
pub const DEFAULT_REPLICATES: usize = 999;
pub const MIN_REPLICATES: usize = 99;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GofError {
    #[error("bootstrap needs at least {MIN_REPLICATES} replicates, got {0}")]
    TooFewReplicates(usize),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("fit to the observed data did not converge")]
    NotConverged,
    #[error("{failures} of {replicates} bootstrap refits failed (more than 10%)")]
    TooManyFailures { failures: usize, replicates: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    /// Model fitted to the observed data.
    pub fitted: DistributionSpec,
    pub ks_org: f64,
    pub p_value: f64,
    /// Number of bootstrap replicates requested.
    pub replicates: usize,
    /// `KS_b` of every successful replicate, in replicate order.
    pub replicate_ks: Option<Vec<f64>>,
    pub seed: u64,
    pub refit_failures: usize,
}

impl GofResult {
    /// Whether the model is rejected at `threshold` (`p < threshold`).
    pub fn rejects_at(&self, threshold: f64) -> bool {
        self.p_value < threshold
    }

    pub fn rejected(&self) -> bool {
        self.rejects_at(DEFAULT_GOF_THRESHOLD)
    }

    /// Number of replicates with `KS_b > KS_org`; `p_value · replicates`.
    pub fn exceedances(&self) -> usize {
        (self.p_value * self.replicates as f64).round() as usize
    }
}

/// `max |F_n(x) - F(x)|`, taken over both one-sided deviations at each order
/// statistic.
pub fn ks_statistic(data: &Dataset, spec: &DistributionSpec) -> f64 {
    ks_statistic_sorted(&data.sorted_values(), spec)
}

/// As [`ks_statistic`] for data already sorted ascending.
pub fn ks_statistic_sorted(sorted: &[f64], spec: &DistributionSpec) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = spec.cdf(x).unwrap_or(0.0);
            let i = i as f64;
            ((i + 1.0) / n - f).max(f - i / n)
        })
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0)
}

/// Parametric-bootstrap KS test of `family` on `data` with `replicates` draws.
///
/// The observed data are fitted with `config` as given, so `fitted` equals
/// the spec returned by [`crate::fit`] under the same config.
pub fn bootstrap_gof(
    family: Family,
    data: &Dataset,
    replicates: usize,
    seed: u64,
    config: &FitConfig,
) -> Result<GofResult, GofError> {
    if replicates < MIN_REPLICATES {
        return Err(GofError::TooFewReplicates(replicates));
    }
    let original = estimate(family, data, config)?;
    if !original.converged {
        return Err(GofError::NotConverged);
    }
    let fitted = original.spec;
    let ks_org = ks_statistic(data, &fitted);
    let n = data.len();

    let outcomes: Vec<Option<f64>> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| replicate_ks(family, &fitted, n, derive_seed(seed, i), config))
        .collect();

    let replicate_ks: Vec<f64> = outcomes.into_iter().flatten().collect();
    let refit_failures = replicates - replicate_ks.len();
    if refit_failures * 10 > replicates {
        return Err(GofError::TooManyFailures {
            failures: refit_failures,
            replicates,
        });
    }
    let exceed = replicate_ks.iter().filter(|&&ks| ks > ks_org).count();
    Ok(GofResult {
        fitted,
        ks_org,
        p_value: exceed as f64 / replicates as f64,
        replicates,
        replicate_ks: Some(replicate_ks),
        seed,
        refit_failures,
    })
}

fn replicate_ks(
    family: Family,
    fitted: &DistributionSpec,
    n: usize,
    seed: u64,
    config: &FitConfig,
) -> Option<f64> {
    let draws = fitted.sample(n, seed).ok()?;
    let synthetic = Dataset::from_values(draws).ok()?;
    let refit = estimate(family, &synthetic, &FitConfig { seed, ..*config }).ok()?;
    if !refit.converged {
        return None;
    }
    Some(ks_statistic(&synthetic, &refit.spec))
}
