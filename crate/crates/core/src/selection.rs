//! Model comparison: the Vuong test for non-nested models and Wald tests of
//! the Fisk (log-logistic) reduction within each three-parameter family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Dataset;
use crate::distributions::{DistributionSpec, Family};
use crate::estimation::FitResult;
use crate::special::{chi_square_1_sf, normal_two_sided};

pub const DEFAULT_THRESHOLD: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectionError {
    #[error("the Vuong test needs at least 2 observations, got {0}")]
    TooFewObservations(usize),
    #[error("pointwise log-likelihood differences have zero variance; the models are not distinguishable by this test")]
    Degenerate,
    #[error("log-density is not finite for observation {0}")]
    NonFiniteDensity(usize),
    #[error("threshold must be in (0, 1), got {0}")]
    InvalidThreshold(f64),
    #[error("restriction {restriction} does not apply to a {family} fit")]
    UnsupportedRestriction {
        restriction: Restriction,
        family: Family,
    },
    #[error("fit has no covariance matrix")]
    MissingCovariance,
    #[error("fit did not converge")]
    NotConverged,
    #[error("variance of the restriction is not positive: {0}")]
    NonPositiveVariance(f64),
    #[error("unknown restriction '{0}' (expected a=b, q=1 or p=1)")]
    UnknownRestriction(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FavorsFirst,
    FavorsSecond,
    Indistinguishable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FavorsFirst => "favors_first",
            Verdict::FavorsSecond => "favors_second",
            Verdict::Indistinguishable => "indistinguishable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VuongResult {
    /// `Σ [ln f₁(xᵢ) - ln f₂(xᵢ)]`; positive when the first model fits better.
    pub lr: f64,
    /// Sample standard deviation (n - 1) of the pointwise differences.
    pub sigma: f64,
    /// `LR / (√n σ)`, asymptotically standard normal under equal fit.
    pub nlr: f64,
    /// Two-sided normal p-value of `nlr`.
    pub p_value: f64,
    pub verdict: Verdict,
    pub n: usize,
    pub threshold: f64,
}

/// Vuong test from per-observation log-density differences `ln f₁ - ln f₂`.
pub fn vuong_from_differences(
    diffs: &[f64],
    threshold: f64,
) -> Result<VuongResult, SelectionError> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(SelectionError::InvalidThreshold(threshold));
    }
    let n = diffs.len();
    if n < 2 {
        return Err(SelectionError::TooFewObservations(n));
    }
    if let Some(i) = diffs.iter().position(|d| !d.is_finite()) {
        return Err(SelectionError::NonFiniteDensity(i));
    }
    let nf = n as f64;
    let lr: f64 = diffs.iter().sum();
    let mean = lr / nf;
    let sigma = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
    if !(sigma > 0.0) {
        return Err(SelectionError::Degenerate);
    }
    let nlr = lr / (nf.sqrt() * sigma);
    let p_value = normal_two_sided(nlr);
    let verdict = if p_value >= threshold {
        Verdict::Indistinguishable
    } else if lr > 0.0 {
        Verdict::FavorsFirst
    } else {
        Verdict::FavorsSecond
    };
    Ok(VuongResult {
        lr,
        sigma,
        nlr,
        p_value,
        verdict,
        n,
        threshold,
    })
}

/// Compares two fitted models on the same data.
///
/// No correction is applied for differing parameter counts.
pub fn vuong_test(
    data: &Dataset,
    first: &DistributionSpec,
    second: &DistributionSpec,
    threshold: f64,
) -> Result<VuongResult, SelectionError> {
    let l1 = first.pointwise_ln_pdf(data.values());
    let l2 = second.pointwise_ln_pdf(data.values());
    let diffs: Vec<f64> = l1.iter().zip(&l2).map(|(a, b)| a - b).collect();
    vuong_from_differences(&diffs, threshold)
}

/// Single-parameter restrictions under which a family reduces to Fisk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Restriction {
    /// Davies with `a = b`.
    #[serde(rename = "a=b")]
    EqualExponents,
    /// Singh-Maddala with `q = 1`.
    #[serde(rename = "q=1")]
    UnitUpperShape,
    /// Dagum with `p = 1`.
    #[serde(rename = "p=1")]
    UnitLowerShape,
}

impl Restriction {
    pub fn family(self) -> Family {
        match self {
            Restriction::EqualExponents => Family::Davies,
            Restriction::UnitUpperShape => Family::SinghMaddala,
            Restriction::UnitLowerShape => Family::Dagum,
        }
    }

    /// The Fisk restriction for `family`, if it has one.
    pub fn for_family(family: Family) -> Option<Self> {
        match family {
            Family::Davies => Some(Restriction::EqualExponents),
            Family::SinghMaddala => Some(Restriction::UnitUpperShape),
            Family::Dagum => Some(Restriction::UnitLowerShape),
            Family::Fisk => None,
        }
    }

    /// `g(θ)` and its gradient, in the family's canonical parameter order.
    fn constraint(self, params: &[f64]) -> (f64, Vec<f64>) {
        match self {
            // (K, b, a): g = a - b
            Restriction::EqualExponents => (params[2] - params[1], vec![0.0, -1.0, 1.0]),
            // (a, b, q) / (a, b, p): g = last - 1
            Restriction::UnitUpperShape | Restriction::UnitLowerShape => {
                (params[2] - 1.0, vec![0.0, 0.0, 1.0])
            }
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Restriction::EqualExponents => "a=b",
            Restriction::UnitUpperShape => "q=1",
            Restriction::UnitLowerShape => "p=1",
        })
    }
}

impl FromStr for Restriction {
    type Err = SelectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace(' ', "").as_str() {
            "a=b" => Ok(Restriction::EqualExponents),
            "q=1" => Ok(Restriction::UnitUpperShape),
            "p=1" => Ok(Restriction::UnitLowerShape),
            _ => Err(SelectionError::UnknownRestriction(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaldResult {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
    pub restriction: Restriction,
    /// `g(θ̂)`.
    pub discrepancy: f64,
    /// Delta-method standard error of `g(θ̂)`.
    pub std_error: f64,
}

impl WaldResult {
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Wald test `W = g(θ̂)² / (∇g Σ ∇gᵀ)` against chi-square(1).
pub fn wald_test(fit: &FitResult, restriction: Restriction) -> Result<WaldResult, SelectionError> {
    let family = fit.family();
    if restriction.family() != family {
        return Err(SelectionError::UnsupportedRestriction {
            restriction,
            family,
        });
    }
    if !fit.converged {
        return Err(SelectionError::NotConverged);
    }
    let cov = fit
        .covariance
        .as_ref()
        .ok_or(SelectionError::MissingCovariance)?;
    let (g, grad) = restriction.constraint(&fit.params());
    let mut variance = 0.0;
    for (i, gi) in grad.iter().enumerate() {
        for (j, gj) in grad.iter().enumerate() {
            variance += gi * cov[i][j] * gj;
        }
    }
    if !(variance > 0.0) {
        return Err(SelectionError::NonPositiveVariance(variance));
    }
    let statistic = g * g / variance;
    Ok(WaldResult {
        statistic,
        dof: 1,
        p_value: chi_square_1_sf(statistic),
        restriction,
        discrepancy: g,
        std_error: variance.sqrt(),
    })
}
