//! The four size-distribution families and their evaluation.
//!
//! | Family | Parameters | cdf | Upper tail |
//! |---|---|---|---|
//! | Davies | K, b, a | by inversion of `K u^b / (1-u)^a` | `x^(-1/a)` |
//! | Singh-Maddala | a, b, q | `1 - [1 + (x/b)^a]^-q` | `x^(-aq)` |
//! | Dagum | a, b, p | `[1 + (x/b)^-a]^-p` | `x^(-a)` |
//! | Fisk | a, b | `1 / (1 + (x/b)^-a)` | `x^(-a)` |
//!
//! Fisk is the common special case `q = 1` / `p = 1` and is also the Davies
//! law with `a = b`. [`DistributionSpec`] is the tagged union passed between
//! the estimation, goodness-of-fit and selection modules.
//!
//! Moments of the Davies law exist only for orders `s` with `s·a < 1`, which
//! follows from integrating the quantile function; there is no clamping.

mod burr;
mod davies;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use burr::{DagumParams, FiskParams, SinghMaddalaParams};
pub use davies::DaviesParams;

use crate::quadrature::integrate_interval;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("parameter {name} must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("{family} takes {expected} parameters, got {got}")]
    ParameterCount {
        family: Family,
        expected: usize,
        got: usize,
    },
    #[error("probability {0} outside (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("x = {0} outside the support (0, inf)")]
    OutsideSupport(f64),
    #[error("moment of order {order} does not exist (order must be below {bound})")]
    MomentDoesNotExist { order: f64, bound: f64 },
    #[error("moment order must be positive, got {0}")]
    InvalidOrder(f64),
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("rank {rank} outside 1..={sources}")]
    RankOutOfRange { rank: u64, sources: u64 },
    #[error("Lorenz grid point {0} outside [0, 1]")]
    GridOutOfRange(f64),
    #[error("unknown family '{0}' (expected davies, sm, dagum or fisk)")]
    UnknownFamily(String),
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<(), DistributionError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(DistributionError::InvalidParameter { name, value })
    }
}

/// Per-family evaluation primitives. Inputs are assumed valid; the checked
/// public API lives on [`DistributionSpec`].
pub trait SizeDistribution {
    /// Log-density; `-inf` outside the support.
    fn ln_pdf(&self, x: f64) -> f64;
    /// Cumulative distribution function; 0 for `x <= 0`.
    fn cdf(&self, x: f64) -> f64;
    /// `ln Q(u)` given `ln u` and `ln(1 - u)`.
    fn ln_quantile(&self, ln_u: f64, ln_v: f64) -> f64;
    /// Raw moment `E[X^order]`.
    fn moment(&self, order: f64) -> Result<f64, DistributionError>;
    fn gini(&self) -> Result<f64, DistributionError>;
    fn scale_parameter(&self) -> f64;
    fn with_scale(&self, scale: f64) -> Self
    where
        Self: Sized;

    fn quantile(&self, u: f64) -> f64 {
        self.ln_quantile(u.ln(), (-u).ln_1p()).exp()
    }
}

/// Family tag, independent of parameter values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "davies")]
    Davies,
    #[serde(rename = "sm")]
    SinghMaddala,
    #[serde(rename = "dagum")]
    Dagum,
    #[serde(rename = "fisk")]
    Fisk,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Davies,
        Family::SinghMaddala,
        Family::Dagum,
        Family::Fisk,
    ];

    /// Parameter labels in canonical order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            Family::Davies => &["K", "b", "a"],
            Family::SinghMaddala => &["a", "b", "q"],
            Family::Dagum => &["a", "b", "p"],
            Family::Fisk => &["a", "b"],
        }
    }

    pub fn parameter_count(self) -> usize {
        self.parameter_names().len()
    }

    /// Index of the scale parameter in the canonical order.
    pub fn scale_index(self) -> usize {
        match self {
            Family::Davies => 0,
            _ => 1,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Davies => "davies",
            Family::SinghMaddala => "sm",
            Family::Dagum => "dagum",
            Family::Fisk => "fisk",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Family::Davies => "Davies (two-exponent)",
            Family::SinghMaddala => "Singh-Maddala",
            Family::Dagum => "Dagum",
            Family::Fisk => "Fisk",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = DistributionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "davies" | "two-exponent" | "twoexp" => Ok(Family::Davies),
            "sm" | "singh-maddala" | "singhmaddala" | "burr12" => Ok(Family::SinghMaddala),
            "dagum" | "burr3" => Ok(Family::Dagum),
            "fisk" | "log-logistic" | "loglogistic" => Ok(Family::Fisk),
            _ => Err(DistributionError::UnknownFamily(s.to_string())),
        }
    }
}

/// A fully parameterized member of one of the four families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "SpecRepr", try_from = "SpecRepr")]
pub enum DistributionSpec {
    Davies(DaviesParams),
    SinghMaddala(SinghMaddalaParams),
    Dagum(DagumParams),
    Fisk(FiskParams),
}

macro_rules! dispatch {
    ($self:expr, $d:ident => $body:expr) => {
        match $self {
            DistributionSpec::Davies($d) => $body,
            DistributionSpec::SinghMaddala($d) => $body,
            DistributionSpec::Dagum($d) => $body,
            DistributionSpec::Fisk($d) => $body,
        }
    };
}

impl DistributionSpec {
    pub fn family(&self) -> Family {
        match self {
            DistributionSpec::Davies(_) => Family::Davies,
            DistributionSpec::SinghMaddala(_) => Family::SinghMaddala,
            DistributionSpec::Dagum(_) => Family::Dagum,
            DistributionSpec::Fisk(_) => Family::Fisk,
        }
    }

    /// Builds a spec from parameters in the family's canonical order
    /// (see [`Family::parameter_names`]).
    pub fn from_params(family: Family, params: &[f64]) -> Result<Self, DistributionError> {
        if params.len() != family.parameter_count() {
            return Err(DistributionError::ParameterCount {
                family,
                expected: family.parameter_count(),
                got: params.len(),
            });
        }
        Ok(match family {
            Family::Davies => {
                DistributionSpec::Davies(DaviesParams::new(params[0], params[1], params[2])?)
            }
            Family::SinghMaddala => DistributionSpec::SinghMaddala(SinghMaddalaParams::new(
                params[0], params[1], params[2],
            )?),
            Family::Dagum => {
                DistributionSpec::Dagum(DagumParams::new(params[0], params[1], params[2])?)
            }
            Family::Fisk => DistributionSpec::Fisk(FiskParams::new(params[0], params[1])?),
        })
    }

    /// Parameters in canonical order.
    pub fn params(&self) -> Vec<f64> {
        match self {
            DistributionSpec::Davies(d) => vec![d.scale, d.lower_exponent, d.upper_exponent],
            DistributionSpec::SinghMaddala(d) => vec![d.shape, d.scale, d.upper_shape],
            DistributionSpec::Dagum(d) => vec![d.shape, d.scale, d.lower_shape],
            DistributionSpec::Fisk(d) => vec![d.shape, d.scale],
        }
    }

    pub fn scale(&self) -> f64 {
        dispatch!(self, d => d.scale_parameter())
    }

    /// The law of `c·X`.
    pub fn rescaled(&self, factor: f64) -> Result<Self, DistributionError> {
        check_positive("scale factor", factor)?;
        let scale = self.scale() * factor;
        check_positive("scale", scale)?;
        Ok(match self {
            DistributionSpec::Davies(d) => DistributionSpec::Davies(d.with_scale(scale)),
            DistributionSpec::SinghMaddala(d) => {
                DistributionSpec::SinghMaddala(d.with_scale(scale))
            }
            DistributionSpec::Dagum(d) => DistributionSpec::Dagum(d.with_scale(scale)),
            DistributionSpec::Fisk(d) => DistributionSpec::Fisk(d.with_scale(scale)),
        })
    }

    pub fn quantile(&self, u: f64) -> Result<f64, DistributionError> {
        if !(u > 0.0 && u < 1.0) {
            return Err(DistributionError::ProbabilityOutOfRange(u));
        }
        Ok(dispatch!(self, d => d.quantile(u)))
    }

    /// Quantile from `ln u` and `ln(1 - u)`; exact for `u` within
    /// machine epsilon of either end.
    pub fn ln_quantile(&self, ln_u: f64, ln_v: f64) -> f64 {
        dispatch!(self, d => d.ln_quantile(ln_u, ln_v))
    }

    pub fn cdf(&self, x: f64) -> Result<f64, DistributionError> {
        check_support(x)?;
        Ok(dispatch!(self, d => d.cdf(x)))
    }

    pub fn pdf(&self, x: f64) -> Result<f64, DistributionError> {
        Ok(self.ln_pdf(x)?.exp())
    }

    pub fn ln_pdf(&self, x: f64) -> Result<f64, DistributionError> {
        check_support(x)?;
        Ok(dispatch!(self, d => d.ln_pdf(x)))
    }

    /// Sum of log-densities. Never fails: any non-finite intermediate yields
    /// `-inf`, which the optimizer treats as an infeasible point.
    pub fn log_likelihood(&self, data: &[f64]) -> f64 {
        let total = match self {
            DistributionSpec::Davies(d) => d.log_likelihood(data),
            _ => {
                let mut total = 0.0;
                for &x in data {
                    if !(x > 0.0) {
                        return f64::NEG_INFINITY;
                    }
                    total += dispatch!(self, d => d.ln_pdf(x));
                }
                total
            }
        };
        if total.is_nan() || total == f64::INFINITY {
            f64::NEG_INFINITY
        } else {
            total
        }
    }

    /// Per-observation log-densities, in input order.
    pub fn pointwise_ln_pdf(&self, data: &[f64]) -> Vec<f64> {
        data.iter()
            .map(|&x| dispatch!(self, d => d.ln_pdf(x)))
            .collect()
    }

    /// `n` inverse-transform draws from a ChaCha8 stream seeded with `seed`,
    /// in draw order.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>, DistributionError> {
        if n == 0 {
            return Err(DistributionError::EmptySample);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                dispatch!(self, d => d.quantile(u))
            })
            .collect())
    }

    /// Raw moment `E[X^order]` for positive `order`.
    pub fn moment(&self, order: f64) -> Result<f64, DistributionError> {
        if !(order > 0.0) || !order.is_finite() {
            return Err(DistributionError::InvalidOrder(order));
        }
        dispatch!(self, d => d.moment(order))
    }

    pub fn mean(&self) -> Result<f64, DistributionError> {
        self.moment(1.0)
    }

    /// Gini index: closed form for the Burr families, quantile-domain
    /// integration for Davies.
    pub fn gini(&self) -> Result<f64, DistributionError> {
        dispatch!(self, d => d.gini())
    }

    /// Lorenz curve `L(u) = (1/μ) ∫₀ᵘ Q(t) dt` at each grid point.
    pub fn lorenz_curve(&self, grid: &[f64]) -> Result<Vec<(f64, f64)>, DistributionError> {
        if let Some(&bad) = grid.iter().find(|u| !(0.0..=1.0).contains(*u)) {
            return Err(DistributionError::GridOutOfRange(bad));
        }
        let mean = self.mean()?;
        let ln_q = |ln_u: f64, ln_v: f64| self.ln_quantile(ln_u, ln_v);
        Ok(grid
            .iter()
            .map(|&u| {
                let l = if u == 0.0 {
                    0.0
                } else if u == 1.0 {
                    1.0
                } else if u <= 0.5 {
                    integrate_interval(ln_q, 0.0, u, 1e-13).value / mean
                } else {
                    1.0 - integrate_interval(ln_q, u, 1.0, 1e-13).value / mean
                };
                (u, l.clamp(0.0, u))
            })
            .collect())
    }
}

fn check_support(x: f64) -> Result<(), DistributionError> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(DistributionError::OutsideSupport(x))
    }
}

impl From<DaviesParams> for DistributionSpec {
    fn from(p: DaviesParams) -> Self {
        DistributionSpec::Davies(p)
    }
}

impl From<SinghMaddalaParams> for DistributionSpec {
    fn from(p: SinghMaddalaParams) -> Self {
        DistributionSpec::SinghMaddala(p)
    }
}

impl From<DagumParams> for DistributionSpec {
    fn from(p: DagumParams) -> Self {
        DistributionSpec::Dagum(p)
    }
}

impl From<FiskParams> for DistributionSpec {
    fn from(p: FiskParams) -> Self {
        DistributionSpec::Fisk(p)
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family().tag())?;
        for (i, (name, value)) in self
            .family()
            .parameter_names()
            .iter()
            .zip(self.params())
            .enumerate()
        {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={value}")?;
        }
        f.write_str(")")
    }
}

/// Serialized form: `{"family": "dagum", "parameters": {"a": .., "b": .., "p": ..}}`.
#[derive(Serialize, Deserialize)]
struct SpecRepr {
    family: Family,
    parameters: BTreeMap<String, f64>,
}

impl From<DistributionSpec> for SpecRepr {
    fn from(spec: DistributionSpec) -> Self {
        let family = spec.family();
        let parameters = family
            .parameter_names()
            .iter()
            .map(|n| n.to_string())
            .zip(spec.params())
            .collect();
        SpecRepr { family, parameters }
    }
}

impl TryFrom<SpecRepr> for DistributionSpec {
    type Error = DistributionError;

    fn try_from(repr: SpecRepr) -> Result<Self, Self::Error> {
        let names = repr.family.parameter_names();
        if repr.parameters.len() != names.len() {
            return Err(DistributionError::ParameterCount {
                family: repr.family,
                expected: names.len(),
                got: repr.parameters.len(),
            });
        }
        let params = names
            .iter()
            .map(|n| {
                repr.parameters
                    .get(*n)
                    .copied()
                    .ok_or(DistributionError::InvalidParameter {
                        name: n,
                        value: f64::NAN,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        DistributionSpec::from_params(repr.family, &params)
    }
}

/// A point of the rank-frequency form of the Davies law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankFrequencyPoint {
    pub rank: u64,
    pub sources: u64,
    pub value: f64,
}

/// `f(r) = K (N + 1 - r)^b / r^a`.
pub fn rank_frequency(
    params: &DaviesParams,
    rank: u64,
    sources: u64,
) -> Result<RankFrequencyPoint, DistributionError> {
    Ok(RankFrequencyPoint {
        rank,
        sources,
        value: params.rank_frequency(rank, sources)?,
    })
}

#[cfg(test)]
mod tests;
