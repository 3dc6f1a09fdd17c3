//! Burr-family laws with closed-form cdf and density: Singh-Maddala
//! (Burr XII), Dagum (Burr III) and their common special case Fisk
//! (log-logistic).
//!
//! Everything is written in terms of `z = ln(x / b)` and `softplus`, so the
//! optimizer can probe extreme shapes without overflow.

use serde::{Deserialize, Serialize};

use super::{check_positive, DistributionError, SizeDistribution};
use crate::special::{ln_gamma, logistic, softplus};

/// `ln(e^y - 1)` for `y > 0`.
#[inline]
fn ln_expm1(y: f64) -> f64 {
    if y > 30.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    }
}

/// `ln(-ln x)` given `ln x` and `ln(1 - x)`, accurate as `x -> 1`.
#[inline]
fn ln_neg_ln(ln_x: f64, ln_complement: f64) -> f64 {
    if ln_complement < -20.0 {
        // -ln(1 - c) = c (1 + c/2 + ...)
        ln_complement + 0.5 * ln_complement.exp()
    } else {
        (-ln_x).ln()
    }
}

/// `ln(e^y - 1)` given `ln y`.
#[inline]
fn ln_expm1_of_exp(ln_y: f64) -> f64 {
    if ln_y < -20.0 {
        ln_y + 0.5 * ln_y.exp()
    } else {
        ln_expm1(ln_y.exp())
    }
}

/// Singh-Maddala: `F(x) = 1 - [1 + (x/b)^a]^-q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinghMaddalaParams {
    pub(crate) shape: f64,
    pub(crate) scale: f64,
    pub(crate) upper_shape: f64,
}

impl SinghMaddalaParams {
    /// Parameters in the conventional `(a, b, q)` order.
    pub fn new(shape: f64, scale: f64, upper_shape: f64) -> Result<Self, DistributionError> {
        check_positive("a", shape)?;
        check_positive("b", scale)?;
        check_positive("q", upper_shape)?;
        Ok(Self {
            shape,
            scale,
            upper_shape,
        })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn upper_shape(&self) -> f64 {
        self.upper_shape
    }

    /// Law of `1/X`: `Dagum(a, 1/b, q)`.
    pub fn reciprocal_dual(&self) -> DagumParams {
        DagumParams {
            shape: self.shape,
            scale: self.scale.recip(),
            lower_shape: self.upper_shape,
        }
    }
}

impl SizeDistribution for SinghMaddalaParams {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        let (a, q) = (self.shape, self.upper_shape);
        let z = (x / self.scale).ln();
        a.ln() + q.ln() - x.ln() + a * z - (q + 1.0) * softplus(a * z)
    }

    fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let z = (x / self.scale).ln();
        -(-self.upper_shape * softplus(self.shape * z)).exp_m1()
    }

    fn ln_quantile(&self, ln_u: f64, ln_v: f64) -> f64 {
        // b [(1-u)^(-1/q) - 1]^(1/a)
        let ln_y = ln_neg_ln(ln_v, ln_u) - self.upper_shape.ln();
        self.scale.ln() + ln_expm1_of_exp(ln_y) / self.shape
    }

    fn moment(&self, order: f64) -> Result<f64, DistributionError> {
        let (a, q) = (self.shape, self.upper_shape);
        let bound = a * q;
        if !(order < bound) {
            return Err(DistributionError::MomentDoesNotExist { order, bound });
        }
        let r = order / a;
        Ok((order * self.scale.ln() + ln_gamma(1.0 + r) + ln_gamma(q - r) - ln_gamma(q)).exp())
    }

    fn gini(&self) -> Result<f64, DistributionError> {
        self.moment(1.0)?;
        let (a, q) = (self.shape, self.upper_shape);
        let ratio =
            ln_gamma(q) + ln_gamma(2.0 * q - 1.0 / a) - ln_gamma(q - 1.0 / a) - ln_gamma(2.0 * q);
        Ok(-ratio.exp_m1())
    }

    fn scale_parameter(&self) -> f64 {
        self.scale
    }

    fn with_scale(&self, scale: f64) -> Self {
        Self { scale, ..*self }
    }
}

/// Dagum: `F(x) = [1 + (x/b)^-a]^-p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DagumParams {
    pub(crate) shape: f64,
    pub(crate) scale: f64,
    pub(crate) lower_shape: f64,
}

impl DagumParams {
    /// Parameters in the conventional `(a, b, p)` order.
    pub fn new(shape: f64, scale: f64, lower_shape: f64) -> Result<Self, DistributionError> {
        check_positive("a", shape)?;
        check_positive("b", scale)?;
        check_positive("p", lower_shape)?;
        Ok(Self {
            shape,
            scale,
            lower_shape,
        })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn lower_shape(&self) -> f64 {
        self.lower_shape
    }

    /// Law of `1/X`: `SM(a, 1/b, p)`.
    pub fn reciprocal_dual(&self) -> SinghMaddalaParams {
        SinghMaddalaParams {
            shape: self.shape,
            scale: self.scale.recip(),
            upper_shape: self.lower_shape,
        }
    }
}

impl SizeDistribution for DagumParams {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        let (a, p) = (self.shape, self.lower_shape);
        let z = (x / self.scale).ln();
        a.ln() + p.ln() - x.ln() + a * p * z - (p + 1.0) * softplus(a * z)
    }

    fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let z = (x / self.scale).ln();
        (-self.lower_shape * softplus(-self.shape * z)).exp()
    }

    fn ln_quantile(&self, ln_u: f64, ln_v: f64) -> f64 {
        // b [u^(-1/p) - 1]^(-1/a)
        let ln_y = ln_neg_ln(ln_u, ln_v) - self.lower_shape.ln();
        self.scale.ln() - ln_expm1_of_exp(ln_y) / self.shape
    }

    fn moment(&self, order: f64) -> Result<f64, DistributionError> {
        let (a, p) = (self.shape, self.lower_shape);
        if !(order < a) {
            return Err(DistributionError::MomentDoesNotExist { order, bound: a });
        }
        let r = order / a;
        Ok((order * self.scale.ln() + ln_gamma(p + r) + ln_gamma(1.0 - r) - ln_gamma(p)).exp())
    }

    fn gini(&self) -> Result<f64, DistributionError> {
        self.moment(1.0)?;
        let (a, p) = (self.shape, self.lower_shape);
        let ratio =
            ln_gamma(p) + ln_gamma(2.0 * p + 1.0 / a) - ln_gamma(2.0 * p) - ln_gamma(p + 1.0 / a);
        Ok(ratio.exp_m1())
    }

    fn scale_parameter(&self) -> f64 {
        self.scale
    }

    fn with_scale(&self, scale: f64) -> Self {
        Self { scale, ..*self }
    }
}

/// Fisk (log-logistic): `F(x) = 1 / (1 + (x/b)^-a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiskParams {
    pub(crate) shape: f64,
    pub(crate) scale: f64,
}

impl FiskParams {
    /// Parameters in the conventional `(a, b)` order.
    pub fn new(shape: f64, scale: f64) -> Result<Self, DistributionError> {
        check_positive("a", shape)?;
        check_positive("b", scale)?;
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn as_singh_maddala(&self) -> SinghMaddalaParams {
        SinghMaddalaParams {
            shape: self.shape,
            scale: self.scale,
            upper_shape: 1.0,
        }
    }

    pub fn as_dagum(&self) -> DagumParams {
        DagumParams {
            shape: self.shape,
            scale: self.scale,
            lower_shape: 1.0,
        }
    }
}

impl SizeDistribution for FiskParams {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        let a = self.shape;
        let z = (x / self.scale).ln();
        a.ln() - x.ln() + a * z - 2.0 * softplus(a * z)
    }

    fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        logistic(self.shape * (x / self.scale).ln())
    }

    fn ln_quantile(&self, ln_u: f64, ln_v: f64) -> f64 {
        self.scale.ln() + (ln_u - ln_v) / self.shape
    }

    fn moment(&self, order: f64) -> Result<f64, DistributionError> {
        let a = self.shape;
        if !(order < a) {
            return Err(DistributionError::MomentDoesNotExist { order, bound: a });
        }
        let angle = std::f64::consts::PI * order / a;
        Ok(self.scale.powf(order) * angle / angle.sin())
    }

    fn gini(&self) -> Result<f64, DistributionError> {
        self.moment(1.0)?;
        Ok(self.shape.recip())
    }

    fn scale_parameter(&self) -> f64 {
        self.scale
    }

    fn with_scale(&self, scale: f64) -> Self {
        Self { scale, ..*self }
    }
}
