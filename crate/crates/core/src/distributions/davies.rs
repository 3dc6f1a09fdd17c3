//! Davies (two-exponent) law, defined through its quantile function
//! `Q(u) = K u^b / (1 - u)^a`.
//!
//! Neither the cdf nor the density has a closed form. Both are obtained by
//! inverting `Q` in logit coordinates: with `t = ln(u / (1 - u))`,
//!
//! ```text
//! ln Q(t) - ln K = (a - b) * softplus(t) + b * t
//! ```
//!
//! which is strictly increasing with slope `a u + b (1 - u)`, bounded between
//! `min(a, b)` and `max(a, b)`. That bound gives an immediate bracket for the
//! safeguarded Newton iteration, and `u`, `1 - u` and the density
//! `u (1 - u) / (x (a u + b (1 - u)))` all come out without cancellation.

use serde::{Deserialize, Serialize};

use super::{check_positive, DistributionError, SizeDistribution};
use crate::quadrature::integrate_unit;
use crate::special::{ln_beta, logistic, softplus};

const INVERSION_MAX_ITER: usize = 200;
const INVERSION_LOG_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DaviesParams {
    /// `K`, in units of the data.
    pub(crate) scale: f64,
    /// `b`, governs the lower tail (`Q(u) ~ u^b` near zero).
    pub(crate) lower_exponent: f64,
    /// `a`, governs the upper tail (`Q(u) ~ (1-u)^-a` near one).
    pub(crate) upper_exponent: f64,
}

impl DaviesParams {
    /// Parameters in the conventional `(K, b, a)` order.
    pub fn new(
        scale: f64,
        lower_exponent: f64,
        upper_exponent: f64,
    ) -> Result<Self, DistributionError> {
        check_positive("K", scale)?;
        check_positive("b", lower_exponent)?;
        check_positive("a", upper_exponent)?;
        Ok(Self {
            scale,
            lower_exponent,
            upper_exponent,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn lower_exponent(&self) -> f64 {
        self.lower_exponent
    }

    pub fn upper_exponent(&self) -> f64 {
        self.upper_exponent
    }

    /// Rank-frequency form `f(r) = K (N + 1 - r)^b / r^a` for the `r`-th
    /// largest of `sources` values.
    pub fn rank_frequency(&self, rank: u64, sources: u64) -> Result<f64, DistributionError> {
        if rank == 0 || rank > sources {
            return Err(DistributionError::RankOutOfRange { rank, sources });
        }
        let r = rank as f64;
        let tail = (sources + 1 - rank) as f64;
        Ok(self.scale * (self.lower_exponent * tail.ln() - self.upper_exponent * r.ln()).exp())
    }

    /// Solves `ln Q(t) = ln x` for the logit `t`, starting from `guess`.
    pub(crate) fn solve_logit(&self, ln_x: f64, guess: Option<f64>) -> f64 {
        let a = self.upper_exponent;
        let b = self.lower_exponent;
        let target = ln_x - self.scale.ln();
        let h = |t: f64| (a - b) * softplus(t) + b * t - target;
        let slope = |t: f64| (a - b) * logistic(t) + b;
        let min_slope = a.min(b);

        let mut t = guess.unwrap_or(if target > 0.0 { target / a } else { target / b });
        let mut residual = h(t);
        if residual == 0.0 || !residual.is_finite() {
            return t;
        }
        let (mut lo, mut hi) = if residual > 0.0 {
            (t - residual / min_slope, t)
        } else {
            (t, t - residual / min_slope)
        };

        for _ in 0..INVERSION_MAX_ITER {
            if residual.abs() <= INVERSION_LOG_TOL {
                break;
            }
            let mut next = t - residual / slope(t);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = (next - t).abs();
            t = next;
            residual = h(t);
            if residual > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            if step <= 1e-15 * t.abs().max(1.0) || hi - lo <= 1e-14 * t.abs().max(1.0) {
                break;
            }
        }
        t
    }

    /// Log-density given the already-solved logit of `x`.
    #[inline]
    fn ln_pdf_at_logit(&self, ln_x: f64, t: f64) -> f64 {
        let ln_u = -softplus(-t);
        let ln_v = -softplus(t);
        let u = logistic(t);
        let v = logistic(-t);
        ln_u + ln_v - ln_x - (self.upper_exponent * u + self.lower_exponent * v).ln()
    }

    /// Sum of log-densities, warm-starting each inversion from the previous
    /// solution. Fastest on sorted input but correct for any order.
    pub(crate) fn log_likelihood(&self, data: &[f64]) -> f64 {
        let mut guess = None;
        let mut total = 0.0;
        for &x in data {
            if !(x > 0.0) {
                return f64::NEG_INFINITY;
            }
            let ln_x = x.ln();
            let t = self.solve_logit(ln_x, guess);
            if !t.is_finite() {
                return f64::NEG_INFINITY;
            }
            guess = Some(t);
            total += self.ln_pdf_at_logit(ln_x, t);
        }
        if total.is_nan() {
            f64::NEG_INFINITY
        } else {
            total
        }
    }

    /// Mean of `X · F(X)`, i.e. `∫ u Q(u) du`, evaluated numerically.
    fn rank_weighted_mean(&self) -> f64 {
        integrate_unit(|ln_u, ln_v| ln_u + self.ln_quantile(ln_u, ln_v), 1e-13).value
    }
}

impl SizeDistribution for DaviesParams {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        let ln_x = x.ln();
        let t = self.solve_logit(ln_x, None);
        self.ln_pdf_at_logit(ln_x, t)
    }

    fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        logistic(self.solve_logit(x.ln(), None))
    }

    fn ln_quantile(&self, ln_u: f64, ln_v: f64) -> f64 {
        self.scale.ln() + self.lower_exponent * ln_u - self.upper_exponent * ln_v
    }

    fn moment(&self, order: f64) -> Result<f64, DistributionError> {
        let bound = 1.0 / self.upper_exponent;
        if !(order < bound) {
            return Err(DistributionError::MomentDoesNotExist { order, bound });
        }
        let ln_m = order * self.scale.ln()
            + ln_beta(
                1.0 + order * self.lower_exponent,
                1.0 - order * self.upper_exponent,
            );
        Ok(ln_m.exp())
    }

    fn gini(&self) -> Result<f64, DistributionError> {
        // G = E[(2F(X) - 1) X] / E[X]
        let mean = self.moment(1.0)?;
        Ok(2.0 * self.rank_weighted_mean() / mean - 1.0)
    }

    fn scale_parameter(&self) -> f64 {
        self.scale
    }

    fn with_scale(&self, scale: f64) -> Self {
        Self { scale, ..*self }
    }
}
