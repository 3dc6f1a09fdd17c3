//! Maximum-likelihood fitting and testing of heavy-tailed size distributions.
//!
//! The crate covers the Davies (two-exponent), Singh-Maddala, Dagum and Fisk
//! families and the inference pipeline around them:
//!
//! - [`distributions`]: densities, cdfs, quantiles, sampling, moments, Gini and Lorenz curves.
//! - [`estimation`]: Nelder-Mead maximum likelihood with Hessian-based standard errors.
//! - [`gof`]: Kolmogorov-Smirnov statistic with parametric-bootstrap p-values.
//! - [`selection`]: Vuong non-nested test and Wald tests of the Fisk reductions.
//! - [`corpus`]: CSV ingestion and descriptive statistics.

// `!(x > 0.0)` deliberately treats NaN as invalid.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod distributions;
pub mod estimation;
pub mod gof;
pub mod quadrature;
pub mod rng;
pub mod selection;
pub mod special;

pub use corpus::{Dataset, Descriptives};
pub use distributions::{
    DagumParams, DaviesParams, DistributionError, DistributionSpec, Family, FiskParams,
    SinghMaddalaParams,
};
pub use estimation::{fit, FitConfig, FitError, FitResult};
pub use gof::{bootstrap_gof, ks_statistic, GofResult};
pub use selection::{vuong_test, wald_test, Restriction, Verdict, VuongResult, WaldResult};
