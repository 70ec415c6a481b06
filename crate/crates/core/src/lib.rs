//! Heteroskedasticity-robust least squares for heterogeneous time series.
//!
//! The crate covers four estimators that share one sandwich covariance
//! construction:
//!
//! * [`ols`]: fixed-parameter OLS with robust (HC0-type) and standard
//!   covariance matrices, t-tests and confidence intervals.
//! * [`tv`]: kernel-weighted time-varying OLS with pointwise robust bands.
//! * [`missing`]: the same estimators on partially observed samples.
//! * AR(p) estimation, which is plain [`ols::fit_ols`] on lagged regressors
//!   (see [`dgp::catalog`] entry `ar2`).
//!
//! Around them sit a data-generating-process catalog ([`dgp`]), a Monte
//! Carlo harness ([`mc`]), residual correlation tests ([`diagnostics`]),
//! the returns pipeline ([`empirical`]) and the command-line layer ([`cli`]).
//!
//! All time indices in the public API are 0-based; formulas that use `t/n`
//! evaluate them at the 1-based position `t + 1`.

pub mod cli;
pub mod dgp;
pub mod diagnostics;
pub mod empirical;
pub mod error;
mod linalg;
pub mod mc;
pub mod missing;
pub mod ols;
pub mod sample;
pub mod stats;
pub mod tv;

pub use error::{Error, Result};
pub use missing::{MissingForm, MissingMask};
pub use ols::{fit_ols, test_coefficient, CoefficientTest, FixedFit, Flavor};
pub use sample::RegressionSample;
pub use tv::{fit_tv, fit_tv_with, KernelKind, KernelSpec, TvFit};
