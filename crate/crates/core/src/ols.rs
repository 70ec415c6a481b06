//! Fixed-parameter OLS with robust and standard covariance estimators.
//!
//! The robust covariance is the HC0 sandwich
//! `S_zz^{-1} (sum z_t z_t' u_t^2) S_zz^{-1}` with no small-sample
//! correction; the standard one is `S_zz^{-1} * mean(u_t^2)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{add_outer, diag_sqrt, residual, sandwich, solve_least_squares};
use crate::sample::RegressionSample;
use crate::stats::{critical_value, z_975};

#[derive(Debug, Clone, PartialEq)]
pub struct FixedFit {
    pub beta_hat: DVector<f64>,
    /// `y_t - beta_hat' z_t` for every row used in the fit.
    pub residuals: DVector<f64>,
    /// `sum z_t z_t'`.
    pub s_zz: DMatrix<f64>,
    pub cov_robust: DMatrix<f64>,
    pub cov_standard: DMatrix<f64>,
    pub se_robust: DVector<f64>,
    pub se_standard: DVector<f64>,
    /// Number of observations behind `sigma2` (n, or N under a mask).
    pub n_obs: usize,
    /// `sum u_t^2 / n_obs`.
    pub sigma2: f64,
}

impl FixedFit {
    pub fn p(&self) -> usize {
        self.beta_hat.len()
    }

    pub fn se(&self, flavor: Flavor) -> &DVector<f64> {
        match flavor {
            Flavor::Robust => &self.se_robust,
            Flavor::Standard => &self.se_standard,
        }
    }
}

/// OLS of `y` on `Z`.
pub fn fit_ols(sample: &RegressionSample) -> Result<FixedFit> {
    fit_design(sample.z(), sample.y(), sample.n())
}

/// Core fit; `n_obs` is the divisor of the residual variance.
pub(crate) fn fit_design(z: &DMatrix<f64>, y: &DVector<f64>, n_obs: usize) -> Result<FixedFit> {
    let (n, p) = z.shape();
    let ls = solve_least_squares(z.clone(), y.clone())?;
    let beta: Vec<f64> = ls.coef.iter().copied().collect();

    let mut s_zz = DMatrix::zeros(p, p);
    let mut meat = DMatrix::zeros(p, p);
    let mut residuals = DVector::zeros(n);
    let mut row = vec![0.0; p];
    let mut ssr = 0.0;
    for t in 0..n {
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = z[(t, k)];
        }
        let u = residual(y[t], &row, &beta);
        residuals[t] = u;
        ssr += u * u;
        add_outer(&mut s_zz, &row, 1.0);
        add_outer(&mut meat, &row, u * u);
    }

    let cov_robust = sandwich(&ls.gram_inv, &meat);
    let sigma2 = ssr / n_obs as f64;
    let cov_standard = &ls.gram_inv * sigma2;
    Ok(FixedFit {
        se_robust: diag_sqrt(&cov_robust),
        se_standard: diag_sqrt(&cov_standard),
        beta_hat: ls.coef,
        residuals,
        s_zz,
        cov_robust,
        cov_standard,
        n_obs,
        sigma2,
    })
}

/// Which standard error a test or interval uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Robust,
    Standard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTest {
    /// 0-based coefficient index.
    pub index: usize,
    pub null_value: f64,
    pub estimate: f64,
    pub t_stat: f64,
    pub se_used: f64,
    pub flavor: Flavor,
    pub level: f64,
    /// `|t| > z_{(1+level)/2}`.
    pub reject: bool,
    /// `|t| > z_{0.975}`.
    pub reject_5pct: bool,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

/// Two-sided normal t-test of `beta_k = beta0` with a `level` confidence interval.
///
/// Rejection uses a strict inequality, so `|t|` exactly at the critical
/// value does not reject.
pub fn test_coefficient(fit: &FixedFit, k: usize, beta0: f64, flavor: Flavor, level: f64) -> Result<CoefficientTest> {
    let p = fit.p();
    if k >= p {
        return Err(Error::IndexOutOfRange { index: k, p });
    }
    let z = critical_value(level)?;
    let se = fit.se(flavor)[k];
    if se <= 0.0 {
        return Err(Error::ZeroStandardError { index: k });
    }
    let estimate = fit.beta_hat[k];
    let t_stat = (estimate - beta0) / se;
    Ok(CoefficientTest {
        index: k,
        null_value: beta0,
        estimate,
        t_stat,
        se_used: se,
        flavor,
        level,
        reject: t_stat.abs() > z,
        reject_5pct: t_stat.abs() > z_975(),
        ci_lower: estimate - z * se,
        ci_upper: estimate + z * se,
    })
}

/// Whether the interval `estimate +- z * se` contains `truth`.
///
/// A zero-width interval covers only an exact hit.
pub fn covers(estimate: f64, se: f64, z: f64, truth: f64) -> bool {
    (estimate - truth).abs() <= z * se
}
