//! Kernel-weighted time-varying OLS.
//!
//! At each time point `t` the coefficient vector is the weighted least
//! squares solution with weights `b_tj = K(|t - j| / H)`. The robust
//! covariance at `t` is `S_t^{-1} (sum b_tj^2 z_j z_j' u_j^2) S_t^{-1}` with
//! `S_t = sum b_tj z_j z_j'` and `u_j = y_j - beta_j' z_j`, i.e. each residual
//! uses the estimate at its own time point.
//!
//! Windows whose weighted design is rank deficient are flagged and the path
//! continues; their residuals are left out of neighbouring sandwiches.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_outer, diag_sqrt, residual, sandwich, solve_least_squares};
use crate::sample::RegressionSample;
use crate::stats::critical_value;

/// Gaussian weights below this value are dropped from the window.
pub const GAUSSIAN_WEIGHT_FLOOR: f64 = 1e-15;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// Standard normal density.
    Gaussian,
    /// `1` on `[0, 1]`, else `0`.
    Indicator,
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Self::Gaussian),
            "indicator" | "uniform" | "flat" => Ok(Self::Indicator),
            other => Err(Error::InvalidKernel(format!("unknown kernel `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub bandwidth: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, bandwidth: f64) -> Result<Self> {
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::InvalidKernel(format!("bandwidth must be positive, got {bandwidth}")));
        }
        Ok(Self { kind, bandwidth })
    }

    pub fn gaussian(bandwidth: f64) -> Result<Self> {
        Self::new(KernelKind::Gaussian, bandwidth)
    }

    pub fn indicator(bandwidth: f64) -> Result<Self> {
        Self::new(KernelKind::Indicator, bandwidth)
    }

    /// Kernel with bandwidth `H = n^exponent`.
    pub fn with_exponent(kind: KernelKind, n: usize, exponent: f64) -> Result<Self> {
        Self::new(kind, (n as f64).powf(exponent))
    }

    /// `K(x)` at a nonnegative argument.
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            KernelKind::Gaussian => INV_SQRT_2PI * (-0.5 * x * x).exp(),
            KernelKind::Indicator => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Weight `b_tj` for a lag `|t - j|`.
    pub fn weight_at_distance(&self, distance: usize) -> f64 {
        let w = self.eval(distance as f64 / self.bandwidth);
        if self.kind == KernelKind::Gaussian && w < GAUSSIAN_WEIGHT_FLOOR {
            0.0
        } else {
            w
        }
    }

    /// Largest lag with a nonzero weight.
    pub fn half_width(&self) -> usize {
        let reach = match self.kind {
            KernelKind::Indicator => self.bandwidth,
            // phi(x) >= floor  <=>  x <= sqrt(-2 ln(floor * sqrt(2 pi)))
            KernelKind::Gaussian => self.bandwidth * (-2.0 * (GAUSSIAN_WEIGHT_FLOOR / INV_SQRT_2PI).ln()).sqrt(),
        };
        if reach >= usize::MAX as f64 {
            usize::MAX
        } else {
            reach.floor() as usize
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::InvalidKernel(format!(
                "bandwidth must be positive, got {}",
                self.bandwidth
            )));
        }
        Ok(())
    }
}

/// `b_tj = K(|t - j| / H)`.
pub fn kernel_weight(spec: &KernelSpec, t: usize, j: usize) -> f64 {
    spec.weight_at_distance(t.abs_diff(j))
}

/// Time-varying fit over every time point.
#[derive(Debug, Clone)]
pub struct TvFit {
    /// Row `t` is `beta_hat_t'`; NaN on failed rows.
    pub beta_path: DMatrix<f64>,
    /// Row `t` holds `sqrt(omega_kk,t)`; NaN on failed rows.
    pub se_robust_path: DMatrix<f64>,
    /// Robust covariance at each time point, `None` where the window failed.
    pub cov_path: Vec<Option<DMatrix<f64>>>,
    /// `y_t - beta_hat_t' z_t`; NaN on failed rows.
    pub residuals: DVector<f64>,
    pub kernel: KernelSpec,
    pub failed: Vec<bool>,
}

impl TvFit {
    pub fn n(&self) -> usize {
        self.beta_path.nrows()
    }

    pub fn p(&self) -> usize {
        self.beta_path.ncols()
    }

    pub fn failed_count(&self) -> usize {
        self.failed.iter().filter(|f| **f).count()
    }

    pub fn beta(&self, t: usize) -> Option<DVector<f64>> {
        (!self.failed[t]).then(|| self.beta_path.row(t).transpose())
    }

    pub fn se(&self, t: usize, k: usize) -> Option<f64> {
        (!self.failed[t]).then(|| self.se_robust_path[(t, k)])
    }

    /// Pointwise interval `beta_kt +- z * se_kt` for a precomputed critical value.
    pub fn interval(&self, t: usize, k: usize, z: f64) -> Option<(f64, f64)> {
        if self.failed[t] {
            return None;
        }
        let b = self.beta_path[(t, k)];
        let s = self.se_robust_path[(t, k)];
        Some((b - z * s, b + z * s))
    }
}

/// Rows of the weighted design for window `[lo, hi]` around `t`.
fn weighted_rows<W: Fn(usize, usize) -> f64>(z: &DMatrix<f64>, y: &DVector<f64>, weight: &W, t: usize, lo: usize, hi: usize) -> (DMatrix<f64>, DVector<f64>) {
    let p = z.ncols();
    let rows: Vec<(usize, f64)> = (lo..=hi)
        .map(|j| (j, weight(t, j)))
        .filter(|(_, w)| *w > 0.0)
        .map(|(j, w)| (j, w.sqrt()))
        .collect();
    let design = DMatrix::from_fn(rows.len(), p, |i, k| rows[i].1 * z[(rows[i].0, k)]);
    let response = DVector::from_iterator(rows.len(), rows.iter().map(|&(j, s)| s * y[j]));
    (design, response)
}

fn window(t: usize, n: usize, half: usize) -> (usize, usize) {
    (t.saturating_sub(half), t.saturating_add(half).min(n - 1))
}

/// Time-varying OLS over every `t` in `0..n`.
pub fn fit_tv(sample: &RegressionSample, kernel: &KernelSpec) -> Result<TvFit> {
    fit_tv_arrays(sample.z(), sample.y(), kernel)
}

/// Time-varying OLS with caller-supplied weights `w(t, j) >= 0` in place of
/// `b_tj`. Only `j` within the kernel's window around `t` is visited.
pub fn fit_tv_with<W>(sample: &RegressionSample, kernel: &KernelSpec, weight: W) -> Result<TvFit>
where
    W: Fn(usize, usize) -> f64 + Sync,
{
    fit_tv_arrays_with(sample.z(), sample.y(), kernel, weight)
}

pub(crate) fn fit_tv_arrays(z: &DMatrix<f64>, y: &DVector<f64>, kernel: &KernelSpec) -> Result<TvFit> {
    fit_tv_arrays_with(z, y, kernel, |t, j| kernel_weight(kernel, t, j))
}

fn fit_tv_arrays_with<W>(z: &DMatrix<f64>, y: &DVector<f64>, kernel: &KernelSpec, weight: W) -> Result<TvFit>
where
    W: Fn(usize, usize) -> f64 + Sync,
{
    kernel.validate()?;
    let (n, p) = z.shape();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!("y has {} rows but Z has {n}", y.len())));
    }
    let half = kernel.half_width();

    let solutions: Vec<Option<(DVector<f64>, DMatrix<f64>)>> = (0..n)
        .into_par_iter()
        .map(|t| {
            let (lo, hi) = window(t, n, half);
            let (design, response) = weighted_rows(z, y, &weight, t, lo, hi);
            solve_least_squares(design, response).ok().map(|s| (s.coef, s.gram_inv))
        })
        .collect();

    if solutions.iter().all(Option::is_none) {
        return Err(Error::AllPointsFailed);
    }

    let mut beta_path = DMatrix::from_element(n, p, f64::NAN);
    let mut residuals = DVector::from_element(n, f64::NAN);
    let mut row = vec![0.0; p];
    for (t, sol) in solutions.iter().enumerate() {
        if let Some((coef, _)) = sol {
            for k in 0..p {
                beta_path[(t, k)] = coef[k];
                row[k] = z[(t, k)];
            }
            residuals[t] = residual(y[t], &row, coef.as_slice());
        }
    }

    let cov_path: Vec<Option<DMatrix<f64>>> = solutions
        .par_iter()
        .enumerate()
        .map(|(t, sol)| {
            let (_, gram_inv) = sol.as_ref()?;
            let (lo, hi) = window(t, n, half);
            let mut meat = DMatrix::zeros(p, p);
            let mut row = vec![0.0; p];
            for j in lo..=hi {
                let w = weight(t, j);
                let u = residuals[j];
                if w == 0.0 || u.is_nan() {
                    continue;
                }
                for (k, slot) in row.iter_mut().enumerate() {
                    *slot = z[(j, k)];
                }
                add_outer(&mut meat, &row, w * w * u * u);
            }
            Some(sandwich(gram_inv, &meat))
        })
        .collect();

    let mut se_robust_path = DMatrix::from_element(n, p, f64::NAN);
    for (t, cov) in cov_path.iter().enumerate() {
        if let Some(cov) = cov {
            se_robust_path.set_row(t, &diag_sqrt(cov).transpose());
        }
    }

    Ok(TvFit {
        beta_path,
        se_robust_path,
        cov_path,
        residuals,
        kernel: *kernel,
        failed: solutions.iter().map(Option::is_none).collect(),
    })
}

/// Pointwise band `beta_kt +- z_{(1+level)/2} se_kt` for every `t`.
pub fn tv_confidence_band(fit: &TvFit, k: usize, level: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if k >= fit.p() {
        return Err(Error::IndexOutOfRange { index: k, p: fit.p() });
    }
    let z = critical_value(level)?;
    let mut lower = Vec::with_capacity(fit.n());
    let mut upper = Vec::with_capacity(fit.n());
    for t in 0..fit.n() {
        let (lo, hi) = fit.interval(t, k, z).ok_or(Error::FailedPoint { t })?;
        lower.push(lo);
        upper.push(hi);
    }
    Ok((lower, upper))
}

/// Bandwidth rule `H = n^h` against a smoothness exponent `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthPolicy {
    pub exponent: f64,
    pub gamma: f64,
}

impl BandwidthPolicy {
    /// Exponent bound `2 gamma / (2 gamma + 1)`.
    pub fn max_exponent(&self) -> f64 {
        2.0 * self.gamma / (2.0 * self.gamma + 1.0)
    }

    pub fn is_valid(&self) -> bool {
        self.exponent < self.max_exponent()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthReport {
    pub bandwidth: f64,
    pub max_exponent: f64,
    pub valid: bool,
    /// `H^{-1/2}`.
    pub stochastic_rate: f64,
    /// `(H / n)^gamma`.
    pub bias_rate: f64,
    pub warning: Option<String>,
}

pub fn check_bandwidth(policy: &BandwidthPolicy, n: usize) -> BandwidthReport {
    let bandwidth = (n as f64).powf(policy.exponent);
    let max_exponent = policy.max_exponent();
    let in_domain = policy.exponent > 0.0 && policy.exponent < 1.0 && policy.gamma > 0.0 && policy.gamma <= 1.0;
    let valid = in_domain && policy.is_valid();
    let warning = if !in_domain {
        Some(format!(
            "bandwidth exponent h={} or smoothness gamma={} outside h in (0,1), gamma in (0,1]",
            policy.exponent, policy.gamma
        ))
    } else if !valid {
        Some(format!(
            "bandwidth H=n^{} violates H=o(n^{{2γ/(2γ+1)}}) with γ={}: need h < {:.4}; bias may dominate",
            policy.exponent, policy.gamma, max_exponent
        ))
    } else {
        None
    };
    BandwidthReport {
        bandwidth,
        max_exponent,
        valid,
        stochastic_rate: bandwidth.powf(-0.5),
        bias_rate: (bandwidth / n as f64).powf(policy.gamma),
        warning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ols::fit_ols;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_weights() {
        let k = KernelSpec::gaussian(10.0).unwrap();
        assert_relative_eq!(kernel_weight(&k, 7, 7), 0.398942, epsilon = 1e-6);
        let expected = (-0.125f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert_relative_eq!(kernel_weight(&k, 10, 5), expected, epsilon = 1e-15);
        assert_relative_eq!(kernel_weight(&k, 5, 10), 0.352065, epsilon = 1e-6);
        assert_eq!(kernel_weight(&k, 0, 1000), 0.0);
        let hw = k.half_width();
        assert!(k.weight_at_distance(hw) >= GAUSSIAN_WEIGHT_FLOOR);
        assert_eq!(k.weight_at_distance(hw + 1), 0.0);
    }

    #[test]
    fn indicator_weights() {
        let k = KernelSpec::indicator(3.0).unwrap();
        assert_eq!(kernel_weight(&k, 4, 4), 1.0);
        assert_eq!(kernel_weight(&k, 4, 7), 1.0);
        assert_eq!(kernel_weight(&k, 4, 8), 0.0);
        assert_eq!(k.half_width(), 3);
    }

    #[test]
    fn kernel_validation() {
        assert!(KernelSpec::gaussian(0.0).is_err());
        assert!(KernelSpec::indicator(-1.0).is_err());
        assert!(KernelSpec::gaussian(f64::NAN).is_err());
        assert_eq!("Gaussian".parse::<KernelKind>().unwrap(), KernelKind::Gaussian);
        assert!("epanechnikov".parse::<KernelKind>().is_err());
    }

    fn intercept_only(y: &[f64]) -> RegressionSample {
        RegressionSample::with_intercept(y, &[]).unwrap()
    }

    #[test]
    fn windowed_mean_fixture() {
        let s = intercept_only(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let fit = fit_tv(&s, &KernelSpec::indicator(1.0).unwrap()).unwrap();
        // t = 3 (1-based) is index 2: mean of 2, 3, 4
        assert_relative_eq!(fit.beta_path[(2, 0)], 3.0, epsilon = 1e-14);
        // boundary windows are one-sided
        assert_relative_eq!(fit.beta_path[(0, 0)], 1.5, epsilon = 1e-14);
        assert_relative_eq!(fit.beta_path[(4, 0)], 4.5, epsilon = 1e-14);
        // residuals at own t: (-0.5, 0, 0, 0, 0.5)
        let expected_u = [-0.5, 0.0, 0.0, 0.0, 0.5];
        for (u, e) in fit.residuals.iter().zip(expected_u) {
            assert_relative_eq!(*u, e, epsilon = 1e-14);
        }
        // omega_{11,3} = (sum_{j=2..4} u_j^2) / 3^2 = 0 here; at t=2 (index 1):
        // window {1,2,3}: (0.25 + 0 + 0) / 9
        assert_relative_eq!(fit.cov_path[2].as_ref().unwrap()[(0, 0)], 0.0, epsilon = 1e-20);
        assert_relative_eq!(fit.cov_path[1].as_ref().unwrap()[(0, 0)], 0.25 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn band_at_midpoint_hand_fixture() {
        // y = (1, 2, 6, 4, 5): the window means at t = 2, 3, 4 are 3, 4, 5
        let s = intercept_only(&[1.0, 2.0, 6.0, 4.0, 5.0]);
        let fit = fit_tv(&s, &KernelSpec::indicator(1.0).unwrap()).unwrap();
        assert_relative_eq!(fit.beta_path[(1, 0)], 3.0, epsilon = 1e-14);
        assert_relative_eq!(fit.beta_path[(2, 0)], 4.0, epsilon = 1e-14);
        assert_relative_eq!(fit.beta_path[(3, 0)], 5.0, epsilon = 1e-14);
        // residuals u_2 = 2-3 = -1, u_3 = 6-4 = 2, u_4 = 4-5 = -1
        // omega_3 = (1 + 4 + 1) / 9
        let omega: f64 = 6.0 / 9.0;
        assert_relative_eq!(fit.se_robust_path[(2, 0)], omega.sqrt(), epsilon = 1e-14);
        let (lo, hi) = tv_confidence_band(&fit, 0, 0.95).unwrap();
        let z = 1.959963984540054;
        assert_relative_eq!(lo[2], 4.0 - z * omega.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(hi[2], 4.0 + z * omega.sqrt(), epsilon = 1e-12);
        assert!(tv_confidence_band(&fit, 0, 0.0).is_err());
        assert!(tv_confidence_band(&fit, 1, 0.95).is_err());
    }

    #[test]
    fn wide_indicator_collapses_to_global_ols() {
        let x = [0.3, -1.2, 2.2, 0.7, 1.9, -0.4, 0.0, 1.1];
        let y = [1.0, 0.2, 3.1, 1.4, 2.2, 0.1, 0.9, 2.5];
        let s = RegressionSample::with_intercept(&y, &[&x]).unwrap();
        let global = fit_ols(&s).unwrap();
        let tv = fit_tv(&s, &KernelSpec::indicator(8.0).unwrap()).unwrap();
        for t in 0..8 {
            for k in 0..2 {
                assert_eq!(tv.beta_path[(t, k)].to_bits(), global.beta_hat[k].to_bits());
            }
            let cov = tv.cov_path[t].as_ref().unwrap();
            for (a, b) in cov.iter().zip(global.cov_robust.iter()) {
                assert_relative_eq!(*a, *b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn noiseless_constant_beta() {
        let x: Vec<f64> = (0..30).map(|i| ((i * 7) % 11) as f64 - 3.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v).collect();
        let s = RegressionSample::with_intercept(&y, &[&x]).unwrap();
        let fit = fit_tv(&s, &KernelSpec::gaussian(4.0).unwrap()).unwrap();
        for t in 0..30 {
            assert_relative_eq!(fit.beta_path[(t, 0)], 2.0, epsilon = 1e-10);
            assert_relative_eq!(fit.beta_path[(t, 1)], -0.5, epsilon = 1e-10);
            assert!(fit.se_robust_path[(t, 0)] < 1e-10);
        }
        let (lo, hi) = tv_confidence_band(&fit, 1, 0.95).unwrap();
        assert!(lo.iter().zip(&hi).all(|(a, b)| (b - a).abs() < 1e-9));
    }

    #[test]
    fn rank_deficient_windows_are_flagged() {
        // x constant on the first half: slope unidentified there with a narrow window
        let x: Vec<f64> = (0..20).map(|i| if i < 10 { 1.0 } else { i as f64 }).collect();
        let y: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let s = RegressionSample::with_intercept(&y, &[&x]).unwrap();
        let fit = fit_tv(&s, &KernelSpec::indicator(2.0).unwrap()).unwrap();
        assert!(fit.failed[0] && fit.failed[5]);
        assert!(!fit.failed[15]);
        assert!(fit.beta(0).is_none());
        assert!(fit.beta(15).is_some());
        assert_eq!(tv_confidence_band(&fit, 0, 0.95).unwrap_err(), Error::FailedPoint { t: 0 });

        let flat = RegressionSample::with_intercept(&y[..5], &[&[1.0; 5]]).unwrap();
        assert_eq!(
            fit_tv(&flat, &KernelSpec::gaussian(2.0).unwrap()).unwrap_err(),
            Error::AllPointsFailed
        );
    }

    #[test]
    fn bandwidth_rule() {
        let r = check_bandwidth(&BandwidthPolicy { exponent: 0.5, gamma: 1.0 }, 1500);
        assert!(r.valid && r.warning.is_none());
        assert_relative_eq!(r.bandwidth, 38.729833, epsilon = 1e-6);
        assert_relative_eq!(r.stochastic_rate, 1500f64.powf(-0.25), epsilon = 1e-12);
        assert_relative_eq!(r.bias_rate, 1500f64.powf(-0.5), epsilon = 1e-12);

        let boundary = check_bandwidth(&BandwidthPolicy { exponent: 0.5, gamma: 0.5 }, 1500);
        assert!(!boundary.valid);

        let wide = check_bandwidth(&BandwidthPolicy { exponent: 0.7, gamma: 1.0 }, 1500);
        assert!(!wide.valid);
        assert!(wide.warning.unwrap().contains("H=o(n^{2γ/(2γ+1)})"));
    }
}
