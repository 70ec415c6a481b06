//! Two-stage time-varying analysis of a return series.
//!
//! 1. `r_t = mu_t + u_t`: time-varying intercept fit gives `mu_hat_t`.
//! 2. `|r_t - mu_hat_t| = beta_1t + u~_t`: a second intercept fit tracks the
//!    scale `h_t E|eps_t|`.
//! 3. Standard and robust correlation tests of `u~_t` over a subsample.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{corr_tests, CorrTestResult};
use crate::dgp::noise::{gen_garch, normals, Garch11};
use crate::dgp::rng::{stream_rng, SeedRecord, Stream};
use crate::error::{Error, Result};
use crate::sample::RegressionSample;
use crate::tv::{fit_tv, tv_confidence_band, KernelKind, KernelSpec};

/// GARCH(1,1) fitted to demeaned daily S&P 500 returns.
pub const SP500_GARCH: Garch11 = Garch11 { omega: 1.563e-6, alpha: 0.096974, beta: 0.88913 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalConfig {
    pub h_exponent: f64,
    pub kernel: KernelKind,
    /// 1-based inclusive range of residuals used for the correlation tests.
    pub subsample: (usize, usize),
    pub max_lag: usize,
    pub level: f64,
}

impl Default for EmpiricalConfig {
    fn default() -> Self {
        Self { h_exponent: 0.6, kernel: KernelKind::Gaussian, subsample: (500, 1000), max_lag: 20, level: 0.95 }
    }
}

#[derive(Debug, Clone)]
pub struct Band {
    pub estimate: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EmpiricalReport {
    pub bandwidth: f64,
    /// Time-varying mean of the returns.
    pub mean: Band,
    /// Time-varying intercept of the absolute demeaned returns.
    pub scale: Band,
    /// Residuals of the second-stage fit, full length.
    pub residuals: Vec<f64>,
    pub subsample: (usize, usize),
    pub tests: Vec<CorrTestResult>,
}

impl EmpiricalReport {
    pub fn std_rejections(&self) -> usize {
        self.tests.iter().filter(|t| t.std_reject).count()
    }

    pub fn robust_rejections(&self) -> usize {
        self.tests.iter().filter(|t| t.robust_reject).count()
    }
}

/// `log(p_t / p_{t-1})`; one shorter than `prices`.
pub fn log_returns(prices: &[f64]) -> Result<Vec<f64>> {
    if let Some(row) = prices.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(Error::NonFinite { what: "price (must be positive)", row });
    }
    Ok(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

fn intercept_band(y: &[f64], kernel: &KernelSpec, level: f64) -> Result<(Band, Vec<f64>)> {
    let sample = RegressionSample::new(DVector::from_column_slice(y), DMatrix::from_element(y.len(), 1, 1.0))?;
    let fit = fit_tv(&sample, kernel)?;
    let (lower, upper) = tv_confidence_band(&fit, 0, level)?;
    let band = Band { estimate: fit.beta_path.column(0).iter().copied().collect(), lower, upper };
    Ok((band, fit.residuals.iter().copied().collect()))
}

/// Sample length of the daily S&P 500 return series.
pub const SP500_LENGTH: usize = 7558;

fn check_inputs(series: &[f64], config: &EmpiricalConfig) -> Result<KernelSpec> {
    let n = series.len();
    let (start, end) = config.subsample;
    if start == 0 || start > end {
        return Err(Error::Config(format!("invalid subsample {start}:{end}")));
    }
    if end > n {
        return Err(Error::SeriesTooShort { n, lag: end });
    }
    if end - start < config.max_lag {
        return Err(Error::SeriesTooShort { n: end - start + 1, lag: config.max_lag });
    }
    if let Some(row) = series.iter().position(|r| !r.is_finite()) {
        return Err(Error::NonFinite { what: "returns", row });
    }
    if series.iter().all(|r| *r == series[0]) {
        return Err(Error::ZeroVariance);
    }
    let kernel = KernelSpec::with_exponent(config.kernel, n, config.h_exponent)?;
    if kernel.bandwidth >= n as f64 {
        return Err(Error::SeriesTooShort { n, lag: kernel.bandwidth.ceil() as usize });
    }
    Ok(kernel)
}

/// Full two-stage pipeline on returns.
pub fn run_empirical(returns: &[f64], config: &EmpiricalConfig) -> Result<EmpiricalReport> {
    let kernel = check_inputs(returns, config)?;
    let (mean, _) = intercept_band(returns, &kernel, config.level)?;
    let abs_dev: Vec<f64> = returns.iter().zip(&mean.estimate).map(|(r, m)| (r - m).abs()).collect();
    second_stage(&abs_dev, mean, &kernel, config)
}

/// Second stage only, on `|r*_t|` for already demeaned returns `r*`. The
/// reported mean band is identically zero.
pub fn run_absolute(demeaned: &[f64], config: &EmpiricalConfig) -> Result<EmpiricalReport> {
    let kernel = check_inputs(demeaned, config)?;
    let zeros = vec![0.0; demeaned.len()];
    let mean = Band { estimate: zeros.clone(), lower: zeros.clone(), upper: zeros };
    let abs: Vec<f64> = demeaned.iter().map(|r| r.abs()).collect();
    second_stage(&abs, mean, &kernel, config)
}

fn second_stage(y: &[f64], mean: Band, kernel: &KernelSpec, config: &EmpiricalConfig) -> Result<EmpiricalReport> {
    let (start, end) = config.subsample;
    let (scale, residuals) = intercept_band(y, kernel, config.level)?;
    let tests = corr_tests(&residuals[start - 1..end], config.max_lag)?;
    Ok(EmpiricalReport { bandwidth: kernel.bandwidth, mean, scale, residuals, subsample: config.subsample, tests })
}

/// Returns with smooth mean and scale and i.i.d. normal innovations:
/// `r_t = mu_t + h_t eps_t`.
pub fn simulate_model_returns(n: usize, seed: u64) -> Vec<f64> {
    let seeds = SeedRecord::from_master(seed);
    let eps = normals(n, &mut stream_rng(seeds.noise, Stream::Noise));
    eps.iter()
        .enumerate()
        .map(|(i, e)| {
            let u = (i + 1) as f64 / n as f64;
            let mu = 4e-4 * (1.0 + (2.0 * PI * u).sin());
            let h = 0.01 * (1.0 + 0.5 * (2.0 * PI * u).cos());
            mu + h * e
        })
        .collect()
}

/// Demeaned returns following the fitted S&P 500 GARCH(1,1).
pub fn simulate_garch_returns(n: usize, seed: u64) -> Result<Vec<f64>> {
    gen_garch(&SP500_GARCH, n, SeedRecord::from_master(seed).noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_returns_of_prices() {
        let r = log_returns(&[100.0, 110.0, 99.0]).unwrap();
        assert_relative_eq!(r[0], (1.1f64).ln());
        assert_relative_eq!(r[1], (0.9f64).ln());
        assert!(log_returns(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn constant_returns_are_degenerate() {
        let r = vec![0.001; 1200];
        assert_eq!(run_empirical(&r, &EmpiricalConfig::default()).unwrap_err(), Error::ZeroVariance);
    }

    #[test]
    fn short_series_rejected() {
        let r = simulate_model_returns(800, 1);
        assert!(matches!(run_empirical(&r, &EmpiricalConfig::default()), Err(Error::SeriesTooShort { .. })));
    }

    #[test]
    fn pipeline_shapes_and_bands() {
        let r = simulate_model_returns(1200, 3);
        let rep = run_empirical(&r, &EmpiricalConfig::default()).unwrap();
        assert_eq!(rep.tests.len(), 20);
        assert_eq!(rep.residuals.len(), 1200);
        assert_relative_eq!(rep.bandwidth, 1200f64.powf(0.6));
        for t in 0..1200 {
            assert!(rep.mean.lower[t] <= rep.mean.estimate[t] && rep.mean.estimate[t] <= rep.mean.upper[t]);
            assert!(rep.scale.estimate[t] > 0.0);
        }
        // E|eps| h_t at the start of the sample: sqrt(2/pi) * 0.015
        let expected = (2.0 / PI).sqrt() * 0.015;
        assert!((rep.scale.estimate[600] - (2.0 / PI).sqrt() * 0.005).abs() < 0.3 * expected);
    }

    #[test]
    fn garch_returns_are_deterministic() {
        assert_eq!(simulate_garch_returns(50, 4).unwrap(), simulate_garch_returns(50, 4).unwrap());
        assert_eq!(simulate_model_returns(50, 4), simulate_model_returns(50, 4));
    }
}
