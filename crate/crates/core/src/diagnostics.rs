//! Residual autocorrelation tests at individual lags.
//!
//! Two statistics per lag `k`, both on the demeaned series `x~`:
//!
//! * standard: `sqrt(n) * rho_k`, valid for i.i.d. data;
//! * robust: `sum_{t>k} x~_t x~_{t-k} / sqrt(sum_{t>k} x~_t^2 x~_{t-k}^2)`, a
//!   self-normalized cross-product ratio that stays asymptotically normal
//!   under heteroskedastic uncorrelated data.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::{mean, z_975};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrTestResult {
    pub lag: usize,
    pub rho: f64,
    pub std_stat: f64,
    pub robust_stat: f64,
    pub std_reject: bool,
    pub robust_reject: bool,
}

fn check_len(n: usize, lag: usize) -> Result<()> {
    if lag == 0 || n <= lag {
        return Err(Error::SeriesTooShort { n, lag });
    }
    Ok(())
}

fn demeaned(series: &[f64]) -> Vec<f64> {
    let m = mean(series);
    series.iter().map(|x| x - m).collect()
}

/// Sample autocorrelation at lag `k >= 1`.
pub fn sample_autocorr(series: &[f64], k: usize) -> Result<f64> {
    check_len(series.len(), k)?;
    autocorr_of_demeaned(&demeaned(series), k)
}

fn autocorr_of_demeaned(x: &[f64], k: usize) -> Result<f64> {
    let denom: f64 = x.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let num: f64 = (k..x.len()).map(|t| x[t] * x[t - k]).sum();
    Ok(num / denom)
}

/// Standard and robust tests of zero correlation at lag `k`.
pub fn robust_corr_test(series: &[f64], k: usize) -> Result<CorrTestResult> {
    check_len(series.len(), k)?;
    let x = demeaned(series);
    let rho = autocorr_of_demeaned(&x, k)?;
    let (num, den) = (k..x.len()).fold((0.0, 0.0), |(num, den), t| {
        let c = x[t] * x[t - k];
        (num + c, den + c * c)
    });
    if den == 0.0 {
        return Err(Error::ZeroDenominator { lag: k });
    }
    let robust_stat = num / den.sqrt();
    let std_stat = (x.len() as f64).sqrt() * rho;
    let z = z_975();
    Ok(CorrTestResult {
        lag: k,
        rho,
        std_stat,
        robust_stat,
        std_reject: std_stat.abs() > z,
        robust_reject: robust_stat.abs() > z,
    })
}

/// Tests at lags `1..=max_lag`.
pub fn corr_tests(series: &[f64], max_lag: usize) -> Result<Vec<CorrTestResult>> {
    (1..=max_lag).map(|k| robust_corr_test(series, k)).collect()
}

/// Per-lag CSV: `lag,rho,std_stat,robust_stat,std_reject,robust_reject`.
pub fn write_corr_csv<W: std::io::Write>(out: W, results: &[CorrTestResult]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in results {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn alternating_series() {
        let x = [1.0, -1.0, 1.0, -1.0];
        assert_relative_eq!(sample_autocorr(&x, 1).unwrap(), -0.75, epsilon = 1e-15);
        let r = robust_corr_test(&x, 1).unwrap();
        assert_relative_eq!(r.robust_stat, -3.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(r.std_stat, -1.5, epsilon = 1e-15);
        assert!(!r.robust_reject && !r.std_reject);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(sample_autocorr(&[2.0; 10], 1).unwrap_err(), Error::ZeroVariance);
        assert_eq!(robust_corr_test(&[2.0; 10], 1).unwrap_err(), Error::ZeroVariance);
        assert!(matches!(sample_autocorr(&[1.0, 2.0], 2), Err(Error::SeriesTooShort { .. })));
        assert!(matches!(sample_autocorr(&[1.0, 2.0], 0), Err(Error::SeriesTooShort { .. })));
        // demeaned (0, 0, 1, -1): lag-2 products are all zero
        assert_eq!(
            robust_corr_test(&[0.0, 0.0, 1.0, -1.0], 2).unwrap_err(),
            Error::ZeroDenominator { lag: 2 }
        );
    }

    #[test]
    fn single_cross_product_gives_unit_statistic() {
        // demeaned (0, 0, 1, -1, 0): the only nonzero lag-1 product is 1 * -1
        let r = robust_corr_test(&[0.0, 0.0, 1.0, -1.0, 0.0], 1).unwrap();
        assert_relative_eq!(r.robust_stat.abs(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn scale_invariance() {
        let x: Vec<f64> = (0..50).map(|i| ((i * 37) % 17) as f64 - 4.0).collect();
        let y: Vec<f64> = x.iter().map(|v| -2.5 * v).collect();
        for k in 1..5 {
            let a = robust_corr_test(&x, k).unwrap();
            let b = robust_corr_test(&y, k).unwrap();
            assert_relative_eq!(a.std_stat, b.std_stat, max_relative = 1e-12);
            assert_relative_eq!(a.robust_stat, b.robust_stat, max_relative = 1e-12);
        }
    }

    #[test]
    fn csv_output() {
        let x: Vec<f64> = (0..30).map(|i| (i as f64).sin()).collect();
        let rs = corr_tests(&x, 3).unwrap();
        let mut buf = Vec::new();
        write_corr_csv(&mut buf, &rs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("lag,rho,std_stat,robust_stat,std_reject,robust_reject\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
