//! Normal quantiles and small summary helpers.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Quantile of the standard normal distribution.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Two-sided critical value `z_{(1+level)/2}` for a confidence level in (0, 1).
pub fn critical_value(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    Ok(normal_quantile(0.5 + level / 2.0))
}

/// 97.5% standard normal quantile, the 5% two-sided threshold.
pub fn z_975() -> f64 {
    normal_quantile(0.975)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with the `n - 1` denominator.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        assert!((critical_value(0.95).unwrap() - 1.959964).abs() < 1e-6);
        assert!((z_975() - 1.959964).abs() < 1e-6);
        assert!(critical_value(0.0).is_err());
        assert!(critical_value(1.0).is_err());
        assert!(critical_value(f64::NAN).is_err());
    }
}
