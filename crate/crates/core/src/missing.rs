//! Estimation on partially observed samples.
//!
//! A missing row is represented by zero-filling both `y_t` and `z_t`. Zero
//! rows contribute nothing to any of the sums, so the zero-filled estimator
//! and the estimator on the observed subsample coincide.

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ols::{fit_design, fit_ols, FixedFit};
use crate::sample::RegressionSample;
use crate::tv::{fit_tv_arrays, kernel_weight, KernelSpec, TvFit};

/// Advisory ratio: warn when `N_t < MASS_WARN_RATIO * H`.
pub const MASS_WARN_RATIO: f64 = 0.1;

/// Observation indicator `tau_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingMask {
    tau: Vec<bool>,
}

impl MissingMask {
    pub fn new(tau: Vec<bool>) -> Result<Self> {
        if !tau.iter().any(|&t| t) {
            return Err(Error::EmptyMask { observed: 0, p: 1 });
        }
        Ok(Self { tau })
    }

    pub fn all_observed(n: usize) -> Self {
        Self { tau: vec![true; n] }
    }

    /// Mask with the given 0-based indices missing.
    pub fn from_missing(n: usize, missing: &[usize]) -> Result<Self> {
        let mut tau = vec![true; n];
        for &i in missing {
            if i >= n {
                return Err(Error::DimensionMismatch(format!("missing index {i} outside 0..{n}")));
            }
            tau[i] = false;
        }
        Self::new(tau)
    }

    /// Contiguous 0-based block `start..=end` missing.
    pub fn block(n: usize, start: usize, end: usize) -> Result<Self> {
        if start > end || end >= n {
            return Err(Error::DimensionMismatch(format!("block {start}..={end} outside 0..{n}")));
        }
        Self::new((0..n).map(|t| t < start || t > end).collect())
    }

    /// `count` distinct time points missing, chosen uniformly.
    pub fn random<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Result<Self> {
        if count >= n {
            return Err(Error::DimensionMismatch(format!("cannot drop {count} of {n} rows")));
        }
        let mut tau = vec![true; n];
        for i in sample_indices(rng, n, count) {
            tau[i] = false;
        }
        Self::new(tau)
    }

    pub fn tau(&self) -> &[bool] {
        &self.tau
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn observed_count(&self) -> usize {
        self.tau.iter().filter(|t| **t).count()
    }

    pub fn observed_indices(&self) -> Vec<usize> {
        (0..self.tau.len()).filter(|&i| self.tau[i]).collect()
    }
}

/// Zero-filled pair `(tau_t y_t, tau_t z_t)` with its mask.
#[derive(Debug, Clone)]
pub struct MaskedSample {
    pub y: DVector<f64>,
    pub z: DMatrix<f64>,
    pub mask: MissingMask,
}

impl MaskedSample {
    pub fn new(sample: &RegressionSample, mask: &MissingMask) -> Result<Self> {
        if mask.len() != sample.n() {
            return Err(Error::DimensionMismatch(format!(
                "mask has {} entries, sample has {} rows",
                mask.len(),
                sample.n()
            )));
        }
        let tau = mask.tau();
        let y = DVector::from_fn(sample.n(), |t, _| if tau[t] { sample.y()[t] } else { 0.0 });
        let z = DMatrix::from_fn(sample.n(), sample.p(), |t, k| if tau[t] { sample.z()[(t, k)] } else { 0.0 });
        Ok(Self { y, z, mask: mask.clone() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingForm {
    /// Full-length zero-filled arrays; residuals are zero at missing rows.
    Zerofill,
    /// Plain OLS on the observed rows; residuals have length `N`.
    Subsample,
}

/// Fixed-parameter OLS with missing rows.
///
/// The standard-error variance divides by the observed count `N` in both forms.
pub fn fit_ols_missing(sample: &RegressionSample, mask: &MissingMask, form: MissingForm) -> Result<FixedFit> {
    let observed = mask.observed_count();
    if observed < sample.p() {
        return Err(Error::EmptyMask { observed, p: sample.p() });
    }
    match form {
        MissingForm::Zerofill => {
            let masked = MaskedSample::new(sample, mask)?;
            fit_design(&masked.z, &masked.y, observed)
        }
        MissingForm::Subsample => {
            if mask.len() != sample.n() {
                return Err(Error::DimensionMismatch(format!(
                    "mask has {} entries, sample has {} rows",
                    mask.len(),
                    sample.n()
                )));
            }
            fit_ols(&sample.select_rows(&mask.observed_indices())?)
        }
    }
}

/// Effective kernel mass `N_t = sum_j tau_j b_tj`.
pub fn effective_kernel_mass(mask: &MissingMask, kernel: &KernelSpec, t: usize) -> f64 {
    let n = mask.len();
    let half = kernel.half_width();
    let lo = t.saturating_sub(half);
    let hi = t.saturating_add(half).min(n.saturating_sub(1));
    (lo..=hi).filter(|&j| mask.tau()[j]).map(|j| kernel_weight(kernel, t, j)).sum()
}

/// True when `N_t` is small relative to the bandwidth.
pub fn mass_is_low(mass: f64, kernel: &KernelSpec) -> bool {
    mass < MASS_WARN_RATIO * kernel.bandwidth
}

/// Time-varying OLS on zero-filled arrays; points whose masked window is
/// rank deficient (including `N_t = 0`) are flagged as failed.
pub fn fit_tv_missing(sample: &RegressionSample, mask: &MissingMask, kernel: &KernelSpec) -> Result<TvFit> {
    let masked = MaskedSample::new(sample, mask)?;
    fit_tv_arrays(&masked.z, &masked.y, kernel)
}
