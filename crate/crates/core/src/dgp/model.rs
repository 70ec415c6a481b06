//! Model specifications and sample generation.
//!
//! A regression model generates
//!
//! ```text
//! y_t  = beta_1t + sum_k beta_kt z_kt + h_t eps_t
//! z_kt = mu_kt + g_kt eta_kt,   eta_kt = a * eta_k,t-1 + eps_{t - lag_k}
//! ```
//!
//! where the paths `mu`, `g`, `h`, `beta` are drawn from the scale seed and
//! `eps`, `eta` from the noise seed, so the two groups are independent.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::noise::NoiseSpec;
use super::path::PathSpec;
use super::rng::{stream_rng, SeedRecord, Stream};
use crate::error::{Error, Result};
use crate::sample::RegressionSample;

fn default_ar() -> f64 {
    0.5
}

fn default_driver_burn_in() -> usize {
    100
}

fn default_ar_burn_in() -> usize {
    500
}

/// Regressor `z_kt = mu_kt + g_kt eta_kt` driven by `eps_{t - driver_lag}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressorSpec {
    pub mean: PathSpec,
    pub scale: PathSpec,
    pub driver_lag: usize,
    #[serde(default = "default_ar")]
    pub ar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    pub id: String,
    /// `beta_1` (intercept) first, then one path per regressor.
    pub coefficients: Vec<PathSpec>,
    pub regressors: Vec<RegressorSpec>,
    /// `h_t`.
    pub noise_scale: PathSpec,
    pub noise: NoiseSpec,
    /// Steps of the `eta` recursion run before `t = 1`.
    #[serde(default = "default_driver_burn_in")]
    pub driver_burn_in: usize,
}

/// `y_t = intercept + sum_i lags[i] y_{t-1-i} + eps_t`, estimated as a
/// regression on `(1, y_{t-1}, ..., y_{t-p})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModel {
    pub id: String,
    pub intercept: f64,
    pub lags: Vec<f64>,
    pub noise: NoiseSpec,
    #[serde(default = "default_ar_burn_in")]
    pub burn_in: usize,
}

impl ArModel {
    /// Stationary mean `intercept / (1 - sum lags)`.
    pub fn mean(&self) -> f64 {
        self.intercept / (1.0 - self.lags.iter().sum::<f64>())
    }

    /// Spectral radius of the companion matrix.
    pub fn spectral_radius(&self) -> f64 {
        let p = self.lags.len();
        if p == 0 {
            return 0.0;
        }
        let companion = DMatrix::from_fn(p, p, |i, j| {
            if i == 0 {
                self.lags[j]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        companion.complex_eigenvalues().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    Regression(RegressionModel),
    Autoregression(ArModel),
}

impl ModelSpec {
    pub fn id(&self) -> &str {
        match self {
            Self::Regression(m) => &m.id,
            Self::Autoregression(m) => &m.id,
        }
    }

    pub fn noise(&self) -> &NoiseSpec {
        match self {
            Self::Regression(m) => &m.noise,
            Self::Autoregression(m) => &m.noise,
        }
    }

    pub fn p(&self) -> usize {
        match self {
            Self::Regression(m) => m.coefficients.len(),
            Self::Autoregression(m) => m.lags.len() + 1,
        }
    }

    /// Coefficient vector when every coefficient is a constant.
    pub fn fixed_beta(&self) -> Option<Vec<f64>> {
        match self {
            Self::Regression(m) => m.coefficients.iter().map(PathSpec::as_constant).collect(),
            Self::Autoregression(m) => Some(std::iter::once(m.intercept).chain(m.lags.iter().copied()).collect()),
        }
    }

    /// Replaces coefficient `k` by the constant `value`.
    pub fn with_constant_coefficient(&self, k: usize, value: f64) -> Result<Self> {
        let mut out = self.clone();
        match &mut out {
            Self::Regression(m) => {
                let slot = m
                    .coefficients
                    .get_mut(k)
                    .ok_or(Error::IndexOutOfRange { index: k, p: self.p() })?;
                *slot = PathSpec::constant(value);
            }
            Self::Autoregression(m) => {
                if k == 0 {
                    m.intercept = value;
                } else {
                    *m.lags.get_mut(k - 1).ok_or(Error::IndexOutOfRange { index: k, p: self.p() })? = value;
                }
            }
        }
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Regression(m) => {
                if m.coefficients.len() != m.regressors.len() + 1 {
                    return Err(Error::InvalidSpec(format!(
                        "{} coefficients for {} regressors plus intercept",
                        m.coefficients.len(),
                        m.regressors.len()
                    )));
                }
                m.noise.validate()?;
                m.noise_scale.validate()?;
                for c in &m.coefficients {
                    c.validate()?;
                }
                for r in &m.regressors {
                    r.mean.validate()?;
                    r.scale.validate()?;
                    if !r.ar.is_finite() || r.ar.abs() >= 1.0 {
                        return Err(Error::InvalidSpec(format!("regressor AR coefficient {} not in (-1, 1)", r.ar)));
                    }
                }
                Ok(())
            }
            Self::Autoregression(m) => {
                m.noise.validate()?;
                if !m.intercept.is_finite() || m.lags.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidSpec("non-finite AR coefficient".into()));
                }
                if m.spectral_radius() >= 1.0 {
                    return Err(Error::InvalidSpec(format!(
                        "AR lags {:?} are not stationary (spectral radius {:.4})",
                        m.lags,
                        m.spectral_radius()
                    )));
                }
                Ok(())
            }
        }
    }
}

/// A realized sample together with the latent quantities that produced it.
#[derive(Debug, Clone)]
pub struct GeneratedSample {
    pub sample: RegressionSample,
    /// Row `t` is the true `beta_t'` (identical rows for fixed models).
    pub beta_path: DMatrix<f64>,
    /// True `beta` when the model has constant coefficients.
    pub fixed_beta: Option<DVector<f64>>,
    /// `h_t`.
    pub noise_scale: Vec<f64>,
    /// `mu_kt` for each regressor (excluding the intercept).
    pub regressor_means: Vec<Vec<f64>>,
    /// `g_kt` for each regressor.
    pub regressor_scales: Vec<Vec<f64>>,
    /// `eps_t` at `t = 1..n`.
    pub eps: Vec<f64>,
    pub seeds: SeedRecord,
    pub model_id: String,
}

/// Generates a sample of length `n` with seeds derived from `seed`.
pub fn gen_model(spec: &ModelSpec, n: usize, seed: u64) -> Result<GeneratedSample> {
    gen_model_with(spec, n, SeedRecord::from_master(seed))
}

pub fn gen_model_with(spec: &ModelSpec, n: usize, seeds: SeedRecord) -> Result<GeneratedSample> {
    spec.validate()?;
    if n < spec.p() {
        return Err(Error::InvalidSpec(format!("n = {n} is smaller than p = {}", spec.p())));
    }
    match spec {
        ModelSpec::Regression(m) => gen_regression(m, n, seeds),
        ModelSpec::Autoregression(m) => gen_autoregression(m, n, seeds),
    }
}

fn gen_regression(m: &RegressionModel, n: usize, seeds: SeedRecord) -> Result<GeneratedSample> {
    let p = m.coefficients.len();
    let burn = m.driver_burn_in;
    let mut rng = stream_rng(seeds.noise, Stream::Noise);
    let eps_all = m.noise.generate(burn + n, &mut rng)?;

    let betas = m
        .coefficients
        .iter()
        .map(|c| c.eval(n, seeds.scale))
        .collect::<Result<Vec<_>>>()?;
    let h = m.noise_scale.eval(n, seeds.scale)?;

    let mut means = Vec::with_capacity(p - 1);
    let mut scales = Vec::with_capacity(p - 1);
    let mut z = DMatrix::from_element(n, p, 1.0);
    for (k, reg) in m.regressors.iter().enumerate() {
        let mu = reg.mean.eval(n, seeds.scale)?;
        let g = reg.scale.eval(n, seeds.scale)?;
        let mut eta = 0.0;
        for i in 0..burn + n {
            let xi = if i >= reg.driver_lag { eps_all[i - reg.driver_lag] } else { 0.0 };
            eta = reg.ar * eta + xi;
            if i >= burn {
                let t = i - burn;
                z[(t, k + 1)] = mu[t] + g[t] * eta;
            }
        }
        means.push(mu);
        scales.push(g);
    }

    let eps = eps_all[burn..].to_vec();
    let beta_path = DMatrix::from_fn(n, p, |t, k| betas[k][t]);
    let y = DVector::from_fn(n, |t, _| {
        let signal: f64 = (0..p).map(|k| beta_path[(t, k)] * z[(t, k)]).sum();
        signal + h[t] * eps[t]
    });

    let fixed_beta = m
        .coefficients
        .iter()
        .map(PathSpec::as_constant)
        .collect::<Option<Vec<f64>>>()
        .map(DVector::from_vec);

    Ok(GeneratedSample {
        sample: RegressionSample::new(y, z)?,
        beta_path,
        fixed_beta,
        noise_scale: h,
        regressor_means: means,
        regressor_scales: scales,
        eps,
        seeds,
        model_id: m.id.clone(),
    })
}

fn gen_autoregression(m: &ArModel, n: usize, seeds: SeedRecord) -> Result<GeneratedSample> {
    let lags = m.lags.len();
    let total = m.burn_in + lags + n;
    let mut rng = stream_rng(seeds.noise, Stream::Noise);
    let eps_all = m.noise.generate(total, &mut rng)?;
    let mut ys = vec![0.0; total];
    for t in 0..total {
        let mut v = m.intercept + eps_all[t];
        for (i, phi) in m.lags.iter().enumerate() {
            if t > i {
                v += phi * ys[t - 1 - i];
            }
        }
        ys[t] = v;
    }
    let first = m.burn_in + lags;
    let y = DVector::from_fn(n, |t, _| ys[first + t]);
    let z = DMatrix::from_fn(n, lags + 1, |t, k| if k == 0 { 1.0 } else { ys[first + t - k] });
    let beta: Vec<f64> = std::iter::once(m.intercept).chain(m.lags.iter().copied()).collect();
    Ok(GeneratedSample {
        sample: RegressionSample::new(y, z)?,
        beta_path: DMatrix::from_fn(n, lags + 1, |_, k| beta[k]),
        fixed_beta: Some(DVector::from_vec(beta)),
        noise_scale: vec![1.0; n],
        regressor_means: Vec::new(),
        regressor_scales: Vec::new(),
        eps: eps_all[first..].to_vec(),
        seeds,
        model_id: m.id.clone(),
    })
}
