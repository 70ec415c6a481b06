//! Monte Carlo replication engine.
//!
//! Replication `r` draws its sample from `SeedRecord::from_master(
//! replication_seed(seed, r))`, so results depend only on the configuration
//! and never on thread scheduling: replications run in parallel and are
//! reduced in index order.

use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dgp::catalog::catalog;
use crate::dgp::model::{gen_model_with, GeneratedSample, ModelSpec};
use crate::dgp::rng::{replication_seed, stream_rng, SeedRecord, Stream};
use crate::error::{Error, Result};
use crate::missing::{fit_ols_missing, fit_tv_missing, MissingForm, MissingMask};
use crate::ols::{covers, fit_ols, FixedFit};
use crate::stats::critical_value;
use crate::tv::{fit_tv, KernelKind, KernelSpec, TvFit};

/// Largest tolerated share of failed replications.
pub const MAX_FAILURE_SHARE: f64 = 0.01;

/// Replications processed per parallel batch in time-varying runs.
const TV_BATCH: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelRef {
    Catalog(String),
    Custom(ModelSpec),
}

impl ModelRef {
    pub fn resolve(&self) -> Result<ModelSpec> {
        match self {
            ModelRef::Catalog(id) => catalog(id),
            ModelRef::Custom(spec) => {
                spec.validate()?;
                Ok(spec.clone())
            }
        }
    }
}

/// Missing-data pattern applied to every replication. Indices are 1-based
/// and inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaskSpec {
    Block { start: usize, end: usize },
    /// `count` time points drawn afresh in each replication.
    Random { count: usize },
    Indices { missing: Vec<usize> },
}

impl MaskSpec {
    pub fn build(&self, n: usize, seeds: &SeedRecord) -> Result<MissingMask> {
        match self {
            MaskSpec::Block { start, end } => {
                if *start == 0 {
                    return Err(Error::Config("mask indices are 1-based".into()));
                }
                MissingMask::block(n, start - 1, end - 1)
            }
            MaskSpec::Random { count } => MissingMask::random(n, *count, &mut stream_rng(seeds.mask, Stream::Mask)),
            MaskSpec::Indices { missing } => {
                if missing.contains(&0) {
                    return Err(Error::Config("mask indices are 1-based".into()));
                }
                let zero_based: Vec<usize> = missing.iter().map(|i| i - 1).collect();
                MissingMask::from_missing(n, &zero_based)
            }
        }
    }
}

fn default_level() -> f64 {
    0.95
}

fn default_exponents() -> Vec<f64> {
    vec![0.5]
}

fn default_kernel() -> KernelKind {
    KernelKind::Gaussian
}

fn default_test_index() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub model: ModelRef,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    #[serde(default = "default_level")]
    pub level: f64,
    /// Bandwidth exponents `h` (`H = n^h`) for time-varying runs.
    #[serde(default = "default_exponents")]
    pub bandwidth_exponents: Vec<f64>,
    #[serde(default = "default_kernel")]
    pub kernel: KernelKind,
    /// Values of the tested coefficient for power curves.
    #[serde(default)]
    pub null_grid: Vec<f64>,
    /// 0-based coefficient tested in power curves.
    #[serde(default = "default_test_index")]
    pub test_index: usize,
    #[serde(default)]
    pub null_value: f64,
    #[serde(default)]
    pub mask: Option<MaskSpec>,
    /// Worker threads; `None` uses the global rayon pool.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl McConfig {
    pub fn new(model: impl Into<String>, n: usize, replications: usize, seed: u64) -> Self {
        Self {
            model: ModelRef::Catalog(model.into()),
            n,
            replications,
            seed,
            level: default_level(),
            bandwidth_exponents: default_exponents(),
            kernel: default_kernel(),
            null_grid: Vec::new(),
            test_index: default_test_index(),
            null_value: 0.0,
            mask: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Config(format!("level {} outside (0, 1)", self.level)));
        }
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    fn run_in_pool<T: Send>(&self, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?
                .install(job),
            None => job(),
        }
    }
}

/// Per-coefficient accuracy and coverage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefSummary {
    pub parameter: String,
    pub truth: f64,
    pub bias: f64,
    pub rmse: f64,
    /// Robust coverage, percent.
    pub cp: f64,
    /// Standard coverage, percent.
    pub cp_st: f64,
    /// Sample standard deviation (`R - 1` denominator).
    pub sd: f64,
}

impl CoefSummary {
    /// Aggregates the draws of one coefficient.
    pub fn from_draws(parameter: impl Into<String>, truth: f64, draws: &[f64], robust_hits: usize, standard_hits: usize) -> Self {
        let r = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / r;
        let mse = draws.iter().map(|b| (b - truth) * (b - truth)).sum::<f64>() / r;
        let sd = if draws.len() > 1 {
            (draws.iter().map(|b| (b - mean) * (b - mean)).sum::<f64>() / (r - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            parameter: parameter.into(),
            truth,
            bias: mean - truth,
            rmse: mse.sqrt(),
            cp: 100.0 * robust_hits as f64 / r,
            cp_st: 100.0 * standard_hits as f64 / r,
            sd,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub coefficients: Vec<CoefSummary>,
    pub replications: usize,
    pub used: usize,
    pub failed: usize,
    pub config: McConfig,
}

impl fmt::Display for McSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>9} {:>9} {:>7} {:>7} {:>9}", "Parameter", "Bias", "RMSE", "CP", "CP_st", "SD")?;
        for c in &self.coefficients {
            writeln!(
                f,
                "{:<10} {:>9.5} {:>9.5} {:>7.1} {:>7.1} {:>9.5}",
                c.parameter, c.bias, c.rmse, c.cp, c.cp_st, c.sd
            )?;
        }
        write!(f, "replications used: {} of {} ({} failed)", self.used, self.replications, self.failed)
    }
}

/// Outcome of one fixed-parameter replication.
#[derive(Debug, Clone)]
struct FixedDraw {
    beta: Vec<f64>,
    se_robust: Vec<f64>,
    se_standard: Vec<f64>,
}

fn seeds_for(config: &McConfig, r: usize) -> SeedRecord {
    SeedRecord::from_master(replication_seed(config.seed, r))
}

fn is_counted_failure(e: &Error) -> bool {
    matches!(e, Error::RankDeficient { .. } | Error::EmptyMask { .. } | Error::AllPointsFailed)
}

fn check_failures(failed: usize, total: usize) -> Result<()> {
    if failed as f64 > MAX_FAILURE_SHARE * total as f64 {
        return Err(Error::TooManyFailures { failed, total });
    }
    Ok(())
}

fn fit_fixed(g: &GeneratedSample, config: &McConfig) -> Result<FixedFit> {
    match &config.mask {
        Some(m) => fit_ols_missing(&g.sample, &m.build(g.sample.n(), &g.seeds)?, MissingForm::Zerofill),
        None => fit_ols(&g.sample),
    }
}

fn replicate_fixed(spec: &ModelSpec, config: &McConfig) -> Result<Vec<Option<FixedDraw>>> {
    (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let g = gen_model_with(spec, config.n, seeds_for(config, r))?;
            match fit_fixed(&g, config) {
                Ok(fit) => Ok(Some(FixedDraw {
                    beta: fit.beta_hat.iter().copied().collect(),
                    se_robust: fit.se_robust.iter().copied().collect(),
                    se_standard: fit.se_standard.iter().copied().collect(),
                })),
                Err(e) if is_counted_failure(&e) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect()
}

fn fixed_truth(spec: &ModelSpec) -> Result<Vec<f64>> {
    spec.fixed_beta()
        .ok_or_else(|| Error::Config(format!("model `{}` has time-varying coefficients", spec.id())))
}

/// Bias, RMSE, SD and robust/standard coverage of the fixed-parameter fit.
pub fn run_mc_fixed(config: &McConfig) -> Result<McSummary> {
    config.validate()?;
    let spec = config.model.resolve()?;
    let truth = fixed_truth(&spec)?;
    let z = critical_value(config.level)?;
    let draws = config.run_in_pool(|| replicate_fixed(&spec, config))?;

    let ok: Vec<&FixedDraw> = draws.iter().flatten().collect();
    let failed = draws.len() - ok.len();
    check_failures(failed, draws.len())?;
    if ok.is_empty() {
        return Err(Error::TooManyFailures { failed, total: draws.len() });
    }

    let coefficients = truth
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let values: Vec<f64> = ok.iter().map(|d| d.beta[k]).collect();
            let robust = ok.iter().filter(|d| covers(d.beta[k], d.se_robust[k], z, b)).count();
            let standard = ok.iter().filter(|d| covers(d.beta[k], d.se_standard[k], z, b)).count();
            CoefSummary::from_draws(format!("beta{}", k + 1), b, &values, robust, standard)
        })
        .collect();

    Ok(McSummary {
        coefficients,
        replications: draws.len(),
        used: ok.len(),
        failed,
        config: config.clone(),
    })
}

/// Rejection rates (percent) over a grid of true values of one coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    pub grid: Vec<f64>,
    pub null_value: f64,
    pub robust: Vec<f64>,
    pub standard: Vec<f64>,
    /// Standard test with the empirical null critical value.
    pub adjusted_standard: Vec<f64>,
    /// Robust test with the empirical null critical value.
    pub adjusted_robust: Vec<f64>,
    pub critical_standard: f64,
    pub critical_robust: f64,
    pub replications: usize,
}

/// `|t|` threshold exceeded by `floor(alpha * R)` of the null statistics.
pub fn empirical_critical_value(abs_t: &[f64], alpha: f64) -> f64 {
    let mut sorted: Vec<f64> = abs_t.to_vec();
    sorted.sort_by(f64::total_cmp);
    let r = sorted.len();
    let exceed = ((alpha * r as f64).floor() as usize).min(r - 1);
    sorted[r - exceed - 1]
}

fn abs_t(estimate: f64, null: f64, se: f64) -> f64 {
    let t = ((estimate - null) / se).abs();
    if t.is_nan() {
        0.0
    } else {
        t
    }
}

fn percent(count: usize, total: usize) -> f64 {
    100.0 * count as f64 / total as f64
}

/// Size, power and adjusted power of `H0: beta_k = null_value`.
///
/// Every grid point reuses the same replication seeds, so the adjusted
/// critical values come from the null point's own draws.
pub fn size_power_curve(config: &McConfig) -> Result<PowerCurve> {
    config.validate()?;
    let base = config.model.resolve()?;
    let k = config.test_index;
    if k >= base.p() {
        return Err(Error::IndexOutOfRange { index: k, p: base.p() });
    }
    if !config.null_grid.contains(&config.null_value) {
        return Err(Error::Config(format!(
            "null grid {:?} does not contain the null value {}",
            config.null_grid, config.null_value
        )));
    }
    let z = critical_value(config.level)?;
    let alpha = 1.0 - config.level;

    let stats = config.run_in_pool(|| {
        config
            .null_grid
            .iter()
            .map(|&value| {
                let spec = base.with_constant_coefficient(k, value)?;
                let draws = replicate_fixed(&spec, config)?;
                let failed = draws.iter().filter(|d| d.is_none()).count();
                check_failures(failed, draws.len())?;
                Ok(draws
                    .iter()
                    .flatten()
                    .map(|d| {
                        (
                            abs_t(d.beta[k], config.null_value, d.se_robust[k]),
                            abs_t(d.beta[k], config.null_value, d.se_standard[k]),
                        )
                    })
                    .collect::<Vec<(f64, f64)>>())
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let null_idx = config.null_grid.iter().position(|v| *v == config.null_value).unwrap_or(0);
    let null_robust: Vec<f64> = stats[null_idx].iter().map(|s| s.0).collect();
    let null_standard: Vec<f64> = stats[null_idx].iter().map(|s| s.1).collect();
    let critical_robust = empirical_critical_value(&null_robust, alpha);
    let critical_standard = empirical_critical_value(&null_standard, alpha);

    let rate = |pts: &Vec<(f64, f64)>, pick: fn(&(f64, f64)) -> f64, c: f64| {
        percent(pts.iter().filter(|s| pick(s) > c).count(), pts.len())
    };
    Ok(PowerCurve {
        grid: config.null_grid.clone(),
        null_value: config.null_value,
        robust: stats.iter().map(|s| rate(s, |x| x.0, z)).collect(),
        standard: stats.iter().map(|s| rate(s, |x| x.1, z)).collect(),
        adjusted_standard: stats.iter().map(|s| rate(s, |x| x.1, critical_standard)).collect(),
        adjusted_robust: stats.iter().map(|s| rate(s, |x| x.0, critical_robust)).collect(),
        critical_standard,
        critical_robust,
        replications: config.replications,
    })
}

/// Pointwise coverage (percent) and RMSE of a time-varying run at one bandwidth.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseCoverage {
    pub exponent: f64,
    pub bandwidth: f64,
    /// `n x p`, percent of usable replications covering `beta_kt`.
    pub coverage: DMatrix<f64>,
    /// `n x p`.
    pub rmse: DMatrix<f64>,
    /// Replications with an estimate at each `t`.
    pub used: Vec<usize>,
    pub replications: usize,
    /// Replications where every point failed.
    pub failed_replications: usize,
}

struct TvAccumulator {
    hits: DMatrix<f64>,
    sq_err: DMatrix<f64>,
    used: Vec<usize>,
    failed: usize,
}

impl TvAccumulator {
    fn new(n: usize, p: usize) -> Self {
        Self { hits: DMatrix::zeros(n, p), sq_err: DMatrix::zeros(n, p), used: vec![0; n], failed: 0 }
    }

    fn add(&mut self, fit: Option<&TvFit>, truth: &DMatrix<f64>, z: f64) {
        let Some(fit) = fit else {
            self.failed += 1;
            return;
        };
        for t in 0..fit.n() {
            if fit.failed[t] {
                continue;
            }
            self.used[t] += 1;
            for k in 0..fit.p() {
                let b = fit.beta_path[(t, k)];
                let err = b - truth[(t, k)];
                self.sq_err[(t, k)] += err * err;
                if covers(b, fit.se_robust_path[(t, k)], z, truth[(t, k)]) {
                    self.hits[(t, k)] += 1.0;
                }
            }
        }
    }
}

/// Pointwise robust coverage and RMSE for every bandwidth exponent.
///
/// Truth is the replication's own realized coefficient path, so stochastic
/// coefficients are scored against the path that generated the data.
pub fn run_mc_tv(config: &McConfig) -> Result<Vec<PointwiseCoverage>> {
    config.validate()?;
    if config.bandwidth_exponents.is_empty() {
        return Err(Error::Config("no bandwidth exponents given".into()));
    }
    let spec = config.model.resolve()?;
    let z = critical_value(config.level)?;
    let n = config.n;
    let p = spec.p();
    let kernels = config
        .bandwidth_exponents
        .iter()
        .map(|&h| KernelSpec::with_exponent(config.kernel, n, h))
        .collect::<Result<Vec<_>>>()?;

    let mut accs: Vec<TvAccumulator> = kernels.iter().map(|_| TvAccumulator::new(n, p)).collect();
    config.run_in_pool(|| {
        let mut start = 0;
        while start < config.replications {
            let end = (start + TV_BATCH).min(config.replications);
            let batch = (start..end)
                .into_par_iter()
                .map(|r| {
                    let g = gen_model_with(&spec, n, seeds_for(config, r))?;
                    let mask = match &config.mask {
                        Some(m) => Some(m.build(n, &g.seeds)?),
                        None => None,
                    };
                    let fits = kernels
                        .iter()
                        .map(|kernel| {
                            let fit = match &mask {
                                Some(mask) => fit_tv_missing(&g.sample, mask, kernel),
                                None => fit_tv(&g.sample, kernel),
                            };
                            match fit {
                                Ok(f) => Ok(Some(f)),
                                Err(e) if is_counted_failure(&e) => Ok(None),
                                Err(e) => Err(e),
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok((g.beta_path, fits))
                })
                .collect::<Result<Vec<_>>>()?;
            for (truth, fits) in &batch {
                for (acc, fit) in accs.iter_mut().zip(fits) {
                    acc.add(fit.as_ref(), truth, z);
                }
            }
            start = end;
        }
        Ok(())
    })?;

    accs.into_iter()
        .zip(kernels.iter().zip(&config.bandwidth_exponents))
        .map(|(acc, (kernel, &exponent))| {
            check_failures(acc.failed, config.replications)?;
            let coverage = DMatrix::from_fn(n, p, |t, k| {
                if acc.used[t] == 0 {
                    f64::NAN
                } else {
                    percent(acc.hits[(t, k)] as usize, acc.used[t])
                }
            });
            let rmse = DMatrix::from_fn(n, p, |t, k| (acc.sq_err[(t, k)] / acc.used[t] as f64).sqrt());
            Ok(PointwiseCoverage {
                exponent,
                bandwidth: kernel.bandwidth,
                coverage,
                rmse,
                used: acc.used,
                replications: config.replications,
                failed_replications: acc.failed,
            })
        })
        .collect()
}

/// Summary table in the column order `parameter,bias,rmse,cp,cp_st,sd`.
pub fn write_summary_csv<W: std::io::Write>(out: W, summary: &McSummary) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["parameter", "bias", "rmse", "cp", "cp_st", "sd"])?;
    for c in &summary.coefficients {
        w.write_record([
            c.parameter.clone(),
            c.bias.to_string(),
            c.rmse.to_string(),
            c.cp.to_string(),
            c.cp_st.to_string(),
            c.sd.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Long-format `t,k,value` CSV of an `n x p` matrix, 1-based indices.
pub fn write_long_csv<W: std::io::Write>(out: W, values: &DMatrix<f64>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "k", "value"])?;
    for t in 0..values.nrows() {
        for k in 0..values.ncols() {
            w.write_record([(t + 1).to_string(), (k + 1).to_string(), values[(t, k)].to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_power_csv<W: std::io::Write>(out: W, curve: &PowerCurve) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["value", "robust", "standard", "adjusted_standard", "adjusted_robust"])?;
    for i in 0..curve.grid.len() {
        w.write_record([
            curve.grid[i].to_string(),
            curve.robust[i].to_string(),
            curve.standard[i].to_string(),
            curve.adjusted_standard[i].to_string(),
            curve.adjusted_robust[i].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgp::path::PathSpec;
    use approx::assert_relative_eq;

    #[test]
    fn three_draw_fixture() {
        let s = CoefSummary::from_draws("beta1", 1.0, &[0.9, 1.0, 1.1], 3, 2);
        assert_relative_eq!(s.bias, 0.0, epsilon = 1e-15);
        assert_relative_eq!(s.sd, 0.1, epsilon = 1e-15);
        assert_relative_eq!(s.rmse, (0.02f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(s.rmse, 0.08165, epsilon = 1e-5);
        assert_relative_eq!(s.cp, 100.0);
        assert_relative_eq!(s.cp_st, 200.0 / 3.0);
    }

    #[test]
    fn rmse_identity() {
        let draws = [0.31, 0.27, 0.4, 0.35, 0.22, 0.3, 0.29];
        let s = CoefSummary::from_draws("b", 0.3, &draws, 0, 0);
        let r = draws.len() as f64;
        assert_relative_eq!(s.rmse.powi(2), s.bias.powi(2) + s.sd.powi(2) * (r - 1.0) / r, max_relative = 1e-12);
    }

    #[test]
    fn empirical_critical_values() {
        let t: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let c = empirical_critical_value(&t, 0.05);
        assert_eq!(c, 95.0);
        assert_eq!(t.iter().filter(|v| **v > c).count(), 5);
        assert_eq!(empirical_critical_value(&[1.0, 2.0], 0.05), 2.0);
    }

    fn zero_noise_model1() -> ModelSpec {
        let mut spec = catalog("model1").unwrap();
        if let ModelSpec::Regression(m) = &mut spec {
            m.noise_scale = PathSpec::constant(0.0);
        }
        spec
    }

    #[test]
    fn zero_noise_model_is_degenerate_but_scored() {
        let mut cfg = McConfig::new("model1", 200, 20, 1);
        cfg.model = ModelRef::Custom(zero_noise_model1());
        let s = run_mc_fixed(&cfg).unwrap();
        for c in &s.coefficients {
            assert!(c.bias.abs() < 1e-10 && c.rmse < 1e-10 && c.sd < 1e-10);
            assert!((0.0..=100.0).contains(&c.cp));
        }
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let mut cfg = McConfig::new("model2", 300, 40, 9);
        let a = run_mc_fixed(&cfg).unwrap();
        cfg.threads = Some(1);
        let b = run_mc_fixed(&cfg).unwrap();
        cfg.threads = Some(3);
        let c = run_mc_fixed(&cfg).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.coefficients, c.coefficients);
    }

    #[test]
    fn config_errors() {
        let mut cfg = McConfig::new("model1", 100, 0, 1);
        assert!(matches!(run_mc_fixed(&cfg), Err(Error::Config(_))));
        cfg.replications = 5;
        cfg.level = 1.5;
        assert!(matches!(run_mc_fixed(&cfg), Err(Error::Config(_))));
        let tv = McConfig::new("model3", 100, 5, 1);
        assert!(matches!(run_mc_fixed(&tv), Err(Error::Config(_))));
        let mut power = McConfig::new("model1", 100, 5, 1);
        power.null_grid = vec![0.1, 0.2];
        assert!(matches!(size_power_curve(&power), Err(Error::Config(_))));
        let unknown = McConfig::new("nope", 100, 5, 1);
        assert!(matches!(run_mc_fixed(&unknown), Err(Error::UnknownCatalogId(_))));
    }

    #[test]
    fn constant_beta_tv_run_matches_fixed_scoring() {
        // indicator kernel wider than the sample: every point is the global fit
        let mut cfg = McConfig::new("model1", 150, 30, 4);
        cfg.kernel = KernelKind::Indicator;
        cfg.bandwidth_exponents = vec![1.0];
        let tv = run_mc_tv(&cfg).unwrap();
        let fixed = run_mc_fixed(&cfg).unwrap();
        for k in 0..3 {
            for t in [0, 70, 149] {
                assert_relative_eq!(tv[0].coverage[(t, k)], fixed.coefficients[k].cp, epsilon = 1e-9);
                assert_relative_eq!(tv[0].rmse[(t, k)], fixed.coefficients[k].rmse, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn mask_spec_builds() {
        let seeds = SeedRecord::from_master(1);
        let m = MaskSpec::Block { start: 3, end: 5 }.build(10, &seeds).unwrap();
        assert_eq!(m.observed_count(), 7);
        assert!(!m.tau()[2] && !m.tau()[4] && m.tau()[5]);
        let r = MaskSpec::Random { count: 4 }.build(10, &seeds).unwrap();
        assert_eq!(r.observed_count(), 6);
        assert_eq!(r, MaskSpec::Random { count: 4 }.build(10, &seeds).unwrap());
        assert!(MaskSpec::Indices { missing: vec![0] }.build(10, &seeds).is_err());
    }

    #[test]
    fn csv_layouts() {
        let s = run_mc_fixed(&McConfig::new("iid", 100, 5, 2)).unwrap();
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("parameter,bias,rmse,cp,cp_st,sd\nbeta1,"));
        let mut buf = Vec::new();
        write_long_csv(&mut buf, &DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.5])).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,k,value\n1,1,1\n1,2,2\n2,1,3\n2,2,4.5\n");
    }

    #[test]
    fn manifest_config_round_trip() {
        let json = r#"{"model": "model1", "n": 1500, "replications": 1000, "seed": 7,
                       "mask": {"kind": "block", "start": 650, "end": 850}}"#;
        let cfg: McConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.level, 0.95);
        assert_eq!(cfg.mask, Some(MaskSpec::Block { start: 650, end: 850 }));
        let back: McConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let custom = McConfig { model: ModelRef::Custom(catalog("ar2").unwrap()), ..cfg };
        let back: McConfig = serde_json::from_str(&serde_json::to_string(&custom).unwrap()).unwrap();
        assert_eq!(back, custom);
    }
}
