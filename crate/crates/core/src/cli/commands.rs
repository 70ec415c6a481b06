//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;

use super::io::{csv_string, num, parse_dataset, read_text, resolve_mask, write_bytes, write_csv, Dataset};
use super::manifest::{Experiment, ExperimentManifest};
use super::CliError;
use crate::dgp::catalog::catalog;
use crate::dgp::model::{gen_model, ModelSpec};
use crate::diagnostics::{corr_tests, CorrTestResult};
use crate::empirical::{log_returns, run_absolute, run_empirical, simulate_garch_returns, simulate_model_returns, Band, EmpiricalConfig};
use crate::mc::{run_mc_fixed, run_mc_tv, size_power_curve, write_long_csv, write_power_csv, write_summary_csv};
use crate::missing::{effective_kernel_mass, fit_ols_missing, fit_tv_missing, mass_is_low, MissingForm};
use crate::ols::{fit_ols, FixedFit};
use crate::stats::critical_value;
use crate::tv::{check_bandwidth, fit_tv, BandwidthPolicy, KernelKind, KernelSpec};

/// Text for stdout plus advisory messages for stderr.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
}

fn parse_form(s: &str) -> Result<MissingForm, String> {
    match s.to_ascii_lowercase().as_str() {
        "zerofill" => Ok(MissingForm::Zerofill),
        "subsample" => Ok(MissingForm::Subsample),
        other => Err(format!("unknown estimator form `{other}` (zerofill | subsample)")),
    }
}

fn parse_kernel(s: &str) -> Result<KernelKind, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

/// `a:b`, 1-based inclusive.
fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("range `{s}` is not of the form START:END"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    if a == 0 || a > b {
        return Err(format!("range {a}:{b} must satisfy 1 <= START <= END"));
    }
    Ok((a, b))
}

fn load(path: &Path) -> Result<Dataset, CliError> {
    parse_dataset(&read_text(path)?).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn coef_names(data: &Dataset, intercept: bool) -> Vec<String> {
    let mut names = Vec::new();
    if intercept {
        names.push("const".to_string());
    }
    names.extend(data.names[1..].iter().cloned());
    names
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// CSV with header: y, z1..zp (optional `date` and `mask` columns).
    pub input: PathBuf,
    /// Observation mask: 0/1 per line, or a JSON list of 1-based missing indices.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Prepend a constant regressor.
    #[arg(long)]
    pub intercept: bool,
    /// Missing-data estimator form.
    #[arg(long, default_value = "zerofill", value_parser = parse_form)]
    pub form: MissingForm,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn fit_rows(fit: &FixedFit, z: f64) -> Vec<Vec<f64>> {
    (0..fit.p())
        .map(|k| {
            let b = fit.beta_hat[k];
            let (sr, ss) = (fit.se_robust[k], fit.se_standard[k]);
            vec![b, sr, ss, b / sr, b / ss, b - z * sr, b + z * sr]
        })
        .collect()
}

pub fn cmd_fit(args: &FitArgs) -> Result<Output, CliError> {
    let data = load(&args.input)?;
    let sample = data.regression(args.intercept)?;
    let mask = resolve_mask(args.mask.as_deref(), &data)?;
    let fit = match &mask {
        Some(m) => fit_ols_missing(&sample, m, args.form)?,
        None => fit_ols(&sample)?,
    };
    let z = critical_value(args.level)?;
    let names = coef_names(&data, args.intercept);
    let rows = fit_rows(&fit, z);

    let mut out = Output::default();
    let s = &mut out.stdout;
    writeln!(s, "observations: {} (used {})", sample.n(), fit.n_obs).unwrap();
    writeln!(
        s,
        "{:<10} {:>12} {:>12} {:>12} {:>10} {:>10} {:>12} {:>12}",
        "coef", "estimate", "se_robust", "se_standard", "t_robust", "t_std", "ci_lower", "ci_upper"
    )
    .unwrap();
    for (name, r) in names.iter().zip(&rows) {
        writeln!(
            s,
            "{:<10} {:>12.5} {:>12.5} {:>12.5} {:>10.5} {:>10.5} {:>12.5} {:>12.5}",
            name, r[0], r[1], r[2], r[3], r[4], r[5], r[6]
        )
        .unwrap();
    }
    writeln!(s, "confidence intervals: {}% robust", 100.0 * args.level).unwrap();
    let degenerate = (0..fit.p()).any(|k| {
        let tiny = 1e-10 * fit.beta_hat[k].abs().max(1.0);
        fit.se_robust[k] <= tiny || fit.se_standard[k] <= tiny
    });
    if degenerate {
        writeln!(s, "note: zero standard errors (exact fit); t-statistics are undefined").unwrap();
    }

    if let Some(dir) = &args.out {
        let mut table = vec![["coef", "estimate", "se_robust", "se_standard", "t_robust", "t_standard", "ci_lower", "ci_upper"]
            .map(String::from)
            .to_vec()];
        for (name, r) in names.iter().zip(&rows) {
            let mut row = vec![name.clone()];
            row.extend(r.iter().map(|v| num(*v)));
            table.push(row);
        }
        out.files.push(write_csv(dir, "fit.csv", &table)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Args)]
pub struct TvFitArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, default_value = "gaussian", value_parser = parse_kernel)]
    pub kernel: KernelKind,
    /// Bandwidth exponent h in H = n^h.
    #[arg(long, conflicts_with = "bandwidth")]
    pub h_exponent: Option<f64>,
    /// Bandwidth H given directly.
    #[arg(long = "H", id = "bandwidth")]
    pub bandwidth: Option<f64>,
    /// Smoothness exponent used for the bandwidth-rule check.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long)]
    pub intercept: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_tvfit(args: &TvFitArgs) -> Result<Output, CliError> {
    let data = load(&args.input)?;
    let sample = data.regression(args.intercept)?;
    let n = sample.n();
    let (kernel, exponent) = match args.bandwidth {
        Some(h) => (KernelSpec::new(args.kernel, h)?, h.ln() / (n as f64).ln()),
        None => {
            let e = args.h_exponent.unwrap_or(0.5);
            (KernelSpec::with_exponent(args.kernel, n, e)?, e)
        }
    };
    let z = critical_value(args.level)?;
    let mask = resolve_mask(args.mask.as_deref(), &data)?;
    let fit = match &mask {
        Some(m) => fit_tv_missing(&sample, m, &kernel)?,
        None => fit_tv(&sample, &kernel)?,
    };

    let mut out = Output::default();
    let report = check_bandwidth(&BandwidthPolicy { exponent, gamma: args.gamma }, n);
    out.warnings.extend(report.warning);
    if let Some(m) = &mask {
        let low = (0..n).filter(|&t| mass_is_low(effective_kernel_mass(m, &kernel, t), &kernel)).count();
        if low > 0 {
            out.warnings.push(format!("{low} time points have effective kernel mass N_t below 0.1 H"));
        }
    }
    if fit.failed_count() > 0 {
        out.warnings.push(format!("{} time points have rank-deficient windows (reported as NaN)", fit.failed_count()));
    }

    let names = coef_names(&data, args.intercept);
    let mut table = vec![["t", "k", "coef", "beta", "se", "lower", "upper"].map(String::from).to_vec()];
    for t in 0..n {
        for (k, name) in names.iter().enumerate() {
            let b = fit.beta_path[(t, k)];
            let s = fit.se_robust_path[(t, k)];
            table.push(vec![
                (t + 1).to_string(),
                (k + 1).to_string(),
                name.clone(),
                num(b),
                num(s),
                num(b - z * s),
                num(b + z * s),
            ]);
        }
    }
    match &args.out {
        Some(dir) => {
            out.files.push(write_csv(dir, "tvfit.csv", &table)?);
            writeln!(
                out.stdout,
                "n = {n}, kernel = {:?}, H = {:.5}, failed points = {}",
                kernel.kind,
                kernel.bandwidth,
                fit.failed_count()
            )
            .unwrap();
        }
        None => out.stdout = csv_string(&table)?,
    }
    Ok(out)
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Experiment manifest (JSON).
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Overrides the manifest seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(buf)
}

pub fn cmd_mc(args: &McArgs) -> Result<Output, CliError> {
    let mut manifest = ExperimentManifest::from_json(&read_text(&args.manifest)?)?;
    if let Some(t) = args.threads {
        manifest.config.threads = Some(t);
    }
    if let Some(seed) = args.seed {
        manifest.config.seed = seed;
    }
    let dir = args.out.clone().or_else(|| manifest.out_dir.as_ref().map(PathBuf::from));
    let cfg = &manifest.config;

    let mut out = Output::default();
    writeln!(out.stdout, "config: {}", serde_json::to_string(&manifest).expect("manifest serializes")).unwrap();
    let mut files: Vec<(String, Vec<u8>)> = vec![("manifest.json".into(), manifest.to_json().into_bytes())];
    match manifest.experiment {
        Experiment::Fixed => {
            let summary = run_mc_fixed(cfg)?;
            writeln!(out.stdout, "{summary}").unwrap();
            files.push(("summary.csv".into(), csv_bytes(|b| write_summary_csv(b, &summary))?));
        }
        Experiment::Tv => {
            for run in run_mc_tv(cfg)? {
                writeln!(out.stdout, "h = {}, H = {:.5}, failed replications = {}", run.exponent, run.bandwidth, run.failed_replications)
                    .unwrap();
                for k in 0..run.coverage.ncols() {
                    let cp: Vec<f64> = run.coverage.column(k).iter().copied().filter(|v| v.is_finite()).collect();
                    let mean = cp.iter().sum::<f64>() / cp.len() as f64;
                    let min = cp.iter().copied().fold(f64::INFINITY, f64::min);
                    let rmse = run.rmse.column(k).iter().copied().filter(|v| v.is_finite()).sum::<f64>() / cp.len() as f64;
                    writeln!(out.stdout, "  beta{}: mean CP {:.1}, min CP {:.1}, mean RMSE {:.5}", k + 1, mean, min, rmse).unwrap();
                }
                files.push((format!("coverage_h{}.csv", run.exponent), csv_bytes(|b| write_long_csv(b, &run.coverage))?));
                files.push((format!("rmse_h{}.csv", run.exponent), csv_bytes(|b| write_long_csv(b, &run.rmse))?));
            }
        }
        Experiment::Power => {
            let curve = size_power_curve(cfg)?;
            writeln!(out.stdout, "{:>10} {:>8} {:>8} {:>10} {:>10}", "value", "robust", "std", "adj_std", "adj_robust").unwrap();
            for i in 0..curve.grid.len() {
                writeln!(
                    out.stdout,
                    "{:>10.5} {:>8.1} {:>8.1} {:>10.1} {:>10.1}",
                    curve.grid[i], curve.robust[i], curve.standard[i], curve.adjusted_standard[i], curve.adjusted_robust[i]
                )
                .unwrap();
            }
            writeln!(
                out.stdout,
                "empirical critical values: standard {:.5}, robust {:.5}",
                curve.critical_standard, curve.critical_robust
            )
            .unwrap();
            files.push(("power.csv".into(), csv_bytes(|b| write_power_csv(b, &curve))?));
        }
    }
    if let Some(dir) = dir {
        for (name, bytes) in &files {
            out.files.push(write_bytes(&dir, name, bytes)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Catalog id (model1, model2, model3, model4, ar2, supp1, supp2, iid) or a JSON model-spec file.
    pub model: String,
    #[arg(long, default_value_t = 1500)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn resolve_model(model: &str) -> Result<ModelSpec, CliError> {
    let path = Path::new(model);
    if path.is_file() {
        let spec: ModelSpec =
            serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Config(format!("{model}: {e}")))?;
        spec.validate()?;
        return Ok(spec);
    }
    Ok(catalog(model)?)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Output, CliError> {
    let spec = resolve_model(&args.model)?;
    let g = gen_model(&spec, args.n, args.seed)?;
    let p = g.sample.p();

    let mut data = vec![std::iter::once("y".to_string()).chain((1..=p).map(|k| format!("z{k}"))).collect::<Vec<_>>()];
    for t in 0..args.n {
        let mut row = vec![num(g.sample.y()[t])];
        row.extend((0..p).map(|k| num(g.sample.z()[(t, k)])));
        data.push(row);
    }
    let mut truth = vec![std::iter::once("t".to_string())
        .chain((1..=p).map(|k| format!("beta{k}")))
        .chain(["h".to_string(), "eps".to_string()])
        .collect::<Vec<_>>()];
    for t in 0..args.n {
        let mut row = vec![(t + 1).to_string()];
        row.extend((0..p).map(|k| num(g.beta_path[(t, k)])));
        row.push(num(g.noise_scale[t]));
        row.push(num(g.eps[t]));
        truth.push(row);
    }

    let mut out = Output::default();
    match &args.out {
        Some(dir) => {
            out.files.push(write_csv(dir, "data.csv", &data)?);
            out.files.push(write_csv(dir, "truth.csv", &truth)?);
            let seeds = serde_json::to_string_pretty(&g.seeds).expect("seeds serialize");
            out.files.push(write_bytes(dir, "seeds.json", seeds.as_bytes())?);
            writeln!(out.stdout, "model {} with n = {}, seed = {}", g.model_id, args.n, args.seed).unwrap();
        }
        None => out.stdout = csv_string(&data)?,
    }
    Ok(out)
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    /// CSV whose first numeric column (or --column) is the series.
    pub input: PathBuf,
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    /// 1-based inclusive subsample START:END.
    #[arg(long, value_parser = parse_range)]
    pub subsample: Option<(usize, usize)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn corr_table(tests: &[CorrTestResult]) -> String {
    let mut s = String::new();
    writeln!(s, "{:>4} {:>9} {:>9} {:>9} {:>7} {:>7}", "lag", "rho", "std", "robust", "rej_std", "rej_rob").unwrap();
    for r in tests {
        writeln!(
            s,
            "{:>4} {:>9.5} {:>9.5} {:>9.5} {:>7} {:>7}",
            r.lag,
            r.rho,
            r.std_stat,
            r.robust_stat,
            if r.std_reject { "*" } else { "" },
            if r.robust_reject { "*" } else { "" }
        )
        .unwrap();
    }
    let std = tests.iter().filter(|r| r.std_reject).count();
    let rob = tests.iter().filter(|r| r.robust_reject).count();
    writeln!(s, "rejections at 5%: standard {std} of {}, robust {rob} of {}", tests.len(), tests.len()).unwrap();
    s
}

fn corr_csv(tests: &[CorrTestResult]) -> Result<Vec<u8>, CliError> {
    csv_bytes(|b| crate::diagnostics::write_corr_csv(b, tests))
}

pub fn cmd_diagnose(args: &DiagnoseArgs) -> Result<Output, CliError> {
    let data = load(&args.input)?;
    let series = data.series(args.column.as_deref())?;
    let series = match args.subsample {
        Some((_, b)) if b > series.len() => return Err(CliError::Input(format!("subsample end {b} beyond {} rows", series.len()))),
        Some((a, b)) => &series[a - 1..b],
        None => series,
    };
    let tests = corr_tests(series, args.max_lag)?;
    let mut out = Output { stdout: corr_table(&tests), ..Output::default() };
    if let Some(dir) = &args.out {
        out.files.push(write_bytes(dir, "corr_tests.csv", &corr_csv(&tests)?)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Args)]
pub struct EmpiricalArgs {
    /// CSV of returns (or prices with --prices); a `date` column is ignored.
    #[arg(required_unless_present = "simulate")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub column: Option<String>,
    /// Input holds prices; convert to log returns.
    #[arg(long)]
    pub prices: bool,
    /// Use N simulated returns with i.i.d. innovations instead of a file
    /// (7558, the S&P 500 sample length, if N is omitted).
    #[arg(long, conflicts_with = "input", num_args = 0..=1, default_missing_value = "7558")]
    pub simulate: Option<usize>,
    #[arg(long, default_value_t = 0.6)]
    pub h_exponent: f64,
    #[arg(long, default_value = "gaussian", value_parser = parse_kernel)]
    pub kernel: KernelKind,
    #[arg(long, default_value = "500:1000", value_parser = parse_range)]
    pub subsample: (usize, usize),
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Also run the pipeline on simulated GARCH(1,1) returns with the fitted S&P 500 constants.
    #[arg(long)]
    pub garch_compare: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn band_rows(band: &Band) -> Vec<Vec<String>> {
    let mut rows = vec![["t", "estimate", "lower", "upper"].map(String::from).to_vec()];
    for t in 0..band.estimate.len() {
        rows.push(vec![(t + 1).to_string(), num(band.estimate[t]), num(band.lower[t]), num(band.upper[t])]);
    }
    rows
}

pub fn cmd_empirical(args: &EmpiricalArgs) -> Result<Output, CliError> {
    let returns = match (&args.input, args.simulate) {
        (_, Some(n)) => simulate_model_returns(n, args.seed),
        (Some(path), None) => {
            let data = load(path)?;
            let series = data.series(args.column.as_deref())?;
            if args.prices {
                log_returns(series)?
            } else {
                series.to_vec()
            }
        }
        (None, None) => return Err(CliError::Config("give an input file or --simulate N".into())),
    };
    let config = EmpiricalConfig {
        h_exponent: args.h_exponent,
        kernel: args.kernel,
        subsample: args.subsample,
        max_lag: args.max_lag,
        level: args.level,
    };
    let report = run_empirical(&returns, &config)?;

    let mut out = Output::default();
    writeln!(out.stdout, "n = {}, H = {:.5}, subsample {}:{}", returns.len(), report.bandwidth, args.subsample.0, args.subsample.1)
        .unwrap();
    writeln!(out.stdout, "residual correlation tests").unwrap();
    out.stdout.push_str(&corr_table(&report.tests));
    let mut files = vec![
        ("mean_band.csv".to_string(), csv_string(&band_rows(&report.mean))?.into_bytes()),
        ("scale_band.csv".to_string(), csv_string(&band_rows(&report.scale))?.into_bytes()),
        ("corr_tests.csv".to_string(), corr_csv(&report.tests)?),
    ];

    if args.garch_compare {
        let garch = simulate_garch_returns(returns.len(), args.seed)?;
        let g = run_absolute(&garch, &config)?;
        writeln!(out.stdout, "GARCH(1,1) comparison sample").unwrap();
        out.stdout.push_str(&corr_table(&g.tests));
        files.push(("garch_scale_band.csv".into(), csv_string(&band_rows(&g.scale))?.into_bytes()));
        files.push(("garch_corr_tests.csv".into(), corr_csv(&g.tests)?));
    }
    if let Some(dir) = &args.out {
        for (name, bytes) in &files {
            out.files.push(write_bytes(dir, name, bytes)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("500:1000"), Ok((500, 1000)));
        assert!(parse_range("0:3").is_err());
        assert!(parse_range("5:3").is_err());
        assert!(parse_range("5").is_err());
    }

    #[test]
    fn forms_and_kernels() {
        assert_eq!(parse_form("Subsample"), Ok(MissingForm::Subsample));
        assert!(parse_form("other").is_err());
        assert_eq!(parse_kernel("indicator"), Ok(KernelKind::Indicator));
        assert!(parse_kernel("epanechnikov").is_err());
    }
}
