//! Two-stage analysis of returns and residual correlation tests, on
//! simulated model-consistent returns and on GARCH(1,1) returns.
//!
//! ```text
//! cargo run --release --example residual_diagnostics
//! ```

use robols::empirical::{run_absolute, run_empirical, simulate_garch_returns, simulate_model_returns, EmpiricalConfig, SP500_LENGTH};

fn main() -> robols::Result<()> {
    let cfg = EmpiricalConfig::default();
    let model = run_empirical(&simulate_model_returns(SP500_LENGTH, 5), &cfg)?;
    let garch = run_absolute(&simulate_garch_returns(SP500_LENGTH, 5)?, &cfg)?;

    println!("H = {:.1}, residuals {}..={}", model.bandwidth, cfg.subsample.0, cfg.subsample.1);
    println!("{:>4} {:>9} {:>9} | {:>9} {:>9}", "lag", "iid std", "iid rob", "garch std", "garch rob");
    for (a, b) in model.tests.iter().zip(&garch.tests) {
        let mark = |x: f64, r: bool| format!("{x:>8.3}{}", if r { "*" } else { " " });
        println!(
            "{:>4} {} {} | {} {}",
            a.lag,
            mark(a.std_stat, a.std_reject),
            mark(a.robust_stat, a.robust_reject),
            mark(b.std_stat, b.std_reject),
            mark(b.robust_stat, b.robust_reject)
        );
    }
    println!(
        "rejections: iid {}/{}, garch {}/{}",
        model.std_rejections(),
        model.robust_rejections(),
        garch.std_rejections(),
        garch.robust_rejections()
    );
    Ok(())
}
