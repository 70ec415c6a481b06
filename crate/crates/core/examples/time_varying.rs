//! Time-varying OLS with pointwise robust bands, and the bandwidth rule.
//!
//! ```text
//! cargo run --release --example time_varying
//! ```

use robols::dgp::{catalog, gen_model};
use robols::tv::{check_bandwidth, tv_confidence_band, BandwidthPolicy};
use robols::{fit_tv, KernelKind, KernelSpec};

fn main() -> robols::Result<()> {
    let n = 1500;
    let g = gen_model(&catalog("model3")?, n, 7)?;
    let kernel = KernelSpec::with_exponent(KernelKind::Gaussian, n, 0.5)?;
    let fit = fit_tv(&g.sample, &kernel)?;
    let (lo, hi) = tv_confidence_band(&fit, 2, 0.95)?;

    println!("H = {:.2}", kernel.bandwidth);
    println!("{:>5} {:>8} {:>8} {:>8} {:>8}", "t", "beta3", "est", "lower", "upper");
    for t in (99..n).step_by(200) {
        println!(
            "{:>5} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            t + 1,
            g.beta_path[(t, 2)],
            fit.beta_path[(t, 2)],
            lo[t],
            hi[t]
        );
    }

    for exponent in [0.5, 0.7] {
        let report = check_bandwidth(&BandwidthPolicy { exponent, gamma: 1.0 }, n);
        match report.warning {
            Some(w) => println!("h = {exponent}: {w}"),
            None => println!("h = {exponent}: ok (h < {:.3})", report.max_exponent),
        }
    }
    Ok(())
}
