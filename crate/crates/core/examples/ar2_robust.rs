//! AR(2) estimated as a regression on its own lags, with product noise
//! `e_t e_{t-1}` that is uncorrelated but not independent.
//!
//! ```text
//! cargo run --release --example ar2_robust
//! ```

use robols::dgp::{catalog, gen_model};
use robols::fit_ols;
use robols::stats::z_975;

fn main() -> robols::Result<()> {
    let g = gen_model(&catalog("ar2")?, 1500, 11)?;
    let fit = fit_ols(&g.sample)?;
    let truth = g.fixed_beta.expect("fixed coefficients");
    let z = z_975();
    for k in 0..3 {
        let b = fit.beta_hat[k];
        println!(
            "beta{}: {b:.4} (truth {:.1})  robust CI [{:.4}, {:.4}]  standard CI [{:.4}, {:.4}]",
            k + 1,
            truth[k],
            b - z * fit.se_robust[k],
            b + z * fit.se_robust[k],
            b - z * fit.se_standard[k],
            b + z * fit.se_standard[k]
        );
    }
    Ok(())
}
