//! Estimation with missing observations: both estimator forms and the
//! effective kernel mass inside a gap.
//!
//! ```text
//! cargo run --release --example missing_data
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robols::dgp::{catalog, gen_model};
use robols::missing::{effective_kernel_mass, fit_ols_missing, fit_tv_missing, mass_is_low};
use robols::{KernelKind, KernelSpec, MissingForm, MissingMask};

fn main() -> robols::Result<()> {
    let n = 1500;
    let g = gen_model(&catalog("model1")?, n, 3)?;

    // block 650..=850 (1-based) is missing
    let block = MissingMask::block(n, 649, 849)?;
    let random = MissingMask::random(n, 500, &mut ChaCha8Rng::seed_from_u64(1))?;

    for (name, mask) in [("block", &block), ("random", &random)] {
        let a = fit_ols_missing(&g.sample, mask, MissingForm::Zerofill)?;
        let b = fit_ols_missing(&g.sample, mask, MissingForm::Subsample)?;
        println!(
            "{name:>6}: N = {}, beta = {:.5?}, se = {:.5?}, forms agree: {}",
            mask.observed_count(),
            a.beta_hat.as_slice(),
            a.se_robust.as_slice(),
            (&a.beta_hat - &b.beta_hat).amax() < 1e-12
        );
    }

    let kernel = KernelSpec::with_exponent(KernelKind::Gaussian, n, 0.5)?;
    for t in [600, 660, 749, 840, 900] {
        let mass = effective_kernel_mass(&block, &kernel, t - 1);
        println!("t = {t}: N_t = {mass:.2}{}", if mass_is_low(mass, &kernel) { "  (low)" } else { "" });
    }
    let tv = fit_tv_missing(&g.sample, &block, &kernel)?;
    println!("time points without an estimate: {}", tv.failed_count());
    Ok(())
}
