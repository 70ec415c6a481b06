//! Size and power of the robust and standard t-tests of `beta3 = 0`,
//! including size-adjusted power.
//!
//! ```text
//! cargo run --release --example power_curve
//! ```

use robols::mc::{size_power_curve, McConfig};

fn main() -> robols::Result<()> {
    let mut cfg = McConfig::new("model1", 1500, 500, 2024);
    cfg.test_index = 2;
    cfg.null_value = 0.0;
    cfg.null_grid = (0..=8).map(|i| 0.025 * i as f64).collect();

    let curve = size_power_curve(&cfg)?;
    println!("{:>7} {:>8} {:>8} {:>10}", "beta3", "robust", "std", "adj std");
    for i in 0..curve.grid.len() {
        println!(
            "{:>7.3} {:>8.1} {:>8.1} {:>10.1}",
            curve.grid[i], curve.robust[i], curve.standard[i], curve.adjusted_standard[i]
        );
    }
    println!("empirical |t| critical value for the standard test: {:.3}", curve.critical_standard);
    Ok(())
}
