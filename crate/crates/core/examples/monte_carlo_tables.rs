//! Bias, RMSE and coverage tables for the fixed-parameter models.
//!
//! ```text
//! cargo run --release --example monte_carlo_tables [replications]
//! ```

use robols::mc::{run_mc_fixed, MaskSpec, McConfig};

fn main() -> robols::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let runs = [
        ("model1", None),
        ("model2", None),
        ("ar2", None),
        ("model1", Some(MaskSpec::Block { start: 650, end: 850 })),
        ("model1", Some(MaskSpec::Random { count: 500 })),
    ];
    for (model, mask) in runs {
        let mut cfg = McConfig::new(model, 1500, reps, 2024);
        cfg.mask = mask.clone();
        let summary = run_mc_fixed(&cfg)?;
        match mask {
            Some(m) => println!("{model}, mask {m:?}"),
            None => println!("{model}"),
        }
        println!("{summary}\n");
    }
    Ok(())
}
