//! A model defined in JSON rather than taken from the catalog, run through
//! the Monte Carlo harness.
//!
//! ```text
//! cargo run --release --example custom_model_json
//! ```

use robols::dgp::ModelSpec;
use robols::mc::{run_mc_fixed, McConfig, ModelRef};

const SPEC: &str = r#"{
  "type": "regression",
  "id": "trend-scaled",
  "coefficients": [
    {"kind": "constant", "value": 1.0},
    {"kind": "constant", "value": -0.5}
  ],
  "regressors": [
    {"mean": {"kind": "constant", "value": 0.0},
     "scale": {"kind": "linear", "slope": 2.0},
     "driver_lag": 1}
  ],
  "noise_scale": {"kind": "sine", "amplitude": 0.5, "freq": 2.0, "offset": 1.0},
  "noise": {"kind": "garch11", "omega": 1.0, "alpha": 0.2, "beta": 0.7}
}"#;

fn main() -> robols::Result<()> {
    let spec: ModelSpec = serde_json::from_str(SPEC).map_err(|e| robols::Error::InvalidSpec(e.to_string()))?;
    spec.validate()?;
    let mut cfg = McConfig::new("unused", 1000, 300, 9);
    cfg.model = ModelRef::Custom(spec);
    println!("{}", run_mc_fixed(&cfg)?);
    Ok(())
}
