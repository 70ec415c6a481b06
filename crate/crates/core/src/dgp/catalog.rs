//! Built-in simulation models.
//!
//! | id            | description                                                    |
//! |---------------|----------------------------------------------------------------|
//! | `model1`      | fixed beta, deterministic trend scales, GARCH(1,1) noise       |
//! | `model2`      | fixed beta, random-walk scale factors, GARCH(1,1) noise        |
//! | `model3`      | sinusoidal time-varying beta and scales, GARCH(1,1) noise      |
//! | `model4`      | mixed deterministic/fractional-walk beta and scales, iid noise |
//! | `ar2`         | AR(2) with product noise `e_t e_{t-1}`                         |
//! | `supp1`       | fixed beta, mixed stochastic/deterministic regressor scales    |
//! | `supp2(g)`    | fixed beta, regressor scales `t` and `t^g` (default g = -0.25) |
//! | `iid`         | fixed beta, unit scales, iid normal noise                      |

use super::model::{ArModel, ModelSpec, RegressionModel, RegressorSpec};
use super::noise::NoiseSpec;
use super::path::{Innovation, PathSpec};
use crate::error::{Error, Result};

pub const FIXED_BETA: [f64; 3] = [0.5, 0.4, 0.3];
/// Memory parameter of the fractional walks in `model4`.
pub const MODEL4_MEMORY: f64 = 0.4;
/// Walk normalization exponent in `model4`: partial sums of fractional noise
/// grow like `n^{d + 1/2}`.
pub const MODEL4_WALK_EXPONENT: f64 = MODEL4_MEMORY + 0.5;
pub const SUPP2_DEFAULT_GAMMA: f64 = -0.25;

pub const CATALOG_IDS: [&str; 8] = ["model1", "model2", "model3", "model4", "ar2", "supp1", "supp2", "iid"];

fn catalog_garch() -> NoiseSpec {
    NoiseSpec::garch(1.0, 0.2, 0.7)
}

fn fixed_coefficients() -> Vec<PathSpec> {
    FIXED_BETA.iter().map(|b| PathSpec::constant(*b)).collect()
}

fn regressor(mean: PathSpec, scale: PathSpec, driver_lag: usize) -> RegressorSpec {
    RegressorSpec { mean, scale, driver_lag, ar: 0.5 }
}

fn walk(coef: f64, n_power: f64, offset: f64, innovation: Innovation, stream: u64) -> PathSpec {
    PathSpec::AbsScaledWalk { coef, n_power, offset, innovation, stream }
}

fn regression(id: &str, coefficients: Vec<PathSpec>, regressors: Vec<RegressorSpec>, noise_scale: PathSpec, noise: NoiseSpec) -> ModelSpec {
    ModelSpec::Regression(RegressionModel {
        id: id.to_string(),
        coefficients,
        regressors,
        noise_scale,
        noise,
        driver_burn_in: 100,
    })
}

fn parse_param(id: &str, name: &str) -> Result<Option<f64>> {
    let Some(rest) = id.strip_prefix(name) else {
        return Ok(None);
    };
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| rest.strip_prefix(':'))
        .ok_or_else(|| Error::UnknownCatalogId(id.to_string()))?;
    inner
        .trim()
        .parse::<f64>()
        .map(Some)
        .map_err(|_| Error::UnknownCatalogId(id.to_string()))
}

/// Looks up a catalog entry. `supp2` takes an optional exponent, written
/// `supp2(-0.25)` or `supp2:-0.25`.
pub fn catalog(id: &str) -> Result<ModelSpec> {
    let id = id.trim();
    let sine_mean = || PathSpec::sine(0.5, 1.0, 1.0);
    let spec = match id {
        "model1" => regression(
            id,
            fixed_coefficients(),
            vec![
                regressor(sine_mean(), PathSpec::linear(0.4), 1),
                regressor(sine_mean(), PathSpec::linear(0.4), 2),
            ],
            PathSpec::linear(0.3),
            catalog_garch(),
        ),
        "model2" => {
            let w = |stream| walk(0.5, -0.5, 0.25, Innovation::IidNormal, stream);
            regression(
                id,
                fixed_coefficients(),
                vec![regressor(sine_mean(), w(1), 1), regressor(sine_mean(), w(2), 2)],
                w(0),
                catalog_garch(),
            )
        }
        "model3" => regression(
            id,
            vec![PathSpec::sine(0.5, 0.5, 1.0), PathSpec::sine(0.5, 1.0, 1.0), PathSpec::sine(0.5, 2.0, 1.0)],
            vec![
                regressor(sine_mean(), PathSpec::sine(0.5, 1.0, 1.0), 1),
                regressor(sine_mean(), PathSpec::sine(0.5, 1.0, 1.0), 2),
            ],
            PathSpec::sine(0.5, 2.0, 1.0),
            catalog_garch(),
        ),
        "model4" => {
            let frac = Innovation::Arfima { d: MODEL4_MEMORY };
            regression(
                id,
                vec![
                    PathSpec::sine(0.5, 0.5, 1.0),
                    PathSpec::sine(0.5, 1.0, 1.0),
                    PathSpec::Sum {
                        terms: vec![walk(1.0, -MODEL4_WALK_EXPONENT, 0.0, frac, 2), PathSpec::linear(0.3)],
                    },
                ],
                vec![
                    regressor(sine_mean(), walk(1.0, -MODEL4_WALK_EXPONENT, 0.2, frac, 1), 1),
                    regressor(sine_mean(), PathSpec::sine(0.5, 1.0, 1.0), 2),
                ],
                PathSpec::sine(0.5, 2.0, 1.0),
                NoiseSpec::iid_normal(),
            )
        }
        "ar2" => ModelSpec::Autoregression(ArModel {
            id: id.to_string(),
            intercept: FIXED_BETA[0],
            lags: vec![FIXED_BETA[1], FIXED_BETA[2]],
            noise: NoiseSpec::lagged_product(),
            burn_in: 500,
        }),
        "supp1" => regression(
            id,
            fixed_coefficients(),
            vec![
                regressor(sine_mean(), walk(0.5, -0.5, 0.25, Innovation::IidNormal, 1), 1),
                regressor(PathSpec::sine(0.5, 0.5, 1.0), PathSpec::sine(0.5, 3.0, 1.0), 2),
            ],
            PathSpec::linear(0.4),
            catalog_garch(),
        ),
        "iid" => regression(
            id,
            fixed_coefficients(),
            vec![
                regressor(PathSpec::constant(1.0), PathSpec::constant(1.0), 1),
                regressor(PathSpec::constant(1.0), PathSpec::constant(1.0), 2),
            ],
            PathSpec::constant(1.0),
            NoiseSpec::iid_normal(),
        ),
        _ => {
            let gamma = if id == "supp2" {
                SUPP2_DEFAULT_GAMMA
            } else {
                parse_param(id, "supp2")?.ok_or_else(|| Error::UnknownCatalogId(id.to_string()))?
            };
            let power = |e: f64| PathSpec::Power { exponent: e };
            regression(
                &format!("supp2({gamma})"),
                fixed_coefficients(),
                vec![
                    regressor(
                        PathSpec::Product { factors: vec![PathSpec::sine(0.5, 10.0, 1.0), power(0.5)] },
                        power(1.0),
                        1,
                    ),
                    regressor(
                        PathSpec::Product { factors: vec![PathSpec::sine(0.5, 5.0, 1.0), power(gamma)] },
                        power(gamma),
                        2,
                    ),
                ],
                PathSpec::constant(1.0),
                catalog_garch(),
            )
        }
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_ids() {
        for id in CATALOG_IDS {
            assert!(catalog(id).is_ok(), "{id}");
        }
        assert_eq!(catalog("supp2(0.5)").unwrap().id(), "supp2(0.5)");
        assert_eq!(catalog("supp2:-0.5").unwrap().id(), "supp2(-0.5)");
        assert_eq!(catalog("supp2").unwrap().id(), "supp2(-0.25)");
        assert!(matches!(catalog("model9"), Err(Error::UnknownCatalogId(_))));
        assert!(matches!(catalog("supp2(abc)"), Err(Error::UnknownCatalogId(_))));
    }

    #[test]
    fn fixed_and_time_varying_entries() {
        assert!(catalog("model1").unwrap().fixed_beta().is_some());
        assert!(catalog("ar2").unwrap().fixed_beta().is_some());
        assert!(catalog("model3").unwrap().fixed_beta().is_none());
        assert!(catalog("model4").unwrap().fixed_beta().is_none());
    }
}
