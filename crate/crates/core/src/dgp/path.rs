//! Deterministic and stochastic paths over `t = 1..n` for means, scale
//! factors and time-varying coefficients.

use serde::{Deserialize, Serialize};

use super::noise::{arfima_series, normals};
use super::rng::{stream_rng, Stream};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Innovation {
    IidNormal,
    Arfima { d: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathSpec {
    Constant { value: f64 },
    /// `amplitude * sin(freq * pi * t / n) + offset`.
    Sine { amplitude: f64, freq: f64, offset: f64 },
    /// `slope * t / n`.
    Linear { slope: f64 },
    /// `t^exponent`.
    Power { exponent: f64 },
    /// `|coef * n^n_power * sum_{j <= t} innovation_j| + offset`, drawn from
    /// path stream `stream` of the scale seed.
    AbsScaledWalk {
        coef: f64,
        n_power: f64,
        offset: f64,
        innovation: Innovation,
        stream: u64,
    },
    Sum { terms: Vec<PathSpec> },
    Product { factors: Vec<PathSpec> },
}

impl PathSpec {
    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn sine(amplitude: f64, freq: f64, offset: f64) -> Self {
        Self::Sine { amplitude, freq, offset }
    }

    pub fn linear(slope: f64) -> Self {
        Self::Linear { slope }
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            Self::AbsScaledWalk { .. } => false,
            Self::Sum { terms } => terms.iter().all(Self::is_deterministic),
            Self::Product { factors } => factors.iter().all(Self::is_deterministic),
            _ => true,
        }
    }

    /// Constant value, if the path is a constant.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Self::Constant { value } => Some(*value),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("non-finite {what} in path")))
            }
        };
        match self {
            Self::Constant { value } => finite(*value, "value"),
            Self::Sine { amplitude, freq, offset } => {
                finite(*amplitude, "amplitude")?;
                finite(*freq, "freq")?;
                finite(*offset, "offset")
            }
            Self::Linear { slope } => finite(*slope, "slope"),
            Self::Power { exponent } => finite(*exponent, "exponent"),
            Self::AbsScaledWalk { coef, n_power, offset, innovation, .. } => {
                finite(*coef, "coef")?;
                finite(*n_power, "n_power")?;
                finite(*offset, "offset")?;
                if let Innovation::Arfima { d } = innovation {
                    if !(d.abs() < 0.5) {
                        return Err(Error::InvalidSpec(format!("ARFIMA d={d} outside (-0.5, 0.5)")));
                    }
                }
                Ok(())
            }
            Self::Sum { terms } => terms.iter().try_for_each(Self::validate),
            Self::Product { factors } => factors.iter().try_for_each(Self::validate),
        }
    }

    /// Values at `t = 1..n`; stochastic parts draw from `scale_seed`.
    pub fn eval(&self, n: usize, scale_seed: u64) -> Result<Vec<f64>> {
        let nf = n as f64;
        let times = || (1..=n).map(|t| t as f64);
        Ok(match self {
            Self::Constant { value } => vec![*value; n],
            Self::Sine { amplitude, freq, offset } => times()
                .map(|t| amplitude * (freq * std::f64::consts::PI * t / nf).sin() + offset)
                .collect(),
            Self::Linear { slope } => times().map(|t| slope * t / nf).collect(),
            Self::Power { exponent } => times().map(|t| t.powf(*exponent)).collect(),
            Self::AbsScaledWalk { coef, n_power, offset, innovation, stream } => {
                let mut rng = stream_rng(scale_seed, Stream::Path(*stream));
                let steps = match innovation {
                    Innovation::IidNormal => normals(n, &mut rng),
                    Innovation::Arfima { d } => arfima_series(*d, n, &mut rng)?,
                };
                let scale = coef * nf.powf(*n_power);
                let mut acc = 0.0;
                steps
                    .into_iter()
                    .map(|s| {
                        acc += s;
                        (scale * acc).abs() + offset
                    })
                    .collect()
            }
            Self::Sum { terms } => {
                let mut out = vec![0.0; n];
                for term in terms {
                    for (o, v) in out.iter_mut().zip(term.eval(n, scale_seed)?) {
                        *o += v;
                    }
                }
                out
            }
            Self::Product { factors } => {
                let mut out = vec![1.0; n];
                for factor in factors {
                    for (o, v) in out.iter_mut().zip(factor.eval(n, scale_seed)?) {
                        *o *= v;
                    }
                }
                out
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn deterministic_paths() {
        let n = 4;
        assert_eq!(PathSpec::linear(0.3).eval(n, 0).unwrap()[3], 0.3);
        assert_relative_eq!(PathSpec::linear(0.3).eval(n, 0).unwrap()[0], 0.075);
        let s = PathSpec::sine(0.5, 1.0, 1.0).eval(n, 0).unwrap();
        assert_relative_eq!(s[1], 1.5, epsilon = 1e-15);
        let p = PathSpec::Power { exponent: -0.25 }.eval(n, 0).unwrap();
        assert_relative_eq!(p[3], 4f64.powf(-0.25));
        let prod = PathSpec::Product { factors: vec![PathSpec::constant(2.0), PathSpec::Power { exponent: 0.5 }] };
        assert_relative_eq!(prod.eval(n, 0).unwrap()[3], 4.0);
        assert!(prod.is_deterministic());
    }

    #[test]
    fn walk_is_nonnegative_and_seeded() {
        let w = PathSpec::AbsScaledWalk {
            coef: 0.5,
            n_power: -0.5,
            offset: 0.25,
            innovation: Innovation::IidNormal,
            stream: 3,
        };
        let a = w.eval(300, 17).unwrap();
        assert!(a.iter().all(|v| *v >= 0.25));
        assert_eq!(a, w.eval(300, 17).unwrap());
        assert_ne!(a, w.eval(300, 18).unwrap());
        assert!(!w.is_deterministic());
        let bad = PathSpec::AbsScaledWalk {
            coef: 1.0,
            n_power: 0.0,
            offset: 0.0,
            innovation: Innovation::Arfima { d: 0.7 },
            stream: 0,
        };
        assert!(bad.validate().is_err());
    }
}
