//! Experiment manifest for `robols mc`.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::mc::McConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    /// Bias/RMSE/coverage table of the fixed-parameter fit.
    #[default]
    Fixed,
    /// Pointwise coverage and RMSE of the time-varying fit.
    Tv,
    /// Size and power curve of one coefficient test.
    Power,
}

/// Monte Carlo configuration plus what to run and where to write it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    #[serde(default)]
    pub experiment: Experiment,
    #[serde(flatten)]
    pub config: McConfig,
    /// Output directory; `--out` overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

impl ExperimentManifest {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("manifest: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}
