//! Run configuration: defaults, TOML config file, then command-line flags,
//! in increasing precedence. The merged value is echoed into every report.
//!
//! ```toml
//! manifold = "S2xS3"          # inline descriptor or path to a descriptor file
//! cutoff = "12"               # spectrum / oracle mode cutoff (rational)
//! alpha = "1/3"               # nu: minimize A_alpha instead of A
//! k = "1"                     # bounds: Ricci lower bound override
//! format = "table"            # table | json | csv
//! out = "report.json"         # write here instead of stdout
//! seed = 0                    # randomized sample points
//!
//! [oracle]
//! epsilon = 1e-3
//! richardson = true
//! polar = 6                   # Gauss nodes per polar axis
//! azimuth = 10                # nodes per circle
//! samples = 20                # accepted random points per mode
//! apply_tolerance = 1e-3
//! identity_tolerance = 1e-4
//! levels = "1,0;0,1"          # explicit modes; default: all with total <= cutoff
//!
//! [sweep]
//! template = "S2(t)xS2(1)"
//! grid = "1/4:4:16"           # start:stop:count, or a comma list
//! ```
//!
//! The thread count is a runtime setting only; it never changes output and is
//! not part of the configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sprime_core::oracle::checks::{DEFAULT_APPLY_TOLERANCE, DEFAULT_IDENTITY_TOLERANCE};
use sprime_core::oracle::fd::DEFAULT_EPSILON;
use sprime_core::oracle::{FdStep, NodeCounts, OracleSettings};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub epsilon: f64,
    pub richardson: bool,
    pub polar: usize,
    pub azimuth: usize,
    pub samples: usize,
    pub apply_tolerance: f64,
    pub identity_tolerance: f64,
    pub levels: Option<String>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        let n = NodeCounts::default();
        Self {
            epsilon: DEFAULT_EPSILON,
            richardson: true,
            polar: n.polar,
            azimuth: n.azimuth,
            samples: 20,
            apply_tolerance: DEFAULT_APPLY_TOLERANCE,
            identity_tolerance: DEFAULT_IDENTITY_TOLERANCE,
            levels: None,
        }
    }
}

impl OracleConfig {
    pub fn settings(&self) -> OracleSettings {
        OracleSettings {
            step: FdStep {
                epsilon: self.epsilon,
                richardson: self.richardson,
            },
            nodes: NodeCounts {
                polar: self.polar,
                azimuth: self.azimuth,
            },
            identity_tolerance: self.identity_tolerance,
            apply_tolerance: self.apply_tolerance,
            samples: self.samples,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub template: Option<String>,
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub manifold: Option<String>,
    pub cutoff: Option<String>,
    pub alpha: Option<String>,
    pub k: Option<String>,
    pub format: Format,
    pub out: Option<String>,
    pub seed: u64,
    pub oracle: OracleConfig,
    pub sweep: SweepConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
