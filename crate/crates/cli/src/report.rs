//! The structured report written by `--json`.
//!
//! Every report carries `schema_version`; [`Report::from_json`] refuses any
//! other version. Floating-point values are written in shortest round-trip
//! form, so a report read back compares equal to the one written.

use std::path::Path;

use heavytail::corpus::Descriptives;
use heavytail::{DistributionSpec, FitResult, GofResult, VuongResult, WaldResult};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot read report: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported report schema version {found} (expected {SCHEMA_VERSION})")]
    Version { found: u64 },
    #[error("report has no schema_version field")]
    MissingVersion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    /// `heavytail <version>`.
    pub tool: String,
    /// Command-line arguments after the program name, minus `--json`.
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub input: Option<InputDigest>,
    pub results: Results,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub column: String,
    /// Observations kept after removing non-positive values.
    pub n: usize,
    pub n_original: usize,
    pub n_zero_removed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Results {
    Describe {
        descriptives: Descriptives,
    },
    Fit {
        fits: Vec<FitEntry>,
    },
    Gof {
        alpha: f64,
        tests: Vec<GofEntry>,
    },
    Compare {
        first: FitResult,
        second: FitResult,
        vuong: VuongResult,
    },
    Qq(QqSummary),
    Simulate(SimulationSummary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitEntry {
    pub result: FitResult,
    /// Test of the Fisk reduction, when the family has one and it is computable.
    pub wald: Option<WaldResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofEntry {
    pub result: GofResult,
    pub rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QqSummary {
    pub spec: DistributionSpec,
    /// False when `--params` was given.
    pub fitted: bool,
    pub output: String,
    pub points: usize,
    pub split: f64,
    pub max_abs_deviation: f64,
    /// `max |empirical / theoretical - 1|`.
    pub max_rel_deviation: f64,
    pub reference: Vec<ReferenceLine>,
}

/// The 45-degree line across one panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLine {
    pub panel: String,
    pub from: f64,
    pub to: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub spec: DistributionSpec,
    pub n: usize,
    pub exact_quantiles: bool,
    pub output: String,
}

impl Report {
    pub fn new(
        command: Vec<String>,
        seed: Option<u64>,
        input: Option<InputDigest>,
        results: Results,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: format!("heavytail {}", env!("CARGO_PKG_VERSION")),
            command,
            seed,
            input,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            None => Err(ReportError::MissingVersion),
            Some(v) if v != u64::from(SCHEMA_VERSION) => Err(ReportError::Version { found: v }),
            Some(_) => Ok(serde_json::from_value(value)?),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, ReportError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
