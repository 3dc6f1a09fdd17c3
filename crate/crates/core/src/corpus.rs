//! Dataset ingestion and descriptive statistics.
//!
//! Non-positive observations are removed at construction and counted: a size
//! distribution has support `(0, ∞)`, and a zero impact factor means the
//! journal has no measured citations yet rather than a tiny size.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::sorted_median;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("column not found: {0}")]
    MissingColumn(String),
    #[error("no positive values remain after removing zeros and negatives")]
    NoPositiveValues,
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("value at index {index} is not finite: {value}")]
    NonFinite { index: usize, value: f64 },
}

/// A validated sample of strictly positive sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    values: Vec<f64>,
    field_name: String,
    n_original: usize,
    n_zero_removed: usize,
}

impl Dataset {
    /// Validates raw observations, dropping zeros and negatives.
    pub fn new(field_name: impl Into<String>, raw: Vec<f64>) -> Result<Self, CorpusError> {
        if let Some((index, &value)) = raw.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(CorpusError::NonFinite { index, value });
        }
        let n_original = raw.len();
        let negatives = raw.iter().filter(|&&v| v < 0.0).count();
        if negatives > 0 {
            log::warn!("removing {negatives} negative values");
        }
        let values: Vec<f64> = raw.into_iter().filter(|&v| v > 0.0).collect();
        if values.is_empty() {
            return Err(CorpusError::NoPositiveValues);
        }
        Ok(Self {
            n_zero_removed: n_original - values.len(),
            values,
            field_name: field_name.into(),
            n_original,
        })
    }

    /// Convenience constructor for already-positive data with no label.
    pub fn from_values(values: Vec<f64>) -> Result<Self, CorpusError> {
        Self::new("", values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn field_name(&self) -> &str {
        &self.field_name
    }

    pub fn n_original(&self) -> usize {
        self.n_original
    }

    pub fn n_zero_removed(&self) -> usize {
        self.n_zero_removed
    }

    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Every observation multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self, CorpusError> {
        let values = self.values.iter().map(|v| v * factor).collect();
        let mut out = Self::new(self.field_name.clone(), values)?;
        out.n_original = self.n_original;
        out.n_zero_removed = self.n_zero_removed;
        Ok(out)
    }
}

/// A skipped CSV row and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDiagnostic {
    /// 1-based line number in the file.
    pub line: u64,
    pub reason: String,
}

/// Loads one numeric column, logging a warning per rejected row.
pub fn load_csv(path: impl AsRef<Path>, column: Option<&str>) -> Result<Dataset, CorpusError> {
    let (data, diagnostics) = load_csv_with_diagnostics(path, column)?;
    for d in &diagnostics {
        log::warn!("line {}: {}", d.line, d.reason);
    }
    Ok(data)
}

/// Loads one numeric column from a UTF-8, comma-separated file.
///
/// A header row is assumed when any field of the first record is non-numeric.
/// With `column = None` the first column whose first data value parses as a
/// number is used. Blank, NaN and non-numeric cells are skipped and reported.
pub fn load_csv_with_diagnostics(
    path: impl AsRef<Path>,
    column: Option<&str>,
) -> Result<(Dataset, Vec<RowDiagnostic>), CorpusError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let records = reader.records().collect::<Result<Vec<_>, _>>()?;

    let parses = |s: &str| s.parse::<f64>().is_ok();
    let has_header = records
        .first()
        .is_some_and(|r| r.iter().any(|f| !f.is_empty() && !parses(f)));
    let (header, rows) = if has_header {
        (Some(&records[0]), &records[1..])
    } else {
        (None, &records[..])
    };

    let index = match column {
        Some(name) => header
            .and_then(|h| h.iter().position(|f| f == name))
            .ok_or_else(|| CorpusError::MissingColumn(name.to_string()))?,
        None => rows
            .first()
            .and_then(|r| r.iter().position(parses))
            .ok_or_else(|| CorpusError::MissingColumn("no numeric column".to_string()))?,
    };
    let field_name = match header {
        Some(h) => h.get(index).unwrap_or_default().to_string(),
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };

    let mut raw = Vec::with_capacity(rows.len());
    let mut diagnostics = Vec::new();
    for record in rows {
        let line = record.position().map_or(0, |p| p.line());
        let cell = record.get(index).unwrap_or("");
        let reason = if cell.is_empty() {
            Some("blank value".to_string())
        } else {
            match cell.parse::<f64>() {
                Ok(v) if v.is_nan() => Some("NaN value".to_string()),
                Ok(v) if v.is_infinite() => Some(format!("infinite value '{cell}'")),
                Ok(v) => {
                    if v < 0.0 {
                        diagnostics.push(RowDiagnostic {
                            line,
                            reason: format!("negative value {v} removed"),
                        });
                    }
                    raw.push(v);
                    None
                }
                Err(_) => Some(format!("non-numeric value '{cell}'")),
            }
        };
        if let Some(reason) = reason {
            diagnostics.push(RowDiagnostic { line, reason });
        }
    }
    Ok((Dataset::new(field_name, raw)?, diagnostics))
}

/// The summary columns of a descriptive-statistics table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Descriptives {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub gini: f64,
}

/// Mean, median (midpoint for even `n`), sample standard deviation and the
/// sample Gini index `Σ|xᵢ - xⱼ| / (2 n² mean)`.
pub fn describe(data: &Dataset) -> Result<Descriptives, CorpusError> {
    let n = data.len();
    if n < 2 {
        return Err(CorpusError::TooFewObservations { needed: 2, got: n });
    }
    let sorted = data.sorted_values();
    let nf = n as f64;
    let mean = sorted.iter().sum::<f64>() / nf;
    let var = sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    Ok(Descriptives {
        n,
        mean,
        median: sorted_median(&sorted),
        std_dev: var.sqrt(),
        gini: sorted_gini(&sorted, mean),
    })
}

/// `Σ (2i - n - 1) x₍ᵢ₎ / (n² mean)` on ascending data.
fn sorted_gini(sorted: &[f64], mean: f64) -> f64 {
    let n = sorted.len() as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum();
    (weighted / (n * n * mean)).max(0.0)
}
