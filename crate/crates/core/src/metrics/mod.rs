//! Halstead size and complexity measures for rule programs.

pub mod classify;
pub mod halstead;
pub mod report;

pub use classify::{count_loc, tokenize_classify, Class, ClassifyConfig, ConfigError};
pub use halstead::{halstead, ideal_volume, HalsteadCounts, HalsteadReport, MetricsError};
pub use report::{report_csv, CSV_HEADER};

use crate::reader::{OperatorTable, ReadError};

#[derive(Debug, thiserror::Error)]
pub enum SourceMetricsError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Classifies `src` and computes its report in one step.
pub fn measure_source(src: &str, ops: OperatorTable, cfg: &ClassifyConfig) -> Result<HalsteadReport<f64>, SourceMetricsError> {
    let counts = tokenize_classify(src, ops, cfg)?;
    Ok(halstead(counts)?)
}
