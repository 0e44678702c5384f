//! Analysis reports built on top of the index panel: group statistics,
//! temporal dynamics, dimension decomposition and clustering, the
//! robustness suite, convergent validity, panel regressions, and disruption
//! event studies.
//!
//! Every report is a pure function of its immutable inputs (plus an
//! explicit seed where clustering is involved) and serializes to JSON and
//! figure-ready CSV.

mod decomposition;
mod events;
mod groups;
mod robustness;
mod summary;
mod temporal;
mod validity;

pub use decomposition::{
    cluster_profiles, dominant_dimensions, ClusterReport, ClusterSummary, CountryDominance,
    Dimension, DominanceReport,
};
pub use events::{event_study, predefined_events, EventReport, EventSpec, Outcome};
pub use groups::{group_statistics, GroupReport, GroupStats, PartitionStats, Weighting};
pub use robustness::{robustness_suite, RobustnessReport, RobustnessRow};
pub use summary::{dimension_summary, DimensionCorrelation, SummaryReport, VariableStats};
pub use temporal::{
    temporal_report, AnnualMean, CountryVolatility, DimensionAnnual, SplitHalf, TrendReport,
    YearPairRho,
};
pub use validity::{
    convergent_validity, run_regressions, ConvergentReport, ConvergentRow, RegressionReport,
};

use crate::index::IndexError;
use crate::normalize::NormalizeError;
use crate::stats::StatsError;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("need at least {needed} years of data, got {got}")]
    InsufficientYears { needed: usize, got: usize },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid event specification: {0}")]
    InvalidEvent(String),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}
