//! Dataset ingestion: parsing, validation, and synthetic fixtures for the
//! five input tables (LSCI, LSBCI, PLSCI, classifications, external
//! covariates).
//!
//! Loaders are strict: exact lowercase headers, decimal-point numerals, and
//! hard errors on duplicate keys or out-of-domain values. Missing
//! observations are absent rows, never sentinels, and nothing is imputed.
//! Row order of a source file is irrelevant: tables sort themselves on
//! construction, so shuffled inputs produce identical bundles.

mod fixture;
mod load;
mod tables;

pub use fixture::{generate_fixture, FixtureConfig};
pub use load::{
    classifications_to_csv, external_to_csv, load_bundle, load_classifications, load_external,
    load_lsbci, load_lsci, load_plsci, lsbci_to_csv, lsci_to_csv, plsci_to_csv,
};
pub use tables::{
    validate_bundle, ClassificationRow, ClassificationTable, DataBundle, ExternalRow,
    ExternalTable, LsbciRow, LsbciTable, LsciRow, LsciTable, PlsciRow, PlsciTable,
};

use std::fmt;

/// The five recognised input datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Lsci,
    Lsbci,
    Plsci,
    Classification,
    External,
}

impl DatasetKind {
    pub fn file_name(&self) -> &'static str {
        match self {
            DatasetKind::Lsci => "lsci.csv",
            DatasetKind::Lsbci => "lsbci.csv",
            DatasetKind::Plsci => "plsci.csv",
            DatasetKind::Classification => "classifications.csv",
            DatasetKind::External => "external.csv",
        }
    }

    pub fn headers(&self) -> &'static [&'static str] {
        match self {
            DatasetKind::Lsci => &["economy", "year", "lsci"],
            DatasetKind::Lsbci => &["economy_a", "economy_b", "year", "lsbci"],
            DatasetKind::Plsci => &["port_id", "economy", "year", "plsci"],
            DatasetKind::Classification => &["economy", "name", "sids", "ldc", "lldc", "region"],
            DatasetKind::External => &[
                "economy",
                "year",
                "gdp_pc",
                "trade_open",
                "lpi",
                "freight_advalorem",
            ],
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{kind} line {line}: malformed CSV: {message}")]
    MalformedCsv {
        kind: DatasetKind,
        line: u64,
        message: String,
    },
    #[error("{kind}: schema mismatch: expected header [{expected}], found [{found}]")]
    SchemaMismatch {
        kind: DatasetKind,
        expected: String,
        found: String,
    },
    #[error("{kind} ({key}): {message}")]
    DomainError {
        kind: DatasetKind,
        key: String,
        message: String,
    },
    #[error("economy '{economy}' referenced by {kind} is missing from classifications")]
    UnknownEconomy { kind: DatasetKind, economy: String },
    #[error("invalid fixture configuration: {0}")]
    InvalidConfig(String),
}

/// Short economy identifier (UNCTAD code or ISO3). Non-empty, no embedded
/// whitespace or commas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct EconomyId(String);

impl EconomyId {
    pub fn new(code: impl Into<String>) -> Result<Self, String> {
        let code = code.into();
        if code.is_empty() {
            return Err("economy code must be non-empty".to_string());
        }
        if code.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(format!(
                "economy code '{code}' contains whitespace or commas"
            ));
        }
        Ok(Self(code))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EconomyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// UN M49 macro-region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Region {
    Africa,
    Americas,
    Asia,
    Europe,
    Oceania,
}

impl Region {
    pub const ALL: [Region; 5] = [
        Region::Africa,
        Region::Americas,
        Region::Asia,
        Region::Europe,
        Region::Oceania,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Africa => "Africa",
            Region::Americas => "Americas",
            Region::Asia => "Asia",
            Region::Europe => "Europe",
            Region::Oceania => "Oceania",
        }
    }

    pub fn parse(s: &str) -> Option<Region> {
        Region::ALL.iter().copied().find(|r| r.as_str() == s)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inclusive year bounds accepted by the loaders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct YearRange {
    pub min: i32,
    pub max: i32,
}

impl YearRange {
    pub const DEFAULT: YearRange = YearRange {
        min: 2006,
        max: 2025,
    };

    pub fn contains(&self, year: i32) -> bool {
        (self.min..=self.max).contains(&year)
    }
}

impl Default for YearRange {
    fn default() -> Self {
        Self::DEFAULT
    }
}
