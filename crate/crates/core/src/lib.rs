//! Construction and analysis of the Maritime Connectivity Vulnerability
//! Index (MCVI).
//!
//! The MCVI scores the structural fragility of a country's liner shipping
//! connectivity from three public indicator families: the country-level
//! connectivity score (LSCI), a bilateral-integration composite built from
//! pairwise scores and partner counts (LSBCI), and the concentration of
//! port-level connectivity (PLSCI, as a Herfindahl-Hirschman index). Raw
//! indicators are normalized with pooled fractional ranks oriented so that
//! higher means more vulnerable, then aggregated as a weighted mean.
//!
//! Pipeline stages map onto the modules:
//!
//! - [`ingest`]: CSV parsing, validation, synthetic fixtures
//! - [`dimensions`]: raw indicator panel per (economy, year)
//! - [`normalize`]: pooled-rank / within-year / min-max normalization
//! - [`index`]: aggregation, country ranking, PCA-derived weights
//! - [`stats`]: the statistical kernel used everywhere else
//! - [`uncertainty`]: Monte Carlo propagation of weight, data, and
//!   normalization uncertainty
//! - [`analysis`]: group statistics, temporal dynamics, decomposition,
//!   robustness, validity, regressions, event studies
//!
//! Everything is deterministic: all randomness flows from explicit 64-bit
//! seeds through [`rng::SplitMix64`] streams, and repeated runs produce
//! bit-identical results regardless of thread count.

pub mod analysis;
pub mod dimensions;
pub mod index;
pub mod ingest;
pub mod normalize;
pub mod report;
pub mod rng;
pub mod stats;
pub mod uncertainty;

pub use dimensions::{build_raw_panel, RawDimensionPanel};
pub use index::{
    aggregate_mcvi, derive_pca_weights, rank_countries, ranking_spearman, CountryRanking,
    IndexPanel, WeightVector,
};
pub use ingest::{generate_fixture, load_bundle, DataBundle, FixtureConfig, YearRange};
pub use normalize::{normalize_panel, NormalizationMethod, NormalizedPanel};
