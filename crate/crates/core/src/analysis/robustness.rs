//! Ranking robustness under alternative weighting and normalization
//! specifications, all compared to the equal-weight pooled-rank baseline.

use super::AnalysisError;
use crate::dimensions::build_raw_panel;
use crate::index::{
    aggregate_mcvi, derive_pca_weights, rank_countries, ranking_spearman, WeightVector,
};
use crate::ingest::DataBundle;
use crate::normalize::{normalize_panel, NormalizationMethod};

#[derive(Debug, Clone, serde::Serialize)]
pub struct RobustnessRow {
    pub specification: String,
    /// Spearman correlation of the alternative country ranking against the
    /// baseline.
    pub rho: f64,
    pub weights: [f64; 3],
    pub method: NormalizationMethod,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RobustnessReport {
    pub rows: Vec<RobustnessRow>,
    pub pca_weights: [f64; 3],
}

impl RobustnessReport {
    pub fn rho_of(&self, specification: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.specification == specification)
            .map(|r| r.rho)
    }
}

/// Six alternative specifications: PCA-derived weights, the three
/// leave-one-dimension-out variants (remaining weights 1/2 each), and the
/// two alternative normalizations at equal weights.
pub fn robustness_suite(
    bundle: &DataBundle,
    min_years: usize,
) -> Result<RobustnessReport, AnalysisError> {
    let raw = build_raw_panel(bundle);
    let pooled = normalize_panel(&raw, NormalizationMethod::PooledRank)?;
    let baseline = rank_countries(&aggregate_mcvi(&pooled, WeightVector::EQUAL)?, min_years)?;

    let mut rows = Vec::with_capacity(6);
    let mut weight_spec = |name: &str, weights: WeightVector| -> Result<(), AnalysisError> {
        let ranking = rank_countries(&aggregate_mcvi(&pooled, weights)?, min_years)?;
        rows.push(RobustnessRow {
            specification: name.to_string(),
            rho: ranking_spearman(&baseline, &ranking)?,
            weights: weights.as_array(),
            method: NormalizationMethod::PooledRank,
        });
        Ok(())
    };

    let pca = derive_pca_weights(&pooled)?;
    weight_spec("pca-weights", pca)?;
    weight_spec("drop-d1", WeightVector::new(0.0, 0.5, 0.5)?)?;
    weight_spec("drop-d2", WeightVector::new(0.5, 0.0, 0.5)?)?;
    weight_spec("drop-d3", WeightVector::new(0.5, 0.5, 0.0)?)?;

    for (name, method) in [
        ("within-year", NormalizationMethod::WithinYearRank),
        ("minmax", NormalizationMethod::PooledMinMax),
    ] {
        let norm = normalize_panel(&raw, method)?;
        let ranking = rank_countries(&aggregate_mcvi(&norm, WeightVector::EQUAL)?, min_years)?;
        rows.push(RobustnessRow {
            specification: name.to_string(),
            rho: ranking_spearman(&baseline, &ranking)?,
            weights: WeightVector::EQUAL.as_array(),
            method,
        });
    }

    Ok(RobustnessReport {
        rows,
        pca_weights: pca.as_array(),
    })
}
