//! Descriptive statistics of the aggregated panel: per-variable summaries,
//! pairwise dimension correlations, and the latent structure of the three
//! dimensions.

use super::AnalysisError;
use crate::index::IndexPanel;
use crate::stats::{self, sample_std, PcaMode};

#[derive(Debug, Clone, serde::Serialize)]
pub struct VariableStats {
    pub variable: String,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub std_dev: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DimensionCorrelation {
    pub pair: String,
    pub spearman_rho: f64,
    pub pearson_r: f64,
    pub n: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SummaryReport {
    pub n_obs: usize,
    pub n_economies: usize,
    pub variables: Vec<VariableStats>,
    pub correlations: Vec<DimensionCorrelation>,
    /// Explained variance shares of the (d1, d2, d3) correlation PCA.
    pub pca_shares: Vec<f64>,
    /// Loading columns, one per component.
    pub pca_loadings: Vec<Vec<f64>>,
}

/// Panel-level descriptive statistics, inter-dimension correlations, and
/// correlation-matrix PCA over the complete observations.
pub fn dimension_summary(index: &IndexPanel) -> Result<SummaryReport, AnalysisError> {
    let rows = index.rows();
    let n_obs = rows.len();
    let mut economies: Vec<&str> = rows.iter().map(|r| r.economy.as_str()).collect();
    economies.dedup();
    let n_economies = economies.len();

    let columns: [(&str, Vec<f64>); 4] = [
        ("d1", rows.iter().map(|r| r.d1).collect()),
        ("d2", rows.iter().map(|r| r.d2).collect()),
        ("d3", rows.iter().map(|r| r.d3).collect()),
        ("mcvi", rows.iter().map(|r| r.mcvi).collect()),
    ];
    let variables = columns
        .iter()
        .map(|(name, values)| VariableStats {
            variable: name.to_string(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            std_dev: sample_std(values).unwrap_or(0.0),
        })
        .collect();

    let mut correlations = Vec::new();
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let spearman = stats::spearman(&columns[a].1, &columns[b].1)?;
        let pearson = stats::pearson(&columns[a].1, &columns[b].1)?;
        correlations.push(DimensionCorrelation {
            pair: format!("{}-{}", columns[a].0, columns[b].0),
            spearman_rho: spearman.coefficient,
            pearson_r: pearson.coefficient,
            n: spearman.n,
        });
    }

    let data: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.d1, r.d2, r.d3]).collect();
    let pca = stats::pca(&data, PcaMode::Correlation)?;

    Ok(SummaryReport {
        n_obs,
        n_economies,
        variables,
        correlations,
        pca_shares: pca.explained_shares,
        pca_loadings: pca.loadings,
    })
}
