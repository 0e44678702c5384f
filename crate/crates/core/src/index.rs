//! MCVI aggregation, country ranking, and PCA-derived weights.

use crate::ingest::EconomyId;
use crate::normalize::{NormalizationMethod, NormalizedPanel};
use crate::stats::{self, PcaMode};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum IndexError {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("index panel has no complete observations")]
    EmptyIndex,
    #[error("degenerate variance in normalized dimensions: {0}")]
    DegenerateVariance(String),
    #[error(transparent)]
    Stats(#[from] stats::StatsError),
}

/// Nonnegative dimension weights summing to one.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WeightVector {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

impl WeightVector {
    pub const EQUAL: WeightVector = WeightVector {
        w1: 1.0 / 3.0,
        w2: 1.0 / 3.0,
        w3: 1.0 / 3.0,
    };

    pub fn new(w1: f64, w2: f64, w3: f64) -> Result<Self, IndexError> {
        for (label, w) in [("w1", w1), ("w2", w2), ("w3", w3)] {
            if !w.is_finite() || w < 0.0 {
                return Err(IndexError::InvalidWeights(format!(
                    "{label} must be nonnegative, got {w}"
                )));
            }
        }
        let sum = w1 + w2 + w3;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(IndexError::InvalidWeights(format!(
                "weights must sum to 1 within 1e-12, got {sum}"
            )));
        }
        Ok(Self { w1, w2, w3 })
    }

    /// Normalize raw nonnegative components to sum exactly one.
    pub fn from_components(raw: [f64; 3]) -> Result<Self, IndexError> {
        let sum: f64 = raw.iter().sum();
        if !sum.is_finite() || sum <= 0.0 || raw.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(IndexError::InvalidWeights(format!(
                "components must be nonnegative with a positive sum, got {raw:?}"
            )));
        }
        Self::new(raw[0] / sum, raw[1] / sum, raw[2] / sum)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.w1, self.w2, self.w3]
    }
}

/// One complete, aggregated observation.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexObservation {
    pub economy: EconomyId,
    pub year: i32,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub mcvi: f64,
}

/// The aggregated index panel: complete rows only, sorted by
/// (economy, year), tagged with the weights and normalization used.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexPanel {
    pub weights: WeightVector,
    pub method: NormalizationMethod,
    rows: Vec<IndexObservation>,
}

impl IndexPanel {
    pub fn rows(&self) -> &[IndexObservation] {
        &self.rows
    }

    pub fn years(&self) -> Vec<i32> {
        let mut years: Vec<i32> = self.rows.iter().map(|r| r.year).collect();
        years.sort_unstable();
        years.dedup();
        years
    }
}

/// Weighted aggregation over the complete rows of a normalized panel.
/// Incomplete rows (any missing dimension) are excluded.
pub fn aggregate_mcvi(
    norm: &NormalizedPanel,
    weights: WeightVector,
) -> Result<IndexPanel, IndexError> {
    // re-validate: WeightVector construction enforces this, but aggregation
    // is also called with externally sampled weights
    WeightVector::new(weights.w1, weights.w2, weights.w3)?;
    let mut rows: Vec<IndexObservation> = norm
        .complete_rows()
        .map(|r| {
            let (d1, d2, d3) = (r.d1.unwrap(), r.d2.unwrap(), r.d3.unwrap());
            IndexObservation {
                economy: r.economy.clone(),
                year: r.year,
                d1,
                d2,
                d3,
                mcvi: weights.w1 * d1 + weights.w2 * d2 + weights.w3 * d3,
            }
        })
        .collect();
    if rows.is_empty() {
        return Err(IndexError::EmptyIndex);
    }
    // canonical (economy, year) order regardless of the input panel's order
    rows.sort_by(|a, b| (&a.economy, a.year).cmp(&(&b.economy, b.year)));
    Ok(IndexPanel {
        weights,
        method: norm.method,
        rows,
    })
}

/// Per-country summary: time-averaged MCVI and dimensions plus rank.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CountryRank {
    pub economy: EconomyId,
    /// 1 = most vulnerable (highest mean MCVI); ties broken by economy code
    /// ascending.
    pub rank: usize,
    pub mean_mcvi: f64,
    pub mean_d1: f64,
    pub mean_d2: f64,
    pub mean_d3: f64,
    pub years_covered: usize,
    /// Covered years fell below the requested minimum; the country is still
    /// ranked but flagged.
    pub low_coverage: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryRanking {
    entries: Vec<CountryRank>,
}

impl CountryRanking {
    pub fn entries(&self) -> &[CountryRank] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, economy: &EconomyId) -> Option<&CountryRank> {
        self.entries.iter().find(|e| &e.economy == economy)
    }

    /// Mean MCVI values aligned over the economies shared with `other`
    /// (sorted by economy code), ready for rank correlation.
    pub fn paired_means(&self, other: &CountryRanking) -> (Vec<f64>, Vec<f64>) {
        let mut pairs: Vec<(&EconomyId, f64)> = self
            .entries
            .iter()
            .map(|e| (&e.economy, e.mean_mcvi))
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(b.0));
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (economy, mean) in pairs {
            if let Some(o) = other.get(economy) {
                xs.push(mean);
                ys.push(o.mean_mcvi);
            }
        }
        (xs, ys)
    }
}

/// Spearman correlation between two country rankings over their shared
/// economies, computed on the mean MCVI values with average-rank ties.
pub fn ranking_spearman(a: &CountryRanking, b: &CountryRanking) -> Result<f64, IndexError> {
    let (xs, ys) = a.paired_means(b);
    Ok(stats::spearman(&xs, &ys)?.coefficient)
}

/// Rank countries by time-averaged MCVI, most vulnerable first.
pub fn rank_countries(index: &IndexPanel, min_years: usize) -> Result<CountryRanking, IndexError> {
    if index.rows().is_empty() {
        return Err(IndexError::EmptyIndex);
    }
    // rows are sorted by (economy, year): group sequentially
    type Accum = (EconomyId, Vec<(f64, f64, f64, f64)>);
    let mut entries: Vec<CountryRank> = Vec::new();
    let mut current: Option<Accum> = None;
    let flush = |entry: Option<Accum>, out: &mut Vec<CountryRank>| {
        if let Some((economy, obs)) = entry {
            let n = obs.len() as f64;
            let mean = |pick: fn(&(f64, f64, f64, f64)) -> f64| -> f64 {
                obs.iter().map(pick).sum::<f64>() / n
            };
            out.push(CountryRank {
                economy,
                rank: 0,
                mean_mcvi: mean(|o| o.0),
                mean_d1: mean(|o| o.1),
                mean_d2: mean(|o| o.2),
                mean_d3: mean(|o| o.3),
                years_covered: obs.len(),
                low_coverage: obs.len() < min_years,
            });
        }
    };
    for row in index.rows() {
        match &mut current {
            Some((economy, obs)) if *economy == row.economy => {
                obs.push((row.mcvi, row.d1, row.d2, row.d3));
            }
            _ => {
                flush(current.take(), &mut entries);
                current = Some((
                    row.economy.clone(),
                    vec![(row.mcvi, row.d1, row.d2, row.d3)],
                ));
            }
        }
    }
    flush(current.take(), &mut entries);

    entries.sort_by(|a, b| {
        b.mean_mcvi
            .partial_cmp(&a.mean_mcvi)
            .expect("means are finite")
            .then_with(|| a.economy.cmp(&b.economy))
    });
    for (i, entry) in entries.iter_mut().enumerate() {
        entry.rank = i + 1;
    }
    Ok(CountryRanking { entries })
}

/// Weights from the absolute loadings of the first principal component of
/// the (d1, d2, d3) correlation matrix, normalized to sum to one. The PC1
/// sign is first fixed so the loading sum is positive.
pub fn derive_pca_weights(norm: &NormalizedPanel) -> Result<WeightVector, IndexError> {
    let data: Vec<Vec<f64>> = norm
        .complete_rows()
        .map(|r| vec![r.d1.unwrap(), r.d2.unwrap(), r.d3.unwrap()])
        .collect();
    if data.len() < 4 {
        return Err(IndexError::Stats(stats::StatsError::InsufficientData {
            needed: 4,
            got: data.len(),
        }));
    }
    let result = stats::pca(&data, PcaMode::Correlation).map_err(|e| match e {
        stats::StatsError::DegenerateVariance => {
            IndexError::DegenerateVariance("a normalized dimension has zero variance".into())
        }
        other => IndexError::Stats(other),
    })?;
    let mut pc1 = result.loadings[0].clone();
    if pc1.iter().sum::<f64>() < 0.0 {
        for v in pc1.iter_mut() {
            *v = -*v;
        }
    }
    let abs: Vec<f64> = pc1.iter().map(|v| v.abs()).collect();
    WeightVector::from_components([abs[0], abs[1], abs[2]])
}
