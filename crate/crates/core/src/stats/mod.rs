//! Self-contained statistical kernel: ranks, correlations, PCA, k-means,
//! panel regressions, and rank-based tests.
//!
//! Every routine is deterministic given its inputs (and an explicit seed
//! where sampling is involved); nothing reads global RNG state.

pub mod correlation;
pub mod kmeans;
pub mod mann_whitney;
pub(crate) mod matrix;
pub mod pca;
pub mod ranks;
pub mod regression;

pub use correlation::{pearson, pearson_pairwise, spearman, spearman_pairwise, Correlation};
pub use kmeans::{kmeans, silhouette, ClusteringResult, KmeansConfig};
pub use mann_whitney::{mann_whitney, MannWhitney};
pub use pca::{eigen_symmetric, pca, PcaMode, PcaResult};
pub use ranks::average_ranks;
pub use regression::{
    fixed_effects, hausman, linear_trend, ols_clustered, random_effects, HausmanResult, ModelKind,
    RegressionResult, TrendFit,
};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StatsError {
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("zero variance in input")]
    ZeroVariance,
    #[error("degenerate variance: a column has no variation")]
    DegenerateVariance,
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("invalid cluster count k={k} for n={n} points")]
    InvalidK { k: usize, n: usize },
    #[error("silhouette requires at least two non-empty clusters")]
    SingleCluster,
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("clustered errors require at least two clusters")]
    TooFewClusters,
    #[error("regressor '{name}' has no within-entity variation")]
    NoWithinVariation { name: String },
    #[error("fixed- and random-effects results share no common slope regressor")]
    NoCommonRegressors,
    #[error("empty sample")]
    EmptySample,
    #[error("time index has no variation")]
    DegenerateTime,
}

/// Column-wise z-standardization with the sample (n-1) standard deviation.
/// Columns with zero variance are centered but not scaled.
pub fn standardize_columns(data: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = data.len();
    if n == 0 {
        return Vec::new();
    }
    let d = data[0].len();
    let nf = n as f64;
    let means: Vec<f64> = (0..d)
        .map(|j| data.iter().map(|r| r[j]).sum::<f64>() / nf)
        .collect();
    let sds: Vec<f64> = (0..d)
        .map(|j| {
            if n < 2 {
                return 0.0;
            }
            let var = data
                .iter()
                .map(|r| (r[j] - means[j]) * (r[j] - means[j]))
                .sum::<f64>()
                / (nf - 1.0);
            var.sqrt()
        })
        .collect();
    data.iter()
        .map(|row| {
            (0..d)
                .map(|j| {
                    let centered = row[j] - means[j];
                    if sds[j] > 0.0 {
                        centered / sds[j]
                    } else {
                        centered
                    }
                })
                .collect()
        })
        .collect()
}

/// Sample standard deviation (n-1 denominator); `None` below two points.
pub fn sample_std(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Some(var.sqrt())
}

/// Empirical quantile with linear interpolation on the sorted sample
/// (the "type 7" definition: h = (n-1)p).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    assert!((0.0..=1.0).contains(&p), "quantile level out of range");
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}
