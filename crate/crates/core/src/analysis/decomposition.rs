//! Dominant-dimension tagging and k-means vulnerability profiles on
//! time-averaged country scores.

use super::AnalysisError;
use crate::index::{rank_countries, IndexPanel};
use crate::ingest::EconomyId;
use crate::rng::mix;
use crate::stats::{self, standardize_columns, KmeansConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Dimension {
    D1,
    D2,
    D3,
}

impl Dimension {
    pub fn as_str(&self) -> &'static str {
        match self {
            Dimension::D1 => "D1",
            Dimension::D2 => "D2",
            Dimension::D3 => "D3",
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CountryDominance {
    pub economy: EconomyId,
    pub mean_d1: f64,
    pub mean_d2: f64,
    pub mean_d3: f64,
    pub dominant: Dimension,
    /// The maximum was attained by more than one dimension and resolved by
    /// the D3 > D1 > D2 priority rule.
    pub tied: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DominanceReport {
    pub countries: Vec<CountryDominance>,
    pub d1_count: usize,
    pub d2_count: usize,
    pub d3_count: usize,
}

/// Tag each country with its largest time-averaged dimension. Ties resolve
/// by priority D3 > D1 > D2 and are flagged.
pub fn dominant_dimensions(index: &IndexPanel) -> Result<DominanceReport, AnalysisError> {
    let ranking = rank_countries(index, 1)?;
    let mut countries = Vec::with_capacity(ranking.len());
    let mut counts = [0usize; 3];
    for entry in ranking.entries() {
        let (d1, d2, d3) = (entry.mean_d1, entry.mean_d2, entry.mean_d3);
        let max = d1.max(d2).max(d3);
        let at_max = [d3 == max, d1 == max, d2 == max];
        let dominant = if at_max[0] {
            Dimension::D3
        } else if at_max[1] {
            Dimension::D1
        } else {
            Dimension::D2
        };
        let tied = at_max.iter().filter(|&&t| t).count() > 1;
        counts[match dominant {
            Dimension::D1 => 0,
            Dimension::D2 => 1,
            Dimension::D3 => 2,
        }] += 1;
        countries.push(CountryDominance {
            economy: entry.economy.clone(),
            mean_d1: d1,
            mean_d2: d2,
            mean_d3: d3,
            dominant,
            tied,
        });
    }
    countries.sort_by(|a, b| a.economy.cmp(&b.economy));
    Ok(DominanceReport {
        countries,
        d1_count: counts[0],
        d2_count: counts[1],
        d3_count: counts[2],
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ClusterSummary {
    /// Cluster ids are relabeled by ascending mean MCVI (0 = least
    /// vulnerable cluster).
    pub cluster: usize,
    pub size: usize,
    pub mean_mcvi: f64,
    pub mean_d1: f64,
    pub mean_d2: f64,
    pub mean_d3: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ClusterReport {
    /// Selected cluster count (best silhouette; smaller k wins ties).
    pub k: usize,
    pub silhouette: f64,
    /// (k, silhouette) for every candidate tried.
    pub candidates: Vec<(usize, f64)>,
    pub assignments: Vec<(EconomyId, usize)>,
    pub clusters: Vec<ClusterSummary>,
    /// All country profiles were identical; no meaningful clustering
    /// exists and `clusters` holds a single degenerate group.
    pub degenerate: bool,
}

/// Cluster countries on z-standardized time-averaged dimension profiles,
/// selecting k within `k_range` by silhouette.
pub fn cluster_profiles(
    index: &IndexPanel,
    k_range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Result<ClusterReport, AnalysisError> {
    let ranking = rank_countries(index, 1)?;
    let n = ranking.len();
    let economies: Vec<EconomyId> = ranking
        .entries()
        .iter()
        .map(|e| e.economy.clone())
        .collect();
    let mcvi: Vec<f64> = ranking.entries().iter().map(|e| e.mean_mcvi).collect();
    let profiles: Vec<Vec<f64>> = ranking
        .entries()
        .iter()
        .map(|e| vec![e.mean_d1, e.mean_d2, e.mean_d3])
        .collect();

    let standardized = standardize_columns(&profiles);
    let degenerate = profiles.windows(2).all(|w| w[0] == w[1]);
    if degenerate {
        // all profiles identical: a single trivial cluster
        let summary = summarize_clusters(&economies, &mcvi, &profiles, &vec![0; n], 1);
        return Ok(ClusterReport {
            k: 1,
            silhouette: 0.0,
            candidates: Vec::new(),
            assignments: economies.into_iter().map(|e| (e, 0)).collect(),
            clusters: summary,
            degenerate: true,
        });
    }

    let mut candidates = Vec::new();
    let mut best: Option<(usize, f64, Vec<usize>)> = None;
    for k in k_range {
        if k < 2 || k > n {
            continue;
        }
        let config = KmeansConfig::new(k, mix(seed ^ k as u64));
        let result = stats::kmeans(&standardized, config)?;
        candidates.push((k, result.silhouette));
        let better = match &best {
            None => true,
            Some((_, s, _)) => result.silhouette > *s,
        };
        if better {
            best = Some((k, result.silhouette, result.assignments));
        }
    }
    let (k, silhouette, raw_assignments) = best.ok_or_else(|| {
        AnalysisError::InsufficientData(format!("no feasible k for {n} countries"))
    })?;

    // relabel clusters by ascending mean MCVI for stable output
    let mut mcvi_sums = vec![(0.0, 0usize); k];
    for (&a, &m) in raw_assignments.iter().zip(&mcvi) {
        mcvi_sums[a].0 += m;
        mcvi_sums[a].1 += 1;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let ma = mcvi_sums[a].0 / mcvi_sums[a].1.max(1) as f64;
        let mb = mcvi_sums[b].0 / mcvi_sums[b].1.max(1) as f64;
        ma.partial_cmp(&mb)
            .expect("means are finite")
            .then(a.cmp(&b))
    });
    let mut relabel = vec![0usize; k];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let assignments: Vec<usize> = raw_assignments.iter().map(|&a| relabel[a]).collect();

    let clusters = summarize_clusters(&economies, &mcvi, &profiles, &assignments, k);
    Ok(ClusterReport {
        k,
        silhouette,
        candidates,
        assignments: economies.into_iter().zip(assignments).collect(),
        clusters,
        degenerate: false,
    })
}

fn summarize_clusters(
    _economies: &[EconomyId],
    mcvi: &[f64],
    profiles: &[Vec<f64>],
    assignments: &[usize],
    k: usize,
) -> Vec<ClusterSummary> {
    let mut out = Vec::with_capacity(k);
    for c in 0..k {
        let members: Vec<usize> = (0..assignments.len())
            .filter(|&i| assignments[i] == c)
            .collect();
        let size = members.len();
        let avg = |pick: &dyn Fn(usize) -> f64| -> f64 {
            if size == 0 {
                return f64::NAN;
            }
            members.iter().map(|&i| pick(i)).sum::<f64>() / size as f64
        };
        out.push(ClusterSummary {
            cluster: c,
            size,
            mean_mcvi: avg(&|i| mcvi[i]),
            mean_d1: avg(&|i| profiles[i][0]),
            mean_d2: avg(&|i| profiles[i][1]),
            mean_d3: avg(&|i| profiles[i][2]),
        });
    }
    out
}
