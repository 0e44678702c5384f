//! Temporal dynamics: annual means and trend, SIDS gap, rank stability,
//! split-half agreement, and country-level volatility.

use std::collections::BTreeMap;

use super::AnalysisError;
use crate::index::IndexPanel;
use crate::ingest::{ClassificationTable, EconomyId};
use crate::stats::{self, sample_std, TrendFit};

/// Countries need this many covered years before their volatility enters
/// the ranked list; shorter series are reported but flagged.
const VOLATILITY_MIN_YEARS: usize = 5;

#[derive(Debug, Clone, serde::Serialize)]
pub struct AnnualMean {
    pub year: i32,
    pub mean: f64,
    pub n: usize,
    pub sids_mean: Option<f64>,
    pub non_sids_mean: Option<f64>,
    /// sids_mean - non_sids_mean where both exist.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DimensionAnnual {
    pub year: i32,
    pub mean_d1: f64,
    pub mean_d2: f64,
    pub mean_d3: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct YearPairRho {
    pub year_a: i32,
    pub year_b: i32,
    /// None when fewer than 3 countries overlap.
    pub rho: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SplitHalf {
    pub first_years: (i32, i32),
    pub second_years: (i32, i32),
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CountryVolatility {
    pub economy: EconomyId,
    /// Sample standard deviation of MCVI over covered years; None below two
    /// years.
    pub std_dev: Option<f64>,
    pub years_covered: usize,
    /// Enough coverage to enter the volatility ranking.
    pub ranked: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct TrendReport {
    pub annual: Vec<AnnualMean>,
    pub dimension_annual: Vec<DimensionAnnual>,
    pub trend: TrendFit,
    pub first_year_gap: Option<f64>,
    pub last_year_gap: Option<f64>,
    pub consecutive_spearman: Vec<YearPairRho>,
    pub split_half: Option<SplitHalf>,
    /// Ranked volatilities first (descending), then short-coverage
    /// countries by code.
    pub volatility: Vec<CountryVolatility>,
}

/// Build the temporal report. Requires at least two observed years.
pub fn temporal_report(
    index: &IndexPanel,
    cls: &ClassificationTable,
) -> Result<TrendReport, AnalysisError> {
    let years = index.years();
    if years.len() < 2 {
        return Err(AnalysisError::InsufficientYears {
            needed: 2,
            got: years.len(),
        });
    }

    struct Obs<'a> {
        economy: &'a EconomyId,
        mcvi: f64,
        d1: f64,
        d2: f64,
        d3: f64,
    }
    let mut by_year: BTreeMap<i32, Vec<Obs<'_>>> = BTreeMap::new();
    for row in index.rows() {
        by_year.entry(row.year).or_default().push(Obs {
            economy: &row.economy,
            mcvi: row.mcvi,
            d1: row.d1,
            d2: row.d2,
            d3: row.d3,
        });
    }

    let mut annual = Vec::new();
    let mut dimension_annual = Vec::new();
    for (&year, rows) in &by_year {
        let n = rows.len();
        let mean = rows.iter().map(|r| r.mcvi).sum::<f64>() / n as f64;
        let mut sids = Vec::new();
        let mut non_sids = Vec::new();
        for obs in rows {
            if cls.get(obs.economy).map(|c| c.sids).unwrap_or(false) {
                sids.push(obs.mcvi);
            } else {
                non_sids.push(obs.mcvi);
            }
        }
        let avg = |v: &[f64]| {
            if v.is_empty() {
                None
            } else {
                Some(v.iter().sum::<f64>() / v.len() as f64)
            }
        };
        let sids_mean = avg(&sids);
        let non_sids_mean = avg(&non_sids);
        let gap = match (sids_mean, non_sids_mean) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        };
        annual.push(AnnualMean {
            year,
            mean,
            n,
            sids_mean,
            non_sids_mean,
            gap,
        });
        dimension_annual.push(DimensionAnnual {
            year,
            mean_d1: rows.iter().map(|r| r.d1).sum::<f64>() / n as f64,
            mean_d2: rows.iter().map(|r| r.d2).sum::<f64>() / n as f64,
            mean_d3: rows.iter().map(|r| r.d3).sum::<f64>() / n as f64,
        });
    }

    let series: Vec<(f64, f64)> = annual.iter().map(|a| (a.year as f64, a.mean)).collect();
    let trend = stats::linear_trend(&series)?;
    let first_year_gap = annual.first().and_then(|a| a.gap);
    let last_year_gap = annual.last().and_then(|a| a.gap);

    // rank stability between consecutive observed years
    let mut consecutive_spearman = Vec::new();
    for pair in years.windows(2) {
        let (ya, yb) = (pair[0], pair[1]);
        let a: BTreeMap<&EconomyId, f64> =
            by_year[&ya].iter().map(|r| (r.economy, r.mcvi)).collect();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for obs in &by_year[&yb] {
            if let Some(&prev) = a.get(obs.economy) {
                xs.push(prev);
                ys.push(obs.mcvi);
            }
        }
        let rho = if xs.len() >= 3 {
            stats::spearman(&xs, &ys).ok().map(|c| c.coefficient)
        } else {
            None
        };
        consecutive_spearman.push(YearPairRho {
            year_a: ya,
            year_b: yb,
            rho,
            n: xs.len(),
        });
    }

    // split-half agreement of per-country means
    let mid = years.len() / 2;
    let (first_half, second_half) = years.split_at(mid);
    let split_half = if first_half.is_empty() || second_half.is_empty() {
        None
    } else {
        let half_means = |span: &[i32]| -> BTreeMap<&EconomyId, f64> {
            let mut acc: BTreeMap<&EconomyId, (f64, usize)> = BTreeMap::new();
            for (&year, rows) in &by_year {
                if span.contains(&year) {
                    for obs in rows {
                        let entry = acc.entry(obs.economy).or_insert((0.0, 0));
                        entry.0 += obs.mcvi;
                        entry.1 += 1;
                    }
                }
            }
            acc.into_iter()
                .map(|(k, (s, c))| (k, s / c as f64))
                .collect()
        };
        let first = half_means(first_half);
        let second = half_means(second_half);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (economy, mean) in &first {
            if let Some(other) = second.get(economy) {
                xs.push(*mean);
                ys.push(*other);
            }
        }
        if xs.len() >= 3 {
            stats::spearman(&xs, &ys).ok().map(|c| SplitHalf {
                first_years: (first_half[0], *first_half.last().unwrap()),
                second_years: (second_half[0], *second_half.last().unwrap()),
                rho: c.coefficient,
                p_value: c.p_value,
                n: c.n,
            })
        } else {
            None
        }
    };

    // per-country volatility (rows are sorted by economy, year)
    let mut volatility = Vec::new();
    let mut current: Option<(&EconomyId, Vec<f64>)> = None;
    let push = |entry: Option<(&EconomyId, Vec<f64>)>, out: &mut Vec<CountryVolatility>| {
        if let Some((economy, values)) = entry {
            out.push(CountryVolatility {
                economy: economy.clone(),
                std_dev: sample_std(&values),
                years_covered: values.len(),
                ranked: values.len() >= VOLATILITY_MIN_YEARS,
            });
        }
    };
    for row in index.rows() {
        match &mut current {
            Some((economy, values)) if *economy == &row.economy => values.push(row.mcvi),
            _ => {
                push(current.take(), &mut volatility);
                current = Some((&row.economy, vec![row.mcvi]));
            }
        }
    }
    push(current.take(), &mut volatility);
    volatility.sort_by(|a, b| {
        b.ranked
            .cmp(&a.ranked)
            .then_with(|| {
                b.std_dev
                    .unwrap_or(f64::NEG_INFINITY)
                    .partial_cmp(&a.std_dev.unwrap_or(f64::NEG_INFINITY))
                    .expect("volatilities are finite")
            })
            .then_with(|| a.economy.cmp(&b.economy))
    });

    Ok(TrendReport {
        annual,
        dimension_annual,
        trend,
        first_year_gap,
        last_year_gap,
        consecutive_spearman,
        split_half,
        volatility,
    })
}
