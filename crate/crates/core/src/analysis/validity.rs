//! External validation: per-wave correlations with outside indicators and
//! the pooled/FE/RE regression battery with the Hausman test.

use std::collections::BTreeMap;

use super::AnalysisError;
use crate::index::IndexPanel;
use crate::ingest::{ClassificationTable, EconomyId, ExternalTable};
use crate::stats::{
    self, fixed_effects, hausman, ols_clustered, random_effects, HausmanResult, RegressionResult,
};

/// Minimum matched countries for a wave correlation.
const MIN_WAVE_OVERLAP: usize = 3;

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConvergentRow {
    pub indicator: String,
    pub year: i32,
    pub rho: Option<f64>,
    pub p_value: Option<f64>,
    pub n: usize,
    /// Too few matched countries; the wave is reported but carries no
    /// correlation.
    pub skipped: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConvergentReport {
    pub rows: Vec<ConvergentRow>,
    pub lpi_mean_rho: Option<f64>,
    pub freight_mean_rho: Option<f64>,
}

/// Spearman between each year's MCVI and the external indicator value,
/// one row per (indicator, year) with any external coverage.
pub fn convergent_validity(
    index: &IndexPanel,
    ext: &ExternalTable,
) -> Result<ConvergentReport, AnalysisError> {
    let mut mcvi_at: BTreeMap<(i32, &EconomyId), f64> = BTreeMap::new();
    for row in index.rows() {
        mcvi_at.insert((row.year, &row.economy), row.mcvi);
    }

    let mut rows = Vec::new();
    for (indicator, pick) in [
        (
            "lpi",
            (|r: &crate::ingest::ExternalRow| r.lpi)
                as fn(&crate::ingest::ExternalRow) -> Option<f64>,
        ),
        ("freight_advalorem", |r| r.freight_advalorem),
    ] {
        let mut by_year: BTreeMap<i32, Vec<(f64, f64)>> = BTreeMap::new();
        for row in ext.rows() {
            if let Some(value) = pick(row) {
                if let Some(&mcvi) = mcvi_at.get(&(row.year, &row.economy)) {
                    by_year.entry(row.year).or_default().push((mcvi, value));
                } else {
                    by_year.entry(row.year).or_default();
                }
            }
        }
        for (year, pairs) in by_year {
            if pairs.len() < MIN_WAVE_OVERLAP {
                rows.push(ConvergentRow {
                    indicator: indicator.to_string(),
                    year,
                    rho: None,
                    p_value: None,
                    n: pairs.len(),
                    skipped: true,
                });
                continue;
            }
            let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            match stats::spearman(&xs, &ys) {
                Ok(c) => rows.push(ConvergentRow {
                    indicator: indicator.to_string(),
                    year,
                    rho: Some(c.coefficient),
                    p_value: Some(c.p_value),
                    n: c.n,
                    skipped: false,
                }),
                Err(_) => rows.push(ConvergentRow {
                    indicator: indicator.to_string(),
                    year,
                    rho: None,
                    p_value: None,
                    n: pairs.len(),
                    skipped: true,
                }),
            }
        }
    }

    let mean_rho = |name: &str| -> Option<f64> {
        let rhos: Vec<f64> = rows
            .iter()
            .filter(|r| r.indicator == name)
            .filter_map(|r| r.rho)
            .collect();
        if rhos.is_empty() {
            None
        } else {
            Some(rhos.iter().sum::<f64>() / rhos.len() as f64)
        }
    };
    let lpi_mean_rho = mean_rho("lpi");
    let freight_mean_rho = mean_rho("freight_advalorem");
    Ok(ConvergentReport {
        rows,
        lpi_mean_rho,
        freight_mean_rho,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RegressionReport {
    /// MCVI on log GDP per capita (pooled, country-clustered).
    pub model1: RegressionResult,
    /// MCVI on log trade openness.
    pub model2: RegressionResult,
    /// MCVI on both covariates plus SIDS and LDC dummies.
    pub model3: RegressionResult,
    /// Fixed effects on the Model 3 regressors that survive demeaning.
    pub fixed_effects: RegressionResult,
    /// Random effects on the same regressors.
    pub random_effects: RegressionResult,
    pub hausman: HausmanResult,
    /// Model 3 regressors dropped for lack of within variation.
    pub dropped_regressors: Vec<String>,
    /// Rows dropped because a covariate was non-positive (cannot be
    /// logged); zero for loader-validated data.
    pub n_dropped_nonpositive: usize,
    pub n_obs: usize,
    pub n_countries: usize,
}

/// The regression battery on the matched (MCVI, covariates) subsample.
pub fn run_regressions(
    index: &IndexPanel,
    ext: &ExternalTable,
    cls: &ClassificationTable,
) -> Result<RegressionReport, AnalysisError> {
    let mut covariates: BTreeMap<(&EconomyId, i32), (f64, f64)> = BTreeMap::new();
    let mut n_dropped_nonpositive = 0;
    for row in ext.rows() {
        if let (Some(gdp), Some(trade)) = (row.gdp_pc, row.trade_open) {
            if gdp <= 0.0 || trade <= 0.0 {
                n_dropped_nonpositive += 1;
                continue;
            }
            covariates.insert((&row.economy, row.year), (gdp, trade));
        }
    }

    let mut y = Vec::new();
    let mut log_gdp = Vec::new();
    let mut log_trade = Vec::new();
    let mut sids = Vec::new();
    let mut ldc = Vec::new();
    let mut entity_of: BTreeMap<&EconomyId, usize> = BTreeMap::new();
    let mut entities = Vec::new();
    for row in index.rows() {
        let Some(&(gdp, trade)) = covariates.get(&(&row.economy, row.year)) else {
            continue;
        };
        let Some(class) = cls.get(&row.economy) else {
            continue;
        };
        y.push(row.mcvi);
        log_gdp.push(gdp.ln());
        log_trade.push(trade.ln());
        sids.push(if class.sids { 1.0 } else { 0.0 });
        ldc.push(if class.ldc { 1.0 } else { 0.0 });
        let next = entity_of.len();
        let id = *entity_of.entry(&row.economy).or_insert(next);
        entities.push(id);
    }
    let n_obs = y.len();
    let n_countries = entity_of.len();
    if n_obs < 10 || n_countries < 3 {
        return Err(AnalysisError::InsufficientData(format!(
            "matched regression subsample too small: {n_obs} observations, {n_countries} countries"
        )));
    }

    let model1 = ols_clustered(&y, &[("log_gdp_pc", &log_gdp)], &entities)?;
    let model2 = ols_clustered(&y, &[("log_trade_open", &log_trade)], &entities)?;
    let model3 = ols_clustered(
        &y,
        &[
            ("log_gdp_pc", &log_gdp),
            ("log_trade_open", &log_trade),
            ("sids", &sids),
            ("ldc", &ldc),
        ],
        &entities,
    )?;

    // keep only regressors with within-entity variation for FE/RE
    let candidates: Vec<(&str, &[f64])> = vec![
        ("log_gdp_pc", &log_gdp),
        ("log_trade_open", &log_trade),
        ("sids", &sids),
        ("ldc", &ldc),
    ];
    let mut survivors: Vec<(&str, &[f64])> = Vec::new();
    let mut dropped_regressors = Vec::new();
    for (name, col) in candidates {
        if has_within_variation(col, &entities, n_countries) {
            survivors.push((name, col));
        } else {
            dropped_regressors.push(name.to_string());
        }
    }
    if survivors.is_empty() {
        return Err(AnalysisError::Stats(stats::StatsError::NoWithinVariation {
            name: "all Model 3 regressors".to_string(),
        }));
    }

    let fe = fixed_effects(&y, &survivors, &entities)?;
    let re = random_effects(&y, &survivors, &entities)?;
    let h = hausman(&fe, &re)?;

    Ok(RegressionReport {
        model1,
        model2,
        model3,
        fixed_effects: fe,
        random_effects: re,
        hausman: h,
        dropped_regressors,
        n_dropped_nonpositive,
        n_obs,
        n_countries,
    })
}

fn has_within_variation(col: &[f64], entities: &[usize], n_entities: usize) -> bool {
    let mut sums = vec![0.0; n_entities];
    let mut counts = vec![0usize; n_entities];
    for (&v, &e) in col.iter().zip(entities) {
        sums[e] += v;
        counts[e] += 1;
    }
    let scale: f64 = col.iter().map(|v| v * v).sum::<f64>().max(1.0);
    let mut within = 0.0;
    for (&v, &e) in col.iter().zip(entities) {
        let d = v - sums[e] / counts[e] as f64;
        within += d * d;
    }
    within > 1e-12 * scale
}
