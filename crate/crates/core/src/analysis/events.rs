//! Disruption event studies: trade-openness changes across pre-crisis
//! vulnerability quartiles.

use std::collections::BTreeMap;

use super::AnalysisError;
use crate::index::IndexPanel;
use crate::ingest::{EconomyId, ExternalTable};
use crate::stats;

/// Minimum countries with complete data for a quartile analysis.
const MIN_EVENT_COUNTRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Outcome {
    TradeOpenness,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EventSpec {
    pub name: String,
    pub pre_year: i32,
    pub crisis_year: i32,
    pub outcome: Outcome,
}

impl EventSpec {
    pub fn new(name: &str, pre_year: i32, crisis_year: i32) -> Result<Self, AnalysisError> {
        if pre_year >= crisis_year {
            return Err(AnalysisError::InvalidEvent(format!(
                "pre year {pre_year} must precede crisis year {crisis_year}"
            )));
        }
        Ok(Self {
            name: name.to_string(),
            pre_year,
            crisis_year,
            outcome: Outcome::TradeOpenness,
        })
    }
}

/// The three shipped event definitions: a supply-side shock, a demand-side
/// shock, and a route-specific disruption expected to show no gradient.
pub fn predefined_events() -> Vec<EventSpec> {
    vec![
        EventSpec::new("covid-19", 2019, 2020).expect("valid spec"),
        EventSpec::new("financial-crisis", 2008, 2009).expect("valid spec"),
        EventSpec::new("red-sea", 2023, 2024).expect("valid spec"),
    ]
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EventReport {
    pub name: String,
    pub pre_year: i32,
    pub crisis_year: i32,
    pub n: usize,
    /// Q1 (least vulnerable) .. Q4 (most vulnerable); sizes differ by at
    /// most one, remainders assigned to the lower quartiles first.
    pub quartile_sizes: [usize; 4],
    /// Mean percentage change in the outcome per quartile.
    pub quartile_mean_delta: [f64; 4],
    /// None when the outcome deltas (or scores) carry no variation.
    pub spearman_rho: Option<f64>,
    pub spearman_p: Option<f64>,
    /// Mann-Whitney U of the most vulnerable quartile against the least.
    pub mann_whitney_u: f64,
    pub mann_whitney_p: f64,
}

/// Quartile event study: countries are ranked by pre-crisis MCVI, the
/// percentage change in trade openness between the pre and crisis year is
/// compared across quartiles, correlated with pre-crisis MCVI, and the
/// extreme quartiles are tested against each other.
pub fn event_study(
    index: &IndexPanel,
    ext: &ExternalTable,
    spec: &EventSpec,
) -> Result<EventReport, AnalysisError> {
    if spec.pre_year >= spec.crisis_year {
        return Err(AnalysisError::InvalidEvent(format!(
            "pre year {} must precede crisis year {}",
            spec.pre_year, spec.crisis_year
        )));
    }

    let mut mcvi_pre: BTreeMap<&EconomyId, f64> = BTreeMap::new();
    for row in index.rows() {
        if row.year == spec.pre_year {
            mcvi_pre.insert(&row.economy, row.mcvi);
        }
    }
    let mut outcome_pre: BTreeMap<&EconomyId, f64> = BTreeMap::new();
    let mut outcome_crisis: BTreeMap<&EconomyId, f64> = BTreeMap::new();
    for row in ext.rows() {
        let Outcome::TradeOpenness = spec.outcome;
        if let Some(v) = row.trade_open {
            if row.year == spec.pre_year {
                outcome_pre.insert(&row.economy, v);
            } else if row.year == spec.crisis_year {
                outcome_crisis.insert(&row.economy, v);
            }
        }
    }

    // countries with complete (mcvi pre, outcome pre > 0, outcome crisis)
    let mut sample: Vec<(&EconomyId, f64, f64)> = Vec::new();
    for (economy, &mcvi) in &mcvi_pre {
        let (Some(&pre), Some(&crisis)) = (outcome_pre.get(economy), outcome_crisis.get(economy))
        else {
            continue;
        };
        if pre <= 0.0 {
            continue;
        }
        let delta = 100.0 * (crisis - pre) / pre;
        sample.push((economy, mcvi, delta));
    }
    let n = sample.len();
    if n < MIN_EVENT_COUNTRIES {
        return Err(AnalysisError::InsufficientData(format!(
            "event '{}' has {n} complete countries, needs {MIN_EVENT_COUNTRIES}",
            spec.name
        )));
    }

    // rank ascending by pre-crisis MCVI, ties broken by economy code
    sample.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .expect("scores are finite")
            .then_with(|| a.0.cmp(b.0))
    });
    let base = n / 4;
    let remainder = n % 4;
    let mut quartile_sizes = [0usize; 4];
    for (q, size) in quartile_sizes.iter_mut().enumerate() {
        *size = base + usize::from(q < remainder);
    }
    let mut quartile_mean_delta = [0.0; 4];
    let mut quartile_deltas: [Vec<f64>; 4] = Default::default();
    let mut cursor = 0;
    for q in 0..4 {
        let slice = &sample[cursor..cursor + quartile_sizes[q]];
        cursor += quartile_sizes[q];
        quartile_deltas[q] = slice.iter().map(|s| s.2).collect();
        quartile_mean_delta[q] = if slice.is_empty() {
            f64::NAN
        } else {
            quartile_deltas[q].iter().sum::<f64>() / quartile_sizes[q] as f64
        };
    }

    let mcvi_values: Vec<f64> = sample.iter().map(|s| s.1).collect();
    let deltas: Vec<f64> = sample.iter().map(|s| s.2).collect();
    let corr = match stats::spearman(&mcvi_values, &deltas) {
        Ok(c) => Some(c),
        Err(stats::StatsError::ZeroVariance) => None,
        Err(e) => return Err(e.into()),
    };
    let mw = stats::mann_whitney(&quartile_deltas[3], &quartile_deltas[0])?;

    Ok(EventReport {
        name: spec.name.clone(),
        pre_year: spec.pre_year,
        crisis_year: spec.crisis_year,
        n,
        quartile_sizes,
        quartile_mean_delta,
        spearman_rho: corr.map(|c| c.coefficient),
        spearman_p: corr.map(|c| c.p_value),
        mann_whitney_u: mw.u,
        mann_whitney_p: mw.p_value,
    })
}
