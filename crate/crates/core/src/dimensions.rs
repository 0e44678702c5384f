//! Raw dimension indicators per (economy, year): LSCI level, mean bilateral
//! index, bilateral partner count, and the port-concentration HHI.

use std::collections::BTreeMap;

use crate::ingest::{DataBundle, EconomyId};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DimensionError {
    #[error("mean of an empty partner set")]
    EmptyPartnerSet,
    #[error("no port has a positive score")]
    NoActivePorts,
}

/// One (economy, year) observation of the raw indicators.
///
/// `partner_count` is stored as a real: it is integral when built from data
/// and only ever enters the pipeline through ranking, which lets the Monte
/// Carlo engine perturb it multiplicatively like the other indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct RawObservation {
    pub economy: EconomyId,
    pub year: i32,
    pub lsci: Option<f64>,
    pub mean_lsbci: Option<f64>,
    pub partner_count: Option<f64>,
    pub port_hhi: Option<f64>,
}

/// Raw panel, one row per (economy, year) covered by at least one indicator
/// source, sorted by (economy, year).
#[derive(Debug, Clone, PartialEq)]
pub struct RawDimensionPanel {
    rows: Vec<RawObservation>,
}

impl RawDimensionPanel {
    pub(crate) fn from_sorted_rows(rows: Vec<RawObservation>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[RawObservation] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Arithmetic mean of the bilateral scores of one economy-year.
pub fn mean_bilateral(pair_values: &[f64]) -> Result<f64, DimensionError> {
    if pair_values.is_empty() {
        return Err(DimensionError::EmptyPartnerSet);
    }
    Ok(pair_values.iter().sum::<f64>() / pair_values.len() as f64)
}

/// Number of distinct bilateral partners of `economy` in `year`. Pairs are
/// already deduplicated at ingest, so each partner appears at most once; a
/// record counts regardless of its score, including 0.0.
pub fn partner_count(pairs: &crate::ingest::LsbciTable, economy: &EconomyId, year: i32) -> usize {
    pairs
        .rows()
        .iter()
        .filter(|r| r.year == year && (&r.economy_a == economy || &r.economy_b == economy))
        .count()
}

/// Herfindahl-Hirschman concentration of port scores: the sum of squared
/// shares over ports with positive scores. Zero-score ports are dropped
/// first; an empty or all-zero port set is an error.
pub fn port_hhi(port_scores: &[f64]) -> Result<f64, DimensionError> {
    let positive: Vec<f64> = port_scores.iter().copied().filter(|&v| v > 0.0).collect();
    if positive.is_empty() {
        return Err(DimensionError::NoActivePorts);
    }
    let total: f64 = positive.iter().sum();
    Ok(positive
        .iter()
        .map(|v| {
            let share = v / total;
            share * share
        })
        .sum())
}

/// Assemble the raw panel from a validated bundle.
///
/// Rules per (economy, year):
/// - `lsci` comes straight from the LSCI table where covered;
/// - `mean_lsbci` averages that year's bilateral scores; missing without any
///   pair rows;
/// - `partner_count` counts bilateral records regardless of value (0 when
///   the economy-year has none);
/// - `port_hhi` is missing when the economy-year has no port rows or only
///   zero scores.
///
/// Coverage gaps are data, not errors.
pub fn build_raw_panel(bundle: &DataBundle) -> RawDimensionPanel {
    type Key = (EconomyId, i32);
    #[derive(Default)]
    struct Acc {
        lsci: Option<f64>,
        pair_sum: f64,
        pair_count: usize,
        port_scores: Vec<f64>,
    }
    let mut acc: BTreeMap<Key, Acc> = BTreeMap::new();

    for row in bundle.lsci().rows() {
        let entry = acc.entry((row.economy.clone(), row.year)).or_default();
        entry.lsci = Some(row.lsci);
    }
    for row in bundle.lsbci().rows() {
        for economy in [&row.economy_a, &row.economy_b] {
            let entry = acc.entry((economy.clone(), row.year)).or_default();
            entry.pair_sum += row.lsbci;
            entry.pair_count += 1;
        }
    }
    for row in bundle.plsci().rows() {
        let entry = acc.entry((row.economy.clone(), row.year)).or_default();
        entry.port_scores.push(row.plsci);
    }

    let rows = acc
        .into_iter()
        .map(|((economy, year), a)| RawObservation {
            economy,
            year,
            lsci: a.lsci,
            mean_lsbci: if a.pair_count > 0 {
                Some(a.pair_sum / a.pair_count as f64)
            } else {
                None
            },
            partner_count: Some(a.pair_count as f64),
            port_hhi: port_hhi(&a.port_scores).ok(),
        })
        .collect();
    RawDimensionPanel::from_sorted_rows(rows)
}
