//! Vulnerability-oriented normalization of the raw indicators.
//!
//! The baseline maps each indicator to pooled fractional ranks: the average
//! rank of an observation among all non-missing observations of that
//! column, divided by the non-missing count, oriented so that higher always
//! means more vulnerable. Two alternatives are provided for robustness
//! work: within-year fractional ranks and pooled min-max scaling.
//!
//! Orientation is implemented by negating raw values before ranking, which
//! reuses one ranking path and preserves the tie-average identities. Ties
//! are exact-equality ties; no epsilon is applied. Missing values never
//! enter a column's N.

use crate::dimensions::RawDimensionPanel;
use crate::ingest::EconomyId;
use crate::stats::average_ranks;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("column '{column}' has no non-missing values")]
    AllMissing { column: &'static str },
    #[error("column '{column}' is constant; min-max normalization is undefined")]
    ConstantColumn { column: &'static str },
}

/// Whether small or large raw values signal vulnerability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LowerIsVulnerable,
    HigherIsVulnerable,
}

/// The four raw sub-indicator columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indicator {
    Lsci,
    MeanLsbci,
    PartnerCount,
    PortHhi,
}

impl Indicator {
    /// LSCI, mean LSBCI and partner count are inverted (low connectivity is
    /// vulnerable); port concentration is direct.
    pub fn direction(&self) -> Direction {
        match self {
            Indicator::Lsci | Indicator::MeanLsbci | Indicator::PartnerCount => {
                Direction::LowerIsVulnerable
            }
            Indicator::PortHhi => Direction::HigherIsVulnerable,
        }
    }

    fn column_name(&self) -> &'static str {
        match self {
            Indicator::Lsci => "d1",
            Indicator::MeanLsbci => "d2a",
            Indicator::PartnerCount => "d2b",
            Indicator::PortHhi => "d3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum NormalizationMethod {
    PooledRank,
    WithinYearRank,
    PooledMinMax,
}

impl NormalizationMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormalizationMethod::PooledRank => "pooled-rank",
            NormalizationMethod::WithinYearRank => "within-year",
            NormalizationMethod::PooledMinMax => "minmax",
        }
    }
}

/// One normalized observation; `d2` is present iff both sub-indicators are.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedObservation {
    pub economy: EconomyId,
    pub year: i32,
    pub d1: Option<f64>,
    pub d2a: Option<f64>,
    pub d2b: Option<f64>,
    pub d2: Option<f64>,
    pub d3: Option<f64>,
}

impl NormalizedObservation {
    /// Complete rows carry all three dimensions and enter the index.
    pub fn is_complete(&self) -> bool {
        self.d1.is_some() && self.d2.is_some() && self.d3.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPanel {
    pub method: NormalizationMethod,
    rows: Vec<NormalizedObservation>,
}

impl NormalizedPanel {
    #[cfg(test)]
    pub(crate) fn from_parts(
        method: NormalizationMethod,
        rows: Vec<NormalizedObservation>,
    ) -> Self {
        Self { method, rows }
    }

    pub fn rows(&self) -> &[NormalizedObservation] {
        &self.rows
    }

    pub fn complete_rows(&self) -> impl Iterator<Item = &NormalizedObservation> {
        self.rows.iter().filter(|r| r.is_complete())
    }
}

fn orient(value: f64, direction: Direction) -> f64 {
    match direction {
        Direction::HigherIsVulnerable => value,
        Direction::LowerIsVulnerable => -value,
    }
}

fn rank_dense(values: &[f64], direction: Direction) -> Vec<f64> {
    let oriented: Vec<f64> = values.iter().map(|&v| orient(v, direction)).collect();
    let n = oriented.len() as f64;
    average_ranks(&oriented)
        .into_iter()
        .map(|r| r / n)
        .collect()
}

/// Pooled fractional ranks of a column with missing values preserved.
/// Output values lie in (0, 1]; N counts only the non-missing entries.
pub fn pooled_fractional_rank(
    values: &[Option<f64>],
    direction: Direction,
) -> Result<Vec<Option<f64>>, NormalizeError> {
    pooled_rank_named(values, direction, "column")
}

fn pooled_rank_named(
    values: &[Option<f64>],
    direction: Direction,
    column: &'static str,
) -> Result<Vec<Option<f64>>, NormalizeError> {
    let present: Vec<f64> = values.iter().flatten().copied().collect();
    if present.is_empty() {
        return Err(NormalizeError::AllMissing { column });
    }
    let normalized = rank_dense(&present, direction);
    let mut iter = normalized.into_iter();
    Ok(values
        .iter()
        .map(|v| v.map(|_| iter.next().expect("one rank per present value")))
        .collect())
}

/// Within-year fractional ranks: each year is ranked among that year's
/// non-missing observations with a per-year N. Years with no data keep all
/// outputs missing.
pub fn within_year_rank(
    values: &[Option<f64>],
    years: &[i32],
    direction: Direction,
) -> Result<Vec<Option<f64>>, NormalizeError> {
    within_year_named(values, years, direction, "column")
}

fn within_year_named(
    values: &[Option<f64>],
    years: &[i32],
    direction: Direction,
    column: &'static str,
) -> Result<Vec<Option<f64>>, NormalizeError> {
    assert_eq!(values.len(), years.len(), "year column length mismatch");
    if values.iter().all(|v| v.is_none()) {
        return Err(NormalizeError::AllMissing { column });
    }
    let mut year_list: Vec<i32> = years.to_vec();
    year_list.sort_unstable();
    year_list.dedup();

    let mut out: Vec<Option<f64>> = vec![None; values.len()];
    for year in year_list {
        let idx: Vec<usize> = (0..values.len())
            .filter(|&i| years[i] == year && values[i].is_some())
            .collect();
        if idx.is_empty() {
            continue;
        }
        let present: Vec<f64> = idx.iter().map(|&i| values[i].unwrap()).collect();
        let normalized = rank_dense(&present, direction);
        for (slot, value) in idx.into_iter().zip(normalized) {
            out[slot] = Some(value);
        }
    }
    Ok(out)
}

/// Pooled min-max scaling to [0, 1], inverted for lower-is-vulnerable
/// columns. No winsorization.
pub fn pooled_minmax(
    values: &[Option<f64>],
    direction: Direction,
) -> Result<Vec<Option<f64>>, NormalizeError> {
    pooled_minmax_named(values, direction, "column")
}

fn pooled_minmax_named(
    values: &[Option<f64>],
    direction: Direction,
    column: &'static str,
) -> Result<Vec<Option<f64>>, NormalizeError> {
    let present: Vec<f64> = values.iter().flatten().copied().collect();
    if present.is_empty() {
        return Err(NormalizeError::AllMissing { column });
    }
    let min = present.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = present.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Err(NormalizeError::ConstantColumn { column });
    }
    Ok(values
        .iter()
        .map(|v| {
            v.map(|x| {
                let scaled = (x - min) / (max - min);
                match direction {
                    Direction::HigherIsVulnerable => scaled,
                    Direction::LowerIsVulnerable => 1.0 - scaled,
                }
            })
        })
        .collect())
}

/// Normalize the four raw columns with the correct orientation and build
/// D2 as the average of its two sub-indicators.
pub fn normalize_panel(
    raw: &RawDimensionPanel,
    method: NormalizationMethod,
) -> Result<NormalizedPanel, NormalizeError> {
    let rows = raw.rows();
    let years: Vec<i32> = rows.iter().map(|r| r.year).collect();

    let column = |ind: Indicator| -> Vec<Option<f64>> {
        rows.iter()
            .map(|r| match ind {
                Indicator::Lsci => r.lsci,
                Indicator::MeanLsbci => r.mean_lsbci,
                Indicator::PartnerCount => r.partner_count,
                Indicator::PortHhi => r.port_hhi,
            })
            .collect()
    };

    let normalize = |ind: Indicator| -> Result<Vec<Option<f64>>, NormalizeError> {
        let values = column(ind);
        let dir = ind.direction();
        let name = ind.column_name();
        match method {
            NormalizationMethod::PooledRank => pooled_rank_named(&values, dir, name),
            NormalizationMethod::WithinYearRank => within_year_named(&values, &years, dir, name),
            NormalizationMethod::PooledMinMax => pooled_minmax_named(&values, dir, name),
        }
    };

    let d1 = normalize(Indicator::Lsci)?;
    let d2a = normalize(Indicator::MeanLsbci)?;
    let d2b = normalize(Indicator::PartnerCount)?;
    let d3 = normalize(Indicator::PortHhi)?;

    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let d2 = match (d2a[i], d2b[i]) {
                (Some(a), Some(b)) => Some((a + b) / 2.0),
                _ => None,
            };
            NormalizedObservation {
                economy: r.economy.clone(),
                year: r.year,
                d1: d1[i],
                d2a: d2a[i],
                d2b: d2b[i],
                d2,
                d3: d3[i],
            }
        })
        .collect();
    Ok(NormalizedPanel { method, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Direction::*;

    fn some(values: &[f64]) -> Vec<Option<f64>> {
        values.iter().copied().map(Some).collect()
    }

    fn unwrap_all(values: Vec<Option<f64>>) -> Vec<f64> {
        values.into_iter().map(|v| v.unwrap()).collect()
    }

    #[test]
    fn ascending_distinct() {
        let out = unwrap_all(
            pooled_fractional_rank(&some(&[10.0, 20.0, 30.0, 40.0]), HigherIsVulnerable).unwrap(),
        );
        assert_eq!(out, vec![0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn ties_share_average_rank() {
        let out = unwrap_all(
            pooled_fractional_rank(&some(&[10.0, 20.0, 20.0, 40.0]), HigherIsVulnerable).unwrap(),
        );
        assert_eq!(out, vec![0.25, 0.625, 0.625, 1.0]);
    }

    #[test]
    fn orientation_reverses() {
        let out = unwrap_all(
            pooled_fractional_rank(&some(&[10.0, 20.0, 30.0, 40.0]), LowerIsVulnerable).unwrap(),
        );
        assert_eq!(out, vec![1.0, 0.75, 0.5, 0.25]);
    }

    #[test]
    fn missing_values_skip_the_count() {
        let values = vec![Some(10.0), None, Some(30.0)];
        let out = pooled_fractional_rank(&values, HigherIsVulnerable).unwrap();
        assert_eq!(out, vec![Some(0.5), None, Some(1.0)]);
    }

    #[test]
    fn all_missing_errors() {
        assert!(matches!(
            pooled_fractional_rank(&[None, None], HigherIsVulnerable),
            Err(NormalizeError::AllMissing { .. })
        ));
    }

    #[test]
    fn single_observation_is_one() {
        let out = pooled_fractional_rank(&[Some(5.0)], LowerIsVulnerable).unwrap();
        assert_eq!(out, vec![Some(1.0)]);
    }

    #[test]
    fn within_year_ranks_per_year() {
        let values = some(&[1.0, 2.0, 1.0, 2.0]);
        let years = [2006, 2006, 2007, 2007];
        let out = unwrap_all(within_year_rank(&values, &years, HigherIsVulnerable).unwrap());
        assert_eq!(out, vec![0.5, 1.0, 0.5, 1.0]);
    }

    #[test]
    fn within_year_uneven_years() {
        let values = some(&[1.0, 2.0, 3.0, 3.0]);
        let years = [2006, 2006, 2006, 2007];
        let out = unwrap_all(within_year_rank(&values, &years, HigherIsVulnerable).unwrap());
        assert!((out[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((out[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((out[2] - 1.0).abs() < 1e-15);
        assert_eq!(out[3], 1.0);
    }

    #[test]
    fn single_year_equals_pooled() {
        let values = some(&[5.0, 1.0, 3.0, 3.0]);
        let years = [2010; 4];
        let pooled = pooled_fractional_rank(&values, LowerIsVulnerable).unwrap();
        let within = within_year_rank(&values, &years, LowerIsVulnerable).unwrap();
        assert_eq!(pooled, within);
    }

    #[test]
    fn minmax_basics() {
        let out = unwrap_all(pooled_minmax(&some(&[0.0, 5.0, 10.0]), HigherIsVulnerable).unwrap());
        assert_eq!(out, vec![0.0, 0.5, 1.0]);
        let inv = unwrap_all(pooled_minmax(&some(&[0.0, 5.0, 10.0]), LowerIsVulnerable).unwrap());
        assert_eq!(inv, vec![1.0, 0.5, 0.0]);
    }

    #[test]
    fn minmax_constant_column_errors() {
        assert!(matches!(
            pooled_minmax(&some(&[7.0, 7.0, 7.0]), HigherIsVulnerable),
            Err(NormalizeError::ConstantColumn { .. })
        ));
    }

    #[test]
    fn rank_mean_identity_with_ties() {
        // mean of pooled fractional ranks == (N+1)/(2N), ties included
        let mut rng = crate::rng::SplitMix64::new(14);
        for _ in 0..100 {
            let n = 2 + rng.next_below(50) as usize;
            let values: Vec<Option<f64>> = (0..n).map(|_| Some(rng.next_below(8) as f64)).collect();
            let out = unwrap_all(pooled_fractional_rank(&values, HigherIsVulnerable).unwrap());
            let mean = out.iter().sum::<f64>() / n as f64;
            let expected = (n as f64 + 1.0) / (2.0 * n as f64);
            assert!((mean - expected).abs() < 1e-12, "n={n} mean={mean}");
        }
    }

    #[test]
    fn monotone_transform_invariance() {
        let mut rng = crate::rng::SplitMix64::new(15);
        let values: Vec<Option<f64>> = (0..60).map(|_| Some(rng.next_f64() * 9.0)).collect();
        let base = pooled_fractional_rank(&values, HigherIsVulnerable).unwrap();
        let transformed: Vec<Option<f64>> = values
            .iter()
            .map(|v| v.map(|x| (x * 0.7 + 2.0).exp()))
            .collect();
        let after = pooled_fractional_rank(&transformed, HigherIsVulnerable).unwrap();
        for (a, b) in base.iter().zip(&after) {
            assert!((a.unwrap() - b.unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn order_preserved_under_orientation() {
        let mut rng = crate::rng::SplitMix64::new(16);
        let values: Vec<Option<f64>> = (0..40).map(|_| Some(rng.next_below(12) as f64)).collect();
        let out = pooled_fractional_rank(&values, HigherIsVulnerable).unwrap();
        for i in 0..values.len() {
            for j in 0..values.len() {
                let (a, b) = (values[i].unwrap(), values[j].unwrap());
                let (na, nb) = (out[i].unwrap(), out[j].unwrap());
                if a > b {
                    assert!(na > nb);
                } else if a == b {
                    assert_eq!(na, nb);
                }
            }
        }
    }

    #[test]
    fn massive_tie_block_value() {
        // a fraction f tied at the column maximum lands at 1 - (fN - 1)/(2N)
        let n = 500;
        let tied = 200; // f = 0.4
        let mut values: Vec<Option<f64>> = Vec::new();
        for i in 0..(n - tied) {
            values.push(Some(i as f64));
        }
        for _ in 0..tied {
            values.push(Some(1e6));
        }
        let out = pooled_fractional_rank(&values, HigherIsVulnerable).unwrap();
        let top = out[n - 1].unwrap();
        let expected = 1.0 - (tied as f64 - 1.0) / (2.0 * n as f64);
        assert!(
            (top - expected).abs() < 1e-12,
            "top {top} expected {expected}"
        );
    }

    #[test]
    fn normalize_panel_builds_d2_and_completeness() {
        use crate::dimensions::build_raw_panel;
        use crate::ingest::{generate_fixture, FixtureConfig};
        let bundle = generate_fixture(FixtureConfig::new(18, 4, 5)).unwrap();
        let raw = build_raw_panel(&bundle);
        let norm = normalize_panel(&raw, NormalizationMethod::PooledRank).unwrap();
        assert_eq!(norm.rows().len(), raw.len());
        for row in norm.rows() {
            if let (Some(a), Some(b)) = (row.d2a, row.d2b) {
                assert!((row.d2.unwrap() - (a + b) / 2.0).abs() < 1e-15);
            } else {
                assert!(row.d2.is_none());
            }
            for v in [row.d1, row.d2a, row.d2b, row.d2, row.d3]
                .into_iter()
                .flatten()
            {
                assert!((0.0..=1.0).contains(&v));
            }
        }
        // pooled ranks are strictly positive
        for row in norm.rows() {
            for v in [row.d1, row.d2a, row.d2b, row.d3].into_iter().flatten() {
                assert!(v > 0.0);
            }
        }
    }

    #[test]
    fn normalize_panel_mean_identity_per_column() {
        use crate::dimensions::build_raw_panel;
        use crate::ingest::{generate_fixture, FixtureConfig};
        let bundle = generate_fixture(FixtureConfig::new(16, 5, 77)).unwrap();
        let raw = build_raw_panel(&bundle);
        let norm = normalize_panel(&raw, NormalizationMethod::PooledRank).unwrap();
        for pick in [0usize, 1, 2, 3] {
            let col: Vec<f64> = norm
                .rows()
                .iter()
                .filter_map(|r| match pick {
                    0 => r.d1,
                    1 => r.d2a,
                    2 => r.d2b,
                    _ => r.d3,
                })
                .collect();
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            assert!(
                (mean - (n + 1.0) / (2.0 * n)).abs() < 1e-12,
                "column {pick}: mean {mean}"
            );
        }
    }
}
