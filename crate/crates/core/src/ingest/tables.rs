//! The five validated input tables and the assembled [`DataBundle`].
//!
//! Tables can only be built through validating constructors, which sort rows
//! into a canonical order and reject duplicate keys and out-of-domain
//! values. All types are plain owned data and safely shareable across
//! threads once built.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{DatasetKind, EconomyId, IngestError, Region, YearRange};

/// Tolerance for treating symmetric LSBCI duplicates as the same number.
const LSBCI_DUP_TOL: f64 = 1e-9;

fn domain_error(
    kind: DatasetKind,
    key: impl Into<String>,
    message: impl Into<String>,
) -> IngestError {
    IngestError::DomainError {
        kind,
        key: key.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsciRow {
    pub economy: EconomyId,
    pub year: i32,
    pub lsci: f64,
}

/// Country-level connectivity scores, one row per (economy, year).
#[derive(Debug, Clone, PartialEq)]
pub struct LsciTable {
    rows: Vec<LsciRow>,
}

impl LsciTable {
    pub fn from_rows(mut rows: Vec<LsciRow>, range: YearRange) -> Result<Self, IngestError> {
        const KIND: DatasetKind = DatasetKind::Lsci;
        for row in &rows {
            if !row.lsci.is_finite() || row.lsci < 0.0 {
                return Err(domain_error(
                    KIND,
                    format!("{},{}", row.economy, row.year),
                    format!("lsci must be a nonnegative number, got {}", row.lsci),
                ));
            }
            check_year(KIND, row.economy.as_str(), row.year, range)?;
        }
        let mut seen = HashMap::new();
        for row in &rows {
            if seen.insert((row.economy.clone(), row.year), ()).is_some() {
                return Err(domain_error(
                    KIND,
                    format!("{},{}", row.economy, row.year),
                    "duplicate (economy, year) key",
                ));
            }
        }
        rows.sort_by(|a, b| (&a.economy, a.year).cmp(&(&b.economy, b.year)));
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[LsciRow] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsbciRow {
    /// Canonical order: `economy_a < economy_b`.
    pub economy_a: EconomyId,
    pub economy_b: EconomyId,
    pub year: i32,
    pub lsbci: f64,
}

/// Bilateral connectivity scores on unordered economy pairs.
///
/// Symmetric duplicates (both orientations, or repeated rows) with values
/// equal within 1e-9 collapse to one row carrying the first parsed value;
/// conflicting values are a hard error.
#[derive(Debug, Clone, PartialEq)]
pub struct LsbciTable {
    rows: Vec<LsbciRow>,
}

impl LsbciTable {
    pub fn from_rows(rows: Vec<LsbciRow>, range: YearRange) -> Result<Self, IngestError> {
        const KIND: DatasetKind = DatasetKind::Lsbci;
        let mut canonical: Vec<LsbciRow> = Vec::with_capacity(rows.len());
        let mut seen: HashMap<(EconomyId, EconomyId, i32), f64> = HashMap::new();
        for row in rows {
            if row.economy_a == row.economy_b {
                return Err(domain_error(
                    KIND,
                    format!("{},{},{}", row.economy_a, row.economy_b, row.year),
                    "bilateral pair must connect two distinct economies",
                ));
            }
            if !row.lsbci.is_finite() || !(0.0..=1.0).contains(&row.lsbci) {
                return Err(domain_error(
                    KIND,
                    format!("{},{},{}", row.economy_a, row.economy_b, row.year),
                    format!("lsbci must lie in [0, 1], got {}", row.lsbci),
                ));
            }
            check_year(KIND, row.economy_a.as_str(), row.year, range)?;
            let (a, b) = if row.economy_a < row.economy_b {
                (row.economy_a, row.economy_b)
            } else {
                (row.economy_b, row.economy_a)
            };
            match seen.get(&(a.clone(), b.clone(), row.year)) {
                Some(&existing) => {
                    if (existing - row.lsbci).abs() > LSBCI_DUP_TOL {
                        return Err(domain_error(
                            KIND,
                            format!("{a},{b},{}", row.year),
                            format!("conflicting duplicate pair: {existing} vs {}", row.lsbci),
                        ));
                    }
                    // equal within tolerance: keep the first parsed value
                }
                None => {
                    seen.insert((a.clone(), b.clone(), row.year), row.lsbci);
                    canonical.push(LsbciRow {
                        economy_a: a,
                        economy_b: b,
                        year: row.year,
                        lsbci: row.lsbci,
                    });
                }
            }
        }
        canonical.sort_by(|x, y| {
            (&x.economy_a, &x.economy_b, x.year).cmp(&(&y.economy_a, &y.economy_b, y.year))
        });
        Ok(Self { rows: canonical })
    }

    pub fn rows(&self) -> &[LsbciRow] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlsciRow {
    pub port_id: String,
    pub economy: EconomyId,
    pub year: i32,
    pub plsci: f64,
}

/// Port-level connectivity scores, one row per (port, year).
#[derive(Debug, Clone, PartialEq)]
pub struct PlsciTable {
    rows: Vec<PlsciRow>,
}

impl PlsciTable {
    pub fn from_rows(mut rows: Vec<PlsciRow>, range: YearRange) -> Result<Self, IngestError> {
        const KIND: DatasetKind = DatasetKind::Plsci;
        let mut seen: HashMap<(String, i32), EconomyId> = HashMap::new();
        for row in &rows {
            if row.port_id.is_empty() {
                return Err(domain_error(
                    KIND,
                    format!("?,{}", row.year),
                    "empty port_id",
                ));
            }
            if !row.plsci.is_finite() || row.plsci < 0.0 {
                return Err(domain_error(
                    KIND,
                    format!("{},{}", row.port_id, row.year),
                    format!("plsci must be a nonnegative number, got {}", row.plsci),
                ));
            }
            check_year(KIND, &row.port_id, row.year, range)?;
            if seen
                .insert((row.port_id.clone(), row.year), row.economy.clone())
                .is_some()
            {
                return Err(domain_error(
                    KIND,
                    format!("{},{}", row.port_id, row.year),
                    "duplicate (port_id, year) key",
                ));
            }
        }
        rows.sort_by(|a, b| {
            (&a.economy, &a.port_id, a.year).cmp(&(&b.economy, &b.port_id, b.year))
        });
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[PlsciRow] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRow {
    pub economy: EconomyId,
    pub name: String,
    pub sids: bool,
    pub ldc: bool,
    pub lldc: bool,
    pub region: Region,
}

/// One classification row per economy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationTable {
    rows: Vec<ClassificationRow>,
}

impl ClassificationTable {
    pub fn from_rows(mut rows: Vec<ClassificationRow>) -> Result<Self, IngestError> {
        const KIND: DatasetKind = DatasetKind::Classification;
        let mut seen = HashMap::new();
        for row in &rows {
            if seen.insert(row.economy.clone(), ()).is_some() {
                return Err(domain_error(
                    KIND,
                    row.economy.as_str(),
                    "duplicate economy",
                ));
            }
        }
        rows.sort_by(|a, b| a.economy.cmp(&b.economy));
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[ClassificationRow] {
        &self.rows
    }

    pub fn get(&self, economy: &EconomyId) -> Option<&ClassificationRow> {
        self.rows
            .binary_search_by(|row| row.economy.cmp(economy))
            .ok()
            .map(|idx| &self.rows[idx])
    }

    pub fn contains(&self, economy: &EconomyId) -> bool {
        self.get(economy).is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalRow {
    pub economy: EconomyId,
    pub year: i32,
    pub gdp_pc: Option<f64>,
    pub trade_open: Option<f64>,
    pub lpi: Option<f64>,
    pub freight_advalorem: Option<f64>,
}

/// External covariates; blank fields are genuinely missing values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExternalTable {
    rows: Vec<ExternalRow>,
}

impl ExternalTable {
    pub fn from_rows(mut rows: Vec<ExternalRow>, range: YearRange) -> Result<Self, IngestError> {
        const KIND: DatasetKind = DatasetKind::External;
        let mut seen = HashMap::new();
        for row in &rows {
            let key = format!("{},{}", row.economy, row.year);
            check_year(KIND, row.economy.as_str(), row.year, range)?;
            for (label, value) in [("gdp_pc", row.gdp_pc), ("trade_open", row.trade_open)] {
                if let Some(v) = value {
                    if !v.is_finite() || v <= 0.0 {
                        return Err(domain_error(
                            KIND,
                            &key,
                            format!("{label} must be positive when present, got {v}"),
                        ));
                    }
                }
            }
            if let Some(v) = row.lpi {
                if !v.is_finite() || !(1.0..=5.0).contains(&v) {
                    return Err(domain_error(
                        KIND,
                        &key,
                        format!("lpi must lie in [1, 5] when present, got {v}"),
                    ));
                }
            }
            if let Some(v) = row.freight_advalorem {
                if !v.is_finite() || v <= 0.0 {
                    return Err(domain_error(
                        KIND,
                        &key,
                        format!("freight_advalorem must be positive when present, got {v}"),
                    ));
                }
            }
            if seen.insert((row.economy.clone(), row.year), ()).is_some() {
                return Err(domain_error(KIND, &key, "duplicate (economy, year) key"));
            }
        }
        rows.sort_by(|a, b| (&a.economy, a.year).cmp(&(&b.economy, b.year)));
        Ok(Self { rows })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[ExternalRow] {
        &self.rows
    }
}

fn check_year(
    kind: DatasetKind,
    key: &str,
    year: i32,
    range: YearRange,
) -> Result<(), IngestError> {
    if range.contains(year) {
        Ok(())
    } else {
        Err(domain_error(
            kind,
            format!("{key},{year}"),
            format!(
                "year {year} outside the configured range {}-{}",
                range.min, range.max
            ),
        ))
    }
}

/// Validated, immutable image of the five inputs.
#[derive(Debug, Clone)]
pub struct DataBundle {
    lsci: LsciTable,
    lsbci: LsbciTable,
    plsci: PlsciTable,
    classifications: ClassificationTable,
    external: ExternalTable,
    year_range: YearRange,
    provenance: Vec<String>,
    /// Distinct economies with any indicator coverage, per year.
    per_year_counts: Vec<(i32, usize)>,
}

impl DataBundle {
    pub fn lsci(&self) -> &LsciTable {
        &self.lsci
    }
    pub fn lsbci(&self) -> &LsbciTable {
        &self.lsbci
    }
    pub fn plsci(&self) -> &PlsciTable {
        &self.plsci
    }
    pub fn classifications(&self) -> &ClassificationTable {
        &self.classifications
    }
    pub fn external(&self) -> &ExternalTable {
        &self.external
    }
    pub fn year_range(&self) -> YearRange {
        self.year_range
    }
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }
    pub fn per_year_counts(&self) -> &[(i32, usize)] {
        &self.per_year_counts
    }
}

/// Cross-reference the tables and assemble an immutable bundle.
///
/// Every economy referenced by an indicator or external row must exist in
/// the classification table. Coverage gaps are left as-is: absent rows stay
/// absent.
pub fn validate_bundle(
    lsci: LsciTable,
    lsbci: LsbciTable,
    plsci: PlsciTable,
    classifications: ClassificationTable,
    external: ExternalTable,
    year_range: YearRange,
    provenance: Vec<String>,
) -> Result<DataBundle, IngestError> {
    let check = |kind: DatasetKind, economy: &EconomyId| -> Result<(), IngestError> {
        if classifications.contains(economy) {
            Ok(())
        } else {
            Err(IngestError::UnknownEconomy {
                kind,
                economy: economy.as_str().to_string(),
            })
        }
    };
    for row in lsci.rows() {
        check(DatasetKind::Lsci, &row.economy)?;
    }
    for row in lsbci.rows() {
        check(DatasetKind::Lsbci, &row.economy_a)?;
        check(DatasetKind::Lsbci, &row.economy_b)?;
    }
    for row in plsci.rows() {
        check(DatasetKind::Plsci, &row.economy)?;
    }
    for row in external.rows() {
        check(DatasetKind::External, &row.economy)?;
    }

    let mut coverage: BTreeMap<i32, BTreeSet<&EconomyId>> = BTreeMap::new();
    for row in lsci.rows() {
        coverage.entry(row.year).or_default().insert(&row.economy);
    }
    for row in lsbci.rows() {
        coverage.entry(row.year).or_default().insert(&row.economy_a);
        coverage.entry(row.year).or_default().insert(&row.economy_b);
    }
    for row in plsci.rows() {
        coverage.entry(row.year).or_default().insert(&row.economy);
    }
    let per_year_counts = coverage
        .iter()
        .map(|(&year, economies)| (year, economies.len()))
        .collect();

    Ok(DataBundle {
        lsci,
        lsbci,
        plsci,
        classifications,
        external,
        year_range,
        provenance,
        per_year_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eid(s: &str) -> EconomyId {
        EconomyId::new(s).unwrap()
    }

    #[test]
    fn lsci_rejects_negative() {
        let rows = vec![LsciRow {
            economy: eid("AAA"),
            year: 2010,
            lsci: -1.0,
        }];
        match LsciTable::from_rows(rows, YearRange::DEFAULT) {
            Err(IngestError::DomainError { key, .. }) => assert_eq!(key, "AAA,2010"),
            other => panic!("expected DomainError, got {other:?}"),
        }
    }

    #[test]
    fn lsci_rejects_duplicate_key() {
        let rows = vec![
            LsciRow {
                economy: eid("AAA"),
                year: 2010,
                lsci: 1.0,
            },
            LsciRow {
                economy: eid("AAA"),
                year: 2010,
                lsci: 2.0,
            },
        ];
        assert!(matches!(
            LsciTable::from_rows(rows, YearRange::DEFAULT),
            Err(IngestError::DomainError { .. })
        ));
    }

    #[test]
    fn lsci_rejects_out_of_range_year() {
        let rows = vec![LsciRow {
            economy: eid("AAA"),
            year: 1999,
            lsci: 1.0,
        }];
        assert!(matches!(
            LsciTable::from_rows(rows, YearRange::DEFAULT),
            Err(IngestError::DomainError { .. })
        ));
    }

    #[test]
    fn lsbci_symmetric_duplicates_collapse() {
        let rows = vec![
            LsbciRow {
                economy_a: eid("BBB"),
                economy_b: eid("AAA"),
                year: 2010,
                lsbci: 0.5,
            },
            LsbciRow {
                economy_a: eid("AAA"),
                economy_b: eid("BBB"),
                year: 2010,
                lsbci: 0.5,
            },
        ];
        let table = LsbciTable::from_rows(rows, YearRange::DEFAULT).unwrap();
        assert_eq!(table.rows().len(), 1);
        assert_eq!(table.rows()[0].economy_a, eid("AAA"));
        assert_eq!(table.rows()[0].economy_b, eid("BBB"));
    }

    #[test]
    fn lsbci_conflicting_duplicates_error() {
        let rows = vec![
            LsbciRow {
                economy_a: eid("AAA"),
                economy_b: eid("BBB"),
                year: 2010,
                lsbci: 0.5,
            },
            LsbciRow {
                economy_a: eid("BBB"),
                economy_b: eid("AAA"),
                year: 2010,
                lsbci: 0.7,
            },
        ];
        assert!(matches!(
            LsbciTable::from_rows(rows, YearRange::DEFAULT),
            Err(IngestError::DomainError { .. })
        ));
    }

    #[test]
    fn lsbci_self_pair_rejected() {
        let rows = vec![LsbciRow {
            economy_a: eid("AAA"),
            economy_b: eid("AAA"),
            year: 2010,
            lsbci: 0.5,
        }];
        assert!(matches!(
            LsbciTable::from_rows(rows, YearRange::DEFAULT),
            Err(IngestError::DomainError { .. })
        ));
    }

    #[test]
    fn plsci_duplicate_port_year_rejected() {
        let rows = vec![
            PlsciRow {
                port_id: "P1".into(),
                economy: eid("AAA"),
                year: 2010,
                plsci: 5.0,
            },
            PlsciRow {
                port_id: "P1".into(),
                economy: eid("AAA"),
                year: 2010,
                plsci: 6.0,
            },
        ];
        assert!(matches!(
            PlsciTable::from_rows(rows, YearRange::DEFAULT),
            Err(IngestError::DomainError { .. })
        ));
    }

    #[test]
    fn external_rejects_nonpositive_gdp() {
        let rows = vec![ExternalRow {
            economy: eid("AAA"),
            year: 2010,
            gdp_pc: Some(0.0),
            trade_open: None,
            lpi: None,
            freight_advalorem: None,
        }];
        assert!(matches!(
            ExternalTable::from_rows(rows, YearRange::DEFAULT),
            Err(IngestError::DomainError { .. })
        ));
    }

    #[test]
    fn unknown_economy_detected() {
        let lsci = LsciTable::from_rows(
            vec![LsciRow {
                economy: eid("ZZZ"),
                year: 2010,
                lsci: 1.0,
            }],
            YearRange::DEFAULT,
        )
        .unwrap();
        let cls = ClassificationTable::from_rows(vec![ClassificationRow {
            economy: eid("AAA"),
            name: "Economy AAA".into(),
            sids: false,
            ldc: false,
            lldc: false,
            region: Region::Asia,
        }])
        .unwrap();
        let res = validate_bundle(
            lsci,
            LsbciTable::from_rows(vec![], YearRange::DEFAULT).unwrap(),
            PlsciTable::from_rows(vec![], YearRange::DEFAULT).unwrap(),
            cls,
            ExternalTable::empty(),
            YearRange::DEFAULT,
            vec![],
        );
        match res {
            Err(IngestError::UnknownEconomy { economy, .. }) => assert_eq!(economy, "ZZZ"),
            other => panic!("expected UnknownEconomy, got {other:?}"),
        }
    }

    #[test]
    fn per_year_counts_cover_all_indicator_tables() {
        let cls = ClassificationTable::from_rows(
            ["AAA", "BBB", "CCC"]
                .iter()
                .map(|code| ClassificationRow {
                    economy: eid(code),
                    name: format!("Economy {code}"),
                    sids: false,
                    ldc: false,
                    lldc: false,
                    region: Region::Europe,
                })
                .collect(),
        )
        .unwrap();
        let lsci = LsciTable::from_rows(
            vec![LsciRow {
                economy: eid("AAA"),
                year: 2010,
                lsci: 1.0,
            }],
            YearRange::DEFAULT,
        )
        .unwrap();
        let lsbci = LsbciTable::from_rows(
            vec![LsbciRow {
                economy_a: eid("BBB"),
                economy_b: eid("CCC"),
                year: 2011,
                lsbci: 0.4,
            }],
            YearRange::DEFAULT,
        )
        .unwrap();
        let bundle = validate_bundle(
            lsci,
            lsbci,
            PlsciTable::from_rows(vec![], YearRange::DEFAULT).unwrap(),
            cls,
            ExternalTable::empty(),
            YearRange::DEFAULT,
            vec![],
        )
        .unwrap();
        assert_eq!(bundle.per_year_counts(), &[(2010, 1), (2011, 2)]);
    }
}
