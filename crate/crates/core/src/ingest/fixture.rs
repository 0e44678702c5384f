//! Deterministic synthetic bundles for tests and demos.
//!
//! All draws come from fixed SplitMix64 streams keyed on the seed, so a
//! given `(config, seed)` produces a byte-identical bundle on every run and
//! platform. The generated panel is mildly unbalanced (random coverage
//! gaps), SIDS make up at least 20% of economies and sit at the weak end of
//! the connectivity distribution, and external covariates co-move with
//! connectivity so that validation reports have realistic signs.

use super::tables::*;
use super::{EconomyId, IngestError, Region, YearRange};
use crate::rng::stream;

/// LPI survey waves mirrored by the fixture's external table.
const LPI_WAVE_YEARS: [i32; 7] = [2007, 2010, 2012, 2014, 2016, 2018, 2022];
/// Years with ad valorem freight coverage in the fixture.
const FREIGHT_YEARS: std::ops::RangeInclusive<i32> = 2016..=2021;

#[derive(Debug, Clone, Copy)]
pub struct FixtureConfig {
    pub n_economies: usize,
    pub n_years: usize,
    pub seed: u64,
}

impl FixtureConfig {
    pub fn new(n_economies: usize, n_years: usize, seed: u64) -> Self {
        Self {
            n_economies,
            n_years,
            seed,
        }
    }
}

fn economy_code(index: usize) -> EconomyId {
    let mut chars = ['A'; 3];
    let mut v = index;
    for slot in chars.iter_mut().rev() {
        *slot = (b'A' + (v % 26) as u8) as char;
        v /= 26;
    }
    EconomyId::new(chars.iter().collect::<String>()).expect("generated code is valid")
}

fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Generate a deterministic synthetic [`DataBundle`].
///
/// Requires at least 4 economies and 2-20 years (years start at 2006 so the
/// emitted CSVs stay within the loaders' default range).
pub fn generate_fixture(config: FixtureConfig) -> Result<DataBundle, IngestError> {
    let n = config.n_economies;
    let ny = config.n_years;
    if n < 4 {
        return Err(IngestError::InvalidConfig(format!(
            "need at least 4 economies, got {n}"
        )));
    }
    if ny < 2 {
        return Err(IngestError::InvalidConfig(format!(
            "need at least 2 years, got {ny}"
        )));
    }
    if ny > 20 {
        return Err(IngestError::InvalidConfig(format!(
            "at most 20 years fit the 2006-2025 range, got {ny}"
        )));
    }
    let years: Vec<i32> = (0..ny).map(|t| 2006 + t as i32).collect();
    let range = YearRange {
        min: years[0],
        max: *years.last().unwrap(),
    };

    let mut rng_scale = stream(config.seed, 1);
    let mut rng_class = stream(config.seed, 2);
    let mut rng_lsci = stream(config.seed, 3);
    let mut rng_pairs = stream(config.seed, 4);
    let mut rng_ports = stream(config.seed, 5);
    let mut rng_ext = stream(config.seed, 6);

    // latent connectivity scale per economy; SIDS are the weakest quarter
    let scales: Vec<f64> = (0..n).map(|_| (0.9 * rng_scale.normal()).exp()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scales[a].partial_cmp(&scales[b]).unwrap().then(a.cmp(&b)));
    let mut rank_of = vec![0usize; n];
    for (pos, &idx) in order.iter().enumerate() {
        rank_of[idx] = pos;
    }
    let norm: Vec<f64> = rank_of.iter().map(|&r| r as f64 / (n - 1) as f64).collect();
    let n_sids = ((n as f64 * 0.25).ceil() as usize).max(1);

    let codes: Vec<EconomyId> = (0..n).map(economy_code).collect();

    let mut class_rows = Vec::with_capacity(n);
    for i in 0..n {
        let sids = rank_of[i] < n_sids;
        let ldc_p = if norm[i] < 0.5 { 0.4 } else { 0.05 };
        let ldc = rng_class.next_f64() < ldc_p;
        let lldc = rng_class.next_f64() < 0.08;
        let region = Region::ALL[rng_class.next_below(5) as usize];
        class_rows.push(ClassificationRow {
            economy: codes[i].clone(),
            name: format!("Economy {}", codes[i]),
            sids,
            ldc,
            lldc,
            region,
        });
    }

    let mut lsci_rows = Vec::new();
    for i in 0..n {
        for (t, &year) in years.iter().enumerate() {
            let gap = rng_lsci.next_f64();
            let noise = rng_lsci.normal();
            if gap < 0.05 {
                continue;
            }
            let value = scales[i] * 20.0 * (0.02 * t as f64 + 0.25 * noise).exp();
            lsci_rows.push(LsciRow {
                economy: codes[i].clone(),
                year,
                lsci: value,
            });
        }
    }

    // partner graph: a chain keeps everyone connected; extra edges favour
    // well-connected economies
    let mut lsbci_rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let u = rng_pairs.next_f64();
            let base_noise = rng_pairs.next_f64() - 0.5;
            let chained = j == i + 1;
            let p = 0.10 + 0.55 * (norm[i] + norm[j]) / 2.0;
            if !chained && u >= p {
                continue; // skipped pairs consume no per-year draws
            }
            let base = clamp01(0.15 + 0.55 * (norm[i] + norm[j]) / 2.0 + 0.15 * base_noise);
            for &year in &years {
                let gap = rng_pairs.next_f64();
                let wiggle = rng_pairs.next_f64() - 0.5;
                if gap < 0.03 {
                    continue;
                }
                lsbci_rows.push(LsbciRow {
                    economy_a: codes[i].clone(),
                    economy_b: codes[j].clone(),
                    year,
                    lsbci: clamp01(base + 0.06 * wiggle),
                });
            }
        }
    }

    let mut plsci_rows = Vec::new();
    for i in 0..n {
        let max_ports = 1 + (5.0 * norm[i]).round() as u64;
        let k = 1 + rng_ports.next_below(max_ports) as usize;
        let weights: Vec<f64> = (0..k).map(|_| (0.8 * rng_ports.normal()).exp()).collect();
        for (p, &w) in weights.iter().enumerate() {
            let port_id = format!("{}-P{}", codes[i], p + 1);
            for (t, &year) in years.iter().enumerate() {
                let gap = rng_ports.next_f64();
                let noise = rng_ports.normal();
                if gap < 0.03 {
                    continue;
                }
                let value = scales[i] * 10.0 * w * (0.02 * t as f64 + 0.1 * noise).exp();
                plsci_rows.push(PlsciRow {
                    port_id: port_id.clone(),
                    economy: codes[i].clone(),
                    year,
                    plsci: value,
                });
            }
        }
    }

    let mut external_rows = Vec::new();
    for i in 0..n {
        for &year in &years {
            let gap = rng_ext.next_f64();
            let g_noise = rng_ext.normal();
            let t_noise = rng_ext.normal();
            let l_noise = rng_ext.normal();
            let f_noise = rng_ext.normal();
            if gap < 0.08 {
                continue;
            }
            let gdp_pc = 800.0 + 60_000.0 * norm[i].powf(1.8) * (0.2 * g_noise).exp();
            let trade_open = (30.0 + 150.0 * (1.0 - norm[i]) * (0.15 * t_noise).exp()).max(5.0);
            let lpi = if LPI_WAVE_YEARS.contains(&year) {
                Some((1.2 + 3.4 * norm[i] + 0.25 * l_noise).clamp(1.0, 5.0))
            } else {
                None
            };
            let freight = if FREIGHT_YEARS.contains(&year) {
                Some((2.0 + 9.0 * (1.0 - norm[i]) + 0.5 * f_noise).max(0.1))
            } else {
                None
            };
            external_rows.push(ExternalRow {
                economy: codes[i].clone(),
                year,
                gdp_pc: Some(gdp_pc),
                trade_open: Some(trade_open),
                lpi,
                freight_advalorem: freight,
            });
        }
    }

    let lsci = LsciTable::from_rows(lsci_rows, range)?;
    let lsbci = LsbciTable::from_rows(lsbci_rows, range)?;
    let plsci = PlsciTable::from_rows(plsci_rows, range)?;
    let classifications = ClassificationTable::from_rows(class_rows)?;
    let external = ExternalTable::from_rows(external_rows, range)?;
    let provenance = vec![format!(
        "synthetic fixture (economies={n}, years={ny}, seed={})",
        config.seed
    )];
    validate_bundle(
        lsci,
        lsbci,
        plsci,
        classifications,
        external,
        range,
        provenance,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_bundle() {
        let a = generate_fixture(FixtureConfig::new(20, 5, 42)).unwrap();
        let b = generate_fixture(FixtureConfig::new(20, 5, 42)).unwrap();
        assert_eq!(a.lsci(), b.lsci());
        assert_eq!(a.lsbci(), b.lsbci());
        assert_eq!(a.plsci(), b.plsci());
        assert_eq!(a.classifications(), b.classifications());
        assert_eq!(a.external(), b.external());
    }

    #[test]
    fn different_seed_different_bundle() {
        let a = generate_fixture(FixtureConfig::new(20, 5, 42)).unwrap();
        let b = generate_fixture(FixtureConfig::new(20, 5, 43)).unwrap();
        assert_ne!(a.lsci(), b.lsci());
    }

    #[test]
    fn too_small_configs_rejected() {
        assert!(matches!(
            generate_fixture(FixtureConfig::new(3, 5, 1)),
            Err(IngestError::InvalidConfig(_))
        ));
        assert!(matches!(
            generate_fixture(FixtureConfig::new(10, 1, 1)),
            Err(IngestError::InvalidConfig(_))
        ));
        assert!(matches!(
            generate_fixture(FixtureConfig::new(10, 21, 1)),
            Err(IngestError::InvalidConfig(_))
        ));
    }

    #[test]
    fn sids_share_is_at_least_twenty_percent() {
        let bundle = generate_fixture(FixtureConfig::new(23, 4, 7)).unwrap();
        let sids = bundle
            .classifications()
            .rows()
            .iter()
            .filter(|r| r.sids)
            .count();
        assert!(sids * 5 >= bundle.classifications().rows().len());
    }

    #[test]
    fn every_economy_has_some_bilateral_partner() {
        let bundle = generate_fixture(FixtureConfig::new(12, 5, 3)).unwrap();
        for row in bundle.classifications().rows() {
            let has_pair = bundle
                .lsbci()
                .rows()
                .iter()
                .any(|p| p.economy_a == row.economy || p.economy_b == row.economy);
            assert!(has_pair, "economy {} has no partners", row.economy);
        }
    }

    #[test]
    fn csv_round_trip_reproduces_fixture() {
        use super::super::load;
        let bundle = generate_fixture(FixtureConfig::new(10, 3, 99)).unwrap();
        let range = bundle.year_range();
        let lsci = load::load_lsci(load::lsci_to_csv(bundle.lsci()).as_bytes(), range).unwrap();
        assert_eq!(&lsci, bundle.lsci());
        let lsbci = load::load_lsbci(load::lsbci_to_csv(bundle.lsbci()).as_bytes(), range).unwrap();
        assert_eq!(&lsbci, bundle.lsbci());
        let plsci = load::load_plsci(load::plsci_to_csv(bundle.plsci()).as_bytes(), range).unwrap();
        assert_eq!(&plsci, bundle.plsci());
        let cls = load::load_classifications(
            load::classifications_to_csv(bundle.classifications()).as_bytes(),
        )
        .unwrap();
        assert_eq!(&cls, bundle.classifications());
        let ext = load::load_external(load::external_to_csv(bundle.external()).as_bytes(), range)
            .unwrap();
        assert_eq!(&ext, bundle.external());
    }
}
