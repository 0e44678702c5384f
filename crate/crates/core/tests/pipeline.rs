//! Full-pipeline integration checks on the synthetic fixture.

use mcvi_core::analysis::{self, Weighting};
use mcvi_core::dimensions::build_raw_panel;
use mcvi_core::index::{aggregate_mcvi, rank_countries, WeightVector};
use mcvi_core::ingest::{generate_fixture, DataBundle, FixtureConfig};
use mcvi_core::normalize::{normalize_panel, NormalizationMethod};
use mcvi_core::uncertainty::{run_monte_carlo, McConfig};

fn assert_send_sync<T: Send + Sync>() {}

#[test]
fn bundle_is_shareable_across_threads() {
    assert_send_sync::<DataBundle>();
    assert_send_sync::<mcvi_core::RawDimensionPanel>();
    assert_send_sync::<mcvi_core::IndexPanel>();
}

#[test]
fn full_battery_on_fixture() {
    let bundle = generate_fixture(FixtureConfig::new(20, 5, 42)).unwrap();
    let raw = build_raw_panel(&bundle);
    let norm = normalize_panel(&raw, NormalizationMethod::PooledRank).unwrap();
    let index = aggregate_mcvi(&norm, WeightVector::EQUAL).unwrap();
    let ranking = rank_countries(&index, 1).unwrap();

    // ranks are a permutation of 1..n
    let mut ranks: Vec<usize> = ranking.entries().iter().map(|e| e.rank).collect();
    ranks.sort_unstable();
    assert_eq!(ranks, (1..=ranking.len()).collect::<Vec<_>>());

    // SIDS sit at the vulnerable end of the fixture by construction
    let groups =
        analysis::group_statistics(&index, bundle.classifications(), Weighting::Observations);
    let sids = groups.partition("sids").unwrap();
    assert!(sids.gap.unwrap() > 0.0, "SIDS gap {:?}", sids.gap);

    // dominance counts partition the ranked countries
    let dominance = analysis::dominant_dimensions(&index).unwrap();
    assert_eq!(
        dominance.d1_count + dominance.d2_count + dominance.d3_count,
        ranking.len()
    );
    assert_eq!(dominance.countries.len(), ranking.len());

    // temporal report covers every observed year
    let trend = analysis::temporal_report(&index, bundle.classifications()).unwrap();
    assert_eq!(trend.annual.len(), index.years().len());
    assert_eq!(trend.consecutive_spearman.len(), index.years().len() - 1);

    // convergent validity: fixture LPI falls with vulnerability, freight
    // rises (2006-2010 covers the 2007 and 2010 LPI waves only)
    let convergent = analysis::convergent_validity(&index, bundle.external()).unwrap();
    let lpi_rho = convergent.lpi_mean_rho.unwrap();
    assert!(lpi_rho < -0.5, "fixture LPI correlation {lpi_rho}");

    // regressions: vulnerability falls with gdp per capita
    let regressions =
        analysis::run_regressions(&index, bundle.external(), bundle.classifications()).unwrap();
    assert!(regressions.model1.coefficients[1] < 0.0);
    assert!(regressions.model1.t_stats[1].abs() > 2.0);

    // event study on the in-range financial-crisis years
    let spec = analysis::EventSpec::new("financial-crisis", 2008, 2009).unwrap();
    let event = analysis::event_study(&index, bundle.external(), &spec).unwrap();
    assert!(event.n >= 8);
    let quartile_total: usize = event.quartile_sizes.iter().sum();
    assert_eq!(quartile_total, event.n);
    assert!(
        event.quartile_sizes.iter().max().unwrap() - event.quartile_sizes.iter().min().unwrap()
            <= 1
    );

    // Monte Carlo summary is internally consistent
    let mc = run_monte_carlo(
        &bundle,
        &McConfig {
            n_sims: 150,
            ..McConfig::new(5)
        },
    )
    .unwrap();
    assert_eq!(mc.sims.len(), 150);
    assert!(mc.min_rho <= mc.mean_rho);
    assert!(mc.sims.iter().all(|s| (-1.0..=1.0).contains(&s.rho)));
    assert_eq!(mc.countries.len(), ranking.len());
}

#[test]
fn alternative_methods_produce_similar_rankings() {
    let bundle = generate_fixture(FixtureConfig::new(20, 5, 42)).unwrap();
    let raw = build_raw_panel(&bundle);
    let pooled = normalize_panel(&raw, NormalizationMethod::PooledRank).unwrap();
    let baseline =
        rank_countries(&aggregate_mcvi(&pooled, WeightVector::EQUAL).unwrap(), 1).unwrap();
    for method in [
        NormalizationMethod::WithinYearRank,
        NormalizationMethod::PooledMinMax,
    ] {
        let norm = normalize_panel(&raw, method).unwrap();
        let ranking =
            rank_countries(&aggregate_mcvi(&norm, WeightVector::EQUAL).unwrap(), 1).unwrap();
        let rho = mcvi_core::ranking_spearman(&baseline, &ranking).unwrap();
        assert!(rho > 0.8, "{method:?}: rho {rho}");
    }
}
