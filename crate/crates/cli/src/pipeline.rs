//! Pipeline orchestration: load, build, analyze, emit artifacts and the
//! reproducibility manifest.

use std::path::Path;

use mcvi_core::analysis::{self, Weighting};
use mcvi_core::index::{
    aggregate_mcvi, derive_pca_weights, rank_countries, CountryRanking, IndexPanel, WeightVector,
};
use mcvi_core::ingest::{self, DataBundle, DatasetKind, FixtureConfig};
use mcvi_core::normalize::{normalize_panel, NormalizedPanel};
use mcvi_core::report;
use mcvi_core::uncertainty::{decompose_variance, run_monte_carlo, McConfig, VarianceShares};
use mcvi_core::{build_raw_panel, generate_fixture};

use crate::manifest::{digest_file, FileDigest, Recorder, RunManifest};
use crate::{RunArgs, WeightsArg};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Ingest(#[from] ingest::IngestError),
    #[error(transparent)]
    Normalize(#[from] mcvi_core::normalize::NormalizeError),
    #[error(transparent)]
    Index(#[from] mcvi_core::index::IndexError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Uncertainty(#[from] mcvi_core::uncertainty::UncertaintyError),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    Build,
    Robustness,
    MonteCarlo,
    Decompose,
    Validate,
    Events,
    Report,
}

impl Selection {
    fn name(&self) -> &'static str {
        match self {
            Selection::Build => "build",
            Selection::Robustness => "robustness",
            Selection::MonteCarlo => "montecarlo",
            Selection::Decompose => "decompose",
            Selection::Validate => "validate",
            Selection::Events => "events",
            Selection::Report => "report",
        }
    }
}

#[derive(serde::Serialize)]
struct ConfigEcho {
    input: String,
    output: String,
    method: &'static str,
    weights: String,
    resolved_weights: [f64; 3],
    min_years: usize,
    sims: usize,
    alpha: f64,
    noise: f64,
    pswitch: f64,
    seed: u64,
}

#[derive(serde::Serialize)]
#[serde(untagged)]
enum MaybeReport<T: serde::Serialize> {
    Ready(T),
    Skipped { skipped: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn run(args: &RunArgs, selection: Selection) -> Result<(), CliError> {
    std::fs::create_dir_all(&args.output).map_err(io_err(&args.output))?;
    // drop any stale failure marker from a previous run
    let marker = args.output.join("error.json");
    if marker.exists() {
        std::fs::remove_file(&marker).map_err(io_err(&marker))?;
    }
    match run_inner(args, selection) {
        Ok(()) => Ok(()),
        Err(err) => {
            let body = serde_json::json!({
                "command": selection.name(),
                "error": err.to_string(),
            });
            let rendered = serde_json::to_string_pretty(&body).unwrap_or_else(|_| err.to_string());
            let _ = std::fs::write(&marker, rendered);
            Err(err)
        }
    }
}

fn run_inner(args: &RunArgs, selection: Selection) -> Result<(), CliError> {
    let mut recorder = Recorder::new(&args.output);

    recorder.stage("ingest");
    let bundle = ingest::load_bundle(&args.input, ingest::YearRange::DEFAULT)?;
    let inputs = input_digests(&args.input)?;

    recorder.stage("dimensions");
    let raw = build_raw_panel(&bundle);

    recorder.stage("normalize");
    let norm = normalize_panel(&raw, args.method)?;

    recorder.stage("aggregate");
    let weights = resolve_weights(args.weights, &norm)?;
    let index = aggregate_mcvi(&norm, weights)?;
    let ranking = rank_countries(&index, args.min_years)?;

    let mc_config = McConfig {
        n_sims: args.sims,
        dirichlet_alpha: args.alpha,
        noise_halfwidth: args.noise,
        p_switch_normalization: args.pswitch,
        seed: args.seed,
        min_years: args.min_years,
        pin_weights: false,
    };

    match selection {
        Selection::Build => {
            write_build(&mut recorder, &bundle, &index, &ranking)?;
        }
        Selection::Robustness => {
            write_robustness(&mut recorder, &bundle, args.min_years)?;
        }
        Selection::MonteCarlo => {
            write_montecarlo(&mut recorder, &bundle, &mc_config)?;
        }
        Selection::Decompose => {
            write_decompose(&mut recorder, &index, args.seed)?;
        }
        Selection::Validate => {
            write_validate(&mut recorder, &bundle, &index, false)?;
        }
        Selection::Events => {
            write_events(&mut recorder, &bundle, &index)?;
        }
        Selection::Report => {
            write_build(&mut recorder, &bundle, &index, &ranking)?;
            write_summary(&mut recorder, &bundle, &index, &ranking)?;
            write_robustness(&mut recorder, &bundle, args.min_years)?;
            write_decompose(&mut recorder, &index, args.seed)?;
            write_montecarlo(&mut recorder, &bundle, &mc_config)?;
            write_validate(&mut recorder, &bundle, &index, true)?;
            write_events(&mut recorder, &bundle, &index)?;
        }
    }

    recorder.stage("manifest");
    let row_counts = vec![
        (
            DatasetKind::Lsci.file_name().to_string(),
            bundle.lsci().rows().len(),
        ),
        (
            DatasetKind::Lsbci.file_name().to_string(),
            bundle.lsbci().rows().len(),
        ),
        (
            DatasetKind::Plsci.file_name().to_string(),
            bundle.plsci().rows().len(),
        ),
        (
            DatasetKind::Classification.file_name().to_string(),
            bundle.classifications().rows().len(),
        ),
        (
            DatasetKind::External.file_name().to_string(),
            bundle.external().rows().len(),
        ),
    ];
    let (outputs, stages) = recorder.into_parts();
    let manifest = RunManifest {
        tool: "mcvi".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: selection.name().to_string(),
        config: ConfigEcho {
            input: args.input.display().to_string(),
            output: args.output.display().to_string(),
            method: args.method.as_str(),
            weights: format!("{:?}", args.weights),
            resolved_weights: weights.as_array(),
            min_years: args.min_years,
            sims: args.sims,
            alpha: args.alpha,
            noise: args.noise,
            pswitch: args.pswitch,
            seed: args.seed,
        },
        inputs,
        row_counts,
        outputs,
        stages,
    };
    let path = args.output.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?).map_err(io_err(&path))?;
    Ok(())
}

fn resolve_weights(arg: WeightsArg, norm: &NormalizedPanel) -> Result<WeightVector, CliError> {
    Ok(match arg {
        WeightsArg::Equal => WeightVector::EQUAL,
        WeightsArg::Pca => derive_pca_weights(norm)?,
        WeightsArg::Custom(raw) => WeightVector::from_components(raw)?,
    })
}

fn input_digests(input: &Path) -> Result<Vec<FileDigest>, CliError> {
    let mut out = Vec::new();
    for kind in [
        DatasetKind::Lsci,
        DatasetKind::Lsbci,
        DatasetKind::Plsci,
        DatasetKind::Classification,
        DatasetKind::External,
    ] {
        let path = input.join(kind.file_name());
        if path.exists() {
            out.push(digest_file(&path).map_err(io_err(&path))?);
        }
    }
    Ok(out)
}

fn write_build(
    recorder: &mut Recorder,
    bundle: &DataBundle,
    index: &IndexPanel,
    ranking: &CountryRanking,
) -> Result<(), CliError> {
    recorder.stage("build");
    let out_err = |e| CliError::Io {
        path: "index_panel.csv".into(),
        source: e,
    };
    recorder
        .write("index_panel.csv", &report::index_panel_csv(index))
        .map_err(out_err)?;
    recorder
        .write(
            "country_ranking.csv",
            &report::country_ranking_csv(ranking, bundle.classifications()),
        )
        .map_err(|e| CliError::Io {
            path: "country_ranking.csv".into(),
            source: e,
        })?;
    Ok(())
}

fn write_summary(
    recorder: &mut Recorder,
    bundle: &DataBundle,
    index: &IndexPanel,
    ranking: &CountryRanking,
) -> Result<(), CliError> {
    recorder.stage("summary");
    let summary = analysis::dimension_summary(index)?;
    write_artifact(
        recorder,
        "descriptive_stats.csv",
        report::descriptive_stats_csv(&summary),
    )?;
    write_artifact(
        recorder,
        "dimension_correlations.csv",
        report::dimension_correlations_csv(&summary),
    )?;
    write_artifact(
        recorder,
        "pca_summary.json",
        serde_json::to_string_pretty(&summary)?,
    )?;

    let groups =
        analysis::group_statistics(index, bundle.classifications(), Weighting::Observations);
    write_artifact(
        recorder,
        "group_statistics.csv",
        report::group_statistics_csv(&groups),
    )?;
    write_artifact(
        recorder,
        "group_statistics.json",
        serde_json::to_string_pretty(&groups)?,
    )?;

    let trend = analysis::temporal_report(index, bundle.classifications())?;
    write_artifact(
        recorder,
        "annual_means.csv",
        report::annual_means_csv(&trend),
    )?;
    write_artifact(
        recorder,
        "dimension_trends.csv",
        report::dimension_trends_csv(&trend),
    )?;
    write_artifact(
        recorder,
        "rank_stability.csv",
        report::rank_stability_csv(&trend),
    )?;
    write_artifact(recorder, "volatility.csv", report::volatility_csv(&trend))?;
    write_artifact(
        recorder,
        "temporal.json",
        serde_json::to_string_pretty(&trend)?,
    )?;
    write_artifact(
        recorder,
        "appendix_scores.csv",
        report::appendix_scores_csv(ranking, &trend, bundle.classifications()),
    )?;
    Ok(())
}

fn write_robustness(
    recorder: &mut Recorder,
    bundle: &DataBundle,
    min_years: usize,
) -> Result<(), CliError> {
    recorder.stage("robustness");
    let suite = analysis::robustness_suite(bundle, min_years)?;
    write_artifact(recorder, "robustness.csv", report::robustness_csv(&suite))?;
    write_artifact(
        recorder,
        "robustness.json",
        serde_json::to_string_pretty(&suite)?,
    )?;
    Ok(())
}

fn write_montecarlo(
    recorder: &mut Recorder,
    bundle: &DataBundle,
    config: &McConfig,
) -> Result<(), CliError> {
    recorder.stage("montecarlo");
    let result = run_monte_carlo(bundle, config)?;
    let shares = decompose_variance(bundle, config)?;

    #[derive(serde::Serialize)]
    struct McSummary<'a> {
        config: &'a McConfig,
        n_sims: usize,
        mean_rho: f64,
        min_rho: f64,
        share_rho_gt_095: f64,
        share_rho_gt_099: f64,
        mean_ci_width: f64,
        median_ci_width: f64,
        max_ci_width: f64,
        variance_shares: &'a VarianceShares,
        rho: Vec<f64>,
    }
    let summary = McSummary {
        config,
        n_sims: result.n_sims,
        mean_rho: result.mean_rho,
        min_rho: result.min_rho,
        share_rho_gt_095: result.share_rho_gt_095,
        share_rho_gt_099: result.share_rho_gt_099,
        mean_ci_width: result.mean_ci_width,
        median_ci_width: result.median_ci_width,
        max_ci_width: result.max_ci_width,
        variance_shares: &shares,
        rho: result.sims.iter().map(|s| s.rho).collect(),
    };
    write_artifact(
        recorder,
        "montecarlo_summary.json",
        serde_json::to_string_pretty(&summary)?,
    )?;
    write_artifact(
        recorder,
        "montecarlo_ranks.csv",
        report::montecarlo_ranks_csv(&result),
    )?;
    write_artifact(
        recorder,
        "montecarlo_sims.csv",
        report::montecarlo_sims_csv(&result),
    )?;
    Ok(())
}

fn write_decompose(recorder: &mut Recorder, index: &IndexPanel, seed: u64) -> Result<(), CliError> {
    recorder.stage("decompose");
    let dominance = analysis::dominant_dimensions(index)?;
    write_artifact(
        recorder,
        "dominant_dimensions.csv",
        report::dominant_dimensions_csv(&dominance),
    )?;
    write_artifact(
        recorder,
        "dominance.json",
        serde_json::to_string_pretty(&dominance)?,
    )?;

    let clusters = analysis::cluster_profiles(index, 2..=6, seed)?;
    write_artifact(recorder, "clusters.csv", report::clusters_csv(&clusters))?;
    write_artifact(
        recorder,
        "cluster_summary.csv",
        report::cluster_summary_csv(&clusters),
    )?;
    write_artifact(
        recorder,
        "clusters.json",
        serde_json::to_string_pretty(&clusters)?,
    )?;
    Ok(())
}

fn write_validate(
    recorder: &mut Recorder,
    bundle: &DataBundle,
    index: &IndexPanel,
    tolerate_missing: bool,
) -> Result<(), CliError> {
    recorder.stage("validate");
    let convergent = analysis::convergent_validity(index, bundle.external())?;
    write_artifact(
        recorder,
        "convergent_validity.csv",
        report::convergent_validity_csv(&convergent),
    )?;
    write_artifact(
        recorder,
        "convergent_validity.json",
        serde_json::to_string_pretty(&convergent)?,
    )?;

    match analysis::run_regressions(index, bundle.external(), bundle.classifications()) {
        Ok(regressions) => {
            write_artifact(
                recorder,
                "regressions.csv",
                report::regressions_csv(&regressions),
            )?;
            write_artifact(
                recorder,
                "regressions.json",
                serde_json::to_string_pretty(&regressions)?,
            )?;
        }
        Err(err) if tolerate_missing => {
            let skipped: MaybeReport<()> = MaybeReport::Skipped {
                skipped: err.to_string(),
            };
            write_artifact(
                recorder,
                "regressions.json",
                serde_json::to_string_pretty(&skipped)?,
            )?;
        }
        Err(err) => return Err(err.into()),
    }
    Ok(())
}

fn write_events(
    recorder: &mut Recorder,
    bundle: &DataBundle,
    index: &IndexPanel,
) -> Result<(), CliError> {
    recorder.stage("events");
    let mut completed = Vec::new();
    let mut outcomes: Vec<MaybeReport<analysis::EventReport>> = Vec::new();
    for spec in analysis::predefined_events() {
        match analysis::event_study(index, bundle.external(), &spec) {
            Ok(report) => {
                completed.push(report.clone());
                outcomes.push(MaybeReport::Ready(report));
            }
            Err(err) => outcomes.push(MaybeReport::Skipped {
                skipped: format!("{}: {err}", spec.name),
            }),
        }
    }
    write_artifact(recorder, "events.csv", report::events_csv(&completed))?;
    write_artifact(
        recorder,
        "events.json",
        serde_json::to_string_pretty(&outcomes)?,
    )?;
    Ok(())
}

fn write_artifact(
    recorder: &mut Recorder,
    name: &'static str,
    contents: String,
) -> Result<(), CliError> {
    recorder.write(name, &contents).map_err(|e| CliError::Io {
        path: name.to_string(),
        source: e,
    })
}

/// `fixture` subcommand: write the five synthetic CSVs plus a manifest.
pub fn write_fixture(
    economies: usize,
    years: usize,
    seed: u64,
    output: &Path,
) -> Result<(), CliError> {
    std::fs::create_dir_all(output).map_err(io_err(output))?;
    let bundle = generate_fixture(FixtureConfig::new(economies, years, seed))?;
    let mut recorder = Recorder::new(output);
    recorder.stage("fixture");
    let files = [
        ("lsci.csv", ingest::lsci_to_csv(bundle.lsci())),
        ("lsbci.csv", ingest::lsbci_to_csv(bundle.lsbci())),
        ("plsci.csv", ingest::plsci_to_csv(bundle.plsci())),
        (
            "classifications.csv",
            ingest::classifications_to_csv(bundle.classifications()),
        ),
        ("external.csv", ingest::external_to_csv(bundle.external())),
    ];
    for (name, contents) in files {
        recorder.write(name, &contents).map_err(|e| CliError::Io {
            path: name.to_string(),
            source: e,
        })?;
    }
    recorder.stage("manifest");
    let (outputs, stages) = recorder.into_parts();

    #[derive(serde::Serialize)]
    struct FixtureEcho {
        economies: usize,
        years: usize,
        seed: u64,
        output: String,
    }
    let manifest = RunManifest {
        tool: "mcvi".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "fixture".to_string(),
        config: FixtureEcho {
            economies,
            years,
            seed,
            output: output.display().to_string(),
        },
        inputs: Vec::new(),
        row_counts: vec![
            ("lsci.csv".to_string(), bundle.lsci().rows().len()),
            ("lsbci.csv".to_string(), bundle.lsbci().rows().len()),
            ("plsci.csv".to_string(), bundle.plsci().rows().len()),
            (
                "classifications.csv".to_string(),
                bundle.classifications().rows().len(),
            ),
            ("external.csv".to_string(), bundle.external().rows().len()),
        ],
        outputs,
        stages,
    };
    let path = output.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?).map_err(io_err(&path))?;
    Ok(())
}
