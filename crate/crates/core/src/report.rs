//! Figure-ready CSV renderings of the analysis reports.
//!
//! Floats are written with six significant decimal digits so golden files
//! stay stable; integers (years, ranks, counts) are written exactly. The
//! JSON side of each report comes straight from its `Serialize`
//! implementation at full precision.

use crate::analysis::{
    ClusterReport, ConvergentReport, DominanceReport, EventReport, GroupReport, RegressionReport,
    RobustnessReport, SummaryReport, TrendReport,
};
use crate::index::{CountryRanking, IndexPanel};
use crate::ingest::ClassificationTable;
use crate::stats::RegressionResult;
use crate::uncertainty::McResult;

/// Render a float with six significant decimal digits.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn opt_sig6(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn index_panel_csv(index: &IndexPanel) -> String {
    let mut out = String::from("economy,year,d1,d2,d3,mcvi\n");
    for row in index.rows() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.economy,
            row.year,
            sig6(row.d1),
            sig6(row.d2),
            sig6(row.d3),
            sig6(row.mcvi)
        ));
    }
    out
}

pub fn country_ranking_csv(ranking: &CountryRanking, cls: &ClassificationTable) -> String {
    let mut out = String::from(
        "rank,economy,name,mean_mcvi,mean_d1,mean_d2,mean_d3,years_covered,low_coverage\n",
    );
    for entry in ranking.entries() {
        let name = cls
            .get(&entry.economy)
            .map(|c| c.name.as_str())
            .unwrap_or("");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            entry.rank,
            entry.economy,
            name,
            sig6(entry.mean_mcvi),
            sig6(entry.mean_d1),
            sig6(entry.mean_d2),
            sig6(entry.mean_d3),
            entry.years_covered,
            flag(entry.low_coverage)
        ));
    }
    out
}

/// Appendix-style full score table: per-country means, dimensions, and
/// volatility.
pub fn appendix_scores_csv(
    ranking: &CountryRanking,
    trend: &TrendReport,
    cls: &ClassificationTable,
) -> String {
    let mut out = String::from(
        "rank,economy,name,mean_mcvi,mean_d1,mean_d2,mean_d3,volatility,years_covered\n",
    );
    for entry in ranking.entries() {
        let name = cls
            .get(&entry.economy)
            .map(|c| c.name.as_str())
            .unwrap_or("");
        let volatility = trend
            .volatility
            .iter()
            .find(|v| v.economy == entry.economy)
            .and_then(|v| v.std_dev);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            entry.rank,
            entry.economy,
            name,
            sig6(entry.mean_mcvi),
            sig6(entry.mean_d1),
            sig6(entry.mean_d2),
            sig6(entry.mean_d3),
            opt_sig6(volatility),
            entry.years_covered
        ));
    }
    out
}

pub fn descriptive_stats_csv(summary: &SummaryReport) -> String {
    let mut out = String::from("variable,min,max,mean,std_dev\n");
    for v in &summary.variables {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            v.variable,
            sig6(v.min),
            sig6(v.max),
            sig6(v.mean),
            sig6(v.std_dev)
        ));
    }
    out
}

pub fn dimension_correlations_csv(summary: &SummaryReport) -> String {
    let mut out = String::from("pair,spearman_rho,pearson_r,n\n");
    for c in &summary.correlations {
        out.push_str(&format!(
            "{},{},{},{}\n",
            c.pair,
            sig6(c.spearman_rho),
            sig6(c.pearson_r),
            c.n
        ));
    }
    out
}

pub fn group_statistics_csv(report: &GroupReport) -> String {
    let mut out = String::from("partition,group,mean,std_dev,n_obs,n_countries,gap\n");
    for partition in &report.partitions {
        for group in &partition.groups {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                partition.partition,
                group.group,
                opt_sig6(group.mean),
                opt_sig6(group.std_dev),
                group.n_obs,
                group.n_countries,
                opt_sig6(partition.gap)
            ));
        }
    }
    out
}

pub fn annual_means_csv(trend: &TrendReport) -> String {
    let mut out = String::from("year,mean,n,sids_mean,non_sids_mean,gap\n");
    for a in &trend.annual {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            a.year,
            sig6(a.mean),
            a.n,
            opt_sig6(a.sids_mean),
            opt_sig6(a.non_sids_mean),
            opt_sig6(a.gap)
        ));
    }
    out
}

pub fn dimension_trends_csv(trend: &TrendReport) -> String {
    let mut out = String::from("year,mean_d1,mean_d2,mean_d3\n");
    for d in &trend.dimension_annual {
        out.push_str(&format!(
            "{},{},{},{}\n",
            d.year,
            sig6(d.mean_d1),
            sig6(d.mean_d2),
            sig6(d.mean_d3)
        ));
    }
    out
}

pub fn rank_stability_csv(trend: &TrendReport) -> String {
    let mut out = String::from("year_a,year_b,rho,n\n");
    for pair in &trend.consecutive_spearman {
        out.push_str(&format!(
            "{},{},{},{}\n",
            pair.year_a,
            pair.year_b,
            opt_sig6(pair.rho),
            pair.n
        ));
    }
    out
}

pub fn volatility_csv(trend: &TrendReport) -> String {
    let mut out = String::from("economy,std_dev,years_covered,ranked\n");
    for v in &trend.volatility {
        out.push_str(&format!(
            "{},{},{},{}\n",
            v.economy,
            opt_sig6(v.std_dev),
            v.years_covered,
            flag(v.ranked)
        ));
    }
    out
}

pub fn dominant_dimensions_csv(report: &DominanceReport) -> String {
    let mut out = String::from("economy,mean_d1,mean_d2,mean_d3,dominant,tied\n");
    for c in &report.countries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.economy,
            sig6(c.mean_d1),
            sig6(c.mean_d2),
            sig6(c.mean_d3),
            c.dominant.as_str(),
            flag(c.tied)
        ));
    }
    out
}

pub fn clusters_csv(report: &ClusterReport) -> String {
    let mut out = String::from("economy,cluster\n");
    for (economy, cluster) in &report.assignments {
        out.push_str(&format!("{economy},{cluster}\n"));
    }
    out
}

pub fn cluster_summary_csv(report: &ClusterReport) -> String {
    let mut out = String::from("cluster,size,mean_mcvi,mean_d1,mean_d2,mean_d3\n");
    for c in &report.clusters {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.cluster,
            c.size,
            sig6(c.mean_mcvi),
            sig6(c.mean_d1),
            sig6(c.mean_d2),
            sig6(c.mean_d3)
        ));
    }
    out
}

pub fn robustness_csv(report: &RobustnessReport) -> String {
    let mut out = String::from("specification,rho,w1,w2,w3,method\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.specification,
            sig6(row.rho),
            sig6(row.weights[0]),
            sig6(row.weights[1]),
            sig6(row.weights[2]),
            row.method.as_str()
        ));
    }
    out
}

pub fn montecarlo_ranks_csv(result: &McResult) -> String {
    let mut out = String::from("economy,baseline_rank,q025,q500,q975,ci_width\n");
    for c in &result.countries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.economy,
            c.baseline_rank,
            sig6(c.q025),
            sig6(c.q500),
            sig6(c.q975),
            sig6(c.ci_width)
        ));
    }
    out
}

pub fn montecarlo_sims_csv(result: &McResult) -> String {
    let mut out = String::from("sim,rho,w1,w2,w3,within_year\n");
    for s in &result.sims {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.index,
            sig6(s.rho),
            sig6(s.weights[0]),
            sig6(s.weights[1]),
            sig6(s.weights[2]),
            flag(s.within_year)
        ));
    }
    out
}

pub fn convergent_validity_csv(report: &ConvergentReport) -> String {
    let mut out = String::from("indicator,year,rho,p_value,n,skipped\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.indicator,
            row.year,
            opt_sig6(row.rho),
            opt_sig6(row.p_value),
            row.n,
            flag(row.skipped)
        ));
    }
    out
}

pub fn regressions_csv(report: &RegressionReport) -> String {
    let mut out =
        String::from("model,regressor,coefficient,std_error,t_stat,r_squared,n_obs,n_clusters\n");
    let mut push = |label: &str, result: &RegressionResult| {
        for (i, name) in result.names.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                label,
                name,
                sig6(result.coefficients[i]),
                sig6(result.std_errors[i]),
                sig6(result.t_stats[i]),
                sig6(result.r_squared),
                result.n_obs,
                result.n_clusters
            ));
        }
    };
    push("model1", &report.model1);
    push("model2", &report.model2);
    push("model3", &report.model3);
    push("fixed_effects", &report.fixed_effects);
    push("random_effects", &report.random_effects);
    out.push_str(&format!(
        "hausman,,{},{},,,{},\n",
        sig6(report.hausman.statistic),
        sig6(report.hausman.p_value),
        report.hausman.dof
    ));
    out
}

pub fn events_csv(reports: &[EventReport]) -> String {
    let mut out = String::from(
        "event,pre_year,crisis_year,n,q1_mean_delta,q2_mean_delta,q3_mean_delta,q4_mean_delta,\
         spearman_rho,spearman_p,mann_whitney_u,mann_whitney_p\n",
    );
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.name,
            r.pre_year,
            r.crisis_year,
            r.n,
            sig6(r.quartile_mean_delta[0]),
            sig6(r.quartile_mean_delta[1]),
            sig6(r.quartile_mean_delta[2]),
            sig6(r.quartile_mean_delta[3]),
            opt_sig6(r.spearman_rho),
            opt_sig6(r.spearman_p),
            sig6(r.mann_whitney_u),
            sig6(r.mann_whitney_p)
        ));
    }
    out
}
