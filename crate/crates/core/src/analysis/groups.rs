//! Mean MCVI by country classification (SIDS/LDC/LLDC flags and regions).

use crate::index::IndexPanel;
use crate::ingest::{ClassificationTable, Region};
use crate::stats::sample_std;

/// Observation weighting matches the headline tables (country-year rows);
/// the country weighting averages per-country means instead and is exposed
/// for sensitivity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Weighting {
    Observations,
    Countries,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct GroupStats {
    pub group: String,
    /// Undefined when the group has no observations.
    pub mean: Option<f64>,
    pub std_dev: Option<f64>,
    pub n_obs: usize,
    pub n_countries: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PartitionStats {
    /// Partition name: "sids", "ldc", "lldc", or "region".
    pub partition: String,
    pub groups: Vec<GroupStats>,
    /// For two-group partitions: flagged-group mean minus complement mean,
    /// when both are defined.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct GroupReport {
    pub weighting: Weighting,
    pub partitions: Vec<PartitionStats>,
}

impl GroupReport {
    pub fn partition(&self, name: &str) -> Option<&PartitionStats> {
        self.partitions.iter().find(|p| p.partition == name)
    }
}

fn summarize(group: &str, values: &[f64], n_countries: usize) -> GroupStats {
    let mean = if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    };
    GroupStats {
        group: group.to_string(),
        mean,
        std_dev: sample_std(values),
        n_obs: values.len(),
        n_countries,
    }
}

/// Descriptive MCVI statistics per classification group.
///
/// Under [`Weighting::Observations`] each country-year row counts once
/// (`n_obs` sums to the panel size per partition); under
/// [`Weighting::Countries`] each country contributes its time-averaged
/// MCVI once.
pub fn group_statistics(
    index: &IndexPanel,
    cls: &ClassificationTable,
    weighting: Weighting,
) -> GroupReport {
    // values per country (used for both weightings and the country counts)
    let mut per_country: Vec<(&crate::ingest::EconomyId, Vec<f64>)> = Vec::new();
    for row in index.rows() {
        match per_country.last_mut() {
            Some((economy, values)) if *economy == &row.economy => values.push(row.mcvi),
            _ => per_country.push((&row.economy, vec![row.mcvi])),
        }
    }

    let value_of = |values: &[f64]| -> Vec<f64> {
        match weighting {
            Weighting::Observations => values.to_vec(),
            Weighting::Countries => vec![values.iter().sum::<f64>() / values.len() as f64],
        }
    };

    let binary = |partition: &str,
                  flagged_label: &str,
                  complement_label: &str,
                  pick: &dyn Fn(&crate::ingest::ClassificationRow) -> bool|
     -> PartitionStats {
        let mut flagged = Vec::new();
        let mut rest = Vec::new();
        let mut flagged_countries = 0;
        let mut rest_countries = 0;
        for (economy, values) in &per_country {
            let is_flagged = cls.get(economy).map(pick).unwrap_or(false);
            let contrib = value_of(values);
            if is_flagged {
                flagged.extend(contrib);
                flagged_countries += 1;
            } else {
                rest.extend(contrib);
                rest_countries += 1;
            }
        }
        let f = summarize(flagged_label, &flagged, flagged_countries);
        let c = summarize(complement_label, &rest, rest_countries);
        let gap = match (f.mean, c.mean) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        };
        PartitionStats {
            partition: partition.to_string(),
            groups: vec![c, f],
            gap,
        }
    };

    let mut partitions = vec![
        binary("sids", "SIDS", "Non-SIDS", &|r| r.sids),
        binary("ldc", "LDC", "Non-LDC", &|r| r.ldc),
        binary("lldc", "LLDC", "Non-LLDC", &|r| r.lldc),
    ];

    let mut region_groups = Vec::new();
    for region in Region::ALL {
        let mut values = Vec::new();
        let mut countries = 0;
        for (economy, obs) in &per_country {
            if cls.get(economy).map(|r| r.region) == Some(region) {
                values.extend(value_of(obs));
                countries += 1;
            }
        }
        region_groups.push(summarize(region.as_str(), &values, countries));
    }
    partitions.push(PartitionStats {
        partition: "region".to_string(),
        groups: region_groups,
        gap: None,
    });

    GroupReport {
        weighting,
        partitions,
    }
}
