//! Mann-Whitney U test with average-rank ties and a tie-corrected normal
//! approximation for the two-sided p-value.

use statrs::distribution::{ContinuousCDF, Normal};

use super::ranks::{average_ranks, tie_group_sizes};
use super::StatsError;

#[derive(Debug, Clone, Copy)]
pub struct MannWhitney {
    /// U statistic of the first sample.
    pub u: f64,
    /// Two-sided p-value (normal approximation, tie and continuity
    /// corrected). 1.0 when the pooled sample has no variation.
    pub p_value: f64,
}

pub fn mann_whitney(a: &[f64], b: &[f64]) -> Result<MannWhitney, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let na = a.len() as f64;
    let nb = b.len() as f64;
    let pooled: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    let ranks = average_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..a.len()].iter().sum();
    let u = rank_sum_a - na * (na + 1.0) / 2.0;

    let n = na + nb;
    let mean_u = na * nb / 2.0;
    let tie_term: f64 = tie_group_sizes(&pooled)
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let var_u = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var_u <= 0.0 {
        // all observations tied: no evidence either way
        return Ok(MannWhitney { u, p_value: 1.0 });
    }
    // continuity correction toward the mean
    let diff = u - mean_u;
    let z = (diff.abs() - 0.5).max(0.0) / var_u.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let p = (2.0 * (1.0 - normal.cdf(z))).clamp(0.0, 1.0);
    Ok(MannWhitney { u, p_value: p })
}
