//! Pearson and Spearman correlation with two-sided p-values from the
//! classical t approximation.

use statrs::distribution::{ContinuousCDF, StudentsT};

use super::ranks::average_ranks;
use super::StatsError;

#[derive(Debug, Clone, Copy)]
pub struct Correlation {
    pub coefficient: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Product-moment correlation of paired samples.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation, StatsError> {
    assert_eq!(x.len(), y.len(), "paired samples must have equal length");
    let n = x.len();
    if n < 3 {
        return Err(StatsError::InsufficientData { needed: 3, got: n });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    Ok(Correlation {
        coefficient: r,
        p_value: t_test_p(r, n),
        n,
    })
}

/// Spearman rank correlation: Pearson on average-rank transforms.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Correlation, StatsError> {
    assert_eq!(x.len(), y.len(), "paired samples must have equal length");
    if x.len() < 3 {
        return Err(StatsError::InsufficientData {
            needed: 3,
            got: x.len(),
        });
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Spearman after pairwise deletion of missing observations.
pub fn spearman_pairwise(x: &[Option<f64>], y: &[Option<f64>]) -> Result<Correlation, StatsError> {
    let (xs, ys) = complete_pairs(x, y);
    spearman(&xs, &ys)
}

/// Pearson after pairwise deletion of missing observations.
pub fn pearson_pairwise(x: &[Option<f64>], y: &[Option<f64>]) -> Result<Correlation, StatsError> {
    let (xs, ys) = complete_pairs(x, y);
    pearson(&xs, &ys)
}

fn complete_pairs(x: &[Option<f64>], y: &[Option<f64>]) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(x.len(), y.len(), "paired samples must have equal length");
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (a, b) in x.iter().zip(y) {
        if let (Some(a), Some(b)) = (a, b) {
            xs.push(*a);
            ys.push(*b);
        }
    }
    (xs, ys)
}

/// Two-sided p from t = r sqrt((n-2)/(1-r^2)) with n-2 dof.
fn t_test_p(r: f64, n: usize) -> f64 {
    let dof = (n - 2) as f64;
    if (1.0 - r * r) <= 0.0 {
        return 0.0;
    }
    let t = r * (dof / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, dof).expect("dof >= 1");
    (2.0 * dist.cdf(-t.abs())).clamp(0.0, 1.0)
}
