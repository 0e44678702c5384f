//! Least-squares estimators for the panel analysis: pooled OLS with
//! cluster-robust (CR1) standard errors, the within (fixed-effects)
//! estimator, Swamy-Arora random effects, the Hausman specification test,
//! and a simple linear trend fit.

#![allow(clippy::needless_range_loop)]
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::matrix::Mat;
use super::pca::jacobi_eigen_symmetric;
use super::StatsError;

const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ModelKind {
    Pooled,
    FixedEffects,
    RandomEffects,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RegressionResult {
    pub model: ModelKind,
    /// Regressor names aligned with `coefficients`; `"const"` denotes the
    /// intercept where one is estimated.
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Reported standard errors: cluster-robust (CR1) for pooled and
    /// fixed-effects models, conventional for random effects.
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    /// Within-R² for fixed effects, transformed-scale R² for random effects.
    pub r_squared: f64,
    pub n_obs: usize,
    pub n_clusters: usize,
    pub dof: usize,
    /// Set when the Swamy-Arora between variance came out negative and was
    /// floored at zero.
    pub variance_floored: bool,
    #[serde(skip)]
    pub(crate) cov_conventional: Mat,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct HausmanResult {
    pub statistic: f64,
    pub p_value: f64,
    pub dof: usize,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TrendFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

struct Fit {
    beta: Vec<f64>,
    residuals: Vec<f64>,
    ssr: f64,
    xtx_inv: Mat,
}

/// Solve OLS via the normal equations; `x` is n x k row-major.
fn solve_ols(x: &Mat, y: &[f64]) -> Result<Fit, StatsError> {
    let n = x.rows();
    let k = x.cols();
    let mut xtx = Mat::zeros(k, k);
    let mut xty = vec![0.0; k];
    for i in 0..n {
        for a in 0..k {
            let xa = x.at(i, a);
            xty[a] += xa * y[i];
            for b in a..k {
                xtx.add_at(a, b, xa * x.at(i, b));
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            let v = xtx.at(b, a);
            xtx.set(a, b, v);
        }
    }
    let xtx_inv = xtx.inverse(PIVOT_TOL)?;
    let beta = xtx_inv.matvec(&xty);
    let mut residuals = vec![0.0; n];
    let mut ssr = 0.0;
    for i in 0..n {
        let mut fitted = 0.0;
        for a in 0..k {
            fitted += x.at(i, a) * beta[a];
        }
        let e = y[i] - fitted;
        residuals[i] = e;
        ssr += e * e;
    }
    Ok(Fit {
        beta,
        residuals,
        ssr,
        xtx_inv,
    })
}

/// CR1 sandwich: c * (X'X)^-1 [ sum_g (X_g'e_g)(X_g'e_g)' ] (X'X)^-1 with
/// c = G/(G-1) * (n-1)/(n-k_adj).
fn clustered_cov(
    x: &Mat,
    residuals: &[f64],
    xtx_inv: &Mat,
    clusters: &[usize],
    k_adj: usize,
) -> Mat {
    let n = x.rows();
    let k = x.cols();
    let n_groups = clusters.iter().copied().max().map_or(0, |m| m + 1);
    let mut scores = vec![vec![0.0; k]; n_groups];
    for i in 0..n {
        let g = clusters[i];
        for a in 0..k {
            scores[g][a] += x.at(i, a) * residuals[i];
        }
    }
    let mut meat = Mat::zeros(k, k);
    for s in &scores {
        for a in 0..k {
            for b in 0..k {
                meat.add_at(a, b, s[a] * s[b]);
            }
        }
    }
    let g = non_empty_groups(clusters, n_groups) as f64;
    let nf = n as f64;
    let kf = k_adj as f64;
    let c = (g / (g - 1.0)) * ((nf - 1.0) / (nf - kf));
    let mut cov = xtx_inv.matmul(&meat).matmul(xtx_inv);
    for a in 0..k {
        for b in 0..k {
            let v = cov.at(a, b) * c;
            cov.set(a, b, v);
        }
    }
    cov
}

fn non_empty_groups(clusters: &[usize], n_groups: usize) -> usize {
    let mut seen = vec![false; n_groups];
    for &c in clusters {
        seen[c] = true;
    }
    seen.iter().filter(|&&s| s).count()
}

fn scaled_cov(xtx_inv: &Mat, sigma2: f64) -> Mat {
    let k = xtx_inv.cols();
    let mut cov = Mat::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            cov.set(a, b, xtx_inv.at(a, b) * sigma2);
        }
    }
    cov
}

#[allow(clippy::too_many_arguments)]
fn finish(
    model: ModelKind,
    names: Vec<String>,
    beta: Vec<f64>,
    cov_reported: &Mat,
    cov_conventional: Mat,
    r_squared: f64,
    n_obs: usize,
    n_clusters: usize,
    dof: usize,
    variance_floored: bool,
) -> RegressionResult {
    let std_errors: Vec<f64> = (0..beta.len())
        .map(|a| cov_reported.at(a, a).max(0.0).sqrt())
        .collect();
    let t_stats = beta
        .iter()
        .zip(&std_errors)
        .map(|(&b, &se)| if se > 0.0 { b / se } else { f64::NAN })
        .collect();
    RegressionResult {
        model,
        names,
        coefficients: beta,
        std_errors,
        t_stats,
        r_squared,
        n_obs,
        n_clusters,
        dof,
        variance_floored,
        cov_conventional,
    }
}

/// Pooled OLS with an intercept and CR1 cluster-robust standard errors.
///
/// `slopes` are the named slope regressors; the intercept column is added
/// automatically and reported as `"const"`. `clusters` assigns every
/// observation to a cluster index.
pub fn ols_clustered(
    y: &[f64],
    slopes: &[(&str, &[f64])],
    clusters: &[usize],
) -> Result<RegressionResult, StatsError> {
    let n = y.len();
    let k = slopes.len() + 1;
    assert_eq!(
        clusters.len(),
        n,
        "cluster ids must cover every observation"
    );
    for (_, col) in slopes {
        assert_eq!(col.len(), n, "regressor length mismatch");
    }
    if n <= k {
        return Err(StatsError::InsufficientData {
            needed: k + 1,
            got: n,
        });
    }
    let n_clusters = non_empty_groups(
        clusters,
        clusters.iter().copied().max().map_or(0, |m| m + 1),
    );
    if n_clusters < 2 {
        return Err(StatsError::TooFewClusters);
    }

    let mut x = Mat::zeros(n, k);
    for i in 0..n {
        x.set(i, 0, 1.0);
        for (j, (_, col)) in slopes.iter().enumerate() {
            x.set(i, j + 1, col[i]);
        }
    }
    let fit = solve_ols(&x, y)?;

    let ybar = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|&v| (v - ybar) * (v - ybar)).sum();
    let r_squared = if sst > 0.0 { 1.0 - fit.ssr / sst } else { 1.0 };

    let dof = n - k;
    let cov_clustered = clustered_cov(&x, &fit.residuals, &fit.xtx_inv, clusters, k);
    let cov_conventional = scaled_cov(&fit.xtx_inv, fit.ssr / dof as f64);

    let mut names = vec!["const".to_string()];
    names.extend(slopes.iter().map(|(name, _)| name.to_string()));
    Ok(finish(
        ModelKind::Pooled,
        names,
        fit.beta,
        &cov_clustered,
        cov_conventional,
        r_squared,
        n,
        n_clusters,
        dof,
        false,
    ))
}

fn entity_groups(entities: &[usize]) -> Vec<Vec<usize>> {
    let n_entities = entities.iter().copied().max().map_or(0, |m| m + 1);
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n_entities];
    for (i, &e) in entities.iter().enumerate() {
        groups[e].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// Within (entity-demeaned) estimator with entity-clustered CR1 standard
/// errors. The reported R² is the within-R²; degrees of freedom subtract
/// both the slope count and the absorbed entity means.
pub fn fixed_effects(
    y: &[f64],
    slopes: &[(&str, &[f64])],
    entities: &[usize],
) -> Result<RegressionResult, StatsError> {
    let n = y.len();
    let k = slopes.len();
    assert!(k > 0, "fixed effects needs at least one regressor");
    assert_eq!(entities.len(), n, "entity ids must cover every observation");
    for (_, col) in slopes {
        assert_eq!(col.len(), n, "regressor length mismatch");
    }
    let groups = entity_groups(entities);
    let n_entities = groups.len();
    if n_entities < 2 {
        return Err(StatsError::TooFewClusters);
    }
    if n <= n_entities + k {
        return Err(StatsError::InsufficientData {
            needed: n_entities + k + 1,
            got: n,
        });
    }

    // demean y and X within entities
    let mut y_dm = y.to_vec();
    let mut x_dm: Vec<Vec<f64>> = slopes.iter().map(|(_, col)| col.to_vec()).collect();
    for group in &groups {
        let t = group.len() as f64;
        let ym: f64 = group.iter().map(|&i| y[i]).sum::<f64>() / t;
        for &i in group {
            y_dm[i] -= ym;
        }
        for (j, (_, col)) in slopes.iter().enumerate() {
            let xm: f64 = group.iter().map(|&i| col[i]).sum::<f64>() / t;
            for &i in group {
                x_dm[j][i] -= xm;
            }
        }
    }

    for (j, (name, col)) in slopes.iter().enumerate() {
        let scale: f64 = col.iter().map(|v| v * v).sum::<f64>().max(1.0);
        let within: f64 = x_dm[j].iter().map(|v| v * v).sum();
        if within <= 1e-12 * scale {
            return Err(StatsError::NoWithinVariation {
                name: name.to_string(),
            });
        }
    }

    let mut x = Mat::zeros(n, k);
    for i in 0..n {
        for j in 0..k {
            x.set(i, j, x_dm[j][i]);
        }
    }
    let fit = solve_ols(&x, &y_dm)?;

    let sst_within: f64 = y_dm.iter().map(|v| v * v).sum();
    let r_squared = if sst_within > 0.0 {
        1.0 - fit.ssr / sst_within
    } else {
        1.0
    };

    // dof subtracts the absorbed entity means
    let dof = n - n_entities - k;
    let sigma2 = fit.ssr / dof as f64;
    let cov_conventional = scaled_cov(&fit.xtx_inv, sigma2);

    // clusters are the entities; dense re-indexing for clustered_cov
    let mut remap = vec![usize::MAX; entities.iter().copied().max().unwrap() + 1];
    let mut next = 0;
    let clusters: Vec<usize> = entities
        .iter()
        .map(|&e| {
            if remap[e] == usize::MAX {
                remap[e] = next;
                next += 1;
            }
            remap[e]
        })
        .collect();
    let cov_clustered = clustered_cov(&x, &fit.residuals, &fit.xtx_inv, &clusters, k + n_entities);

    let names = slopes.iter().map(|(name, _)| name.to_string()).collect();
    Ok(finish(
        ModelKind::FixedEffects,
        names,
        fit.beta,
        &cov_clustered,
        cov_conventional,
        r_squared,
        n,
        n_entities,
        dof,
        false,
    ))
}

/// Swamy-Arora random effects.
///
/// Variance components: sigma2_e from the within residuals, sigma2_u from a
/// between regression on entity means with sigma2_u = max(0, sigma2_B -
/// sigma2_e / T_h) where T_h is the harmonic mean of entity lengths (floored
/// at zero and flagged). Quasi-demeaning uses entity-specific
/// theta_i = 1 - sqrt(sigma2_e / (T_i sigma2_u + sigma2_e)); the estimator is
/// OLS on the transformed data with conventional standard errors so the
/// result stays usable for the Hausman comparison.
pub fn random_effects(
    y: &[f64],
    slopes: &[(&str, &[f64])],
    entities: &[usize],
) -> Result<RegressionResult, StatsError> {
    let n = y.len();
    let k = slopes.len();
    assert!(k > 0, "random effects needs at least one regressor");
    let groups = entity_groups(entities);
    let n_entities = groups.len();
    if n_entities < 2 {
        return Err(StatsError::TooFewClusters);
    }
    if n_entities <= k + 1 {
        return Err(StatsError::InsufficientData {
            needed: k + 2,
            got: n_entities,
        });
    }

    // sigma2_e from the within estimator
    let within = fixed_effects(y, slopes, entities)?;
    let (ssr_within, sst_within) = {
        let mut y_dm = y.to_vec();
        let mut fitted = vec![0.0; n];
        for group in &groups {
            let t = group.len() as f64;
            let ym: f64 = group.iter().map(|&i| y[i]).sum::<f64>() / t;
            for &i in group {
                y_dm[i] -= ym;
            }
        }
        for (j, (_, col)) in slopes.iter().enumerate() {
            for group in &groups {
                let t = group.len() as f64;
                let xm: f64 = group.iter().map(|&i| col[i]).sum::<f64>() / t;
                for &i in group {
                    fitted[i] += within.coefficients[j] * (col[i] - xm);
                }
            }
        }
        let ssr: f64 = y_dm
            .iter()
            .zip(&fitted)
            .map(|(&yd, &f)| (yd - f) * (yd - f))
            .sum();
        let sst: f64 = y_dm.iter().map(|&v| v * v).sum();
        (ssr, sst)
    };
    // an exact within fit (up to rounding) leaves the idiosyncratic
    // variance indistinguishable from zero
    let sigma2_e = if ssr_within <= 1e-10 * sst_within {
        0.0
    } else {
        ssr_within / within.dof as f64
    };

    // between regression on entity means
    let mut by = Vec::with_capacity(n_entities);
    let mut bx: Vec<Vec<f64>> = vec![Vec::with_capacity(n_entities); k];
    for group in &groups {
        let t = group.len() as f64;
        by.push(group.iter().map(|&i| y[i]).sum::<f64>() / t);
        for (j, (_, col)) in slopes.iter().enumerate() {
            bx[j].push(group.iter().map(|&i| col[i]).sum::<f64>() / t);
        }
    }
    let mut xb = Mat::zeros(n_entities, k + 1);
    for i in 0..n_entities {
        xb.set(i, 0, 1.0);
        for j in 0..k {
            xb.set(i, j + 1, bx[j][i]);
        }
    }
    let between = solve_ols(&xb, &by)?;
    let sigma2_between = between.ssr / (n_entities - k - 1) as f64;

    let harmonic_t = n_entities as f64 / groups.iter().map(|g| 1.0 / g.len() as f64).sum::<f64>();
    let raw_sigma2_u = sigma2_between - sigma2_e / harmonic_t;
    let variance_floored = raw_sigma2_u < 0.0;
    let sigma2_u = raw_sigma2_u.max(0.0);

    // sigma2_e = 0 means the within fit is exact: theta = 1 everywhere and
    // the transformed intercept column vanishes, so it is dropped
    let with_intercept = sigma2_e > 0.0 || sigma2_u <= 0.0;
    let k_total = k + usize::from(with_intercept);

    // quasi-demeaned OLS
    let mut x = Mat::zeros(n, k_total);
    let mut y_star = vec![0.0; n];
    for group in &groups {
        let t = group.len() as f64;
        let theta = if sigma2_e <= 0.0 && sigma2_u <= 0.0 {
            0.0
        } else if sigma2_e <= 0.0 {
            1.0
        } else {
            1.0 - (sigma2_e / (t * sigma2_u + sigma2_e)).sqrt()
        };
        let ym: f64 = group.iter().map(|&i| y[i]).sum::<f64>() / t;
        for &i in group {
            y_star[i] = y[i] - theta * ym;
            if with_intercept {
                x.set(i, 0, 1.0 - theta);
            }
        }
        let offset = usize::from(with_intercept);
        for (j, (_, col)) in slopes.iter().enumerate() {
            let xm: f64 = group.iter().map(|&i| col[i]).sum::<f64>() / t;
            for &i in group {
                x.set(i, j + offset, col[i] - theta * xm);
            }
        }
    }
    let fit = solve_ols(&x, &y_star)?;

    let dof = n - k_total;
    let sigma2 = fit.ssr / dof as f64;
    let cov = scaled_cov(&fit.xtx_inv, sigma2);

    let ystar_mean = y_star.iter().sum::<f64>() / n as f64;
    let sst: f64 = y_star
        .iter()
        .map(|&v| (v - ystar_mean) * (v - ystar_mean))
        .sum();
    let r_squared = if sst > 0.0 { 1.0 - fit.ssr / sst } else { 1.0 };

    let mut names = Vec::with_capacity(k_total);
    if with_intercept {
        names.push("const".to_string());
    }
    names.extend(slopes.iter().map(|(name, _)| name.to_string()));
    Ok(finish(
        ModelKind::RandomEffects,
        names,
        fit.beta,
        &cov.clone(),
        cov,
        r_squared,
        n,
        n_entities,
        dof,
        variance_floored,
    ))
}

/// Hausman specification test over the slope coefficients common to both
/// results (the intercept is excluded).
///
/// H = d' (V_FE - V_RE)^+ d with the Moore-Penrose pseudo-inverse restricted
/// to the positive eigenvalues of the difference, which keeps H >= 0 when
/// the difference matrix is not positive definite. Conventional covariances
/// are used on both sides. Degrees of freedom equal the rank used.
pub fn hausman(fe: &RegressionResult, re: &RegressionResult) -> Result<HausmanResult, StatsError> {
    let common: Vec<(usize, usize)> = fe
        .names
        .iter()
        .enumerate()
        .filter(|(_, name)| name.as_str() != "const")
        .filter_map(|(i, name)| {
            re.names
                .iter()
                .position(|other| other == name)
                .map(|j| (i, j))
        })
        .collect();
    if common.is_empty() {
        return Err(StatsError::NoCommonRegressors);
    }
    let m = common.len();
    let mut d = vec![0.0; m];
    let mut diff = Mat::zeros(m, m);
    for (a, &(ia, ja)) in common.iter().enumerate() {
        d[a] = fe.coefficients[ia] - re.coefficients[ja];
        for (b, &(ib, jb)) in common.iter().enumerate() {
            diff.set(
                a,
                b,
                fe.cov_conventional.at(ia, ib) - re.cov_conventional.at(ja, jb),
            );
        }
    }
    // symmetrize against rounding before the eigendecomposition
    for a in 0..m {
        for b in (a + 1)..m {
            let v = 0.5 * (diff.at(a, b) + diff.at(b, a));
            diff.set(a, b, v);
            diff.set(b, a, v);
        }
    }
    let (eigenvalues, vectors) = jacobi_eigen_symmetric(&diff)?;
    let scale = eigenvalues.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let tol = 1e-10 * scale.max(1e-300);
    let mut statistic = 0.0;
    let mut rank = 0;
    for (lambda, q) in eigenvalues.iter().zip(&vectors) {
        if *lambda > tol {
            let proj: f64 = q.iter().zip(&d).map(|(qi, di)| qi * di).sum();
            statistic += proj * proj / lambda;
            rank += 1;
        }
    }
    let p_value = if rank == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(rank as f64).expect("positive dof");
        (1.0 - dist.cdf(statistic)).clamp(0.0, 1.0)
    };
    Ok(HausmanResult {
        statistic,
        p_value,
        dof: rank,
    })
}

/// Least-squares line through `(t, y)` pairs. R² is defined as 1 when the
/// series is fitted exactly (including the constant case).
pub fn linear_trend(series: &[(f64, f64)]) -> Result<TrendFit, StatsError> {
    if series.len() < 2 {
        return Err(StatsError::InsufficientData {
            needed: 2,
            got: series.len(),
        });
    }
    let n = series.len() as f64;
    let tm = series.iter().map(|(t, _)| t).sum::<f64>() / n;
    let ym = series.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut stt = 0.0;
    let mut sty = 0.0;
    for &(t, y) in series {
        stt += (t - tm) * (t - tm);
        sty += (t - tm) * (y - ym);
    }
    if stt == 0.0 {
        return Err(StatsError::DegenerateTime);
    }
    let slope = sty / stt;
    let intercept = ym - slope * tm;
    let mut ssr = 0.0;
    let mut sst = 0.0;
    for &(t, y) in series {
        let e = y - intercept - slope * t;
        ssr += e * e;
        sst += (y - ym) * (y - ym);
    }
    let r_squared = if sst > 0.0 { 1.0 - ssr / sst } else { 1.0 };
    Ok(TrendFit {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    /// Independent normal-equations solve used as the test oracle: builds
    /// X'X and X'y with plain loops and solves by unpivoted Gaussian
    /// elimination.
    fn oracle_solve(xcols: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let k = xcols.len();
        let n = y.len();
        let mut a = vec![vec![0.0; k + 1]; k];
        for r in 0..k {
            for c in 0..k {
                let mut s = 0.0;
                for i in 0..n {
                    s += xcols[r][i] * xcols[c][i];
                }
                a[r][c] = s;
            }
            let mut s = 0.0;
            for i in 0..n {
                s += xcols[r][i] * y[i];
            }
            a[r][k] = s;
        }
        for col in 0..k {
            let p = a[col][col];
            for c in col..=k {
                a[col][c] /= p;
            }
            for r in 0..k {
                if r == col {
                    continue;
                }
                let f = a[r][col];
                for c in col..=k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
        (0..k).map(|r| a[r][k]).collect()
    }

    #[test]
    fn exact_linear_data() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 2.0 * v).collect();
        let clusters: Vec<usize> = (0..10).map(|i| i % 3).collect();
        let res = ols_clustered(&y, &[("x", &x)], &clusters).unwrap();
        assert!((res.coefficients[0] - 1.0).abs() < 1e-10);
        assert!((res.coefficients[1] - 2.0).abs() < 1e-10);
        assert!((res.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_normal_equations_oracle() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..20 {
            let n = 30 + rng.next_below(40) as usize;
            let x1: Vec<f64> = (0..n).map(|_| rng.next_f64() * 4.0).collect();
            let x2: Vec<f64> = (0..n).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let y: Vec<f64> = (0..n)
                .map(|i| 0.5 + 1.5 * x1[i] - 0.7 * x2[i] + 0.3 * rng.normal())
                .collect();
            let clusters: Vec<usize> = (0..n).map(|i| i % 5).collect();
            let res = ols_clustered(&y, &[("x1", &x1), ("x2", &x2)], &clusters).unwrap();
            let ones = vec![1.0; n];
            let oracle = oracle_solve(&[ones, x1, x2], &y);
            for (a, b) in res.coefficients.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn residuals_orthogonal_to_regressors() {
        let mut rng = SplitMix64::new(2);
        let n = 60;
        let x1: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let y: Vec<f64> = (0..n).map(|i| 2.0 * x1[i] + rng.normal()).collect();
        let clusters: Vec<usize> = (0..n).map(|i| i % 4).collect();
        let res = ols_clustered(&y, &[("x", &x1)], &clusters).unwrap();
        let resid: Vec<f64> = (0..n)
            .map(|i| y[i] - res.coefficients[0] - res.coefficients[1] * x1[i])
            .collect();
        let dot0: f64 = resid.iter().sum();
        let dot1: f64 = resid.iter().zip(&x1).map(|(e, x)| e * x).sum();
        assert!(dot0.abs() < 1e-8);
        assert!(dot1.abs() < 1e-8);
    }

    #[test]
    fn singleton_clusters_match_hc1() {
        let mut rng = SplitMix64::new(3);
        let n = 40;
        let x1: Vec<f64> = (0..n).map(|_| rng.next_f64() * 3.0).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.8 * x1[i] + (1.0 + x1[i]) * 0.2 * rng.normal())
            .collect();
        let clusters: Vec<usize> = (0..n).collect();
        let res = ols_clustered(&y, &[("x", &x1)], &clusters).unwrap();

        // HC1 computed directly: n/(n-k) (X'X)^-1 [sum e_i^2 x_i x_i'] (X'X)^-1
        let k = 2;
        let ones = vec![1.0; n];
        let beta = oracle_solve(&[ones.clone(), x1.clone()], &y);
        let mut xtx = [[0.0; 2]; 2];
        for i in 0..n {
            let xi = [1.0, x1[i]];
            for a in 0..2 {
                for b in 0..2 {
                    xtx[a][b] += xi[a] * xi[b];
                }
            }
        }
        let det = xtx[0][0] * xtx[1][1] - xtx[0][1] * xtx[1][0];
        let inv = [
            [xtx[1][1] / det, -xtx[0][1] / det],
            [-xtx[1][0] / det, xtx[0][0] / det],
        ];
        let mut meat = [[0.0; 2]; 2];
        for i in 0..n {
            let e = y[i] - beta[0] - beta[1] * x1[i];
            let xi = [1.0, x1[i]];
            for a in 0..2 {
                for b in 0..2 {
                    meat[a][b] += e * e * xi[a] * xi[b];
                }
            }
        }
        let c = n as f64 / (n - k) as f64;
        let mut hc1 = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut s = 0.0;
                for p in 0..2 {
                    for q in 0..2 {
                        s += inv[a][p] * meat[p][q] * inv[q][b];
                    }
                }
                hc1[a][b] = c * s;
            }
        }
        for a in 0..2 {
            assert!(
                (res.std_errors[a] - hc1[a][a].sqrt()).abs() < 1e-8,
                "se {} vs hc1 {}",
                res.std_errors[a],
                hc1[a][a].sqrt()
            );
        }
    }

    #[test]
    fn too_few_clusters() {
        let y = vec![1.0, 2.0, 3.0, 4.0];
        let x = vec![0.0, 1.0, 2.0, 3.0];
        assert!(matches!(
            ols_clustered(&y, &[("x", &x)], &[0, 0, 0, 0]),
            Err(StatsError::TooFewClusters)
        ));
    }

    #[test]
    fn rank_deficient_design() {
        let y = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let x1 = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let x2: Vec<f64> = x1.iter().map(|v| 2.0 * v).collect();
        let clusters = vec![0, 0, 1, 1, 2, 2];
        assert!(matches!(
            ols_clustered(&y, &[("a", &x1), ("b", &x2)], &clusters),
            Err(StatsError::RankDeficient)
        ));
    }

    fn synthetic_panel(
        seed: u64,
        n_entities: usize,
        t_per: usize,
        effect_scale: f64,
        slope: f64,
        noise: f64,
        xcorr: f64,
    ) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
        let mut rng = SplitMix64::new(seed);
        let effects: Vec<f64> = (0..n_entities)
            .map(|_| effect_scale * rng.normal())
            .collect();
        let mut y = Vec::new();
        let mut x = Vec::new();
        let mut ids = Vec::new();
        for (e, &alpha) in effects.iter().enumerate() {
            for _ in 0..t_per {
                // xcorr > 0 ties x to the entity effect: drives pooled != FE
                let xv = xcorr * alpha + rng.next_f64();
                y.push(alpha + slope * xv + noise * rng.normal());
                x.push(xv);
                ids.push(e);
            }
        }
        (y, x, ids)
    }

    #[test]
    fn fe_recovers_slope_exactly_without_noise() {
        let (y, x, ids) = synthetic_panel(5, 8, 6, 3.0, 3.0, 0.0, 0.5);
        let res = fixed_effects(&y, &[("x", &x)], &ids).unwrap();
        assert!(
            (res.coefficients[0] - 3.0).abs() < 1e-10,
            "{}",
            res.coefficients[0]
        );
        assert!(res.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn fe_equals_dummy_variable_estimator() {
        // Frisch-Waugh-Lovell: within slope == OLS with entity dummies
        let (y, x, ids) = synthetic_panel(6, 6, 5, 2.0, 1.7, 0.4, 0.5);
        let res = fixed_effects(&y, &[("x", &x)], &ids).unwrap();

        let n = y.len();
        let n_entities = 6;
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for e in 0..n_entities {
            cols.push(
                (0..n)
                    .map(|i| if ids[i] == e { 1.0 } else { 0.0 })
                    .collect(),
            );
        }
        cols.push(x.clone());
        let oracle = oracle_solve(&cols, &y);
        assert!(
            (res.coefficients[0] - oracle[n_entities]).abs() < 1e-8,
            "{} vs {}",
            res.coefficients[0],
            oracle[n_entities]
        );
    }

    #[test]
    fn time_invariant_regressor_rejected() {
        let (y, _, ids) = synthetic_panel(7, 4, 5, 1.0, 1.0, 0.1, 0.5);
        let flag: Vec<f64> = ids.iter().map(|&e| if e < 2 { 1.0 } else { 0.0 }).collect();
        match fixed_effects(&y, &[("flag", &flag)], &ids) {
            Err(StatsError::NoWithinVariation { name }) => assert_eq!(name, "flag"),
            other => panic!("expected NoWithinVariation, got {other:?}"),
        }
    }

    #[test]
    fn re_without_entity_effects_matches_pooled() {
        let (y, x, ids) = synthetic_panel(8, 10, 8, 0.0, 2.0, 0.3, 0.0);
        let re = random_effects(&y, &[("x", &x)], &ids).unwrap();
        let clusters: Vec<usize> = ids.clone();
        let pooled = ols_clustered(&y, &[("x", &x)], &clusters).unwrap();
        assert!(
            (re.coefficients[1] - pooled.coefficients[1]).abs() < 0.05,
            "re {} pooled {}",
            re.coefficients[1],
            pooled.coefficients[1]
        );
    }

    #[test]
    fn re_approaches_fe_when_entity_variance_dominates() {
        let (y, x, ids) = synthetic_panel(9, 12, 8, 50.0, 2.0, 0.05, 0.0);
        let re = random_effects(&y, &[("x", &x)], &ids).unwrap();
        let fe = fixed_effects(&y, &[("x", &x)], &ids).unwrap();
        assert!(
            (re.coefficients[1] - fe.coefficients[0]).abs() < 0.02,
            "re {} fe {}",
            re.coefficients[1],
            fe.coefficients[0]
        );
    }

    #[test]
    fn re_lies_between_pooled_and_fe() {
        let (y, x, ids) = synthetic_panel(10, 10, 6, 2.0, 1.5, 0.2, 0.5);
        let fe = fixed_effects(&y, &[("x", &x)], &ids).unwrap();
        let re = random_effects(&y, &[("x", &x)], &ids).unwrap();
        let pooled = ols_clustered(&y, &[("x", &x)], &ids).unwrap();
        let lo = fe.coefficients[0].min(pooled.coefficients[1]) - 1e-9;
        let hi = fe.coefficients[0].max(pooled.coefficients[1]) + 1e-9;
        assert!(
            re.coefficients[1] >= lo && re.coefficients[1] <= hi,
            "re {} not in [{lo}, {hi}]",
            re.coefficients[1]
        );
    }

    #[test]
    fn hausman_identical_results_is_zero() {
        let (y, x, ids) = synthetic_panel(11, 8, 6, 2.0, 1.0, 0.3, 0.5);
        let fe = fixed_effects(&y, &[("x", &x)], &ids).unwrap();
        let h = hausman(&fe, &fe).unwrap();
        assert!(h.statistic.abs() < 1e-12);
        assert!((h.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hausman_detects_endogenous_effects() {
        // strong entity-regressor correlation: RE inconsistent, H large
        let (y, x, ids) = synthetic_panel(12, 50, 5, 1.5, 1.0, 0.8, 1.0);
        let fe = fixed_effects(&y, &[("x", &x)], &ids).unwrap();
        let re = random_effects(&y, &[("x", &x)], &ids).unwrap();
        let h = hausman(&fe, &re).unwrap();
        assert!(h.statistic > 10.0, "H = {}", h.statistic);
        assert!(h.p_value < 0.01, "p = {}", h.p_value);
        assert_eq!(h.dof, 1);
    }

    #[test]
    fn hausman_no_common_regressors() {
        let (y, x, ids) = synthetic_panel(13, 6, 5, 1.0, 1.0, 0.2, 0.5);
        let fe = fixed_effects(&y, &[("a", &x)], &ids).unwrap();
        let re = random_effects(&y, &[("b", &x)], &ids).unwrap();
        assert!(matches!(
            hausman(&fe, &re),
            Err(StatsError::NoCommonRegressors)
        ));
    }

    #[test]
    fn trend_exact_line() {
        let series: Vec<(f64, f64)> = (0..10).map(|t| (t as f64, 2.0 + 3.0 * t as f64)).collect();
        let fit = linear_trend(&series).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trend_constant_series() {
        let series: Vec<(f64, f64)> = (0..5).map(|t| (t as f64, 4.0)).collect();
        let fit = linear_trend(&series).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trend_degenerate_time() {
        let series = vec![(1.0, 2.0), (1.0, 3.0)];
        assert!(matches!(
            linear_trend(&series),
            Err(StatsError::DegenerateTime)
        ));
    }
}
