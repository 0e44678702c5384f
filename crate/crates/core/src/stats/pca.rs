//! Principal component analysis on the correlation or covariance matrix,
//! with a cyclic Jacobi eigensolver for symmetric matrices.

use super::matrix::Mat;
use super::StatsError;

const JACOBI_THRESHOLD: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcaMode {
    Correlation,
    Covariance,
}

#[derive(Debug, Clone)]
pub struct PcaResult {
    /// Loading columns, one per component, each of length d.
    pub loadings: Vec<Vec<f64>>,
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalue shares of the total (sums to 1).
    pub explained_shares: Vec<f64>,
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns (eigenvalues, eigenvector columns), both sorted by descending
/// eigenvalue. Sign convention: each eigenvector is flipped so that its
/// largest-magnitude entry (first occurrence) is positive. Converged when
/// the off-diagonal absolute sum falls below `1e-12`, capped at 100 sweeps.
pub fn jacobi_eigen_symmetric(matrix: &Mat) -> Result<(Vec<f64>, Vec<Vec<f64>>), StatsError> {
    let n = matrix.rows();
    assert_eq!(n, matrix.cols(), "eigendecomposition needs a square matrix");
    let mut a = matrix.clone();
    let mut v = Mat::identity(n);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a.at(p, q).abs();
                }
            }
            s
        };
        if off < JACOBI_THRESHOLD {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q);
                if apq.abs() < JACOBI_THRESHOLD / (n * n) as f64 {
                    continue;
                }
                let app = a.at(p, p);
                let aqq = a.at(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e150 {
                    // avoid overflow in theta^2; rotation tends to 1/(2 theta)
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged {
        // final check after the last sweep
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.at(p, q).abs();
            }
        }
        if off >= JACOBI_THRESHOLD {
            return Err(StatsError::NonConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eigvals: Vec<f64> = (0..n).map(|i| a.at(i, i)).collect();
    order.sort_by(|&i, &j| {
        eigvals[j]
            .partial_cmp(&eigvals[i])
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });

    let mut values = Vec::with_capacity(n);
    let mut columns = Vec::with_capacity(n);
    for &idx in &order {
        values.push(eigvals[idx]);
        let mut col: Vec<f64> = (0..n).map(|r| v.at(r, idx)).collect();
        let mut max_pos = 0;
        for (k, entry) in col.iter().enumerate() {
            if entry.abs() > col[max_pos].abs() {
                max_pos = k;
            }
        }
        if col[max_pos] < 0.0 {
            for entry in col.iter_mut() {
                *entry = -*entry;
            }
        }
        columns.push(col);
    }
    Ok((values, columns))
}

/// Eigendecomposition of a symmetric matrix given as rows; see
/// [`jacobi_eigen_symmetric`] for conventions.
pub fn eigen_symmetric(rows: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>), StatsError> {
    let n = rows.len();
    let mut m = Mat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n, "matrix must be square");
        for (j, &v) in row.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    jacobi_eigen_symmetric(&m)
}

/// PCA of an n x d data matrix (rows = observations).
pub fn pca(data: &[Vec<f64>], mode: PcaMode) -> Result<PcaResult, StatsError> {
    let n = data.len();
    let d = if n == 0 { 0 } else { data[0].len() };
    if d < 2 || n <= d {
        return Err(StatsError::InsufficientData {
            needed: d + 1,
            got: n,
        });
    }
    for row in data {
        assert_eq!(row.len(), d, "ragged data matrix");
    }

    let nf = n as f64;
    let means: Vec<f64> = (0..d)
        .map(|j| data.iter().map(|r| r[j]).sum::<f64>() / nf)
        .collect();
    let variances: Vec<f64> = (0..d)
        .map(|j| {
            data.iter()
                .map(|r| (r[j] - means[j]) * (r[j] - means[j]))
                .sum::<f64>()
                / (nf - 1.0)
        })
        .collect();

    let mut cov = Mat::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut s = 0.0;
            for row in data {
                s += (row[i] - means[i]) * (row[j] - means[j]);
            }
            let c = s / (nf - 1.0);
            cov.set(i, j, c);
            cov.set(j, i, c);
        }
    }

    let target = match mode {
        PcaMode::Covariance => cov,
        PcaMode::Correlation => {
            if variances.iter().any(|&v| v <= 0.0) {
                return Err(StatsError::DegenerateVariance);
            }
            let mut corr = Mat::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    corr.set(i, j, cov.at(i, j) / (variances[i] * variances[j]).sqrt());
                }
            }
            corr
        }
    };

    let (eigenvalues, loadings) = jacobi_eigen_symmetric(&target)?;
    // numerically tiny negative eigenvalues are clamped for the shares
    let clamped: Vec<f64> = eigenvalues.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if total <= 0.0 {
        return Err(StatsError::DegenerateVariance);
    }
    let explained_shares = clamped.iter().map(|&v| v / total).collect();
    Ok(PcaResult {
        loadings,
        eigenvalues,
        explained_shares,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(loadings: &[Vec<f64>], eigenvalues: &[f64]) -> Mat {
        let d = loadings[0].len();
        let mut m = Mat::zeros(d, d);
        for (col, &lambda) in loadings.iter().zip(eigenvalues) {
            for i in 0..d {
                for j in 0..d {
                    m.add_at(i, j, lambda * col[i] * col[j]);
                }
            }
        }
        m
    }

    #[test]
    fn perfectly_correlated_pair() {
        let mut rng = crate::rng::SplitMix64::new(4);
        let data: Vec<Vec<f64>> = (0..50)
            .map(|_| {
                let x = rng.next_f64();
                vec![x, 2.0 * x + 3.0]
            })
            .collect();
        let res = pca(&data, PcaMode::Correlation).unwrap();
        assert!((res.explained_shares[0] - 1.0).abs() < 1e-9);
        assert!(res.explained_shares[1].abs() < 1e-9);
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((res.loadings[0][0].abs() - inv_sqrt2).abs() < 1e-9);
        assert!((res.loadings[0][1].abs() - inv_sqrt2).abs() < 1e-9);
    }

    #[test]
    fn independent_columns_share_variance() {
        let mut rng = crate::rng::SplitMix64::new(8);
        let data: Vec<Vec<f64>> = (0..4000)
            .map(|_| vec![rng.next_f64(), rng.next_f64(), rng.next_f64()])
            .collect();
        let res = pca(&data, PcaMode::Correlation).unwrap();
        for share in &res.explained_shares {
            assert!((share - 1.0 / 3.0).abs() < 0.05, "share {share}");
        }
    }

    #[test]
    fn reconstruction_matches_correlation_matrix() {
        let mut rng = crate::rng::SplitMix64::new(21);
        let data: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                let base = rng.next_f64();
                vec![
                    base + 0.3 * rng.next_f64(),
                    base + 0.5 * rng.next_f64(),
                    rng.next_f64(),
                    0.5 * base + rng.next_f64(),
                ]
            })
            .collect();
        let res = pca(&data, PcaMode::Correlation).unwrap();
        let rebuilt = reconstruct(&res.loadings, &res.eigenvalues);
        // rebuild the correlation matrix directly
        let n = data.len() as f64;
        let d = 4;
        let means: Vec<f64> = (0..d)
            .map(|j| data.iter().map(|r| r[j]).sum::<f64>() / n)
            .collect();
        for i in 0..d {
            for j in 0..d {
                let mut sij = 0.0;
                let mut sii = 0.0;
                let mut sjj = 0.0;
                for row in &data {
                    sij += (row[i] - means[i]) * (row[j] - means[j]);
                    sii += (row[i] - means[i]).powi(2);
                    sjj += (row[j] - means[j]).powi(2);
                }
                let corr = sij / (sii * sjj).sqrt();
                assert!(
                    (rebuilt.at(i, j) - corr).abs() < 1e-8,
                    "({i},{j}): {} vs {corr}",
                    rebuilt.at(i, j)
                );
            }
        }
        let share_sum: f64 = res.explained_shares.iter().sum();
        assert!((share_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_loadings() {
        let mut rng = crate::rng::SplitMix64::new(33);
        let data: Vec<Vec<f64>> = (0..100)
            .map(|_| vec![rng.next_f64(), rng.next_f64(), rng.next_f64()])
            .collect();
        let res = pca(&data, PcaMode::Correlation).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let dot: f64 = (0..3)
                    .map(|k| res.loadings[a][k] * res.loadings[b][k])
                    .sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn constant_column_is_degenerate() {
        let data: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 5.0]).collect();
        assert!(matches!(
            pca(&data, PcaMode::Correlation),
            Err(StatsError::DegenerateVariance)
        ));
    }

    #[test]
    fn eigenvalues_descend() {
        let mut rng = crate::rng::SplitMix64::new(55);
        let data: Vec<Vec<f64>> = (0..80)
            .map(|_| {
                let x = rng.next_f64();
                vec![x, x + 0.1 * rng.next_f64(), rng.next_f64()]
            })
            .collect();
        let res = pca(&data, PcaMode::Correlation).unwrap();
        for w in res.eigenvalues.windows(2) {
            assert!(w[0] >= w[1] - 1e-12);
        }
    }
}
