//! Seeded k-means (k-means++ initialization, Lloyd iterations) and the
//! silhouette coefficient.

use crate::rng::SplitMix64;

use super::StatsError;

#[derive(Debug, Clone)]
pub struct ClusteringResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub silhouette: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct KmeansConfig {
    pub k: usize,
    pub seed: u64,
    pub n_restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl KmeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            n_restarts: 10,
            max_iter: 300,
            tol: 1e-9,
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// k-means++ seeding: first centroid uniform, then each next centroid drawn
/// with probability proportional to the squared distance to the nearest
/// chosen centroid.
fn kmeans_pp_init(data: &[Vec<f64>], k: usize, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    let n = data.len();
    let mut centroids = Vec::with_capacity(k);
    centroids.push(data[rng.next_below(n as u64) as usize].clone());
    let mut d2: Vec<f64> = data.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let choice = if total <= 0.0 {
            // all points coincide with a centroid; fall back to uniform
            rng.next_below(n as u64) as usize
        } else {
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut idx = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if target < acc {
                    idx = i;
                    break;
                }
            }
            idx
        };
        centroids.push(data[choice].clone());
        for (i, p) in data.iter().enumerate() {
            let d = sq_dist(p, centroids.last().unwrap());
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centroids
}

fn assign(data: &[Vec<f64>], centroids: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let mut assignments = Vec::with_capacity(data.len());
    let mut inertia = 0.0;
    for p in data {
        let mut best = 0;
        let mut best_d = sq_dist(p, &centroids[0]);
        for (c, centroid) in centroids.iter().enumerate().skip(1) {
            let d = sq_dist(p, centroid);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        assignments.push(best);
        inertia += best_d;
    }
    (assignments, inertia)
}

fn lloyd(
    data: &[Vec<f64>],
    mut centroids: Vec<Vec<f64>>,
    max_iter: usize,
    tol: f64,
) -> (Vec<usize>, Vec<Vec<f64>>, f64) {
    let k = centroids.len();
    let dims = data[0].len();
    let mut assignments = vec![0; data.len()];
    for _ in 0..max_iter {
        let (next_assign, _) = assign(data, &centroids);
        assignments = next_assign;

        let mut sums = vec![vec![0.0; dims]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in data.iter().zip(&assignments) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(p) {
                *s += v;
            }
        }

        // repair empty clusters: move the point farthest from its centroid
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let mut far_idx = 0;
            let mut far_d = -1.0;
            for (i, p) in data.iter().enumerate() {
                if counts[assignments[i]] <= 1 {
                    continue; // donor cluster must stay non-empty
                }
                let d = sq_dist(p, &centroids[assignments[i]]);
                if d > far_d {
                    far_d = d;
                    far_idx = i;
                }
            }
            let old = assignments[far_idx];
            counts[old] -= 1;
            for (s, v) in sums[old].iter_mut().zip(&data[far_idx]) {
                *s -= v;
            }
            assignments[far_idx] = c;
            counts[c] = 1;
            for (s, v) in sums[c].iter_mut().zip(&data[far_idx]) {
                *s += v;
            }
        }

        let mut shift: f64 = 0.0;
        let mut next_centroids = Vec::with_capacity(k);
        for c in 0..k {
            let centroid: Vec<f64> = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            shift = shift.max(sq_dist(&centroid, &centroids[c]).sqrt());
            next_centroids.push(centroid);
        }
        centroids = next_centroids;
        if shift < tol {
            break;
        }
    }
    let (final_assign, inertia) = assign(data, &centroids);
    // a final empty-cluster repair is not needed: assignment follows the
    // repaired centroids, and ties go to the lowest cluster index
    (final_assign, centroids, inertia)
}

/// Seeded k-means, best of `n_restarts` by inertia.
pub fn kmeans(data: &[Vec<f64>], config: KmeansConfig) -> Result<ClusteringResult, StatsError> {
    let n = data.len();
    if config.k == 0 || config.k > n {
        return Err(StatsError::InvalidK { k: config.k, n });
    }
    for p in data {
        assert_eq!(p.len(), data[0].len(), "ragged data");
        assert!(p.iter().all(|v| v.is_finite()), "data must be finite");
    }

    let mut best: Option<(Vec<usize>, Vec<Vec<f64>>, f64)> = None;
    for restart in 0..config.n_restarts.max(1) {
        let mut rng = crate::rng::stream(config.seed, restart as u64);
        let init = kmeans_pp_init(data, config.k, &mut rng);
        let (assignments, centroids, inertia) = lloyd(data, init, config.max_iter, config.tol);
        let better = match &best {
            None => true,
            Some((_, _, prev)) => inertia < *prev,
        };
        if better {
            best = Some((assignments, centroids, inertia));
        }
    }
    let (assignments, centroids, inertia) = best.expect("at least one restart");
    let silhouette = if config.k >= 2 {
        silhouette_with_ids(data, &assignments).unwrap_or(0.0)
    } else {
        0.0
    };
    Ok(ClusteringResult {
        assignments,
        centroids,
        inertia,
        silhouette,
    })
}

/// Mean silhouette over points: (b - a) / max(a, b) with Euclidean
/// distances; points in singleton clusters contribute 0, as does the 0/0
/// case of coincident points.
pub fn silhouette(data: &[Vec<f64>], assignments: &[usize]) -> Result<f64, StatsError> {
    silhouette_with_ids(data, assignments)
}

fn silhouette_with_ids(data: &[Vec<f64>], assignments: &[usize]) -> Result<f64, StatsError> {
    assert_eq!(data.len(), assignments.len(), "assignment length mismatch");
    let n = data.len();
    let k = assignments.iter().copied().max().map_or(0, |m| m + 1);
    let mut counts = vec![0usize; k];
    for &a in assignments {
        counts[a] += 1;
    }
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(StatsError::SingleCluster);
    }

    let mut total = 0.0;
    for i in 0..n {
        let own = assignments[i];
        if counts[own] <= 1 {
            continue; // singleton contributes 0
        }
        let mut sums = vec![0.0; k];
        for j in 0..n {
            if i == j {
                continue;
            }
            sums[assignments[j]] += sq_dist(&data[i], &data[j]).sqrt();
        }
        let a = sums[own] / (counts[own] - 1) as f64;
        let mut b = f64::INFINITY;
        for c in 0..k {
            if c == own || counts[c] == 0 {
                continue;
            }
            b = b.min(sums[c] / counts[c] as f64);
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
        // 0/0 (all points coincident) contributes 0
    }
    Ok(total / n as f64)
}
