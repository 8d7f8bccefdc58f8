//! Lloyd's K-Means with k-means++ initialization.
//!
//! Deterministic for a fixed seed. Empty clusters are repaired by moving
//! the point farthest from its centroid, so the result always has exactly
//! k nonempty clusters when k <= rows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sq_dist, ClusterLabeling, Label};
use crate::encoding::FeatureMatrix;
use crate::error::{CoreError, Result};

const MAX_ITER: usize = 300;
const SHIFT_TOL: f64 = 1e-4;

/// Full K-Means outcome, exposed for the objective-monotonicity checks.
#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub labeling: ClusterLabeling,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squared distances after each iteration.
    pub sse_history: Vec<f64>,
    pub iterations: usize,
}

pub fn kmeans(matrix: &FeatureMatrix, k: usize, seed: u64) -> Result<ClusterLabeling> {
    kmeans_fit(matrix, k, seed).map(|fit| fit.labeling)
}

pub fn kmeans_fit(matrix: &FeatureMatrix, k: usize, seed: u64) -> Result<KMeansFit> {
    if k == 0 {
        return Err(CoreError::InvalidClusteringParams("k must be >= 1".into()));
    }
    let n = matrix.n_rows();
    if k > n {
        return Err(CoreError::KExceedsRows { k, rows: n });
    }
    let points = matrix.to_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(&points, k, &mut rng);

    let mut labels = vec![0usize; n];
    let mut sse_history = Vec::new();
    let mut iterations = 0;
    for _ in 0..MAX_ITER {
        iterations += 1;
        assign(&points, &centroids, &mut labels);
        repair_empty_clusters(&points, &mut centroids, &mut labels);
        let shift = update_centroids(&points, &labels, &mut centroids);
        sse_history.push(sse(&points, &centroids, &labels));
        if shift < SHIFT_TOL {
            break;
        }
    }

    Ok(KMeansFit {
        labeling: ClusterLabeling::new(labels.into_iter().map(Label::Cluster).collect()),
        centroids,
        sse_history,
        iterations,
    })
}

/// k-means++ seeding: first center uniform, then D^2 sampling.
fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = Vec::with_capacity(k);
    let first = rng.gen_range(0..points.len());
    centroids.push(points[first].clone());
    let mut d2: Vec<f64> = points
        .iter()
        .map(|p| sq_dist(p, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = points.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            // All remaining mass at distance zero (duplicate-heavy input):
            // fall back to a uniform draw.
            rng.gen_range(0..points.len())
        };
        centroids.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            let d = sq_dist(p, &points[next]);
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centroids
}

fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>], labels: &mut [usize]) {
    for (i, p) in points.iter().enumerate() {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (c, centroid) in centroids.iter().enumerate() {
            let d = sq_dist(p, centroid);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        labels[i] = best;
    }
}

/// Moves the point farthest from its centroid into each empty cluster.
/// Points are only taken from clusters with more than one member, so the
/// repair never creates a new empty cluster.
fn repair_empty_clusters(points: &[Vec<f64>], centroids: &mut [Vec<f64>], labels: &mut [usize]) {
    let k = centroids.len();
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut donor: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            if sizes[labels[i]] <= 1 {
                continue;
            }
            let d = sq_dist(p, &centroids[labels[i]]);
            let better = match donor {
                None => true,
                Some((_, best)) => d > best,
            };
            if better {
                donor = Some((i, d));
            }
        }
        if let Some((i, _)) = donor {
            sizes[labels[i]] -= 1;
            labels[i] = empty;
            sizes[empty] = 1;
            centroids[empty] = points[i].clone();
        }
    }
}

/// Recomputes centroids; returns the largest squared shift.
fn update_centroids(points: &[Vec<f64>], labels: &[usize], centroids: &mut [Vec<f64>]) -> f64 {
    let k = centroids.len();
    let dim = centroids.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0f64; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    let mut max_shift = 0.0f64;
    for c in 0..k {
        if counts[c] == 0 {
            continue;
        }
        let new: Vec<f64> = sums[c].iter().map(|s| s / counts[c] as f64).collect();
        let shift = sq_dist(&new, &centroids[c]);
        if shift > max_shift {
            max_shift = shift;
        }
        centroids[c] = new;
    }
    max_shift
}

fn sse(points: &[Vec<f64>], centroids: &[Vec<f64>], labels: &[usize]) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(p, &l)| sq_dist(p, &centroids[l]))
        .sum()
}
