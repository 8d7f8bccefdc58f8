//! Density-based clustering (DBSCAN) with Euclidean distance.
//!
//! Neighborhoods include the point itself. Border points join the first
//! discovered core cluster that reaches them; unreachable points are noise.

use super::{sq_dist, ClusterLabeling, Label};
use crate::encoding::FeatureMatrix;
use crate::error::{CoreError, Result};

pub fn dbscan(matrix: &FeatureMatrix, eps: f64, min_pts: usize) -> Result<ClusterLabeling> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(CoreError::InvalidClusteringParams(format!(
            "eps must be > 0, got {eps}"
        )));
    }
    if min_pts == 0 {
        return Err(CoreError::InvalidClusteringParams(
            "min_pts must be >= 1".into(),
        ));
    }
    let points = matrix.to_points();
    let n = points.len();
    let eps2 = eps * eps;

    let neighborhoods: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| sq_dist(&points[i], &points[j]) <= eps2)
                .collect()
        })
        .collect();
    let core: Vec<bool> = neighborhoods.iter().map(|nb| nb.len() >= min_pts).collect();

    let mut labels = vec![Label::Noise; n];
    let mut visited = vec![false; n];
    let mut next_cluster = 0usize;
    for i in 0..n {
        if visited[i] || !core[i] {
            continue;
        }
        // Expand a new cluster from this core point, in index order.
        let cluster = next_cluster;
        next_cluster += 1;
        let mut frontier = vec![i];
        visited[i] = true;
        labels[i] = Label::Cluster(cluster);
        while let Some(p) = frontier.pop() {
            for &q in &neighborhoods[p] {
                if labels[q] == Label::Noise {
                    labels[q] = Label::Cluster(cluster);
                }
                if core[q] && !visited[q] {
                    visited[q] = true;
                    frontier.push(q);
                }
            }
        }
    }
    Ok(ClusterLabeling::new(labels))
}
