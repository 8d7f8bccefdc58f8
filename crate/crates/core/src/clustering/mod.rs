//! Partitioning of feature vectors into routine logs.
//!
//! Three methods are supported: K-Means, DBSCAN, and HDBSCAN, all over
//! Euclidean distance on count vectors widened to `f64`. DBSCAN and HDBSCAN
//! may mark rows as noise; a noise policy folds those rows back so the
//! resulting cluster set always partitions the input multiset.

mod dbscan;
mod hdbscan;
mod kmeans;

pub use dbscan::dbscan;
pub use hdbscan::hdbscan;
pub use kmeans::{kmeans, kmeans_fit, KMeansFit};

use crate::encoding::FeatureMatrix;
use crate::error::{CoreError, Result};
use crate::model::{ClusterSet, ExecutionMultiset};

/// Per-row cluster label, or noise before policy resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Cluster(usize),
    Noise,
}

/// Labels for every row of a feature matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabeling {
    labels: Vec<Label>,
}

impl ClusterLabeling {
    pub fn new(labels: Vec<Label>) -> Self {
        ClusterLabeling { labels }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn has_noise(&self) -> bool {
        self.labels.iter().any(|l| matches!(l, Label::Noise))
    }

    /// Number of distinct cluster labels (noise excluded). Labels are kept
    /// contiguous by the producers, so this is max + 1.
    pub fn n_clusters(&self) -> usize {
        self.labels
            .iter()
            .filter_map(|l| match l {
                Label::Cluster(c) => Some(*c + 1),
                Label::Noise => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// What to do with rows DBSCAN/HDBSCAN marked as noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoisePolicy {
    /// Reassign each noise row to the cluster with the nearest centroid.
    /// No execution is ever dropped.
    #[default]
    NearestCentroid,
    /// Collect all noise rows into one extra cluster.
    OwnCluster,
}

impl NoisePolicy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "nearest_centroid" | "nearest-centroid" => Ok(NoisePolicy::NearestCentroid),
            "own_cluster" | "own-cluster" => Ok(NoisePolicy::OwnCluster),
            other => Err(CoreError::InvalidClusteringParams(format!(
                "unknown noise policy `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for NoisePolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoisePolicy::NearestCentroid => write!(f, "nearest_centroid"),
            NoisePolicy::OwnCluster => write!(f, "own_cluster"),
        }
    }
}

/// Clustering method plus its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ClusterMethod {
    /// `k` of None defers to the caller (in evaluation mode: the number of
    /// ground-truth routine types).
    KMeans { k: Option<usize> },
    Dbscan { eps: f64, min_pts: usize },
    Hdbscan { min_cluster_size: usize },
}

impl ClusterMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ClusterMethod::KMeans { .. } => "kmeans",
            ClusterMethod::Dbscan { .. } => "dbscan",
            ClusterMethod::Hdbscan { .. } => "hdbscan",
        }
    }

    /// Library defaults, matching the common standard configurations.
    pub fn default_dbscan() -> Self {
        ClusterMethod::Dbscan {
            eps: 0.5,
            min_pts: 5,
        }
    }

    pub fn default_hdbscan() -> Self {
        ClusterMethod::Hdbscan {
            min_cluster_size: 5,
        }
    }
}

/// Full clustering configuration: method, seed, and noise policy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringConfig {
    pub method: ClusterMethod,
    pub seed: u64,
    pub noise_policy: NoisePolicy,
}

impl ClusteringConfig {
    pub fn new(method: ClusterMethod) -> Self {
        ClusteringConfig {
            method,
            seed: 0,
            noise_policy: NoisePolicy::default(),
        }
    }

    /// Runs the configured method. `k_default` supplies k for K-Means when
    /// the config leaves it open; it is clamped to the number of rows so
    /// pipelines on degenerate inputs stay total.
    pub fn run(&self, matrix: &FeatureMatrix, k_default: usize) -> Result<ClusterLabeling> {
        let labeling = match &self.method {
            ClusterMethod::KMeans { k } => {
                let k = k.unwrap_or(k_default).min(matrix.n_rows().max(1));
                kmeans(matrix, k, self.seed)?
            }
            ClusterMethod::Dbscan { eps, min_pts } => dbscan(matrix, *eps, *min_pts)?,
            ClusterMethod::Hdbscan { min_cluster_size } => hdbscan(matrix, *min_cluster_size)?,
        };
        Ok(resolve_noise(&labeling, matrix, self.noise_policy))
    }
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Resolves noise labels per the policy. Non-noise labels are left alone.
///
/// If every row is noise, all rows form a single cluster under either
/// policy.
pub fn resolve_noise(
    labeling: &ClusterLabeling,
    matrix: &FeatureMatrix,
    policy: NoisePolicy,
) -> ClusterLabeling {
    if !labeling.has_noise() {
        return labeling.clone();
    }
    let n_clusters = labeling.n_clusters();
    if n_clusters == 0 {
        return ClusterLabeling::new(vec![Label::Cluster(0); labeling.len()]);
    }
    match policy {
        NoisePolicy::OwnCluster => ClusterLabeling::new(
            labeling
                .labels()
                .iter()
                .map(|l| match l {
                    Label::Cluster(c) => Label::Cluster(*c),
                    Label::Noise => Label::Cluster(n_clusters),
                })
                .collect(),
        ),
        NoisePolicy::NearestCentroid => {
            let points = matrix.to_points();
            let dim = matrix.dim();
            let mut sums = vec![vec![0.0f64; dim]; n_clusters];
            let mut counts = vec![0usize; n_clusters];
            for (row, label) in points.iter().zip(labeling.labels()) {
                if let Label::Cluster(c) = label {
                    for (s, x) in sums[*c].iter_mut().zip(row) {
                        *s += x;
                    }
                    counts[*c] += 1;
                }
            }
            let centroids: Vec<Vec<f64>> = sums
                .into_iter()
                .zip(&counts)
                .map(|(s, &c)| s.into_iter().map(|v| v / c as f64).collect())
                .collect();
            ClusterLabeling::new(
                labeling
                    .labels()
                    .iter()
                    .zip(&points)
                    .map(|(l, row)| match l {
                        Label::Cluster(c) => Label::Cluster(*c),
                        Label::Noise => {
                            let mut best = 0usize;
                            let mut best_d = f64::INFINITY;
                            for (c, centroid) in centroids.iter().enumerate() {
                                let d = sq_dist(row, centroid);
                                if d < best_d {
                                    best_d = d;
                                    best = c;
                                }
                            }
                            Label::Cluster(best)
                        }
                    })
                    .collect(),
            )
        }
    }
}

/// Materializes a fully resolved labeling into a [`ClusterSet`], clusters
/// ordered by ascending label.
pub fn to_cluster_set(
    labeling: &ClusterLabeling,
    executions: &ExecutionMultiset,
) -> Result<ClusterSet> {
    let mut raw = Vec::with_capacity(labeling.len());
    for l in labeling.labels() {
        match l {
            Label::Cluster(c) => raw.push(*c),
            Label::Noise => return Err(CoreError::UnresolvedNoise),
        }
    }
    let mut distinct: Vec<usize> = raw.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let assignment: Vec<usize> = raw
        .iter()
        .map(|c| distinct.binary_search(c).expect("label present"))
        .collect();
    ClusterSet::from_assignment(executions, assignment, distinct.len())
}
