//! Hierarchical density-based clustering (HDBSCAN).
//!
//! Pipeline: core distances (min_samples = min_cluster_size, self counted),
//! mutual-reachability minimum spanning tree, single-linkage dendrogram,
//! condensed tree at min_cluster_size, then excess-of-mass cluster
//! selection. Points that never join a selected cluster are noise.
//!
//! The root of the condensed tree is excluded from selection whenever any
//! other condensed cluster exists; if the tree never splits into two
//! surviving children, the result is a single cluster holding every row.
//! Zero distances (duplicate rows) are handled by capping lambda at a large
//! finite value instead of infinity, which keeps stability sums ordered.

use super::{sq_dist, ClusterLabeling, Label};
use crate::encoding::FeatureMatrix;
use crate::error::{CoreError, Result};

const LAMBDA_CAP: f64 = 1e12;

fn lambda_of(dist: f64) -> f64 {
    if dist > 0.0 {
        (1.0 / dist).min(LAMBDA_CAP)
    } else {
        LAMBDA_CAP
    }
}

pub fn hdbscan(matrix: &FeatureMatrix, min_cluster_size: usize) -> Result<ClusterLabeling> {
    if min_cluster_size < 2 {
        return Err(CoreError::InvalidClusteringParams(
            "min_cluster_size must be >= 2".into(),
        ));
    }
    let n = matrix.n_rows();
    if n == 0 {
        return Ok(ClusterLabeling::new(Vec::new()));
    }
    if n < min_cluster_size {
        // Too few rows to form any cluster; not an error.
        return Ok(ClusterLabeling::new(vec![Label::Noise; n]));
    }
    let points = matrix.to_points();

    // Core distance: min_cluster_size-th smallest distance to any row,
    // the row itself included at distance zero.
    let core: Vec<f64> = (0..n)
        .map(|i| {
            let mut d: Vec<f64> = (0..n)
                .map(|j| sq_dist(&points[i], &points[j]).sqrt())
                .collect();
            d.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
            d[min_cluster_size - 1]
        })
        .collect();

    let mst = mutual_reachability_mst(&points, &core);
    let dendrogram = single_linkage(mst, n);
    let condensed = condense(&dendrogram, n, min_cluster_size);
    Ok(extract_labels(&condensed, n))
}

/// Prim's algorithm over the implicit complete mutual-reachability graph.
fn mutual_reachability_mst(points: &[Vec<f64>], core: &[f64]) -> Vec<(usize, usize, f64)> {
    let n = points.len();
    let mut in_tree = vec![false; n];
    let mut best_dist = vec![f64::INFINITY; n];
    let mut best_from = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    in_tree[0] = true;
    let mut latest = 0usize;
    for _ in 1..n {
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = sq_dist(&points[latest], &points[j])
                .sqrt()
                .max(core[latest])
                .max(core[j]);
            if d < best_dist[j] {
                best_dist[j] = d;
                best_from[j] = latest;
            }
        }
        let mut pick = usize::MAX;
        let mut pick_d = f64::INFINITY;
        for j in 0..n {
            if !in_tree[j] && best_dist[j] < pick_d {
                pick_d = best_dist[j];
                pick = j;
            }
        }
        edges.push((best_from[pick], pick, pick_d));
        in_tree[pick] = true;
        latest = pick;
    }
    edges
}

/// One internal node of the single-linkage dendrogram. Leaves are rows
/// 0..n-1; internal nodes continue from n upward.
#[derive(Debug, Clone)]
struct Merge {
    left: usize,
    right: usize,
    dist: f64,
    size: usize,
}

fn single_linkage(mut mst: Vec<(usize, usize, f64)>, n: usize) -> Vec<Merge> {
    mst.sort_by(|a, b| {
        a.2.partial_cmp(&b.2)
            .expect("finite distances")
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
    });
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    // Maps a union-find root to its current dendrogram node.
    let mut node_of: Vec<usize> = (0..2 * n - 1).collect();
    let mut sizes = vec![1usize; 2 * n - 1];
    let mut merges = Vec::with_capacity(n - 1);
    for (a, b, dist) in mst {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        let new_node = n + merges.len();
        let size = sizes[ra] + sizes[rb];
        merges.push(Merge {
            left: node_of[ra],
            right: node_of[rb],
            dist,
            size,
        });
        parent[ra] = new_node;
        parent[rb] = new_node;
        sizes[new_node] = size;
        node_of[new_node] = new_node;
    }
    merges
}

/// A child entry of a condensed cluster: either a point falling out at a
/// given lambda, or a sub-cluster born at it.
#[derive(Debug, Clone, Copy)]
enum Child {
    Point(usize),
    Cluster(usize),
}

#[derive(Debug, Clone)]
struct CondensedRow {
    parent: usize,
    child: Child,
    lambda: f64,
    size: usize,
}

#[derive(Debug)]
struct CondensedTree {
    rows: Vec<CondensedRow>,
    /// Lambda at which each condensed cluster was born; root is 0.0.
    birth: Vec<f64>,
    /// Parent cluster of each condensed cluster; root points to itself.
    parent_cluster: Vec<usize>,
}

fn node_size(node: usize, n: usize, dendrogram: &[Merge]) -> usize {
    if node < n {
        1
    } else {
        dendrogram[node - n].size
    }
}

/// Collects the leaf points under a dendrogram node.
fn leaves_under(node: usize, n: usize, dendrogram: &[Merge], out: &mut Vec<usize>) {
    if node < n {
        out.push(node);
        return;
    }
    let m = &dendrogram[node - n];
    leaves_under(m.left, n, dendrogram, out);
    leaves_under(m.right, n, dendrogram, out);
}

fn condense(dendrogram: &[Merge], n: usize, min_cluster_size: usize) -> CondensedTree {
    let mut rows = Vec::new();
    let mut birth = vec![0.0f64];
    let mut parent_cluster = vec![0usize];
    if n == 1 {
        rows.push(CondensedRow {
            parent: 0,
            child: Child::Point(0),
            lambda: LAMBDA_CAP,
            size: 1,
        });
        return CondensedTree {
            rows,
            birth,
            parent_cluster,
        };
    }
    let root = n + dendrogram.len() - 1;
    // (dendrogram node, condensed cluster it belongs to)
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((root, 0usize));
    while let Some((node, cluster)) = queue.pop_front() {
        let merge = &dendrogram[node - n];
        let lambda = lambda_of(merge.dist);
        let left_size = node_size(merge.left, n, dendrogram);
        let right_size = node_size(merge.right, n, dendrogram);
        let left_big = left_size >= min_cluster_size;
        let right_big = right_size >= min_cluster_size;
        if left_big && right_big {
            // True split: both sides become new clusters.
            for &side in &[merge.left, merge.right] {
                let id = birth.len();
                birth.push(lambda);
                parent_cluster.push(cluster);
                rows.push(CondensedRow {
                    parent: cluster,
                    child: Child::Cluster(id),
                    lambda,
                    size: node_size(side, n, dendrogram),
                });
                queue.push_back((side, id));
            }
        } else {
            // Small sides shed their points at this lambda; a big side
            // carries the current cluster onward.
            for (&side, big) in [(&merge.left, left_big), (&merge.right, right_big)] {
                if big {
                    queue.push_back((side, cluster));
                } else if side < n {
                    rows.push(CondensedRow {
                        parent: cluster,
                        child: Child::Point(side),
                        lambda,
                        size: 1,
                    });
                } else {
                    let mut pts = Vec::new();
                    leaves_under(side, n, dendrogram, &mut pts);
                    for p in pts {
                        rows.push(CondensedRow {
                            parent: cluster,
                            child: Child::Point(p),
                            lambda,
                            size: 1,
                        });
                    }
                }
            }
        }
    }
    CondensedTree {
        rows,
        birth,
        parent_cluster,
    }
}

fn extract_labels(tree: &CondensedTree, n: usize) -> ClusterLabeling {
    let m = tree.birth.len();
    if m == 1 {
        // No split survived min_cluster_size: one cluster of everything.
        return ClusterLabeling::new(vec![Label::Cluster(0); n]);
    }

    // Excess-of-mass stability per condensed cluster.
    let mut stability = vec![0.0f64; m];
    for row in &tree.rows {
        stability[row.parent] += (row.lambda - tree.birth[row.parent]) * row.size as f64;
    }
    let mut cluster_children: Vec<Vec<usize>> = vec![Vec::new(); m];
    for row in &tree.rows {
        if let Child::Cluster(c) = row.child {
            cluster_children[row.parent].push(c);
        }
    }

    // Bottom-up selection; cluster ids grow downward, so reverse id order
    // visits children before parents. The root (id 0) stays unselected.
    let mut selected = vec![false; m];
    let mut subtree = stability.clone();
    for c in (1..m).rev() {
        if cluster_children[c].is_empty() {
            selected[c] = true;
            continue;
        }
        let children_sum: f64 = cluster_children[c].iter().map(|&ch| subtree[ch]).sum();
        if children_sum > stability[c] {
            subtree[c] = children_sum;
        } else {
            selected[c] = true;
            deselect_descendants(c, &cluster_children, &mut selected);
        }
    }

    // Stable output labels: ascending condensed cluster id.
    let chosen: Vec<usize> = (0..m).filter(|&c| selected[c]).collect();
    let rank = |cluster: usize| chosen.binary_search(&cluster).ok();

    let mut labels = vec![Label::Noise; n];
    for row in &tree.rows {
        if let Child::Point(p) = row.child {
            let mut c = row.parent;
            loop {
                if selected[c] {
                    labels[p] = Label::Cluster(rank(c).expect("selected cluster is listed"));
                    break;
                }
                if c == 0 {
                    break;
                }
                c = tree.parent_cluster[c];
            }
        }
    }
    ClusterLabeling::new(labels)
}

fn deselect_descendants(c: usize, children: &[Vec<usize>], selected: &mut [bool]) {
    for &ch in &children[c] {
        selected[ch] = false;
        deselect_descendants(ch, children, selected);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::encode;
    use crate::model::{build_alphabet, ActionId, ExecutionMultiset, RoutineExecution};
    use std::collections::BTreeSet;

    fn matrix_of(rows: &[Vec<u32>]) -> FeatureMatrix {
        let dim = rows.first().map_or(0, Vec::len);
        let labels: Vec<String> = (0..dim).map(|i| format!("a{i}")).collect();
        let alphabet = build_alphabet(&labels).unwrap();
        let executions: Vec<RoutineExecution> = rows
            .iter()
            .map(|r| {
                let mut actions = Vec::new();
                for (i, &c) in r.iter().enumerate() {
                    actions.extend(std::iter::repeat_n(ActionId(i), c as usize));
                }
                RoutineExecution::new(actions)
            })
            .collect();
        encode(&ExecutionMultiset::new(executions), &alphabet).unwrap()
    }

    fn partition(labeling: &ClusterLabeling) -> (BTreeSet<BTreeSet<usize>>, BTreeSet<usize>) {
        let mut clusters: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        let mut noise = BTreeSet::new();
        for (i, l) in labeling.labels().iter().enumerate() {
            match l {
                Label::Cluster(c) => {
                    clusters.entry(*c).or_default().insert(i);
                }
                Label::Noise => {
                    noise.insert(i);
                }
            }
        }
        (clusters.into_values().collect(), noise)
    }

    fn tight_group(offset: (u32, u32)) -> Vec<Vec<u32>> {
        [(0, 0), (0, 1), (1, 0), (1, 1), (0, 0), (1, 1), (0, 1), (1, 0), (0, 0), (1, 1)]
            .iter()
            .map(|&(x, y)| vec![x + offset.0, y + offset.1])
            .collect()
    }

    #[test]
    fn two_well_separated_groups_of_ten() {
        // Expected partition frozen from a reference implementation run on
        // the same coordinates: the two groups, no noise.
        let mut rows = tight_group((0, 0));
        rows.extend(tight_group((50, 50)));
        let labeling = hdbscan(&matrix_of(&rows), 5).unwrap();
        let (clusters, noise) = partition(&labeling);
        assert!(noise.is_empty());
        assert_eq!(
            clusters,
            BTreeSet::from([(0..10).collect::<BTreeSet<_>>(), (10..20).collect()])
        );
    }

    #[test]
    fn isolated_point_is_noise() {
        // Reference run on the same coordinates: two clusters, index 18
        // noise.
        let mut rows = tight_group((0, 0));
        rows.extend(tight_group((40, 0)).into_iter().take(8));
        rows.push(vec![200, 200]);
        let labeling = hdbscan(&matrix_of(&rows), 5).unwrap();
        let (clusters, noise) = partition(&labeling);
        assert_eq!(noise, BTreeSet::from([18]));
        assert_eq!(
            clusters,
            BTreeSet::from([(0..10).collect::<BTreeSet<_>>(), (10..18).collect()])
        );
    }

    #[test]
    fn three_groups_of_seven_at_min_cluster_size_three() {
        // Reference run: the three groups, no noise.
        let g: Vec<Vec<u32>> = [(0, 0), (0, 1), (1, 0), (1, 1), (0, 0), (1, 1), (0, 1)]
            .iter()
            .map(|&(x, y)| vec![x, y])
            .collect();
        let mut rows = g.clone();
        rows.extend(g.iter().map(|r| vec![r[0] + 30, r[1]]));
        rows.extend(g.iter().map(|r| vec![r[0], r[1] + 30]));
        let labeling = hdbscan(&matrix_of(&rows), 3).unwrap();
        let (clusters, noise) = partition(&labeling);
        assert!(noise.is_empty());
        assert_eq!(
            clusters,
            BTreeSet::from([
                (0..7).collect::<BTreeSet<_>>(),
                (7..14).collect(),
                (14..21).collect()
            ])
        );
    }

    #[test]
    fn single_tight_blob_is_one_cluster() {
        // Uniformly spaced points with no internal split that survives
        // min_cluster_size: everything stays in one cluster.
        let rows: Vec<Vec<u32>> = (0..20).map(|i| vec![i, 0]).collect();
        let labeling = hdbscan(&matrix_of(&rows), 5).unwrap();
        let (clusters, noise) = partition(&labeling);
        assert!(noise.is_empty());
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters.first().unwrap().len(), 20);
    }

    #[test]
    fn fewer_rows_than_min_cluster_size_is_all_noise() {
        let rows = vec![vec![0u32], vec![1], vec![2]];
        let labeling = hdbscan(&matrix_of(&rows), 5).unwrap();
        assert_eq!(labeling.labels(), &[Label::Noise; 3]);
    }

    #[test]
    fn duplicate_heavy_groups_of_identical_rows() {
        // Three groups of 50 identical count vectors: the shape produced by
        // noiseless benchmark logs. Zero intra-group distances must not
        // break stability arithmetic.
        let mut rows = Vec::new();
        rows.extend(vec![vec![3u32, 1, 0, 0, 0, 0]; 50]);
        rows.extend(vec![vec![0u32, 0, 2, 1, 0, 0]; 50]);
        rows.extend(vec![vec![0u32, 0, 0, 0, 4, 1]; 50]);
        let labeling = hdbscan(&matrix_of(&rows), 5).unwrap();
        let (clusters, noise) = partition(&labeling);
        assert!(noise.is_empty());
        assert_eq!(
            clusters,
            BTreeSet::from([
                (0..50).collect::<BTreeSet<_>>(),
                (50..100).collect(),
                (100..150).collect()
            ])
        );
    }

    #[test]
    fn min_cluster_size_validation() {
        let m = matrix_of(&[vec![0], vec![1]]);
        assert!(hdbscan(&m, 1).is_err());
        assert!(hdbscan(&m, 0).is_err());
    }

    #[test]
    fn empty_matrix_yields_empty_labeling() {
        let alphabet = build_alphabet(&["a"]).unwrap();
        let m = encode(&ExecutionMultiset::default(), &alphabet).unwrap();
        let labeling = hdbscan(&m, 5).unwrap();
        assert!(labeling.is_empty());
    }
}
