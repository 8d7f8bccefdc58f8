//! Evaluation metrics for extracted routine logs: Jaccard Coefficient
//! against ground-truth action sets, alignment-based fitness against
//! ground-truth models, and the empty-log percentage. Also hosts the
//! post-hoc adapter that turns action-set outputs of other techniques into
//! routine logs by nearest-vector assignment.

use std::collections::BTreeSet;

use crate::conformance::{log_model_fitness, PetriNet};
use crate::encoding::encode_execution;
use crate::error::{CoreError, Result};
use crate::model::{
    ActionAlphabet, ActionId, ClusterSet, ExecutionMultiset, RoutineLog,
};

/// Ground-truth action sets, one per routine type, in type order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthActionSets {
    sets: Vec<(String, BTreeSet<ActionId>)>,
}

impl GroundTruthActionSets {
    pub fn new(sets: Vec<(String, BTreeSet<ActionId>)>) -> Result<Self> {
        if sets.is_empty() || sets.iter().any(|(_, s)| s.is_empty()) {
            return Err(CoreError::EmptyGroundTruth);
        }
        Ok(GroundTruthActionSets { sets })
    }

    pub fn sets(&self) -> &[(String, BTreeSet<ActionId>)] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Named ground-truth routine models.
#[derive(Debug, Clone)]
pub struct ModelSet {
    pub models: Vec<(String, PetriNet)>,
}

impl ModelSet {
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

/// One measurement row of the evaluation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub log: String,
    pub technique: String,
    pub clusterer: String,
    pub noise_level: f64,
    pub repetition: usize,
    pub jc: f64,
    pub fitness: f64,
    pub empty_pct: f64,
    pub n_clusters: usize,
    pub runtime_ms: u64,
}

/// Set of actions occurring in a routine log; empty for an empty log.
pub fn action_set(log: &RoutineLog) -> BTreeSet<ActionId> {
    log.executions()
        .iter()
        .flat_map(|e| e.actions().iter().copied())
        .collect()
}

/// Jaccard Coefficient: average over every cluster of the best Jaccard
/// similarity between its action set and any ground-truth set. Empty
/// clusters contribute zero.
pub fn jaccard_coefficient(clusters: &ClusterSet, truth: &GroundTruthActionSets) -> Result<f64> {
    if clusters.n_clusters() == 0 {
        return Err(CoreError::NoClusters);
    }
    if truth.is_empty() {
        return Err(CoreError::EmptyGroundTruth);
    }
    let total: f64 = clusters
        .logs()
        .iter()
        .map(|log| {
            let actions = action_set(log);
            truth
                .sets()
                .iter()
                .map(|(_, g)| {
                    let inter = actions.intersection(g).count() as f64;
                    let union = actions.union(g).count() as f64;
                    // Ground-truth sets are nonempty, so the union is too.
                    inter / union
                })
                .fold(0.0, f64::max)
        })
        .sum();
    Ok(total / clusters.n_clusters() as f64)
}

/// Fitness: average over nonempty clusters of the best log-model fitness
/// against any ground-truth model. Returns the number of excluded empty
/// clusters alongside. Errors when every cluster is empty.
pub fn fitness(
    clusters: &ClusterSet,
    models: &ModelSet,
    alphabet: &ActionAlphabet,
) -> Result<(f64, usize)> {
    if clusters.n_clusters() == 0 {
        return Err(CoreError::NoClusters);
    }
    let mut total = 0.0;
    let mut counted = 0usize;
    let mut excluded = 0usize;
    for log in clusters.logs() {
        if log.is_empty() {
            excluded += 1;
            continue;
        }
        let best = models
            .models
            .iter()
            .map(|(_, net)| log_model_fitness(log, net, alphabet))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        total += best;
        counted += 1;
    }
    if counted == 0 {
        return Err(CoreError::AllClustersEmpty);
    }
    Ok((total / counted as f64, excluded))
}

/// Percentage of empty routine logs among all clusters.
pub fn empty_log_pct(clusters: &ClusterSet) -> Result<f64> {
    if clusters.n_clusters() == 0 {
        return Err(CoreError::NoClusters);
    }
    let empty = clusters.logs().iter().filter(|l| l.is_empty()).count();
    Ok(100.0 * empty as f64 / clusters.n_clusters() as f64)
}

/// Post-hoc adapter for techniques that output only action sets: each set
/// becomes a binary vector over the alphabet, each execution its count
/// vector, and every execution goes to the type with the nearest vector
/// (squared Euclidean, ties to the lowest type index). The result may
/// contain empty routine logs.
pub fn baseline_assign(
    executions: &ExecutionMultiset,
    action_sets: &GroundTruthActionSets,
    alphabet: &ActionAlphabet,
) -> Result<ClusterSet> {
    let vectors: Vec<Vec<u8>> = action_sets
        .sets()
        .iter()
        .map(|(_, set)| {
            let mut v = vec![0u8; alphabet.len()];
            for &a in set {
                if !alphabet.contains_id(a) {
                    return Err(CoreError::ActionOutOfRange(a.0, alphabet.len()));
                }
                v[a.0] = 1;
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;

    let mut assignment = Vec::with_capacity(executions.len());
    for exec in executions.iter() {
        let counts = encode_execution(exec, alphabet)?;
        let mut best = 0usize;
        let mut best_d = u64::MAX;
        for (i, v) in vectors.iter().enumerate() {
            // Integer arithmetic keeps ties exact.
            let d: u64 = counts
                .counts()
                .iter()
                .zip(v)
                .map(|(&c, &b)| {
                    let diff = i64::from(c) - i64::from(b);
                    (diff * diff) as u64
                })
                .sum();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        assignment.push(best);
    }
    ClusterSet::from_assignment(executions, assignment, action_sets.len())
}
