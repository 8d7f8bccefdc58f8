//! Shared domain vocabulary: action alphabets, UI logs, routine executions,
//! and clusterings of executions into routine logs.
//!
//! All types here are immutable after construction and safe to share across
//! threads.

use std::collections::{BTreeSet, HashMap};

use crate::error::{CoreError, Result};

/// Position of an action label in an [`ActionAlphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub usize);

impl std::fmt::Display for ActionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered set of distinct action labels with a bidirectional label/index map.
///
/// The ordering is first occurrence in the input; it is stable across runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionAlphabet {
    labels: Vec<String>,
    index: HashMap<String, ActionId>,
}

impl ActionAlphabet {
    /// Builds an alphabet from raw labels, deduplicating in first-occurrence
    /// order. Errors on an empty input.
    pub fn build(raw_labels: impl IntoIterator<Item = impl Into<String>>) -> Result<Self> {
        let mut alphabet = ActionAlphabet {
            labels: Vec::new(),
            index: HashMap::new(),
        };
        for label in raw_labels {
            alphabet.intern(label.into());
        }
        if alphabet.labels.is_empty() {
            return Err(CoreError::EmptyAlphabet);
        }
        Ok(alphabet)
    }

    pub(crate) fn empty() -> Self {
        ActionAlphabet {
            labels: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Returns the id for `label`, interning it if unseen.
    pub(crate) fn intern(&mut self, label: String) -> ActionId {
        if let Some(&id) = self.index.get(&label) {
            return id;
        }
        let id = ActionId(self.labels.len());
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        id
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Label at `id`; panics if out of range (ids come from this alphabet).
    pub fn label(&self, id: ActionId) -> &str {
        &self.labels[id.0]
    }

    pub fn id(&self, label: &str) -> Option<ActionId> {
        self.index.get(label).copied()
    }

    /// Resolves a label against a frozen alphabet, erroring on unknowns.
    pub fn require(&self, label: &str) -> Result<ActionId> {
        self.id(label)
            .ok_or_else(|| CoreError::UnknownLabel(label.to_string()))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ids(&self) -> impl Iterator<Item = ActionId> + '_ {
        (0..self.labels.len()).map(ActionId)
    }

    pub fn contains_id(&self, id: ActionId) -> bool {
        id.0 < self.labels.len()
    }
}

/// Builds an alphabet of distinct labels in first-occurrence order.
pub fn build_alphabet(raw_labels: &[impl AsRef<str>]) -> Result<ActionAlphabet> {
    ActionAlphabet::build(raw_labels.iter().map(|l| l.as_ref().to_string()))
}

/// A flat, identifier-free sequence of UI actions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UILog {
    actions: Vec<ActionId>,
}

impl UILog {
    pub fn new(actions: Vec<ActionId>) -> Self {
        UILog { actions }
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Checks that every action references the given alphabet.
    pub fn validate_against(&self, alphabet: &ActionAlphabet) -> Result<()> {
        for &a in &self.actions {
            if !alphabet.contains_id(a) {
                return Err(CoreError::ActionOutOfRange(a.0, alphabet.len()));
            }
        }
        Ok(())
    }
}

/// Actions that mark the completion of a routine execution.
///
/// Invariant: nonempty and a strict subset of the alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionSet {
    members: BTreeSet<ActionId>,
}

impl CompletionSet {
    pub fn new(
        members: impl IntoIterator<Item = ActionId>,
        alphabet: &ActionAlphabet,
    ) -> Result<Self> {
        let members: BTreeSet<ActionId> = members.into_iter().collect();
        if members.is_empty() || members.len() >= alphabet.len() {
            return Err(CoreError::InvalidCompletionSet);
        }
        for &m in &members {
            if !alphabet.contains_id(m) {
                return Err(CoreError::ActionOutOfRange(m.0, alphabet.len()));
            }
        }
        Ok(CompletionSet { members })
    }

    pub fn from_labels(labels: &[impl AsRef<str>], alphabet: &ActionAlphabet) -> Result<Self> {
        let mut members = BTreeSet::new();
        for l in labels {
            members.insert(alphabet.require(l.as_ref())?);
        }
        CompletionSet::new(members, alphabet)
    }

    pub fn contains(&self, id: ActionId) -> bool {
        self.members.contains(&id)
    }

    pub fn members(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// One contiguous performance of a routine: a segment of the UI log.
///
/// `provenance` carries the ground-truth type id when the execution was
/// produced by the benchmark generator; extraction never reads it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoutineExecution {
    actions: Vec<ActionId>,
    provenance: Option<usize>,
}

impl RoutineExecution {
    pub fn new(actions: Vec<ActionId>) -> Self {
        RoutineExecution {
            actions,
            provenance: None,
        }
    }

    pub fn with_provenance(actions: Vec<ActionId>, type_id: usize) -> Self {
        RoutineExecution {
            actions,
            provenance: Some(type_id),
        }
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn provenance(&self) -> Option<usize> {
        self.provenance
    }
}

/// The multiset W of routine executions extracted from a UI log.
///
/// Duplicates are allowed and order is preserved with respect to extraction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExecutionMultiset {
    executions: Vec<RoutineExecution>,
}

impl ExecutionMultiset {
    pub fn new(executions: Vec<RoutineExecution>) -> Self {
        ExecutionMultiset { executions }
    }

    pub fn executions(&self) -> &[RoutineExecution] {
        &self.executions
    }

    pub fn len(&self) -> usize {
        self.executions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.executions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RoutineExecution> {
        self.executions.iter()
    }
}

/// The multiset of executions assigned to one routine type.
///
/// May be empty: empty routine logs are tracked, never silently dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RoutineLog {
    executions: Vec<RoutineExecution>,
}

impl RoutineLog {
    pub fn new(executions: Vec<RoutineExecution>) -> Self {
        RoutineLog { executions }
    }

    pub fn executions(&self) -> &[RoutineExecution] {
        &self.executions
    }

    pub fn len(&self) -> usize {
        self.executions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.executions.is_empty()
    }
}

/// A partition of an [`ExecutionMultiset`] into routine logs.
///
/// `assignment[j]` is the index of the log containing execution `j` of the
/// input multiset, so the multiset union of all logs equals the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSet {
    logs: Vec<RoutineLog>,
    assignment: Vec<usize>,
}

impl ClusterSet {
    /// Builds a cluster set from a per-execution assignment into `n_logs`
    /// logs. Logs keep executions in multiset order.
    pub fn from_assignment(
        executions: &ExecutionMultiset,
        assignment: Vec<usize>,
        n_logs: usize,
    ) -> Result<Self> {
        if assignment.len() != executions.len() {
            return Err(CoreError::InvalidClusteringParams(format!(
                "assignment length {} does not match {} executions",
                assignment.len(),
                executions.len()
            )));
        }
        let mut logs = vec![Vec::new(); n_logs];
        for (exec, &c) in executions.iter().zip(&assignment) {
            if c >= n_logs {
                return Err(CoreError::InvalidClusteringParams(format!(
                    "assignment index {c} out of range for {n_logs} logs"
                )));
            }
            logs[c].push(exec.clone());
        }
        Ok(ClusterSet {
            logs: logs.into_iter().map(RoutineLog::new).collect(),
            assignment,
        })
    }

    pub fn logs(&self) -> &[RoutineLog] {
        &self.logs
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn n_clusters(&self) -> usize {
        self.logs.len()
    }

    pub fn total_executions(&self) -> usize {
        self.logs.iter().map(RoutineLog::len).sum()
    }

    /// Checks the partition law against the original multiset: sizes sum to
    /// |W| and each execution sits in the log its assignment names.
    pub fn is_partition_of(&self, input: &ExecutionMultiset) -> bool {
        if self.assignment.len() != input.len() || self.total_executions() != input.len() {
            return false;
        }
        let mut cursor = vec![0usize; self.logs.len()];
        for (exec, &c) in input.iter().zip(&self.assignment) {
            let Some(log) = self.logs.get(c) else {
                return false;
            };
            let Some(slot) = log.executions().get(cursor[c]) else {
                return false;
            };
            if slot != exec {
                return false;
            }
            cursor[c] += 1;
        }
        cursor
            .iter()
            .zip(&self.logs)
            .all(|(&seen, log)| seen == log.len())
    }
}
