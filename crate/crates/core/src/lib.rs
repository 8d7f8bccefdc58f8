//! Routine log extraction from identifier-free UI logs.
//!
//! The pipeline splits a UI log into routine executions at user-supplied
//! completion actions, encodes each execution as an action-count vector,
//! and clusters the vectors into per-type routine logs. Around it sit a
//! controlled noise injector, a synthetic benchmark generator that plays
//! out ground-truth Petri nets, evaluation metrics (Jaccard Coefficient
//! against action sets, alignment-based fitness against models, empty-log
//! percentage), a post-hoc adapter for techniques that only output action
//! sets, and a reproducible noise-sweep experiment harness.

pub mod clustering;
pub mod conformance;
pub mod encoding;
pub mod error;
pub mod experiment;
pub mod generator;
pub mod io;
pub mod metrics;
pub mod model;
pub mod noise;
pub mod seeds;
pub mod segmentation;

pub use error::{CoreError, Result};
pub use model::{
    build_alphabet, ActionAlphabet, ActionId, ClusterSet, CompletionSet, ExecutionMultiset,
    RoutineExecution, RoutineLog, UILog,
};
