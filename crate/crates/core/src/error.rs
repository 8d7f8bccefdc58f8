//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("unknown action label `{0}`")]
    UnknownLabel(String),
    #[error("action index {0} out of range for alphabet of size {1}")]
    ActionOutOfRange(usize, usize),
    #[error("completion set must be a nonempty strict subset of the alphabet")]
    InvalidCompletionSet,
    #[error("{file}: row {row}: {msg}")]
    MalformedRow {
        file: String,
        row: usize,
        msg: String,
    },
    #[error("{file}: missing required column `{column}`")]
    MissingColumn { file: String, column: String },
    #[error("invalid clustering parameters: {0}")]
    InvalidClusteringParams(String),
    #[error("k = {k} exceeds number of rows ({rows})")]
    KExceedsRows { k: usize, rows: usize },
    #[error("labeling still contains NOISE entries; resolve before building a cluster set")]
    UnresolvedNoise,
    #[error("invalid noise configuration: {0}")]
    InvalidNoiseConfig(String),
    #[error("pnml parse error in {file}: {msg}")]
    PnmlParse { file: String, msg: String },
    #[error("{file}: {msg}")]
    Format { file: String, msg: String },
    #[error("final marking undefined")]
    FinalMarkingUndefined,
    #[error("transition {0} is not enabled")]
    TransitionNotEnabled(String),
    #[error("final marking unreachable")]
    FinalMarkingUnreachable,
    #[error("state budget exhausted after {0} states; net unbounded or too large")]
    StateBudgetExhausted(usize),
    #[error("alignment search exceeded depth cap {0}")]
    DepthCapExceeded(usize),
    #[error("fitness cannot formally be computed on an empty log")]
    EmptyLog,
    #[error("metric requires at least one cluster")]
    NoClusters,
    #[error("all routine logs are empty; fitness is undefined")]
    AllClustersEmpty,
    #[error("ground-truth action sets must be nonempty")]
    EmptyGroundTruth,
    #[error("playout exceeded {0} steps before reaching the final marking")]
    PlayoutCap(usize),
    #[error("playout reached a dead marking; final marking unreachable from here")]
    PlayoutDeadlock,
    #[error("invalid benchmark specification: {0}")]
    InvalidBenchmark(String),
    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("json error on {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CoreError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn csv(path: impl AsRef<std::path::Path>, source: csv::Error) -> Self {
        CoreError::Csv {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn json(path: impl AsRef<std::path::Path>, source: serde_json::Error) -> Self {
        CoreError::Json {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
