//! File formats: UI log CSV, PNML nets, action-set JSON, routine-log
//! exports, and the evaluation report.
//!
//! UI logs are RFC 4180 CSV with header `timestamp,user,action[,case]`;
//! only `action` is required. Timestamps and users are accepted and
//! discarded. The optional `case` column carries ground-truth execution
//! ids for evaluation only; extraction never reads it.

mod action_sets;
mod benchmark;
mod pnml;
mod report;
mod routine_logs;
mod ui_log;

pub use action_sets::{read_action_sets, write_action_sets};
pub use benchmark::{read_benchmark, read_manifest, write_benchmark, BenchmarkManifest};
pub use pnml::{read_pnml, read_pnml_str, write_pnml, write_pnml_string};
pub use report::{read_report, write_report, ReportRow, RowStatus, REPORT_HEADER};
pub use routine_logs::{
    read_routine_log, write_routine_logs, write_routine_logs_xes, RoutineLogManifest,
    RoutineLogManifestEntry,
};
pub use ui_log::{read_ui_log, write_ui_log, GroundTruthGrouping, UILogData};
