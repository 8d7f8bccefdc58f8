//! The evaluation report CSV: one row per (log, technique, clusterer,
//! noise level, repetition) measurement. Failed rows keep their grid
//! coordinates with empty metric fields and an error status, so the run
//! can continue past per-row failures.

use std::path::Path;

use crate::error::{CoreError, Result};
use crate::metrics::EvalRecord;

pub const REPORT_HEADER: &[&str] = &[
    "log",
    "technique",
    "clusterer",
    "noise_level",
    "repetition",
    "jc",
    "fitness",
    "empty_pct",
    "n_clusters",
    "runtime_ms",
    "status",
];

/// Outcome of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Error(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub log: String,
    pub technique: String,
    pub clusterer: String,
    pub noise_level: f64,
    pub repetition: usize,
    /// None when the row failed.
    pub record: Option<EvalRecord>,
    pub status: RowStatus,
}

impl ReportRow {
    pub fn is_ok(&self) -> bool {
        matches!(self.status, RowStatus::Ok)
    }
}

pub fn write_report(path: impl AsRef<Path>, rows: &[ReportRow]) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| CoreError::csv(path, e))?;
    writer
        .write_record(REPORT_HEADER)
        .map_err(|e| CoreError::csv(path, e))?;
    for row in rows {
        let (jc, fitness, empty_pct, n_clusters, runtime_ms) = match &row.record {
            Some(r) => (
                r.jc.to_string(),
                r.fitness.to_string(),
                r.empty_pct.to_string(),
                r.n_clusters.to_string(),
                r.runtime_ms.to_string(),
            ),
            None => Default::default(),
        };
        let status = match &row.status {
            RowStatus::Ok => "ok".to_string(),
            RowStatus::Error(msg) => format!("error: {msg}"),
        };
        writer
            .write_record([
                row.log.as_str(),
                row.technique.as_str(),
                row.clusterer.as_str(),
                &row.noise_level.to_string(),
                &row.repetition.to_string(),
                &jc,
                &fitness,
                &empty_pct,
                &n_clusters,
                &runtime_ms,
                &status,
            ])
            .map_err(|e| CoreError::csv(path, e))?;
    }
    writer.flush().map_err(|e| CoreError::io(path, e))?;
    Ok(())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Vec<ReportRow>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| CoreError::csv(path, e))?;
    let headers = reader.headers().map_err(|e| CoreError::csv(path, e))?.clone();
    if headers.iter().ne(REPORT_HEADER.iter().copied()) {
        return Err(CoreError::Format {
            file: path.display().to_string(),
            msg: format!("unexpected report header: {headers:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CoreError::MalformedRow {
            file: path.display().to_string(),
            row: i + 2,
            msg: e.to_string(),
        })?;
        let field = |j: usize| record.get(j).unwrap_or("").to_string();
        let parse_f64 = |j: usize| -> Result<f64> {
            record
                .get(j)
                .unwrap_or("")
                .parse()
                .map_err(|_| CoreError::MalformedRow {
                    file: path.display().to_string(),
                    row: i + 2,
                    msg: format!("bad number in column {}", REPORT_HEADER[j]),
                })
        };
        let status_text = field(10);
        let status = if status_text == "ok" {
            RowStatus::Ok
        } else {
            RowStatus::Error(
                status_text
                    .strip_prefix("error: ")
                    .unwrap_or(&status_text)
                    .to_string(),
            )
        };
        let noise_level = parse_f64(3)?;
        let repetition = field(4).parse().unwrap_or(0);
        let record_opt = if matches!(status, RowStatus::Ok) {
            Some(EvalRecord {
                log: field(0),
                technique: field(1),
                clusterer: field(2),
                noise_level,
                repetition,
                jc: parse_f64(5)?,
                fitness: parse_f64(6)?,
                empty_pct: parse_f64(7)?,
                n_clusters: field(8).parse().unwrap_or(0),
                runtime_ms: field(9).parse().unwrap_or(0),
            })
        } else {
            None
        };
        rows.push(ReportRow {
            log: field(0),
            technique: field(1),
            clusterer: field(2),
            noise_level,
            repetition,
            record: record_opt,
            status,
        });
    }
    Ok(rows)
}
