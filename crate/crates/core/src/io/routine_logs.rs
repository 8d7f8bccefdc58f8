//! Routine-log export: one CSV per cluster with synthetic case ids, plus a
//! manifest that records empty clusters. An XES-compatible XML export is
//! available for downstream discovery tools.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::model::{ActionAlphabet, ClusterSet, RoutineExecution, RoutineLog};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoutineLogManifestEntry {
    pub cluster: usize,
    pub file: String,
    pub executions: usize,
    pub empty: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoutineLogManifest {
    pub logs: Vec<RoutineLogManifestEntry>,
}

/// Writes one `cluster_NNN.csv` per routine log (columns `case,action`)
/// and a `routine_logs.json` manifest. Case ids are
/// `c<cluster>_e<running counter>`.
pub fn write_routine_logs(
    clusters: &ClusterSet,
    alphabet: &ActionAlphabet,
    dir: impl AsRef<Path>,
) -> Result<RoutineLogManifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| CoreError::io(dir, e))?;
    let mut entries = Vec::new();
    for (c, log) in clusters.logs().iter().enumerate() {
        let file = format!("cluster_{c:03}.csv");
        let path = dir.join(&file);
        let mut writer = csv::Writer::from_path(&path).map_err(|e| CoreError::csv(&path, e))?;
        writer
            .write_record(["case", "action"])
            .map_err(|e| CoreError::csv(&path, e))?;
        for (e, exec) in log.executions().iter().enumerate() {
            let case = format!("c{c}_e{e}");
            for &a in exec.actions() {
                writer
                    .write_record([case.as_str(), alphabet.label(a)])
                    .map_err(|e| CoreError::csv(&path, e))?;
            }
        }
        writer.flush().map_err(|e| CoreError::io(&path, e))?;
        entries.push(RoutineLogManifestEntry {
            cluster: c,
            file,
            executions: log.len(),
            empty: log.is_empty(),
        });
    }
    let manifest = RoutineLogManifest { logs: entries };
    let manifest_path = dir.join("routine_logs.json");
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CoreError::json(&manifest_path, e))?;
    std::fs::write(&manifest_path, text).map_err(|e| CoreError::io(&manifest_path, e))?;
    Ok(manifest)
}

/// Reads one routine-log CSV written by [`write_routine_logs`] back into a
/// [`RoutineLog`], grouping rows by case id in first-occurrence order.
pub fn read_routine_log(path: impl AsRef<Path>, alphabet: &ActionAlphabet) -> Result<RoutineLog> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| CoreError::csv(path, e))?;
    let headers = reader.headers().map_err(|e| CoreError::csv(path, e))?.clone();
    let case_col = headers
        .iter()
        .position(|h| h == "case")
        .ok_or_else(|| CoreError::MissingColumn {
            file: path.display().to_string(),
            column: "case".into(),
        })?;
    let action_col = headers
        .iter()
        .position(|h| h == "action")
        .ok_or_else(|| CoreError::MissingColumn {
            file: path.display().to_string(),
            column: "action".into(),
        })?;
    let mut order: Vec<String> = Vec::new();
    let mut grouped: std::collections::HashMap<String, Vec<crate::model::ActionId>> =
        Default::default();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CoreError::MalformedRow {
            file: path.display().to_string(),
            row: i + 2,
            msg: e.to_string(),
        })?;
        let case = record.get(case_col).unwrap_or("").to_string();
        let label = record.get(action_col).unwrap_or("");
        let id = alphabet.require(label)?;
        if !grouped.contains_key(&case) {
            order.push(case.clone());
        }
        grouped.entry(case).or_default().push(id);
    }
    Ok(RoutineLog::new(
        order
            .into_iter()
            .map(|c| RoutineExecution::new(grouped.remove(&c).unwrap()))
            .collect(),
    ))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// XES export, one `cluster_NNN.xes` per routine log.
pub fn write_routine_logs_xes(
    clusters: &ClusterSet,
    alphabet: &ActionAlphabet,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| CoreError::io(dir, e))?;
    let mut paths = Vec::new();
    for (c, log) in clusters.logs().iter().enumerate() {
        let path = dir.join(format!("cluster_{c:03}.xes"));
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        out.push_str("<log xes.version=\"1.0\" xmlns=\"http://www.xes-standard.org/\">\n");
        for (e, exec) in log.executions().iter().enumerate() {
            out.push_str("  <trace>\n");
            out.push_str(&format!(
                "    <string key=\"concept:name\" value=\"c{c}_e{e}\"/>\n"
            ));
            for &a in exec.actions() {
                out.push_str(&format!(
                    "    <event><string key=\"concept:name\" value=\"{}\"/></event>\n",
                    xml_escape(alphabet.label(a))
                ));
            }
            out.push_str("  </trace>\n");
        }
        out.push_str("</log>\n");
        std::fs::write(&path, out).map_err(|e| CoreError::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
