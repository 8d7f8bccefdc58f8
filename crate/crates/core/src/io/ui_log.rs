//! UI log CSV reading and writing.

use std::path::Path;

use crate::error::{CoreError, Result};
use crate::model::{ActionAlphabet, ActionId, RoutineExecution, UILog};

/// Ground-truth grouping induced by a `case` column: executions in
/// first-occurrence order of their case ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthGrouping {
    pub case_ids: Vec<String>,
    pub executions: Vec<RoutineExecution>,
}

/// A parsed UI log file.
#[derive(Debug, Clone)]
pub struct UILogData {
    pub log: UILog,
    pub alphabet: ActionAlphabet,
    pub ground_truth: Option<GroundTruthGrouping>,
}

/// Reads a UI log. When `frozen` is given, every label must already be in
/// that alphabet; otherwise the alphabet is built in row order.
pub fn read_ui_log(path: impl AsRef<Path>, frozen: Option<&ActionAlphabet>) -> Result<UILogData> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| CoreError::csv(path, e))?;
    let headers = reader
        .headers()
        .map_err(|e| CoreError::csv(path, e))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let action_col = col("action").ok_or_else(|| CoreError::MissingColumn {
        file: path.display().to_string(),
        column: "action".into(),
    })?;
    let case_col = col("case");

    let mut alphabet = match frozen {
        Some(a) => a.clone(),
        None => ActionAlphabet::empty(),
    };
    let mut actions: Vec<ActionId> = Vec::new();
    let mut cases: Vec<String> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header
        let record = record.map_err(|e| CoreError::MalformedRow {
            file: path.display().to_string(),
            row,
            msg: e.to_string(),
        })?;
        let label = record.get(action_col).ok_or_else(|| CoreError::MalformedRow {
            file: path.display().to_string(),
            row,
            msg: "missing action field".into(),
        })?;
        if label.is_empty() {
            return Err(CoreError::MalformedRow {
                file: path.display().to_string(),
                row,
                msg: "empty action label".into(),
            });
        }
        let id = match frozen {
            Some(_) => alphabet.require(label)?,
            None => alphabet.intern(label.to_string()),
        };
        actions.push(id);
        if let Some(c) = case_col {
            cases.push(record.get(c).unwrap_or("").to_string());
        }
    }

    let ground_truth = case_col.map(|_| {
        let mut order: Vec<String> = Vec::new();
        let mut grouped: std::collections::HashMap<String, Vec<ActionId>> = Default::default();
        for (case, &action) in cases.iter().zip(&actions) {
            if !grouped.contains_key(case) {
                order.push(case.clone());
            }
            grouped.entry(case.clone()).or_default().push(action);
        }
        GroundTruthGrouping {
            executions: order
                .iter()
                .map(|c| RoutineExecution::new(grouped[c].clone()))
                .collect(),
            case_ids: order,
        }
    });

    Ok(UILogData {
        log: UILog::new(actions),
        alphabet,
        ground_truth,
    })
}

/// Writes a UI log; `cases` (when given) must be one id per action. The
/// timestamp column carries the row ordinal so output is deterministic.
pub fn write_ui_log(
    path: impl AsRef<Path>,
    log: &UILog,
    alphabet: &ActionAlphabet,
    cases: Option<&[String]>,
) -> Result<()> {
    let path = path.as_ref();
    if let Some(cases) = cases {
        if cases.len() != log.len() {
            return Err(CoreError::InvalidBenchmark(format!(
                "{} case ids for {} actions",
                cases.len(),
                log.len()
            )));
        }
    }
    let mut writer = csv::Writer::from_path(path).map_err(|e| CoreError::csv(path, e))?;
    let header: &[&str] = if cases.is_some() {
        &["timestamp", "user", "action", "case"]
    } else {
        &["timestamp", "user", "action"]
    };
    writer
        .write_record(header)
        .map_err(|e| CoreError::csv(path, e))?;
    for (i, &a) in log.actions().iter().enumerate() {
        let ts = i.to_string();
        let label = alphabet.label(a);
        let record: Vec<&str> = match cases {
            Some(cases) => vec![&ts, "user", label, &cases[i]],
            None => vec![&ts, "user", label],
        };
        writer
            .write_record(&record)
            .map_err(|e| CoreError::csv(path, e))?;
    }
    writer.flush().map_err(|e| CoreError::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_alphabet;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_actions_in_row_order() {
        let f = write_tmp("timestamp,user,action\n1,u,a\n2,u,b\n3,u,save\n");
        let data = read_ui_log(f.path(), None).unwrap();
        assert_eq!(data.alphabet.labels(), &["a", "b", "save"]);
        assert_eq!(
            data.log.actions(),
            &[ActionId(0), ActionId(1), ActionId(2)]
        );
        assert!(data.ground_truth.is_none());
    }

    #[test]
    fn empty_data_section_is_a_zero_length_log() {
        let f = write_tmp("timestamp,user,action\n");
        let data = read_ui_log(f.path(), None).unwrap();
        assert_eq!(data.log.len(), 0);
    }

    #[test]
    fn case_column_induces_ground_truth_grouping() {
        let f = write_tmp("action,case\na,1\nsave,1\nb,2\nsave,2\n");
        let data = read_ui_log(f.path(), None).unwrap();
        let gt = data.ground_truth.unwrap();
        assert_eq!(gt.case_ids, vec!["1", "2"]);
        assert_eq!(gt.executions[0].actions().len(), 2);
        assert_eq!(gt.executions[1].actions().len(), 2);
        assert_eq!(
            gt.executions[0].actions(),
            &[data.alphabet.id("a").unwrap(), data.alphabet.id("save").unwrap()]
        );
    }

    #[test]
    fn missing_action_column_errors() {
        let f = write_tmp("timestamp,user\n1,u\n");
        assert!(matches!(
            read_ui_log(f.path(), None),
            Err(CoreError::MissingColumn { .. })
        ));
    }

    #[test]
    fn unknown_label_with_frozen_alphabet_errors() {
        let f = write_tmp("action\na\nzzz\n");
        let frozen = build_alphabet(&["a", "b"]).unwrap();
        assert!(matches!(
            read_ui_log(f.path(), Some(&frozen)),
            Err(CoreError::UnknownLabel(l)) if l == "zzz"
        ));
    }

    #[test]
    fn malformed_row_reports_row_number() {
        let f = write_tmp("timestamp,user,action\n1,u,a\n2,u\n");
        let err = read_ui_log(f.path(), None).unwrap_err();
        match err {
            CoreError::MalformedRow { row, .. } => assert_eq!(row, 3),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn quoted_fields_round_trip() {
        let alphabet = build_alphabet(&["click \"save\"", "copy, paste"]).unwrap();
        let log = UILog::new(vec![ActionId(0), ActionId(1), ActionId(0)]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.csv");
        write_ui_log(&path, &log, &alphabet, None).unwrap();
        let data = read_ui_log(&path, None).unwrap();
        assert_eq!(data.alphabet.labels(), alphabet.labels());
        assert_eq!(data.log, log);
    }

    #[test]
    fn write_then_read_reproduces_sequence_with_cases() {
        let alphabet = build_alphabet(&["a", "b", "F"]).unwrap();
        let log = UILog::new(vec![ActionId(0), ActionId(2), ActionId(1), ActionId(2)]);
        let cases = vec!["e0".into(), "e0".into(), "e1".into(), "e1".into()];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.csv");
        write_ui_log(&path, &log, &alphabet, Some(&cases)).unwrap();
        let data = read_ui_log(&path, Some(&alphabet)).unwrap();
        assert_eq!(data.log, log);
        let gt = data.ground_truth.unwrap();
        assert_eq!(gt.case_ids, vec!["e0", "e1"]);
    }
}
