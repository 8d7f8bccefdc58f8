//! On-disk layout of a generated benchmark: the UI log CSV (with a hidden
//! `case` column carrying ground truth), one PNML file per ground-truth
//! model, the action-set JSON, and a manifest naming them all plus the
//! completion set and seeds.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::experiment::ExperimentInput;
use crate::generator::{BenchmarkSpec, GeneratedBenchmark};
use crate::io::{read_action_sets, read_pnml, read_ui_log, write_action_sets, write_pnml, write_ui_log};
use crate::metrics::ModelSet;
use crate::model::{ActionAlphabet, CompletionSet};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkManifest {
    pub name: String,
    pub ui_log: String,
    pub models: Vec<String>,
    pub model_names: Vec<String>,
    pub action_sets: String,
    pub completion_set: Vec<String>,
    pub seed: u64,
    pub executions_per_type: usize,
}

/// Writes the benchmark files into `dir` and returns the manifest.
pub fn write_benchmark(
    dir: impl AsRef<Path>,
    name: &str,
    benchmark: &GeneratedBenchmark,
    spec: &BenchmarkSpec,
) -> Result<BenchmarkManifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir.join("models")).map_err(|e| CoreError::io(dir, e))?;

    // Ground-truth case ids: type and running execution ordinal.
    let mut cases = Vec::with_capacity(benchmark.log.len());
    for (i, (exec, &type_id)) in benchmark
        .executions
        .iter()
        .zip(&benchmark.truth_types)
        .enumerate()
    {
        let case = format!("t{type_id}_e{i}");
        cases.extend(std::iter::repeat_n(case, exec.len()));
    }
    write_ui_log(
        dir.join("ui_log.csv"),
        &benchmark.log,
        &benchmark.alphabet,
        Some(&cases),
    )?;

    let mut model_files = Vec::new();
    let mut model_names = Vec::new();
    for (i, (model_name, net)) in benchmark.models.models.iter().enumerate() {
        let file = format!("models/model_{i:02}.pnml");
        write_pnml(dir.join(&file), net)?;
        model_files.push(file);
        model_names.push(model_name.clone());
    }

    write_action_sets(
        dir.join("action_sets.json"),
        &benchmark.action_sets,
        &benchmark.alphabet,
    )?;

    let manifest = BenchmarkManifest {
        name: name.to_string(),
        ui_log: "ui_log.csv".into(),
        models: model_files,
        model_names,
        action_sets: "action_sets.json".into(),
        completion_set: benchmark
            .completion_set
            .members()
            .map(|a| benchmark.alphabet.label(a).to_string())
            .collect(),
        seed: spec.shuffle_seed,
        executions_per_type: spec.executions_per_type,
    };
    let path = dir.join("manifest.json");
    let text =
        serde_json::to_string_pretty(&manifest).map_err(|e| CoreError::json(&path, e))?;
    std::fs::write(&path, text).map_err(|e| CoreError::io(&path, e))?;
    Ok(manifest)
}

pub fn read_manifest(dir: impl AsRef<Path>) -> Result<BenchmarkManifest> {
    let path = dir.as_ref().join("manifest.json");
    let text = std::fs::read_to_string(&path).map_err(|e| CoreError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CoreError::json(&path, e))
}

/// Loads a benchmark directory back into an experiment input. The alphabet
/// starts from the UI log in row order and extends with any action-set,
/// model, or completion labels the log happens not to contain.
pub fn read_benchmark(dir: impl AsRef<Path>) -> Result<ExperimentInput> {
    let dir = dir.as_ref();
    let manifest = read_manifest(dir)?;
    let data = read_ui_log(dir.join(&manifest.ui_log), None)?;
    let mut alphabet: ActionAlphabet = data.alphabet;

    let mut models = Vec::new();
    for (file, name) in manifest.models.iter().zip(&manifest.model_names) {
        let net = read_pnml(dir.join(file))?;
        for label in net.visible_labels() {
            alphabet.intern(label.to_string());
        }
        models.push((name.clone(), net));
    }
    for label in &manifest.completion_set {
        alphabet.intern(label.clone());
    }
    // Raw scan so unseen labels extend the alphabet before strict parsing.
    let sets_path = dir.join(&manifest.action_sets);
    let raw: serde_json::Map<String, serde_json::Value> = serde_json::from_str(
        &std::fs::read_to_string(&sets_path).map_err(|e| CoreError::io(&sets_path, e))?,
    )
    .map_err(|e| CoreError::json(&sets_path, e))?;
    for labels in raw.values() {
        if let Some(arr) = labels.as_array() {
            for l in arr {
                if let Some(s) = l.as_str() {
                    alphabet.intern(s.to_string());
                }
            }
        }
    }

    let action_sets = read_action_sets(&sets_path, &alphabet)?;
    let completion = CompletionSet::from_labels(&manifest.completion_set, &alphabet)?;
    Ok(ExperimentInput {
        name: manifest.name,
        log: data.log,
        alphabet,
        completion,
        action_sets,
        models: ModelSet { models },
    })
}
