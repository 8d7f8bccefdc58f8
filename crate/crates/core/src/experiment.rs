//! Orchestration of the full pipeline and the noise-sweep experiment
//! protocol: noise levels crossed with repetitions, clusterers, and
//! baseline adapters, producing a report CSV and plot-ready aggregates.
//!
//! Noise is injected once per (log, level, repetition) and the identical
//! noisy log is fed to every technique. All sub-seeds derive from the
//! master seed and the grid coordinates, so runs are reproducible and
//! adding a technique never perturbs another technique's noise streams.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{to_cluster_set, ClusterMethod, ClusteringConfig, NoisePolicy};
use crate::encoding::encode;
use crate::error::{CoreError, Result};
use crate::generator::GeneratedBenchmark;
use crate::io::{write_report, ReportRow, RowStatus};
use crate::metrics::{
    baseline_assign, empty_log_pct, fitness, jaccard_coefficient, EvalRecord,
    GroundTruthActionSets, ModelSet,
};
use crate::model::{ActionAlphabet, ActionId, ClusterSet, CompletionSet, UILog};
use crate::noise::{inject_log, NoiseConfig};
use crate::seeds::{derive_seed, name_coord};
use crate::segmentation::{segment, Segmentation};

/// One evaluation subject: a UI log with its ground truth.
#[derive(Debug, Clone)]
pub struct ExperimentInput {
    pub name: String,
    pub log: UILog,
    pub alphabet: ActionAlphabet,
    pub completion: CompletionSet,
    pub action_sets: GroundTruthActionSets,
    pub models: ModelSet,
}

impl ExperimentInput {
    pub fn from_benchmark(name: impl Into<String>, benchmark: &GeneratedBenchmark) -> Self {
        ExperimentInput {
            name: name.into(),
            log: benchmark.log.clone(),
            alphabet: benchmark.alphabet.clone(),
            completion: benchmark.completion_set.clone(),
            action_sets: benchmark.action_sets.clone(),
            models: benchmark.models.clone(),
        }
    }
}

/// The experiment grid.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub inputs: Vec<ExperimentInput>,
    /// Noise levels; level 0 runs once regardless of `repetitions`.
    pub noise_levels: Vec<f64>,
    /// Repetitions per nonzero level.
    pub repetitions: usize,
    pub clusterers: Vec<(ClusterMethod, NoisePolicy)>,
    /// Named action-set collections fed to the post-hoc baseline adapter.
    pub baselines: Vec<(String, GroundTruthActionSets)>,
    pub master_seed: u64,
    pub preserve_finals: bool,
    pub insert_pool_includes_finals: bool,
    /// Record wall-clock runtimes per row. Off by default: wall time is
    /// not reproducible, and the default report must be byte-identical
    /// across runs with the same master seed.
    pub record_runtime: bool,
}

pub const DEFAULT_NOISE_LEVELS: [f64; 5] = [0.0, 0.1, 0.2, 0.3, 0.4];
pub const DEFAULT_REPETITIONS: usize = 10;

impl ExperimentPlan {
    pub fn new(inputs: Vec<ExperimentInput>, master_seed: u64) -> Self {
        ExperimentPlan {
            inputs,
            noise_levels: DEFAULT_NOISE_LEVELS.to_vec(),
            repetitions: DEFAULT_REPETITIONS,
            clusterers: vec![
                (ClusterMethod::KMeans { k: None }, NoisePolicy::NearestCentroid),
                (ClusterMethod::default_dbscan(), NoisePolicy::NearestCentroid),
                (ClusterMethod::default_hdbscan(), NoisePolicy::NearestCentroid),
            ],
            baselines: Vec::new(),
            master_seed,
            preserve_finals: true,
            insert_pool_includes_finals: false,
            record_runtime: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(CoreError::InvalidPlan("no input logs".into()));
        }
        if self.noise_levels.is_empty() {
            return Err(CoreError::InvalidPlan("no noise levels".into()));
        }
        for &l in &self.noise_levels {
            if !(0.0..=1.0).contains(&l) || l.is_nan() {
                return Err(CoreError::InvalidPlan(format!(
                    "noise level {l} outside [0, 1]"
                )));
            }
        }
        if self.repetitions == 0 {
            return Err(CoreError::InvalidPlan("repetitions must be >= 1".into()));
        }
        if self.clusterers.is_empty() && self.baselines.is_empty() {
            return Err(CoreError::InvalidPlan("no techniques to run".into()));
        }
        Ok(())
    }

    /// Expected number of report rows.
    pub fn row_count(&self) -> usize {
        let techniques = self.clusterers.len() + self.baselines.len();
        let runs_per_log: usize = self
            .noise_levels
            .iter()
            .map(|&l| if l == 0.0 { 1 } else { self.repetitions })
            .sum();
        self.inputs.len() * runs_per_log * techniques
    }
}

/// Output of one pipeline run: the segmentation and the extracted cluster
/// set (zero clusters for an empty log).
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub segmentation: Segmentation,
    pub clusters: ClusterSet,
}

/// The full extraction pipeline: segment, encode, cluster, collect.
/// `k_default` is used for K-Means when the config leaves k open; in
/// evaluation runs it is the number of ground-truth routine types.
pub fn run_pipeline(
    log: &UILog,
    completion: &CompletionSet,
    alphabet: &ActionAlphabet,
    config: &ClusteringConfig,
    k_default: usize,
) -> Result<PipelineOutput> {
    let segmentation = segment(log, completion);
    if segmentation.segments.is_empty() {
        let clusters = ClusterSet::from_assignment(&segmentation.segments, Vec::new(), 0)?;
        return Ok(PipelineOutput {
            segmentation,
            clusters,
        });
    }
    let matrix = encode(&segmentation.segments, alphabet)?;
    let labeling = config.run(&matrix, k_default)?;
    let clusters = to_cluster_set(&labeling, &segmentation.segments)?;
    Ok(PipelineOutput {
        segmentation,
        clusters,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MeanOnly {
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AggregateCell {
    pub jc: Aggregate,
    pub fitness: Aggregate,
    pub empty_pct: MeanOnly,
    /// Fraction of grid rows that completed without error.
    pub coverage: f64,
}

/// technique -> noise level -> aggregate metrics.
pub type Aggregates = BTreeMap<String, BTreeMap<String, AggregateCell>>;

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    pub aggregates: Aggregates,
}

enum Technique<'a> {
    Ours {
        method: &'a ClusterMethod,
        policy: NoisePolicy,
    },
    Baseline {
        name: &'a str,
        sets: &'a GroundTruthActionSets,
    },
}

impl Technique<'_> {
    fn names(&self) -> (String, String) {
        match self {
            Technique::Ours { method, .. } => ("ours".into(), method.name().into()),
            Technique::Baseline { name, .. } => ("baseline".into(), (*name).into()),
        }
    }
}

/// Runs the whole grid. Rows come back sorted by grid coordinates
/// (input, level, repetition, technique), not completion time.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;

    // Grid cells: one noisy log each, shared by all techniques.
    let mut cells = Vec::new();
    for (input_idx, _) in plan.inputs.iter().enumerate() {
        for &level in &plan.noise_levels {
            let reps = if level == 0.0 { 1 } else { plan.repetitions };
            for rep in 0..reps {
                cells.push((input_idx, level, rep));
            }
        }
    }

    let rows: Vec<Vec<ReportRow>> = cells
        .par_iter()
        .map(|&(input_idx, level, rep)| run_cell(plan, input_idx, level, rep))
        .collect();
    let rows: Vec<ReportRow> = rows.into_iter().flatten().collect();
    let aggregates = aggregate(&rows);
    Ok(ExperimentReport { rows, aggregates })
}

/// Runs the experiment and writes `report.csv`, `aggregate.json`, and a
/// `run_meta.json` documenting the metric conventions and seeds.
pub fn run_experiment_to_dir(plan: &ExperimentPlan, out_dir: impl AsRef<Path>) -> Result<ExperimentReport> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir).map_err(|e| CoreError::io(out_dir, e))?;
    let report = run_experiment(plan)?;
    write_report(out_dir.join("report.csv"), &report.rows)?;
    let json_path = out_dir.join("aggregate.json");
    let text = serde_json::to_string_pretty(&report.aggregates)
        .map_err(|e| CoreError::json(&json_path, e))?;
    std::fs::write(&json_path, text).map_err(|e| CoreError::io(&json_path, e))?;
    let meta_path = out_dir.join("run_meta.json");
    let meta = serde_json::json!({
        "master_seed": plan.master_seed,
        "noise_levels": plan.noise_levels,
        "repetitions_per_nonzero_level": plan.repetitions,
        "preserve_finals": plan.preserve_finals,
        "insert_pool_includes_finals": plan.insert_pool_includes_finals,
        "jc_includes_empty_clusters_as_zero": true,
        "fitness_excludes_empty_logs": true,
        "alignment_costs": {"sync": 0, "silent": 0, "log": 1, "visible_model": 1},
        "runtime_recorded": plan.record_runtime,
    });
    let text = serde_json::to_string_pretty(&meta).map_err(|e| CoreError::json(&meta_path, e))?;
    std::fs::write(&meta_path, text).map_err(|e| CoreError::io(&meta_path, e))?;
    Ok(report)
}

fn run_cell(plan: &ExperimentPlan, input_idx: usize, level: f64, rep: usize) -> Vec<ReportRow> {
    let input = &plan.inputs[input_idx];
    let log_coord = name_coord(&input.name);

    // Segment the clean log, perturb each segment, re-concatenate. The
    // remainder (if any) is appended unchanged.
    let base = segment(&input.log, &input.completion);
    let insert_pool: Vec<ActionId> = input
        .alphabet
        .ids()
        .filter(|&a| plan.insert_pool_includes_finals || !input.completion.contains(a))
        .collect();
    let noise_cfg = NoiseConfig {
        level,
        seed: derive_seed(plan.master_seed, &[0, log_coord, level.to_bits(), rep as u64]),
        insert_pool,
        preserve_finals: plan.preserve_finals,
    };
    let noisy = match inject_log(&base.segments, &noise_cfg) {
        Ok(n) => n,
        Err(e) => {
            // Noise failure poisons the whole cell.
            return all_techniques(plan)
                .map(|t| {
                    let (technique, clusterer) = t.names();
                    ReportRow {
                        log: input.name.clone(),
                        technique,
                        clusterer,
                        noise_level: level,
                        repetition: rep,
                        record: None,
                        status: RowStatus::Error(e.to_string()),
                    }
                })
                .collect();
        }
    };
    let mut noisy_actions: Vec<ActionId> = noisy
        .iter()
        .flat_map(|e| e.actions().iter().copied())
        .collect();
    noisy_actions.extend(base.remainder.iter().copied());
    let noisy_log = UILog::new(noisy_actions);

    all_techniques(plan)
        .map(|t| run_technique(plan, input, &noisy_log, &t, level, rep, log_coord))
        .collect()
}

fn all_techniques<'a>(plan: &'a ExperimentPlan) -> impl Iterator<Item = Technique<'a>> {
    plan.clusterers
        .iter()
        .map(|(method, policy)| Technique::Ours {
            method,
            policy: *policy,
        })
        .chain(plan.baselines.iter().map(|(name, sets)| Technique::Baseline {
            name,
            sets,
        }))
}

fn run_technique(
    plan: &ExperimentPlan,
    input: &ExperimentInput,
    noisy_log: &UILog,
    technique: &Technique,
    level: f64,
    rep: usize,
    log_coord: u64,
) -> ReportRow {
    let (technique_name, clusterer_name) = technique.names();
    let started = Instant::now();
    let outcome = (|| -> Result<(ClusterSet, usize)> {
        match technique {
            Technique::Ours { method, policy } => {
                let seed = derive_seed(
                    plan.master_seed,
                    &[
                        1,
                        log_coord,
                        level.to_bits(),
                        rep as u64,
                        name_coord(&clusterer_name),
                    ],
                );
                let config = ClusteringConfig {
                    method: (*method).clone(),
                    seed,
                    noise_policy: *policy,
                };
                let out = run_pipeline(
                    noisy_log,
                    &input.completion,
                    &input.alphabet,
                    &config,
                    input.models.len(),
                )?;
                Ok((out.clusters, out.segmentation.remainder.len()))
            }
            Technique::Baseline { sets, .. } => {
                let seg = segment(noisy_log, &input.completion);
                let clusters = baseline_assign(&seg.segments, sets, &input.alphabet)?;
                Ok((clusters, seg.remainder.len()))
            }
        }
    })();

    match outcome.and_then(|(clusters, _)| {
        let jc = jaccard_coefficient(&clusters, &input.action_sets)?;
        let (fit, _excluded) = fitness(&clusters, &input.models, &input.alphabet)?;
        let empty = empty_log_pct(&clusters)?;
        Ok(EvalRecord {
            log: input.name.clone(),
            technique: technique_name.clone(),
            clusterer: clusterer_name.clone(),
            noise_level: level,
            repetition: rep,
            jc,
            fitness: fit,
            empty_pct: empty,
            n_clusters: clusters.n_clusters(),
            runtime_ms: if plan.record_runtime {
                started.elapsed().as_millis() as u64
            } else {
                0
            },
        })
    }) {
        Ok(record) => ReportRow {
            log: input.name.clone(),
            technique: technique_name,
            clusterer: clusterer_name,
            noise_level: level,
            repetition: rep,
            record: Some(record),
            status: RowStatus::Ok,
        },
        Err(e) => ReportRow {
            log: input.name.clone(),
            technique: technique_name,
            clusterer: clusterer_name,
            noise_level: level,
            repetition: rep,
            record: None,
            status: RowStatus::Error(e.to_string()),
        },
    }
}

fn mean_std(values: &[f64]) -> Aggregate {
    if values.is_empty() {
        return Aggregate {
            mean: f64::NAN,
            std: f64::NAN,
        };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Aggregate {
        mean,
        std: var.sqrt(),
    }
}

/// Means and population standard deviations per (technique, level) across
/// logs and repetitions. Failed rows are excluded and reflected in the
/// coverage fraction.
pub fn aggregate(rows: &[ReportRow]) -> Aggregates {
    let mut grouped: BTreeMap<String, BTreeMap<String, Vec<&ReportRow>>> = BTreeMap::new();
    for row in rows {
        grouped
            .entry(format!("{}/{}", row.technique, row.clusterer))
            .or_default()
            .entry(row.noise_level.to_string())
            .or_default()
            .push(row);
    }
    grouped
        .into_iter()
        .map(|(technique, by_level)| {
            let cells = by_level
                .into_iter()
                .map(|(level, rows)| {
                    let ok: Vec<&EvalRecord> =
                        rows.iter().filter_map(|r| r.record.as_ref()).collect();
                    let jc: Vec<f64> = ok.iter().map(|r| r.jc).collect();
                    let fit: Vec<f64> = ok.iter().map(|r| r.fitness).collect();
                    let empty: Vec<f64> = ok.iter().map(|r| r.empty_pct).collect();
                    let cell = AggregateCell {
                        jc: mean_std(&jc),
                        fitness: mean_std(&fit),
                        empty_pct: MeanOnly {
                            mean: mean_std(&empty).mean,
                        },
                        coverage: ok.len() as f64 / rows.len() as f64,
                    };
                    (level, cell)
                })
                .collect();
            (technique, cells)
        })
        .collect()
}

/// One row of the plot-ready per-metric tables.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRow {
    pub technique: String,
    pub clusterer: String,
    pub noise_level: f64,
    pub mean: f64,
    pub std: f64,
    pub coverage: f64,
}

/// Per-metric plot tables (jc, fitness, empty_pct), one row per
/// technique and level, sorted by (technique, clusterer, level).
pub fn emit_plot_data(rows: &[ReportRow]) -> BTreeMap<&'static str, Vec<PlotRow>> {
    let mut keys: Vec<(String, String, f64)> = Vec::new();
    for row in rows {
        let key = (row.technique.clone(), row.clusterer.clone(), row.noise_level);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.partial_cmp(&b.2).expect("levels are finite"))
    });

    let mut out: BTreeMap<&'static str, Vec<PlotRow>> = BTreeMap::new();
    for metric in ["jc", "fitness", "empty_pct"] {
        let table = keys
            .iter()
            .map(|(technique, clusterer, level)| {
                let matching: Vec<&ReportRow> = rows
                    .iter()
                    .filter(|r| {
                        r.technique == *technique
                            && r.clusterer == *clusterer
                            && r.noise_level == *level
                    })
                    .collect();
                let ok: Vec<f64> = matching
                    .iter()
                    .filter_map(|r| r.record.as_ref())
                    .map(|rec| match metric {
                        "jc" => rec.jc,
                        "fitness" => rec.fitness,
                        _ => rec.empty_pct,
                    })
                    .collect();
                let stats = mean_std(&ok);
                PlotRow {
                    technique: technique.clone(),
                    clusterer: clusterer.clone(),
                    noise_level: *level,
                    mean: stats.mean,
                    std: stats.std,
                    coverage: ok.len() as f64 / matching.len() as f64,
                }
            })
            .collect();
        out.insert(metric, table);
    }
    out
}

/// Writes `plot_<metric>.csv` files into `dir`.
pub fn write_plot_data(
    dir: impl AsRef<Path>,
    tables: &BTreeMap<&'static str, Vec<PlotRow>>,
) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| CoreError::io(dir, e))?;
    for (metric, rows) in tables {
        let path = dir.join(format!("plot_{metric}.csv"));
        let mut writer = csv::Writer::from_path(&path).map_err(|e| CoreError::csv(&path, e))?;
        writer
            .write_record(["technique", "clusterer", "noise_level", "mean", "stddev", "coverage"])
            .map_err(|e| CoreError::csv(&path, e))?;
        for r in rows {
            writer
                .write_record([
                    r.technique.as_str(),
                    r.clusterer.as_str(),
                    &r.noise_level.to_string(),
                    &r.mean.to_string(),
                    &r.std.to_string(),
                    &r.coverage.to_string(),
                ])
                .map_err(|e| CoreError::csv(&path, e))?;
        }
        writer.flush().map_err(|e| CoreError::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{build_ui_log, synthetic_benchmark};

    fn small_plan() -> ExperimentPlan {
        let spec = synthetic_benchmark(2, 3, 8, 5).unwrap();
        let benchmark = build_ui_log(&spec).unwrap();
        let input = ExperimentInput::from_benchmark("bench", &benchmark);
        let mut plan = ExperimentPlan::new(vec![input], 42);
        plan.noise_levels = vec![0.0, 0.2];
        plan.repetitions = 2;
        plan
    }

    #[test]
    fn row_count_matches_contract() {
        let plan = small_plan();
        // 1 log x 3 techniques x (1 + 1 level x 2 reps) = 9.
        assert_eq!(plan.row_count(), 9);
        let report = run_experiment(&plan).unwrap();
        assert_eq!(report.rows.len(), 9);
    }

    #[test]
    fn noiseless_run_on_clean_benchmark_is_perfect() {
        let mut plan = small_plan();
        plan.noise_levels = vec![0.0];
        let report = run_experiment(&plan).unwrap();
        for row in &report.rows {
            let record = row.record.as_ref().expect("row failed");
            assert_eq!(record.jc, 1.0, "{}", row.clusterer);
            assert_eq!(record.fitness, 1.0, "{}", row.clusterer);
            assert_eq!(record.empty_pct, 0.0);
        }
    }

    #[test]
    fn identical_seeds_identical_rows() {
        let plan = small_plan();
        let a = run_experiment(&plan).unwrap();
        let b = run_experiment(&plan).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.aggregates, b.aggregates);
    }

    #[test]
    fn different_master_seed_changes_noisy_results() {
        let mut plan = small_plan();
        let a = run_experiment(&plan).unwrap();
        plan.master_seed = 43;
        let b = run_experiment(&plan).unwrap();
        // Level-0 rows agree; at least one noisy row differs.
        let noisy_differs = a
            .rows
            .iter()
            .zip(&b.rows)
            .filter(|(ra, _)| ra.noise_level > 0.0)
            .any(|(ra, rb)| ra.record != rb.record);
        assert!(noisy_differs);
    }

    #[test]
    fn aggregates_recompute_from_rows() {
        let plan = small_plan();
        let report = run_experiment(&plan).unwrap();
        let key = "ours/kmeans";
        let cell = &report.aggregates[key]["0.2"];
        let manual: Vec<f64> = report
            .rows
            .iter()
            .filter(|r| r.technique == "ours" && r.clusterer == "kmeans" && r.noise_level == 0.2)
            .filter_map(|r| r.record.as_ref().map(|rec| rec.jc))
            .collect();
        assert_eq!(manual.len(), 2);
        let mean = manual.iter().sum::<f64>() / manual.len() as f64;
        assert!((cell.jc.mean - mean).abs() < 1e-12);
        assert_eq!(cell.coverage, 1.0);
    }

    #[test]
    fn plot_data_has_one_row_per_technique_level() {
        let plan = small_plan();
        let report = run_experiment(&plan).unwrap();
        let tables = emit_plot_data(&report.rows);
        // 3 techniques x 2 levels.
        assert_eq!(tables["jc"].len(), 6);
        assert_eq!(tables["fitness"].len(), 6);
        // Single repetition at level 0 -> stddev 0.
        let zero_rows: Vec<&PlotRow> = tables["jc"]
            .iter()
            .filter(|r| r.noise_level == 0.0)
            .collect();
        assert!(zero_rows.iter().all(|r| r.std == 0.0));
    }

    #[test]
    fn failed_rows_are_excluded_from_plot_means_via_coverage() {
        let ok = |jc: f64| ReportRow {
            log: "l".into(),
            technique: "ours".into(),
            clusterer: "kmeans".into(),
            noise_level: 0.1,
            repetition: 0,
            record: Some(crate::metrics::EvalRecord {
                log: "l".into(),
                technique: "ours".into(),
                clusterer: "kmeans".into(),
                noise_level: 0.1,
                repetition: 0,
                jc,
                fitness: 0.5,
                empty_pct: 0.0,
                n_clusters: 2,
                runtime_ms: 0,
            }),
            status: RowStatus::Ok,
        };
        let failed = ReportRow {
            record: None,
            status: RowStatus::Error("boom".into()),
            ..ok(0.0)
        };
        let rows = vec![ok(0.4), ok(0.8), failed];
        let tables = emit_plot_data(&rows);
        let row = &tables["jc"][0];
        assert!((row.mean - 0.6).abs() < 1e-12);
        assert!((row.coverage - 2.0 / 3.0).abs() < 1e-12);
        let aggregates = aggregate(&rows);
        let cell = &aggregates["ours/kmeans"]["0.1"];
        assert!((cell.jc.mean - 0.6).abs() < 1e-12);
        assert!((cell.coverage - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_ui_log_yields_zero_clusters() {
        let bench = build_ui_log(&synthetic_benchmark(2, 3, 2, 0).unwrap()).unwrap();
        let config = ClusteringConfig::new(ClusterMethod::KMeans { k: None });
        let out = run_pipeline(
            &UILog::default(),
            &bench.completion_set,
            &bench.alphabet,
            &config,
            2,
        )
        .unwrap();
        assert_eq!(out.clusters.n_clusters(), 0);
    }

    #[test]
    fn single_type_k1_is_one_log() {
        let bench = build_ui_log(&synthetic_benchmark(1, 3, 6, 0).unwrap()).unwrap();
        let config = ClusteringConfig::new(ClusterMethod::KMeans { k: Some(1) });
        let out = run_pipeline(
            &bench.log,
            &bench.completion_set,
            &bench.alphabet,
            &config,
            1,
        )
        .unwrap();
        assert_eq!(out.clusters.n_clusters(), 1);
        assert_eq!(out.clusters.logs()[0].len(), 6);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let plan = ExperimentPlan::new(vec![], 0);
        assert!(matches!(plan.validate(), Err(CoreError::InvalidPlan(_))));
        let mut plan = small_plan();
        plan.noise_levels = vec![1.5];
        assert!(plan.validate().is_err());
        let mut plan = small_plan();
        plan.repetitions = 0;
        assert!(plan.validate().is_err());
        let mut plan = small_plan();
        plan.baselines = vec![(
            "degraded".into(),
            plan.inputs[0].action_sets.clone(),
        )];
        plan.clusterers.clear();
        assert!(plan.validate().is_ok());
        plan.baselines.clear();
        assert!(plan.validate().is_err());
    }

    #[test]
    fn report_files_are_written() {
        let mut plan = small_plan();
        plan.noise_levels = vec![0.0];
        let dir = tempfile::tempdir().unwrap();
        run_experiment_to_dir(&plan, dir.path()).unwrap();
        assert!(dir.path().join("report.csv").exists());
        assert!(dir.path().join("aggregate.json").exists());
        let text = std::fs::read_to_string(dir.path().join("aggregate.json")).unwrap();
        let parsed: Aggregates = serde_json::from_str(&text).unwrap();
        assert!(parsed.contains_key("ours/kmeans"));
        let meta: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("run_meta.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(meta["jc_includes_empty_clusters_as_zero"], true);
    }
}
