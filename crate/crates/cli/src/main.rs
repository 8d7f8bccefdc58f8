//! Command-line front end for routine log extraction and evaluation.
//!
//! Exit codes: 0 on success, 1 when an experiment finished with failed
//! rows recorded in the report, 2 on invalid arguments or plans.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use routine_core::clustering::{ClusterMethod, ClusteringConfig, NoisePolicy};
use routine_core::experiment::{
    emit_plot_data, run_experiment_to_dir, write_plot_data, ExperimentInput, ExperimentPlan,
    DEFAULT_NOISE_LEVELS, DEFAULT_REPETITIONS,
};
use routine_core::generator::{build_ui_log, synthetic_benchmark, BenchmarkSpec, RoutineType};
use routine_core::io::{
    read_action_sets, read_benchmark, read_pnml, read_report, read_routine_log, read_ui_log,
    write_benchmark, write_report, write_routine_logs, write_routine_logs_xes, write_ui_log,
    ReportRow, RowStatus,
};
use routine_core::metrics::{
    baseline_assign, empty_log_pct, fitness, jaccard_coefficient, EvalRecord, ModelSet,
};
use routine_core::model::{ActionAlphabet, ClusterSet, CompletionSet, UILog};
use routine_core::noise::{inject_log, NoiseConfig};
use routine_core::segmentation::segment;

#[derive(Parser)]
#[command(
    name = "routine-mine",
    about = "Extract routine logs from identifier-free UI logs and evaluate them",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic benchmark: UI log, ground-truth models, action sets.
    Generate(GenerateArgs),
    /// Split a UI log into routine executions at completion actions.
    Segment(SegmentArgs),
    /// Perturb a UI log with controlled deletion/insertion noise.
    InjectNoise(InjectNoiseArgs),
    /// Run the full pipeline (segment, encode, cluster) and write routine logs.
    Extract(ExtractArgs),
    /// Assign executions to routine types by nearest action-set vector.
    Assign(AssignArgs),
    /// Score extracted routine logs against ground truth.
    Evaluate(EvaluateArgs),
    /// Run the noise-sweep experiment grid and write report + aggregates.
    Experiment(ExperimentArgs),
    /// Summarize a report CSV into per-metric plot tables.
    PlotData(PlotDataArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Output directory for the benchmark files.
    #[arg(long)]
    out: PathBuf,
    /// Number of synthetic routine types (ignored when --model is given).
    #[arg(long, default_value_t = 3)]
    types: usize,
    /// Visible actions per synthetic type.
    #[arg(long, default_value_t = 5)]
    actions_per_type: usize,
    /// Executions played out per type.
    #[arg(long, default_value_t = 50)]
    executions_per_type: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Benchmark name recorded in the manifest.
    #[arg(long, default_value = "benchmark")]
    name: String,
    /// Ground-truth PNML models (repeatable); overrides --types.
    #[arg(long)]
    model: Vec<PathBuf>,
    /// Completion label per --model, same order.
    #[arg(long)]
    completion_label: Vec<String>,
    /// Playout step cap per execution.
    #[arg(long, default_value_t = 200)]
    max_len: usize,
}

#[derive(Args)]
struct SegmentArgs {
    #[arg(long)]
    log: PathBuf,
    /// Comma-separated completion action labels.
    #[arg(long, value_delimiter = ',')]
    completion: Vec<String>,
    /// Output CSV of executions (case column = execution index).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InjectNoiseArgs {
    #[arg(long)]
    log: PathBuf,
    #[arg(long, value_delimiter = ',')]
    completion: Vec<String>,
    #[arg(long)]
    noise_level: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Hold each segment's completion action out of the noise loop;
    /// pass `false` for the literal whole-segment algorithm.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    preserve_finals: bool,
    /// Allow random insertions to draw completion actions too.
    #[arg(long)]
    insert_pool_includes_finals: bool,
}

#[derive(Args)]
struct ClustererOpts {
    /// kmeans, dbscan, or hdbscan.
    #[arg(long, default_value = "kmeans")]
    clusterer: String,
    /// Cluster count for kmeans; defaults to the number of ground-truth
    /// types where known, else required.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 5)]
    min_pts: usize,
    #[arg(long, default_value_t = 5)]
    min_cluster_size: usize,
    /// nearest_centroid or own_cluster.
    #[arg(long, default_value = "nearest_centroid")]
    noise_policy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ClustererOpts {
    fn method(&self, name: &str) -> Result<ClusterMethod> {
        Ok(match name {
            "kmeans" => ClusterMethod::KMeans { k: self.k },
            "dbscan" => ClusterMethod::Dbscan {
                eps: self.eps,
                min_pts: self.min_pts,
            },
            "hdbscan" => ClusterMethod::Hdbscan {
                min_cluster_size: self.min_cluster_size,
            },
            other => bail!("unknown clusterer `{other}` (kmeans, dbscan, hdbscan)"),
        })
    }

    fn config(&self) -> Result<ClusteringConfig> {
        Ok(ClusteringConfig {
            method: self.method(&self.clusterer)?,
            seed: self.seed,
            noise_policy: NoisePolicy::parse(&self.noise_policy)
                .map_err(anyhow::Error::from)?,
        })
    }
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    log: PathBuf,
    #[arg(long, value_delimiter = ',')]
    completion: Vec<String>,
    #[command(flatten)]
    clusterer: ClustererOpts,
    #[arg(long)]
    out: PathBuf,
    /// Also export each routine log as XES.
    #[arg(long)]
    xes: bool,
    /// Debug dump of the count-vector matrix as CSV.
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
}

#[derive(Args)]
struct AssignArgs {
    #[arg(long)]
    log: PathBuf,
    #[arg(long, value_delimiter = ',')]
    completion: Vec<String>,
    /// JSON object {type_name: [labels]}.
    #[arg(long)]
    action_sets: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    xes: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Directory written by `extract` or `assign`.
    #[arg(long)]
    logs_dir: PathBuf,
    /// Ground-truth action sets for the Jaccard Coefficient.
    #[arg(long)]
    action_sets: PathBuf,
    /// Ground-truth PNML models for fitness (repeatable).
    #[arg(long)]
    model: Vec<PathBuf>,
    /// Append an EvalRecord row to this report CSV.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "log")]
    log_name: String,
    #[arg(long, default_value = "ours")]
    technique: String,
    #[arg(long, default_value = "-")]
    clusterer: String,
    #[arg(long, default_value_t = 0.0)]
    noise_level: f64,
    #[arg(long, default_value_t = 0)]
    repetition: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Benchmark directories written by `generate` (repeatable).
    #[arg(long)]
    benchmark: Vec<PathBuf>,
    /// Comma-separated noise levels.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<f64>>,
    /// Repetitions per nonzero level.
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated clusterers to run.
    #[arg(long, value_delimiter = ',')]
    clusterers: Option<Vec<String>>,
    /// Baseline action-set files, NAME=PATH (repeatable).
    #[arg(long)]
    baseline: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    record_runtime: bool,
    /// Hold completion actions out of the noise loop (default true).
    #[arg(long, action = clap::ArgAction::Set)]
    preserve_finals: Option<bool>,
    #[arg(long)]
    insert_pool_includes_finals: bool,
    /// Cluster count for kmeans; defaults to the number of ground-truth
    /// models per benchmark.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    min_pts: Option<usize>,
    #[arg(long)]
    min_cluster_size: Option<usize>,
    /// nearest_centroid or own_cluster.
    #[arg(long)]
    noise_policy: Option<String>,
}

#[derive(Args)]
struct PlotDataArgs {
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

/// Subset of experiment options accepted in a JSON config file.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFileConfig {
    benchmarks: Option<Vec<PathBuf>>,
    levels: Option<Vec<f64>>,
    repetitions: Option<usize>,
    seed: Option<u64>,
    clusterers: Option<Vec<String>>,
    baselines: Option<serde_json::Map<String, serde_json::Value>>,
    out: Option<PathBuf>,
    record_runtime: Option<bool>,
    preserve_finals: Option<bool>,
    insert_pool_includes_finals: Option<bool>,
    k: Option<usize>,
    eps: Option<f64>,
    min_pts: Option<usize>,
    min_cluster_size: Option<usize>,
    noise_policy: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Segment(args) => do_segment(args),
        Command::InjectNoise(args) => inject_noise(args),
        Command::Extract(args) => extract(args),
        Command::Assign(args) => assign(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Experiment(args) => experiment(args),
        Command::PlotData(args) => plot_data(args),
    }
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    let spec: BenchmarkSpec = if args.model.is_empty() {
        synthetic_benchmark(
            args.types,
            args.actions_per_type,
            args.executions_per_type,
            args.seed,
        )?
    } else {
        if args.completion_label.len() != args.model.len() {
            bail!(
                "{} --completion-label values for {} --model files",
                args.completion_label.len(),
                args.model.len()
            );
        }
        let types = args
            .model
            .iter()
            .zip(&args.completion_label)
            .enumerate()
            .map(|(i, (path, completion))| {
                Ok(RoutineType {
                    name: format!("type{i}"),
                    net: read_pnml(path)?,
                    completion_label: completion.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BenchmarkSpec {
            types,
            executions_per_type: args.executions_per_type,
            shuffle_seed: args.seed,
            max_len: args.max_len,
        }
    };
    let benchmark = build_ui_log(&spec)?;
    write_benchmark(&args.out, &args.name, &benchmark, &spec)?;
    println!(
        "generated {} executions over {} types into {}",
        benchmark.executions.len(),
        spec.types.len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn load_log(path: &Path, completion: &[String]) -> Result<(UILog, ActionAlphabet, CompletionSet)> {
    let data = read_ui_log(path, None)?;
    // Completion labels may be absent from a (possibly empty) log.
    let alphabet = ActionAlphabet::build(
        data.alphabet
            .labels()
            .iter()
            .cloned()
            .chain(completion.iter().cloned()),
    )?;
    let completion = CompletionSet::from_labels(completion, &alphabet)?;
    Ok((data.log, alphabet, completion))
}

fn do_segment(args: SegmentArgs) -> Result<ExitCode> {
    let (log, alphabet, completion) = load_log(&args.log, &args.completion)?;
    let seg = segment(&log, &completion);
    if seg.segments.is_empty() && !seg.remainder.is_empty() {
        eprintln!("warning: no completion action found; whole log is an incomplete remainder");
    } else if !seg.remainder.is_empty() {
        eprintln!(
            "warning: {} trailing actions form an incomplete remainder",
            seg.remainder.len()
        );
    }
    let mut cases = Vec::new();
    let mut actions = Vec::new();
    for (i, exec) in seg.segments.iter().enumerate() {
        for &a in exec.actions() {
            cases.push(format!("e{i}"));
            actions.push(a);
        }
    }
    write_ui_log(&args.out, &UILog::new(actions), &alphabet, Some(&cases))?;
    println!(
        "{} executions ({} actions), remainder {}",
        seg.segments.len(),
        log.len() - seg.remainder.len(),
        seg.remainder.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn inject_noise(args: InjectNoiseArgs) -> Result<ExitCode> {
    let (log, alphabet, completion) = load_log(&args.log, &args.completion)?;
    let seg = segment(&log, &completion);
    let pool = alphabet
        .ids()
        .filter(|&a| args.insert_pool_includes_finals || !completion.contains(a))
        .collect();
    let config = NoiseConfig {
        level: args.noise_level,
        seed: args.seed,
        insert_pool: pool,
        preserve_finals: args.preserve_finals,
    };
    let noisy = inject_log(&seg.segments, &config)?;
    let mut actions: Vec<_> = noisy
        .iter()
        .flat_map(|e| e.actions().iter().copied())
        .collect();
    actions.extend(seg.remainder.iter().copied());
    write_ui_log(&args.out, &UILog::new(actions), &alphabet, None)?;
    println!(
        "injected level {} noise into {} segments -> {}",
        args.noise_level,
        noisy.len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn write_clusters(
    clusters: &ClusterSet,
    alphabet: &ActionAlphabet,
    out: &Path,
    xes: bool,
) -> Result<()> {
    let manifest = write_routine_logs(clusters, alphabet, out)?;
    if xes {
        write_routine_logs_xes(clusters, alphabet, out)?;
    }
    let empty = manifest.logs.iter().filter(|l| l.empty).count();
    println!(
        "wrote {} routine logs ({} empty) to {}",
        manifest.logs.len(),
        empty,
        out.display()
    );
    Ok(())
}

fn extract(args: ExtractArgs) -> Result<ExitCode> {
    let (log, alphabet, completion) = load_log(&args.log, &args.completion)?;
    let config = args.clusterer.config()?;
    if matches!(config.method, ClusterMethod::KMeans { k: None }) {
        bail!("--k is required for kmeans extraction");
    }
    let out = routine_core::experiment::run_pipeline(&log, &completion, &alphabet, &config, 0)?;
    if out.segmentation.has_remainder() {
        eprintln!(
            "warning: {} trailing actions were excluded as an incomplete remainder",
            out.segmentation.remainder.len()
        );
    }
    if out.clusters.n_clusters() == 0 {
        eprintln!("warning: empty UI log, zero clusters");
    }
    if let Some(path) = &args.dump_matrix {
        let matrix = routine_core::encoding::encode(&out.segmentation.segments, &alphabet)?;
        routine_core::encoding::write_matrix_csv(path, &matrix, &alphabet)?;
    }
    write_clusters(&out.clusters, &alphabet, &args.out, args.xes)?;
    Ok(ExitCode::SUCCESS)
}

fn assign(args: AssignArgs) -> Result<ExitCode> {
    let (log, alphabet, completion) = load_log(&args.log, &args.completion)?;
    let sets = read_action_sets(&args.action_sets, &alphabet)?;
    let seg = segment(&log, &completion);
    let clusters = baseline_assign(&seg.segments, &sets, &alphabet)?;
    write_clusters(&clusters, &alphabet, &args.out, args.xes)?;
    Ok(ExitCode::SUCCESS)
}

fn evaluate(args: EvaluateArgs) -> Result<ExitCode> {
    let manifest_path = args.logs_dir.join("routine_logs.json");
    let manifest: routine_core::io::RoutineLogManifest = serde_json::from_str(
        &std::fs::read_to_string(&manifest_path)
            .with_context(|| format!("reading {}", manifest_path.display()))?,
    )?;
    let models: Vec<(String, _)> = args
        .model
        .iter()
        .enumerate()
        .map(|(i, p)| Ok((format!("model{i}"), read_pnml(p)?)))
        .collect::<Result<_>>()?;

    // Assemble the alphabet from every artifact involved.
    let mut labels: Vec<String> = Vec::new();
    for entry in &manifest.logs {
        let mut reader = csv::Reader::from_path(args.logs_dir.join(&entry.file))?;
        let headers = reader.headers()?.clone();
        let action_col = headers
            .iter()
            .position(|h| h == "action")
            .context("routine log without action column")?;
        for record in reader.records() {
            labels.push(record?.get(action_col).unwrap_or("").to_string());
        }
    }
    let raw: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&args.action_sets)?)?;
    for arr in raw.values() {
        for l in arr.as_array().into_iter().flatten() {
            if let Some(s) = l.as_str() {
                labels.push(s.to_string());
            }
        }
    }
    for (_, net) in &models {
        for l in net.visible_labels() {
            labels.push(l.to_string());
        }
    }
    let alphabet = ActionAlphabet::build(labels)?;

    let mut assignment = Vec::new();
    let mut executions = Vec::new();
    for entry in &manifest.logs {
        let log = read_routine_log(args.logs_dir.join(&entry.file), &alphabet)?;
        for exec in log.executions() {
            executions.push(exec.clone());
            assignment.push(entry.cluster);
        }
    }
    let clusters = ClusterSet::from_assignment(
        &routine_core::model::ExecutionMultiset::new(executions),
        assignment,
        manifest.logs.len(),
    )?;

    let sets = read_action_sets(&args.action_sets, &alphabet)?;
    let jc = jaccard_coefficient(&clusters, &sets)?;
    let model_set = ModelSet { models };
    let (fit, excluded) = if model_set.is_empty() {
        (f64::NAN, 0)
    } else {
        fitness(&clusters, &model_set, &alphabet)?
    };
    let empty = empty_log_pct(&clusters)?;
    println!("jc        {jc}");
    println!("fitness   {fit}");
    println!("empty_pct {empty}");
    println!("excluded_empty_logs {excluded}");

    if let Some(report) = &args.report {
        let mut rows = if report.exists() {
            read_report(report)?
        } else {
            Vec::new()
        };
        rows.push(ReportRow {
            log: args.log_name.clone(),
            technique: args.technique.clone(),
            clusterer: args.clusterer.clone(),
            noise_level: args.noise_level,
            repetition: args.repetition,
            record: Some(EvalRecord {
                log: args.log_name,
                technique: args.technique,
                clusterer: args.clusterer,
                noise_level: args.noise_level,
                repetition: args.repetition,
                jc,
                fitness: fit,
                empty_pct: empty,
                n_clusters: clusters.n_clusters(),
                runtime_ms: 0,
            }),
            status: RowStatus::Ok,
        });
        write_report(report, &rows)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode> {
    let file: ExperimentFileConfig = match &args.config {
        Some(path) => serde_json::from_str(
            &std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?,
        )
        .with_context(|| format!("parsing {}", path.display()))?,
        None => Default::default(),
    };
    let config_dir = args
        .config
        .as_deref()
        .and_then(Path::parent)
        .unwrap_or(Path::new("."))
        .to_path_buf();

    // Flags win over the config file.
    let benchmarks: Vec<PathBuf> = if !args.benchmark.is_empty() {
        args.benchmark.clone()
    } else {
        file.benchmarks
            .unwrap_or_default()
            .into_iter()
            .map(|p| if p.is_absolute() { p } else { config_dir.join(p) })
            .collect()
    };
    if benchmarks.is_empty() {
        bail!("no benchmark directories given (--benchmark or config.benchmarks)");
    }
    let inputs: Vec<ExperimentInput> = benchmarks
        .iter()
        .map(|dir| read_benchmark(dir).map_err(anyhow::Error::from))
        .collect::<Result<_>>()?;

    let k = args.k.or(file.k);
    let clusterer_names = args
        .clusterers
        .clone()
        .or(file.clusterers)
        .unwrap_or_else(|| vec!["kmeans".into(), "dbscan".into(), "hdbscan".into()]);
    let policy_name = args
        .noise_policy
        .clone()
        .or(file.noise_policy.clone())
        .unwrap_or_else(|| "nearest_centroid".into());
    let noise_policy = NoisePolicy::parse(&policy_name)?;
    let clusterers = clusterer_names
        .iter()
        .map(|name| {
            let method = match name.as_str() {
                "kmeans" => ClusterMethod::KMeans { k },
                "dbscan" => ClusterMethod::Dbscan {
                    eps: args.eps.or(file.eps).unwrap_or(0.5),
                    min_pts: args.min_pts.or(file.min_pts).unwrap_or(5),
                },
                "hdbscan" => ClusterMethod::Hdbscan {
                    min_cluster_size: args
                        .min_cluster_size
                        .or(file.min_cluster_size)
                        .unwrap_or(5),
                },
                other => bail!("unknown clusterer `{other}`"),
            };
            Ok((method, noise_policy))
        })
        .collect::<Result<Vec<_>>>()?;

    let baseline_specs: Vec<(String, PathBuf)> = if !args.baseline.is_empty() {
        args.baseline
            .iter()
            .map(|s| {
                let (name, path) = s
                    .split_once('=')
                    .context("--baseline expects NAME=PATH")?;
                Ok((name.to_string(), PathBuf::from(path)))
            })
            .collect::<Result<_>>()?
    } else {
        file.baselines
            .unwrap_or_default()
            .into_iter()
            .map(|(name, v)| {
                let path = v
                    .as_str()
                    .with_context(|| format!("baseline `{name}` path must be a string"))?;
                let p = PathBuf::from(path);
                Ok((name, if p.is_absolute() { p } else { config_dir.join(p) }))
            })
            .collect::<Result<_>>()?
    };
    let mut baselines = Vec::new();
    for (name, path) in baseline_specs {
        let sets = read_action_sets(&path, &inputs[0].alphabet)?;
        baselines.push((name, sets));
    }

    let mut plan = ExperimentPlan::new(inputs, args.seed.or(file.seed).unwrap_or(0));
    plan.noise_levels = args
        .levels
        .clone()
        .or(file.levels)
        .unwrap_or_else(|| DEFAULT_NOISE_LEVELS.to_vec());
    plan.repetitions = args
        .repetitions
        .or(file.repetitions)
        .unwrap_or(DEFAULT_REPETITIONS);
    plan.clusterers = clusterers;
    plan.baselines = baselines;
    plan.record_runtime = args.record_runtime || file.record_runtime.unwrap_or(false);
    plan.preserve_finals = args
        .preserve_finals
        .or(file.preserve_finals)
        .unwrap_or(true);
    plan.insert_pool_includes_finals =
        args.insert_pool_includes_finals || file.insert_pool_includes_finals.unwrap_or(false);

    let out = args
        .out
        .clone()
        .or(file.out)
        .context("no output directory given (--out or config.out)")?;

    plan.validate()?;
    let report = run_experiment_to_dir(&plan, &out)?;
    let tables = emit_plot_data(&report.rows);
    write_plot_data(&out, &tables)?;

    let failed = report.rows.iter().filter(|r| !r.is_ok()).count();
    println!(
        "{} rows ({} failed) -> {}",
        report.rows.len(),
        failed,
        out.display()
    );
    if failed > 0 {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn plot_data(args: PlotDataArgs) -> Result<ExitCode> {
    let rows = read_report(&args.report)?;
    let tables = emit_plot_data(&rows);
    write_plot_data(&args.out, &tables)?;
    println!(
        "wrote plot tables for {} techniques to {}",
        tables["jc"]
            .iter()
            .map(|r| (&r.technique, &r.clusterer))
            .collect::<BTreeSet<_>>()
            .len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}
