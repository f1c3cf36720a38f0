//! Command-line surface: argument definitions and the per-command drivers.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable or
//! malformed input), 3 non-convergence — the iteration cap was hit, the
//! vertex solver missed its tolerance, or the mesh came out empty. On exit 3
//! all outputs are still written; the code only flags their quality.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use vsa_bench::{
    eta_heuristic, expected_e1, expected_e2, run_counterexample, run_experiments,
    EtaHeuristicInput, ExperimentConfig, CSV_HEADER,
};
use vsa_core::{build_neighbor_graph, compute_area_weights, PointCloud};
use vsa_segmentation::{run_pipeline_with_graph, PipelineConfig, Seeding};
use vsa_simplify::{simplify, SolverConfig, Strategy, Wtilde};

use crate::error::{CliError, CliResult};
use crate::manifest::{ModeSetting, RunManifest, StrategySetting, WeightsSetting};
use crate::obj::{load_obj_cloud, save_mesh_obj, save_mesh_report};
use crate::ply::{load_ply, save_segmentation_ply, write_atomically};
use crate::segio::{load_segmentation, save_labels_csv, save_proxies_json};

/// Planar-proxy segmentation and polygonal simplification of oriented point
/// clouds.
#[derive(Debug, Parser)]
#[command(name = "vsa", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment an oriented point cloud into planar proxies.
    Segment(SegmentArgs),
    /// Extract a simplified polygon mesh from a saved segmentation.
    Simplify(SimplifyArgs),
    /// Run the collinear chain on which the classic loop raises energy.
    Counterexample(CounterexampleArgs),
    /// Suggest a split threshold from curvature scales and proxy size.
    EtaHeuristic(EtaHeuristicArgs),
    /// Run a batch of segmentation configurations and emit CSV rows.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Input cloud: .ply (ascii or binary little-endian) or .obj, with
    /// per-point normals.
    pub input: PathBuf,
    /// Directory receiving labels.csv, proxies.json, segmented.ply and
    /// manifest.json.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Split/merge energy threshold: proxies above it split, adjacent pairs
    /// fitting under it merge.
    #[arg(long)]
    pub eta: f64,
    /// Neighborhood size of the k-nearest graph.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Driver loop: `classic` floods whole partitions each round, `switch`
    /// moves one point at a time and cannot cycle.
    #[arg(long, value_enum, default_value = "switch")]
    pub mode: ModeSetting,
    /// Seed selection: a count, `all`, or a file of point indices.
    #[arg(long, default_value = "6")]
    pub seeds: String,
    /// Allow splitting proxies above the threshold (default).
    #[arg(long, overrides_with = "no_split")]
    pub split: bool,
    /// Forbid splits.
    #[arg(long)]
    pub no_split: bool,
    /// Allow merging adjacent proxies under the threshold (default).
    #[arg(long, overrides_with = "no_merge")]
    pub merge: bool,
    /// Forbid merges.
    #[arg(long)]
    pub no_merge: bool,
    /// Point weights: `unit` or squared-neighborhood-extent `area`.
    #[arg(long, value_enum, default_value = "unit")]
    pub weights: WeightsSetting,
    /// Seed for all randomness; identical seeds reproduce outputs bit for
    /// bit.
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Hard iteration cap.
    #[arg(long = "max-iters", default_value_t = 100)]
    pub max_iterations: usize,
}

#[derive(Debug, Args)]
pub struct SimplifyArgs {
    /// Input cloud the labels refer to.
    pub input: PathBuf,
    /// Label CSV produced by `segment`.
    #[arg(long)]
    pub labels: PathBuf,
    /// Directory receiving mesh.obj, mesh.report.json and manifest.json.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Neighborhood size of the k-nearest graph.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Point weights used when refitting proxies from the labels.
    #[arg(long, value_enum, default_value = "unit")]
    pub weights: WeightsSetting,
    /// Vertex solver: `intersect` three planes per vertex, or `optimize`
    /// all vertices and corrected normals jointly.
    #[arg(long, value_enum, default_value = "optimize")]
    pub strategy: StrategySetting,
    /// Penalty on corrected normals deviating from the fitted ones.
    #[arg(long, default_value_t = 1.0)]
    pub wtilde: f64,
    /// Constraint tolerance of the optimizing solver.
    #[arg(long, default_value_t = 1e-6)]
    pub ctol: f64,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// Points per constant-normal segment of the chain (cloud size 2n + 2).
    #[arg(long, default_value_t = 100)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct EtaHeuristicArgs {
    /// Curvature scale along u: the model patch is z = u²/a² + v²/b².
    #[arg(long)]
    pub a: f64,
    /// Curvature scale along v.
    #[arg(long)]
    pub b: f64,
    /// Expected number of points per proxy.
    #[arg(long)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// JSON file with the input cloud path and the configurations to run.
    #[arg(long)]
    pub configs: PathBuf,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Segment(args) => run_segment(&args),
        Command::Simplify(args) => run_simplify(&args),
        Command::Counterexample(args) => run_counterexample_report(&args),
        Command::EtaHeuristic(args) => run_eta_heuristic(&args),
        Command::Bench(args) => run_bench(&args),
    }
}

/// Loads a cloud by extension: `.ply` or `.obj`, case-insensitive.
pub fn load_point_cloud(path: &Path) -> CliResult<PointCloud> {
    let extension = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match extension.as_deref() {
        Some("ply") => load_ply(path),
        Some("obj") => load_obj_cloud(path),
        _ => Err(CliError::Data(format!(
            "{}: unsupported cloud format, expected .ply or .obj",
            path.display()
        ))),
    }
}

/// Interprets `--seeds`: `all`, a positive count, or a file of indices.
pub fn parse_seeding(raw: &str) -> CliResult<Seeding> {
    if raw.eq_ignore_ascii_case("all") {
        return Ok(Seeding::AllPoints);
    }
    if let Ok(count) = raw.parse::<usize>() {
        if count == 0 {
            return Err(CliError::Usage("--seeds needs a positive count".into()));
        }
        return Ok(Seeding::Count(count));
    }
    let text = fs::read_to_string(raw).map_err(|e| {
        CliError::Usage(format!(
            "--seeds '{raw}' is neither a count, 'all', nor a readable index file: {e}"
        ))
    })?;
    let mut indices = Vec::new();
    for token in text.split_whitespace() {
        indices.push(token.parse::<usize>().map_err(|_| {
            CliError::Data(format!("{raw}: bad seed index '{token}'"))
        })?);
    }
    if indices.is_empty() {
        return Err(CliError::Data(format!("{raw}: no seed indices")));
    }
    Ok(Seeding::Explicit(indices))
}

fn require(condition: bool, message: &str) -> CliResult<()> {
    if condition {
        Ok(())
    } else {
        Err(CliError::Usage(message.into()))
    }
}

fn weighted(cloud: &PointCloud, weights: WeightsSetting, k: usize) -> CliResult<PointCloud> {
    match weights {
        WeightsSetting::Unit => Ok(cloud.clone()),
        WeightsSetting::Area => {
            let graph = build_neighbor_graph(cloud, k)?;
            Ok(cloud.with_weights(compute_area_weights(cloud, &graph))?)
        }
    }
}

fn run_segment(args: &SegmentArgs) -> CliResult<()> {
    require(
        args.eta.is_finite() && args.eta > 0.0,
        "--eta must be positive",
    )?;
    require(args.k >= 1, "--k must be at least 1")?;
    require(args.max_iterations >= 1, "--max-iters must be at least 1")?;
    let seeding = parse_seeding(&args.seeds)?;

    let cloud = load_point_cloud(&args.input)?;
    let graph = build_neighbor_graph(&cloud, args.k)?;
    let working = weighted(&cloud, args.weights, args.k)?;
    let config = PipelineConfig {
        mode: args.mode.into(),
        eta: args.eta,
        k: args.k,
        seeding,
        enable_split: !args.no_split,
        enable_merge: !args.no_merge,
        max_iterations: args.max_iterations,
        rng_seed: args.rng_seed,
    };
    let outcome = run_pipeline_with_graph(&working, &graph, &config)?;

    fs::create_dir_all(&args.out)?;
    save_labels_csv(&outcome.segmentation, &args.out.join("labels.csv"))?;
    save_proxies_json(&outcome.segmentation, &args.out.join("proxies.json"))?;
    save_segmentation_ply(
        &working,
        &outcome.segmentation,
        &args.out.join("segmented.ply"),
    )?;
    let manifest = RunManifest {
        tool_version: RunManifest::tool_version(),
        input: args.input.display().to_string(),
        labels: None,
        outputs: ["labels.csv", "proxies.json", "segmented.ply"]
            .map(String::from)
            .to_vec(),
        weights: args.weights,
        pipeline: Some((&config).into()),
        solver: None,
        strategy: None,
        rng_seed: args.rng_seed,
    };
    manifest.save(&args.out.join("manifest.json"))?;

    let energy: f64 = outcome.segmentation.proxies.iter().map(|p| p.energy).sum();
    println!("points = {}", cloud.len());
    println!("proxies = {}", outcome.segmentation.proxy_count());
    println!("energy = {energy}");
    println!("iterations = {}", outcome.iterations);
    println!("converged = {}", outcome.converged);
    println!("outputs in {}", args.out.display());
    if !outcome.converged {
        return Err(CliError::NonConvergence(format!(
            "stopped at the {}-iteration cap without converging; outputs were still written",
            config.max_iterations
        )));
    }
    Ok(())
}

fn run_simplify(args: &SimplifyArgs) -> CliResult<()> {
    require(
        args.wtilde.is_finite() && args.wtilde >= 0.0,
        "--wtilde must be non-negative",
    )?;
    require(
        args.ctol.is_finite() && args.ctol > 0.0,
        "--ctol must be positive",
    )?;
    require(args.k >= 1, "--k must be at least 1")?;

    let cloud = load_point_cloud(&args.input)?;
    let graph = build_neighbor_graph(&cloud, args.k)?;
    let working = weighted(&cloud, args.weights, args.k)?;
    let segmentation = load_segmentation(&working, &args.labels)?;
    let config = SolverConfig {
        wtilde: Wtilde::Uniform(args.wtilde),
        constraint_tol: args.ctol,
        ..SolverConfig::default()
    };
    let strategy: Strategy = args.strategy.into();
    let mesh = simplify(&working, &graph, &segmentation, strategy, &config)?;

    fs::create_dir_all(&args.out)?;
    let mesh_path = args.out.join("mesh.obj");
    save_mesh_obj(&mesh, &mesh_path)?;
    save_mesh_report(&mesh, &mesh_path)?;
    let manifest = RunManifest {
        tool_version: RunManifest::tool_version(),
        input: args.input.display().to_string(),
        labels: Some(args.labels.display().to_string()),
        outputs: ["mesh.obj", "mesh.report.json"].map(String::from).to_vec(),
        weights: args.weights,
        pipeline: None,
        solver: Some((&config).into()),
        strategy: Some(args.strategy),
        rng_seed: 0,
    };
    manifest.save(&args.out.join("manifest.json"))?;

    println!("proxies = {}", segmentation.proxy_count());
    println!("vertices = {}", mesh.vertices.len());
    println!("faces = {}", mesh.faces.len());
    println!("warnings = {}", mesh.warnings.len());
    println!("feasible = {}", mesh.feasible);
    println!("outputs in {}", args.out.display());
    if mesh.faces.is_empty() {
        return Err(CliError::NonConvergence(
            "mesh is empty — no three proxy planes meet at a vertex; outputs were still written"
                .into(),
        ));
    }
    if !mesh.feasible {
        return Err(CliError::NonConvergence(
            "vertex solver missed its constraint tolerance; outputs were still written".into(),
        ));
    }
    Ok(())
}

fn run_counterexample_report(args: &CounterexampleArgs) -> CliResult<()> {
    let run = run_counterexample(args.n)?;
    println!("n = {}", args.n);
    println!("points = {}", 2 * args.n + 2);
    println!("E1 = {}", run.e1);
    println!("E2 = {}", run.e2);
    println!("closed-form E1 = {}", expected_e1(args.n));
    println!("closed-form E2 = {}", expected_e2(args.n));
    println!("converged = {}", run.converged);
    println!("iterations = {}", run.iterations);
    Ok(())
}

fn run_eta_heuristic(args: &EtaHeuristicArgs) -> CliResult<()> {
    let input = EtaHeuristicInput {
        a: args.a,
        b: args.b,
        aleph: args.points,
    };
    let eta = eta_heuristic(&input)?;
    println!("a = {}", args.a);
    println!("b = {}", args.b);
    println!("points per proxy = {}", args.points);
    println!("suggested eta = {eta}");
    Ok(())
}

/// Top level of the `--configs` JSON: the cloud plus the runs to measure.
#[derive(Debug, Deserialize)]
struct BenchSpec {
    /// Cloud path, resolved relative to the JSON file when not absolute.
    input: String,
    configs: Vec<BenchEntry>,
}

/// One benchmark run; omitted fields fall back to the pipeline defaults.
#[derive(Debug, Deserialize)]
struct BenchEntry {
    config_id: String,
    eta: f64,
    #[serde(default)]
    mode: Option<ModeSetting>,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    seeds: Option<SeedsSpec>,
    #[serde(default)]
    split: Option<bool>,
    #[serde(default)]
    merge: Option<bool>,
    #[serde(default)]
    weights: Option<WeightsSetting>,
    #[serde(default)]
    rng_seed: Option<u64>,
    #[serde(default)]
    max_iterations: Option<usize>,
}

/// `"seeds"` in bench JSON: a count, the keyword `"all"`, or explicit
/// indices.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SeedsSpec {
    Count(usize),
    Keyword(String),
    List(Vec<usize>),
}

impl SeedsSpec {
    fn to_seeding(&self) -> CliResult<Seeding> {
        match self {
            SeedsSpec::Count(count) => Ok(Seeding::Count(*count)),
            SeedsSpec::Keyword(word) if word.eq_ignore_ascii_case("all") => {
                Ok(Seeding::AllPoints)
            }
            SeedsSpec::Keyword(word) => Err(CliError::Data(format!(
                "bench seeds keyword must be 'all', got '{word}'"
            ))),
            SeedsSpec::List(indices) => Ok(Seeding::Explicit(indices.clone())),
        }
    }
}

impl BenchEntry {
    fn to_experiment(&self) -> CliResult<ExperimentConfig> {
        let defaults = PipelineConfig::default();
        Ok(ExperimentConfig {
            config_id: self.config_id.clone(),
            pipeline: PipelineConfig {
                mode: self.mode.map(Into::into).unwrap_or(defaults.mode),
                eta: self.eta,
                k: self.k.unwrap_or(defaults.k),
                seeding: match &self.seeds {
                    Some(spec) => spec.to_seeding()?,
                    None => defaults.seeding,
                },
                enable_split: self.split.unwrap_or(defaults.enable_split),
                enable_merge: self.merge.unwrap_or(defaults.enable_merge),
                max_iterations: self.max_iterations.unwrap_or(defaults.max_iterations),
                rng_seed: self.rng_seed.unwrap_or(defaults.rng_seed),
            },
            area_weights: self.weights == Some(WeightsSetting::Area),
        })
    }
}

fn run_bench(args: &BenchArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.configs).map_err(|e| {
        CliError::Data(format!("cannot read {}: {e}", args.configs.display()))
    })?;
    let spec: BenchSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.configs.display())))?;
    if spec.configs.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no configurations to run",
            args.configs.display()
        )));
    }

    let input = {
        let raw = PathBuf::from(&spec.input);
        if raw.is_absolute() {
            raw
        } else {
            args.configs
                .parent()
                .unwrap_or_else(|| Path::new("."))
                .join(raw)
        }
    };
    let cloud = load_point_cloud(&input)?;
    let experiments = spec
        .configs
        .iter()
        .map(BenchEntry::to_experiment)
        .collect::<CliResult<Vec<_>>>()?;
    let rows = run_experiments(&cloud, &experiments)?;

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    match &args.output {
        Some(path) => write_atomically(path, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    Ok(())
}
