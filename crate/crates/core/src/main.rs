use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cover_core::aqbf::AqbfParams;
use cover_core::bench::{
    self, aqbf_work_scaling, parse_grid, parse_methods, run_case, run_method, significance, summarize, sweep,
    write_csv, write_sweep_csv, BenchParams, Case, Method, SweepAxis,
};
use cover_core::exact::exact_area;
use cover_core::scenario::{
    caribbean_preset, gen_scene, ingest_geojson, load_scene, save_scene, scene_to_json, GenSpec, RingSelector,
    DEFAULT_DEG_PER_KM,
};
use cover_core::Scene;
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "cover", version, about = "Area of a polygon covered by a union of disks")]
struct Cli {
    /// Worker threads (default: all cores, or RAYON_NUM_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random star-shaped polygon with random circles.
    Gen(GenArgs),
    /// Extract a polygon from GeoJSON, optionally adding preset circles.
    Ingest(IngestArgs),
    /// Compute the covered area of one scene.
    Compute(ComputeArgs),
    /// Run a synthetic benchmark case and write per-trial CSV rows.
    Bench(BenchArgs),
    /// Vary one AQBF parameter over a grid on one scene.
    Sweep(SweepArgs),
    /// Error traces on doubling refinement schedules.
    Trace(TraceArgs),
    /// AQBF operation counts as the tolerance shrinks.
    Scaling(ScalingArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 50)]
    vertices: usize,
    #[arg(long, default_value_t = 30)]
    circles: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10.0)]
    diameter: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    geojson: PathBuf,
    /// `largest` or a ring index.
    #[arg(long, default_value = "largest")]
    select: RingSelector,
    /// Circle preset to attach (`caribbean`).
    #[arg(long)]
    circles_preset: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DEG_PER_KM)]
    deg_per_km: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct AqbfArgs {
    #[arg(long, default_value_t = 1e-6)]
    eps_part: f64,
    #[arg(long, default_value_t = 1e-4)]
    eps_samp: f64,
    #[arg(long, default_value_t = 4.0)]
    c: f64,
    #[arg(long, default_value_t = 450)]
    nmin: u64,
    #[arg(long, default_value_t = 1_000_000)]
    nmax: u64,
    /// Weight fully covering circles by their count instead of union coverage.
    #[arg(long)]
    multiplicity_weighted: bool,
}

#[derive(Args, Clone)]
struct BaselineArgs {
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: u64,
    #[arg(long, default_value_t = 1000)]
    ug_resolution: usize,
    #[arg(long, default_value_t = 200)]
    gi_resolution: usize,
    #[arg(long, default_value_t = 10)]
    as_depth: u32,
    /// Write 0 for every timing field so outputs are reproducible byte for byte.
    #[arg(long)]
    no_time: bool,
}

impl AqbfArgs {
    fn params(&self, seed: u64) -> AqbfParams {
        AqbfParams {
            epsilon_partition: self.eps_part,
            epsilon_sampling: self.eps_samp,
            c: self.c,
            n_min: self.nmin,
            n_max: self.nmax,
            seed,
            multiplicity_weighted: self.multiplicity_weighted,
        }
    }
}

fn bench_params(aqbf: &AqbfArgs, base: &BaselineArgs, seed: u64) -> BenchParams {
    BenchParams {
        aqbf: aqbf.params(seed),
        mc_samples: base.mc_samples,
        ug_resolution: base.ug_resolution,
        gi_resolution: base.gi_resolution,
        as_max_depth: base.as_depth,
        record_time: !base.no_time,
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, default_value = "aqbf")]
    method: Method,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    aqbf: AqbfArgs,
    #[command(flatten)]
    baseline: BaselineArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    case: u32,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value = "aqbf,mc,ug,as,gi,tri")]
    methods: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    aqbf: AqbfArgs,
    #[command(flatten)]
    baseline: BaselineArgs,
    /// Also write the per-configuration means as CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// C, nmin, epsilon (sampling tolerance) or eps-part.
    #[arg(long)]
    axis: SweepAxis,
    /// `start:end:step` or a comma-separated list.
    #[arg(long)]
    grid: String,
    #[arg(long)]
    scene: PathBuf,
    /// Seeds averaged per grid point.
    #[arg(long, default_value_t = 5)]
    replicates: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    aqbf: AqbfArgs,
    #[arg(long)]
    no_time: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, default_value = "aqbf,mc,ug,as,gi,tri")]
    methods: String,
    #[arg(long, default_value_t = 8)]
    steps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    aqbf: AqbfArgs,
    #[command(flatten)]
    baseline: BaselineArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long)]
    scene: PathBuf,
    /// Tolerances used for both partition and sampling.
    #[arg(long, default_value = "1e-2,1e-3,1e-4,1e-5")]
    eps: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    aqbf: AqbfArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ComputeOutput {
    area: f64,
    method: String,
    diagnostics: Diagnostics,
}

#[derive(Serialize)]
struct Diagnostics {
    n_leaf: usize,
    n_boundary: usize,
    total_subsamples: u64,
    max_depth: u32,
    wall_time_s: f64,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_scene(path: &Path) -> Result<Scene> {
    Ok(load_scene(path).with_context(|| format!("loading {}", path.display()))?.scene)
}

fn write_scene(scene: &Scene, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => save_scene(scene, p).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().write_all(scene_to_json(scene).as_bytes())?,
    }
    Ok(())
}

fn gen(a: GenArgs) -> Result<()> {
    if a.vertices < 3 {
        bail!("--vertices must be at least 3");
    }
    if !(a.diameter > 0.0) {
        bail!("--diameter must be positive");
    }
    let spec = GenSpec { n_vertices: a.vertices, n_circles: a.circles, diameter: a.diameter, seed: a.seed, ..GenSpec::default() };
    write_scene(&gen_scene(&spec), a.out.as_deref())
}

fn ingest(a: IngestArgs) -> Result<()> {
    let polygon = ingest_geojson(&a.geojson, a.select).with_context(|| format!("reading {}", a.geojson.display()))?;
    let circles = match a.circles_preset.as_deref() {
        None => Vec::new(),
        Some("caribbean") => caribbean_preset(a.seed, a.deg_per_km),
        Some(other) => bail!("unknown circle preset '{other}'"),
    };
    log::info!("polygon with {} vertices, {} circles", polygon.len(), circles.len());
    write_scene(&Scene::new(polygon, circles), a.out.as_deref())
}

fn compute(a: ComputeArgs) -> Result<()> {
    let scene = read_scene(&a.scene)?;
    let params = bench_params(&a.aqbf, &a.baseline, a.seed);
    params.aqbf.validate()?;
    let out = run_method(&scene, a.method, &params, a.seed)?;
    let diagnostics = match &out.aqbf {
        Some(r) => Diagnostics {
            n_leaf: r.n_leaf,
            n_boundary: r.n_boundary,
            total_subsamples: r.total_subsamples,
            max_depth: r.max_depth_reached,
            wall_time_s: out.wall_time_seconds,
        },
        None => Diagnostics {
            n_leaf: 0,
            n_boundary: 0,
            total_subsamples: if a.method == Method::Mc { params.mc_samples } else { 0 },
            max_depth: 0,
            wall_time_s: out.wall_time_seconds,
        },
    };
    let result = ComputeOutput { area: out.area, method: a.method.name().into(), diagnostics };
    let mut w = output(a.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &result)?;
    writeln!(w)?;
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> Result<()> {
    let case = Case::from_id(a.case)?;
    let methods = parse_methods(&a.methods)?;
    let params = bench_params(&a.aqbf, &a.baseline, a.seed);
    params.aqbf.validate()?;
    let records = run_case(case, a.trials, &methods, &params, a.seed)?;
    write_csv(output(a.out.as_deref())?, &records)?;

    let summary = summarize(&records);
    if let Some(p) = &a.summary {
        let mut w = csv::Writer::from_path(p)?;
        for s in &summary {
            w.serialize(s)?;
        }
        w.flush()?;
    }
    if a.out.is_some() {
        report(&summary, &records);
    }
    Ok(())
}

fn report(summary: &[bench::ConfigSummary], records: &[bench::TrialRecord]) {
    println!("{:>6} {:>6} {:>14} {:>12}", "value", "method", "mean_rel_err", "mean_time_s");
    for s in summary {
        println!(
            "{:>6} {:>6} {:>14.6e} {:>12.6}",
            s.param_value.map_or(String::new(), |v| v.to_string()),
            s.method,
            s.mean_rel_error,
            s.mean_time_s
        );
    }
    let sig = significance(records);
    match sig.friedman {
        Some(f) => println!("friedman over {:?}: chi2 = {:.4}, p = {:.3e}, blocks = {}", sig.methods, f.statistic, f.p_value, f.n),
        None => println!("friedman: needs at least 3 methods and 2 blocks"),
    }
    for (m, r) in &sig.wilcoxon {
        match r {
            Ok(t) => println!("wilcoxon aqbf vs {m}: W = {}, p = {:.3e}, n = {}", t.statistic, t.p_value, t.n),
            Err(e) => println!("wilcoxon aqbf vs {m}: {e}"),
        }
    }
}

fn sweep_cmd(a: SweepArgs) -> Result<()> {
    let scene = read_scene(&a.scene)?;
    let grid = parse_grid(&a.grid)?;
    let rows = sweep(&scene, a.axis, &grid, &a.aqbf.params(a.seed), a.replicates, !a.no_time)?;
    write_sweep_csv(output(a.out.as_deref())?, &rows)?;
    Ok(())
}

fn trace_cmd(a: TraceArgs) -> Result<()> {
    let scene = read_scene(&a.scene)?;
    let methods = parse_methods(&a.methods)?;
    let rows = bench::trace(&scene, &methods, a.steps, &bench_params(&a.aqbf, &a.baseline, a.seed));
    write_csv(output(a.out.as_deref())?, &rows)?;
    Ok(())
}

fn scaling_cmd(a: ScalingArgs) -> Result<()> {
    let scene = read_scene(&a.scene)?;
    let eps = parse_grid(&a.eps)?;
    let points = aqbf_work_scaling(&scene, &eps, &a.aqbf.params(a.seed))?;
    let mut w = csv::Writer::from_writer(output(a.out.as_deref())?);
    for p in &points {
        w.serialize(p)?;
    }
    w.flush()?;
    if points.len() >= 2 {
        let x: Vec<f64> = eps.iter().map(|e| 1.0 / e).collect();
        let y: Vec<f64> = points.iter().map(|p| p.work as f64).collect();
        eprintln!("work slope vs 1/eps: {:.3}", bench::log_log_slope(&x, &y));
        eprintln!("exact area: {}", exact_area(&scene));
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Ingest(a) => ingest(a),
        Command::Compute(a) => compute(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Trace(a) => trace_cmd(a),
        Command::Scaling(a) => scaling_cmd(a),
    }
}
