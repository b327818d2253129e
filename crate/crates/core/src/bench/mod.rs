//! Experiment harness: method runs against the exact oracle, the two synthetic
//! cases, parameter sweeps, complexity scaling, and significance tests.

mod scaling;
mod stats;
mod sweep;

pub use scaling::{aqbf_work_scaling, boundary_scaling, log_log_slope, mc_matched_samples, ScalingPoint};
pub use stats::{friedman_test, mid_ranks, wilcoxon_signed_rank, TestResult, EXACT_MAX_N};
pub use sweep::{parse_grid, sweep, write_sweep_csv, SweepAxis, SweepRow};

use crate::aqbf::{compute_area, AqbfParams, AreaResult};
use crate::baselines;
use crate::error::{CoverError, Result};
use crate::exact::exact_area;
use crate::geometry::Scene;
use crate::rng;
use crate::scenario::{gen_scene, GenSpec};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Aqbf,
    Mc,
    Ug,
    As,
    Gi,
    Tri,
    Bi,
}

impl Method {
    pub const ALL: [Method; 7] = [Method::Aqbf, Method::Mc, Method::Ug, Method::As, Method::Gi, Method::Tri, Method::Bi];

    pub fn name(self) -> &'static str {
        match self {
            Method::Aqbf => "aqbf",
            Method::Mc => "mc",
            Method::Ug => "ug",
            Method::As => "as",
            Method::Gi => "gi",
            Method::Tri => "tri",
            Method::Bi => "bi",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CoverError::InvalidParams(format!("unknown method '{s}'")))
    }
}

/// Parse a comma-separated method list.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let methods: Vec<Method> = list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    if methods.is_empty() {
        return Err(CoverError::InvalidParams("empty method list".into()));
    }
    Ok(methods)
}

/// Settings for every method plus harness options.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchParams {
    pub aqbf: AqbfParams,
    pub mc_samples: u64,
    pub ug_resolution: usize,
    pub gi_resolution: usize,
    pub as_max_depth: u32,
    /// When false every time field is written as 0 so outputs are byte-stable.
    pub record_time: bool,
}

impl Default for BenchParams {
    fn default() -> Self {
        Self {
            aqbf: AqbfParams::default(),
            mc_samples: 1_000_000,
            ug_resolution: 1000,
            gi_resolution: 200,
            as_max_depth: 10,
            record_time: true,
        }
    }
}

/// Result of running one method on one scene.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutput {
    pub method: Method,
    pub area: f64,
    pub wall_time_seconds: f64,
    /// Present for AQBF runs.
    pub aqbf: Option<AreaResult>,
}

/// Run a single method; `seed` drives the randomized ones.
pub fn run_method(scene: &Scene, method: Method, params: &BenchParams, seed: u64) -> Result<MethodOutput> {
    let start = Instant::now();
    let mut aqbf = None;
    let area = match method {
        Method::Aqbf => {
            let r = compute_area(scene, &AqbfParams { seed, ..params.aqbf.clone() })?;
            let a = r.area;
            aqbf = Some(r);
            a
        }
        Method::Mc => baselines::monte_carlo(scene, params.mc_samples, seed)?.area,
        Method::Ug => baselines::uniform_grid(scene, params.ug_resolution)?,
        Method::As => baselines::adaptive_subdivision(scene, params.as_max_depth)?,
        Method::Gi => baselines::grid_integration(scene, params.gi_resolution)?,
        Method::Tri => baselines::triangulation(scene)?,
        Method::Bi => exact_area(scene),
    };
    let elapsed = if params.record_time { start.elapsed().as_secs_f64() } else { 0.0 };
    if let Some(r) = aqbf.as_mut() {
        r.wall_time_seconds = elapsed;
    }
    Ok(MethodOutput { method, area, wall_time_seconds: elapsed, aqbf })
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub case_id: String,
    pub trial: usize,
    pub method: String,
    pub n_vertices: usize,
    pub n_circles: usize,
    pub param_value: Option<f64>,
    pub area: f64,
    pub exact_area: f64,
    pub abs_error: f64,
    /// `abs_error / exact_area`, or `abs_error` when the exact area is 0.
    pub rel_error: f64,
    pub time_s: f64,
    pub seed: u64,
}

/// Where a trial sits in an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialContext {
    pub case_id: String,
    pub trial: usize,
    pub param_value: Option<f64>,
    pub seed: u64,
}

fn record(ctx: &TrialContext, scene: &Scene, exact: f64, out: &MethodOutput) -> TrialRecord {
    let area = if out.method == Method::Bi { exact } else { out.area };
    let abs_error = (area - exact).abs();
    TrialRecord {
        case_id: ctx.case_id.clone(),
        trial: ctx.trial,
        method: out.method.name().to_string(),
        n_vertices: scene.polygon.len(),
        n_circles: scene.circles.len(),
        param_value: ctx.param_value,
        area,
        exact_area: exact,
        abs_error,
        rel_error: if exact > 0.0 { abs_error / exact } else { abs_error },
        time_s: out.wall_time_seconds,
        seed: ctx.seed,
    }
}

/// Run each method once on `scene` against the boundary-integration oracle.
/// A failing method yields an error entry without stopping the others.
pub fn run_trial(
    scene: &Scene,
    exact: f64,
    methods: &[Method],
    params: &BenchParams,
    ctx: &TrialContext,
) -> Vec<Result<TrialRecord>> {
    methods
        .iter()
        .map(|&m| run_method(scene, m, params, ctx.seed).map(|out| record(ctx, scene, exact, &out)))
        .collect()
}

/// [`run_trial`] on a standalone scene, seeded from the AQBF parameters.
pub fn run_comparison(scene: &Scene, methods: &[Method], params: &BenchParams) -> Vec<Result<TrialRecord>> {
    let exact = exact_area(scene);
    let ctx = TrialContext { case_id: "compare".into(), trial: 0, param_value: None, seed: params.aqbf.seed };
    run_trial(scene, exact, methods, params, &ctx)
}

/// The two synthetic experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// Polygon complexity `m = 3..=50` with 30 circles.
    Vertices,
    /// Circle density `n = 1..=30` on 50-vertex polygons.
    Circles,
}

impl Case {
    pub fn from_id(id: u32) -> Result<Self> {
        match id {
            1 => Ok(Case::Vertices),
            2 => Ok(Case::Circles),
            _ => Err(CoverError::InvalidParams(format!("unknown case {id}; expected 1 or 2"))),
        }
    }

    pub fn id(self) -> u32 {
        match self {
            Case::Vertices => 1,
            Case::Circles => 2,
        }
    }

    /// `(n_vertices, n_circles)` for every configuration, in sweep order.
    pub fn configs(self) -> Vec<(usize, usize)> {
        match self {
            Case::Vertices => (3..=50).map(|m| (m, 30)).collect(),
            Case::Circles => (1..=30).map(|n| (50, n)).collect(),
        }
    }

    fn varied(self, (m, n): (usize, usize)) -> usize {
        match self {
            Case::Vertices => m,
            Case::Circles => n,
        }
    }
}

/// Seed of one trial, derived from the master seed by case, configuration
/// value and trial index.
pub fn trial_seed(master: u64, case: Case, value: usize, trial: usize) -> u64 {
    rng::derive_path(master, &[case.id() as u64, value as u64, trial as u64])
}

/// Full sweep of one case. Trials run concurrently; rows come back sorted by
/// configuration, trial and method. Rows of failing methods are logged and
/// skipped.
pub fn run_case(case: Case, trials: usize, methods: &[Method], params: &BenchParams, master_seed: u64) -> Result<Vec<TrialRecord>> {
    run_case_configs(case, &case.configs(), trials, methods, params, master_seed)
}

/// [`run_case`] restricted to a subset of configurations.
pub fn run_case_configs(
    case: Case,
    configs: &[(usize, usize)],
    trials: usize,
    methods: &[Method],
    params: &BenchParams,
    master_seed: u64,
) -> Result<Vec<TrialRecord>> {
    if trials == 0 {
        return Err(CoverError::InvalidParams("trials must be at least 1".into()));
    }
    let jobs: Vec<((usize, usize), usize)> =
        configs.iter().flat_map(|&c| (0..trials).map(move |t| (c, t))).collect();
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    let rows: Vec<Vec<Result<TrialRecord>>> = jobs
        .par_iter()
        .map(|&(config, trial)| {
            let value = case.varied(config);
            let seed = trial_seed(master_seed, case, value, trial);
            let scene = gen_scene(&GenSpec { n_vertices: config.0, n_circles: config.1, seed, ..GenSpec::default() });
            let exact = exact_area(&scene);
            let ctx = TrialContext { case_id: case.id().to_string(), trial, param_value: Some(value as f64), seed };
            run_trial(&scene, exact, &methods, params, &ctx)
        })
        .collect();
    let mut out = Vec::with_capacity(rows.len() * methods.len());
    for r in rows.into_iter().flatten() {
        match r {
            Ok(rec) => out.push(rec),
            Err(e) => log::warn!("method failed: {e}"),
        }
    }
    Ok(out)
}

/// Error traces on doubling refinement schedules: each method is rerun with
/// its resolution parameter doubled `steps` times.
pub fn trace(scene: &Scene, methods: &[Method], steps: usize, params: &BenchParams) -> Vec<TrialRecord> {
    let exact = exact_area(scene);
    let mut out = Vec::new();
    for &m in methods {
        let schedule: Vec<(f64, BenchParams)> = (0..steps)
            .map(|i| {
                let mut p = params.clone();
                let scale = 1u64 << i;
                let value = match m {
                    Method::Aqbf => {
                        // Halve the cell-size threshold per step.
                        p.aqbf.epsilon_partition = 1e-2 / (scale * scale) as f64;
                        p.aqbf.epsilon_partition
                    }
                    Method::Mc => {
                        p.mc_samples = 1000 * scale;
                        p.mc_samples as f64
                    }
                    Method::Ug => {
                        p.ug_resolution = 16 * scale as usize;
                        p.ug_resolution as f64
                    }
                    Method::Gi => {
                        p.gi_resolution = 8 * scale as usize;
                        p.gi_resolution as f64
                    }
                    Method::As => {
                        p.as_max_depth = 3 + i as u32;
                        p.as_max_depth as f64
                    }
                    Method::Tri | Method::Bi => f64::NAN,
                };
                (value, p)
            })
            .collect();
        let fixed = matches!(m, Method::Tri | Method::Bi);
        for (i, (value, p)) in schedule.into_iter().enumerate() {
            if fixed && i > 0 {
                break;
            }
            let ctx = TrialContext {
                case_id: "trace".into(),
                trial: i,
                param_value: if fixed { None } else { Some(value) },
                seed: params.aqbf.seed,
            };
            match run_method(scene, m, &p, ctx.seed) {
                Ok(o) => out.push(record(&ctx, scene, exact, &o)),
                Err(e) => log::warn!("{m} failed at step {i}: {e}"),
            }
        }
    }
    out
}

/// Write records as CSV with a header row.
pub fn write_csv<W: Write>(writer: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record([
            "case_id", "trial", "method", "n_vertices", "n_circles", "param_value", "area", "exact_area",
            "abs_error", "rel_error", "time_s", "seed",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Mean error and time of one method at one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub case_id: String,
    pub param_value: Option<f64>,
    pub method: String,
    pub trials: usize,
    pub mean_rel_error: f64,
    pub mean_time_s: f64,
}

pub fn summarize(records: &[TrialRecord]) -> Vec<ConfigSummary> {
    let mut groups: BTreeMap<(String, u64, String), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.case_id.clone(), r.param_value.map_or(0, f64::to_bits), r.method.clone());
        groups.entry(key).or_default().push(r);
    }
    let mut out: Vec<ConfigSummary> = groups
        .into_values()
        .map(|g| {
            let n = g.len() as f64;
            ConfigSummary {
                case_id: g[0].case_id.clone(),
                param_value: g[0].param_value,
                method: g[0].method.clone(),
                trials: g.len(),
                mean_rel_error: g.iter().map(|r| r.rel_error).sum::<f64>() / n,
                mean_time_s: g.iter().map(|r| r.time_s).sum::<f64>() / n,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.case_id
            .cmp(&b.case_id)
            .then(a.param_value.unwrap_or(f64::NAN).total_cmp(&b.param_value.unwrap_or(f64::NAN)))
            .then(method_rank(&a.method).cmp(&method_rank(&b.method)))
    });
    out
}

fn method_rank(name: &str) -> usize {
    Method::ALL.iter().position(|m| m.name() == name).unwrap_or(usize::MAX)
}

/// Friedman test across methods plus pairwise Wilcoxon tests of AQBF against
/// each other method, on relative errors blocked by (configuration, trial).
#[derive(Debug)]
pub struct Significance {
    pub methods: Vec<String>,
    pub friedman: Option<TestResult>,
    pub wilcoxon: Vec<(String, Result<TestResult>)>,
}

pub fn significance(records: &[TrialRecord]) -> Significance {
    let mut methods: Vec<String> = records.iter().map(|r| r.method.clone()).filter(|m| m != "bi").collect();
    methods.sort_by_key(|m| method_rank(m));
    methods.dedup();
    let mut blocks: BTreeMap<(String, u64, usize), BTreeMap<String, f64>> = BTreeMap::new();
    for r in records {
        let key = (r.case_id.clone(), r.param_value.map_or(0, f64::to_bits), r.trial);
        blocks.entry(key).or_default().insert(r.method.clone(), r.rel_error);
    }
    let matrix: Vec<Vec<f64>> = blocks
        .values()
        .filter(|b| methods.iter().all(|m| b.contains_key(m)))
        .map(|b| methods.iter().map(|m| b[m]).collect())
        .collect();
    let friedman = friedman_test(&matrix).ok();
    let mut wilcoxon = Vec::new();
    if let Some(a) = methods.iter().position(|m| m == "aqbf") {
        for (j, m) in methods.iter().enumerate() {
            if j == a {
                continue;
            }
            let x: Vec<f64> = matrix.iter().map(|row| row[a]).collect();
            let y: Vec<f64> = matrix.iter().map(|row| row[j]).collect();
            wilcoxon.push((m.clone(), wilcoxon_signed_rank(&x, &y)));
        }
    }
    Significance { methods, friedman, wilcoxon }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Circle, Point, Polygon};

    fn quarter_disk() -> Scene {
        let sq = Polygon::new(vec![
            Point::new(0., 0.),
            Point::new(10., 0.),
            Point::new(10., 10.),
            Point::new(0., 10.),
        ])
        .unwrap();
        Scene::new(sq, vec![Circle::new(Point::new(0., 0.), 1.).unwrap()])
    }

    fn quick() -> BenchParams {
        BenchParams {
            aqbf: AqbfParams { epsilon_partition: 1e-4, ..AqbfParams::default() },
            mc_samples: 20_000,
            ug_resolution: 100,
            gi_resolution: 40,
            as_max_depth: 6,
            record_time: false,
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("xyz".parse::<Method>().is_err());
        assert_eq!(parse_methods("aqbf,mc, bi").unwrap(), vec![Method::Aqbf, Method::Mc, Method::Bi]);
    }

    #[test]
    fn comparison_examples() {
        let scene = quarter_disk();
        let bi = run_comparison(&scene, &[Method::Bi], &BenchParams::default());
        assert_eq!(bi.len(), 1);
        assert_eq!(bi[0].as_ref().unwrap().rel_error, 0.0);
        let rec = run_comparison(&scene, &[Method::Aqbf], &BenchParams::default());
        let r = rec[0].as_ref().unwrap();
        assert!((r.area - std::f64::consts::PI / 4.0).abs() / (std::f64::consts::PI / 4.0) <= 1e-3);
        assert!(r.rel_error <= 1e-3);
    }

    #[test]
    fn failing_method_does_not_abort_others() {
        let scene = quarter_disk();
        let params = BenchParams { mc_samples: 0, ..quick() };
        let rows = run_comparison(&scene, &[Method::Mc, Method::Bi], &params);
        assert!(rows[0].is_err());
        assert!(rows[1].is_ok());
    }

    #[test]
    fn case_row_count_and_determinism() {
        let methods = [Method::Aqbf, Method::Tri, Method::Bi];
        let configs: Vec<_> = Case::Vertices.configs().into_iter().step_by(16).collect();
        let a = run_case_configs(Case::Vertices, &configs, 2, &methods, &quick(), 42).unwrap();
        assert_eq!(a.len(), configs.len() * 2 * methods.len());
        let b = run_case_configs(Case::Vertices, &configs, 2, &methods, &quick(), 42).unwrap();
        let mut ca = Vec::new();
        let mut cb = Vec::new();
        write_csv(&mut ca, &a).unwrap();
        write_csv(&mut cb, &b).unwrap();
        assert_eq!(ca, cb);
        assert!(a.iter().all(|r| r.rel_error.is_finite() && r.rel_error >= 0.0));
        assert!(a.iter().filter(|r| r.method == "bi").all(|r| r.rel_error == 0.0));
        assert_eq!(Case::Vertices.configs().len(), 48);
        assert_eq!(Case::Circles.configs().len(), 30);
    }

    #[test]
    fn csv_header_and_columns() {
        let rows: Vec<TrialRecord> = run_comparison(&quarter_disk(), &[Method::Bi], &quick())
            .into_iter()
            .map(|r| r.unwrap())
            .collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "case_id,trial,method,n_vertices,n_circles,param_value,area,exact_area,abs_error,rel_error,time_s,seed"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("compare,0,bi,4,1,,"), "{row}");
        let mut empty = Vec::new();
        write_csv(&mut empty, &[]).unwrap();
        assert!(String::from_utf8(empty).unwrap().starts_with("case_id,"));
    }

    #[test]
    fn summaries_and_tests() {
        let methods = [Method::Aqbf, Method::Mc, Method::Tri, Method::Bi];
        let configs: Vec<_> = Case::Circles.configs().into_iter().step_by(10).collect();
        let rows = run_case_configs(Case::Circles, &configs, 2, &methods, &quick(), 7).unwrap();
        let summary = summarize(&rows);
        assert_eq!(summary.len(), configs.len() * methods.len());
        assert!(summary.iter().all(|s| s.trials == 2));
        let sig = significance(&rows);
        assert_eq!(sig.methods, vec!["aqbf", "mc", "tri"]);
        assert!(sig.friedman.is_some());
        assert_eq!(sig.wilcoxon.len(), 2);
    }

    #[test]
    fn traces_follow_doubling_schedules() {
        let rows = trace(&quarter_disk(), &[Method::Mc, Method::Ug, Method::Tri], 4, &quick());
        assert_eq!(rows.len(), 4 + 4 + 1);
        let mc: Vec<f64> = rows.iter().filter(|r| r.method == "mc").map(|r| r.param_value.unwrap()).collect();
        assert_eq!(mc, vec![1000.0, 2000.0, 4000.0, 8000.0]);
    }
}
