//! Running solvers on instances and suites.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use multicover::heuristic::METHOD as HEURISTIC_METHOD;
use multicover::instance::Scale;
use multicover::solver::{
    compute_gap, solve_dgmc, solve_gmc, DgmcOptions, Limits, SolveResult, DEFAULT_ALPHA, DEFAULT_ELL, DGMC_METHOD,
    GMC_METHOD,
};
use multicover::{solve_heuristic, Error, Family, Instance, Result, Solution, Status};

use crate::record::RunRecord;

pub const MANIFEST: &str = "manifest.json";
pub const MANIFEST_VERSION: u32 = 1;
pub const DEFAULT_TIME_LIMIT: f64 = 900.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Method {
    Heuristic,
    #[value(name = "gmc-ip")]
    GmcIp,
    #[value(name = "dgmc-ip")]
    DgmcIp,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Heuristic => HEURISTIC_METHOD,
            Method::GmcIp => GMC_METHOD,
            Method::DgmcIp => DGMC_METHOD,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Heuristic seed.
    pub seed: u64,
    /// Overrides the instance's own separation distance.
    pub ell: Option<f64>,
    pub alpha: f64,
    pub cliques: bool,
    pub time_limit: f64,
    /// Fill the `wall_secs` column.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            ell: None,
            alpha: DEFAULT_ALPHA,
            cliques: true,
            time_limit: DEFAULT_TIME_LIMIT,
            timing: false,
        }
    }
}

impl RunConfig {
    /// Flag, then instance field, then the default.
    pub fn ell_for(&self, inst: &Instance) -> f64 {
        self.ell.or(inst.ell).unwrap_or(DEFAULT_ELL)
    }

    fn limits(&self) -> Limits {
        Limits::time(self.time_limit)
    }
}

pub struct Outcome {
    pub solution: Solution,
    pub record: RunRecord,
}

fn from_result(inst: &Instance, method: Method, res: &SolveResult) -> Outcome {
    let mut record = RunRecord::new(&inst.name, inst.n(), inst.m, method.as_str());
    record.status = res.status.to_string();
    record.objective = res.objective;
    record.lower_bound = res.lower_bound;
    record.nodes = res.stats.nodes;
    record.rounds = res.stats.rounds;
    record.constraints_added = res.stats.constraints_added;
    let mut solution = res.to_solution(inst, method.as_str());
    if res.objective.is_none() {
        solution.disks.clear();
        solution.assignment.clear();
    }
    Outcome { solution, record }
}

fn infeasible(inst: &Instance, method: Method) -> Outcome {
    let mut record = RunRecord::new(&inst.name, inst.n(), inst.m, method.as_str());
    record.status = Status::Infeasible.to_string();
    let solution = Solution {
        method: method.as_str().to_string(),
        instance: inst.name.clone(),
        status: Status::Infeasible,
        disks: Vec::new(),
        assignment: Vec::new(),
        objective: 0.0,
        lower_bound: None,
        stats: None,
        meta: Default::default(),
    };
    Outcome { solution, record }
}

/// Runs one method. An infeasible budget is an outcome, not an error.
pub fn run_method(inst: &Instance, method: Method, cfg: &RunConfig) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = match method {
        Method::Heuristic => match solve_heuristic(inst, cfg.seed) {
            Ok(sol) => {
                let mut record = RunRecord::new(&inst.name, inst.n(), inst.m, method.as_str());
                record.status = sol.status.to_string();
                record.objective = Some(sol.objective);
                Outcome { solution: sol, record }
            }
            Err(Error::Infeasible { .. }) => infeasible(inst, method),
            Err(e) => return Err(e),
        },
        Method::GmcIp => match solve_gmc(inst, &cfg.limits()) {
            Ok(res) => from_result(inst, method, &res),
            Err(Error::Infeasible { .. }) => infeasible(inst, method),
            Err(e) => return Err(e),
        },
        Method::DgmcIp => {
            let ell = cfg.ell_for(inst);
            let opts = DgmcOptions {
                alpha: cfg.alpha,
                cliques: cfg.cliques,
                limits: cfg.limits(),
                ..DgmcOptions::new(ell)
            };
            let mut out = match solve_dgmc(inst, &opts) {
                Ok(res) => from_result(inst, method, &res),
                Err(Error::Infeasible { .. }) => infeasible(inst, method),
                Err(e) => return Err(e),
            };
            out.record.ell = Some(ell);
            out
        }
    };
    if method == Method::Heuristic {
        out.record.seed = Some(cfg.seed);
    }
    out.record.gap = match (out.record.objective, out.record.lower_bound) {
        (Some(obj), Some(lb)) => Some(compute_gap(obj, lb)?),
        _ => None,
    };
    if cfg.timing {
        out.record.wall_secs = Some(start.elapsed().as_secs_f64());
    }
    Ok(out)
}

/// Index of a generated suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub family: String,
    pub base_seed: u64,
    pub scale: String,
    /// File names relative to the suite directory, in run order.
    pub instances: Vec<String>,
}

pub fn scale_name(scale: Scale) -> &'static str {
    match scale {
        Scale::Full => "full",
        Scale::Small => "small",
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes every instance as `<name>.json` plus the manifest.
pub fn write_suite(dir: &Path, family: Family, base_seed: u64, scale: Scale, suite: &[Instance]) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut names = Vec::with_capacity(suite.len());
    for inst in suite {
        let file = format!("{}.json", inst.name);
        inst.save(dir.join(&file))?;
        names.push(file);
    }
    let manifest = Manifest {
        version: MANIFEST_VERSION,
        family: family.to_string(),
        base_seed,
        scale: scale_name(scale).to_string(),
        instances: names,
    };
    let path = dir.join(MANIFEST);
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(manifest)
}

/// Instance paths of a suite in manifest order. Without a manifest every
/// `*.json` file in the directory is used, sorted by name.
pub fn suite_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let manifest = dir.join(MANIFEST);
    let paths: Vec<PathBuf> = if manifest.exists() {
        let text = fs::read_to_string(&manifest).map_err(|e| io_err(&manifest, e))?;
        let m: Manifest = serde_json::from_str(&text)?;
        m.instances.iter().map(|f| dir.join(f)).collect()
    } else {
        let mut v: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| io_err(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        v
    };
    if paths.is_empty() {
        return Err(Error::Validation {
            field: "suite",
            reason: format!("{} contains no instances", dir.display()),
        });
    }
    Ok(paths)
}

fn failed_row(name: &str, method: Method, e: &Error) -> RunRecord {
    let mut r = RunRecord::new(name, 0, 0, method.as_str());
    r.status = "error".into();
    r.error = Some(e.to_string());
    r
}

/// Rows for one instance in `methods` order. The heuristic's lower bound is
/// the GMC bound when `gmc-ip` is among the methods.
fn run_instance(path: &Path, methods: &[Method], cfg: &RunConfig) -> Vec<RunRecord> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let inst = match Instance::load(path) {
        Ok(i) => i,
        Err(e) => return methods.iter().map(|&m| failed_row(&name, m, &e)).collect(),
    };
    let mut rows: Vec<Option<RunRecord>> = vec![None; methods.len()];
    let mut gmc_bound = None;
    if let Some(k) = methods.iter().position(|&m| m == Method::GmcIp) {
        let row = match run_method(&inst, Method::GmcIp, cfg) {
            Ok(o) => {
                gmc_bound = o.record.lower_bound;
                o.record
            }
            Err(e) => failed_row(&inst.name, Method::GmcIp, &e),
        };
        rows[k] = Some(row);
    }
    for (k, &m) in methods.iter().enumerate() {
        if rows[k].is_some() {
            continue;
        }
        let row = run_method(&inst, m, cfg).and_then(|mut o| {
            if m == Method::Heuristic && o.record.objective.is_some() {
                if let Some(lb) = gmc_bound {
                    o.record.lower_bound = Some(lb);
                    o.record.gap = Some(compute_gap(o.record.objective.unwrap_or(0.0), lb)?);
                }
            }
            Ok(o.record)
        });
        rows[k] = Some(row.unwrap_or_else(|e| failed_row(&inst.name, m, &e)));
    }
    rows.into_iter().flatten().collect()
}

/// One row per (instance, method), instances in suite order. Failures are
/// recorded in the `error` column and do not stop the run.
pub fn run_suite(dir: &Path, methods: &[Method], cfg: &RunConfig, jobs: usize) -> Result<Vec<RunRecord>> {
    let paths = suite_paths(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let rows: Vec<Vec<RunRecord>> =
        pool.install(|| paths.par_iter().map(|p| run_instance(p, methods, cfg)).collect());
    Ok(rows.into_iter().flatten().collect())
}
