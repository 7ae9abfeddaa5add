//! Exact solvers: the covering integer program over a candidate set, the
//! lazy separation loop for the dispersive variant, gap metrics and a
//! brute-force oracle.
//!
//! Node bounds come from the LP relaxation, solved by a small dual simplex
//! that warm-starts from the parent basis.

mod bnb;
pub mod lpfile;
pub mod model;
pub mod oracle;
pub mod separation;
mod simplex;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::candidates::{augment_kgons, enumerate_gmc, prune_by_radius, CandidateSet};
use crate::error::{Error, Result};
use crate::geometry::{contains, Disk, TOL};
use crate::heuristic::solve_heuristic;
use crate::instance::Instance;
use crate::solution::{total_area, Solution, SolutionMeta};

pub use lpfile::{export_lp, import_solution, read_solution, write_lp};
pub use model::{build_gmc_model, CoverModel, Row, RowKind, Sense};
pub use oracle::{brute_force_oracle, multiset_count, ORACLE_LIMIT};
pub use separation::{add_separation_cuts, separation_violations, CliqueState, SEPARATION_TOL};

pub const GMC_METHOD: &str = "gmc-ip";
pub const DGMC_METHOD: &str = "dgmc-ip";
pub const DEFAULT_ALPHA: f64 = 1.2;
pub const DEFAULT_ELL: f64 = 5.0;
pub const MAX_SEPARATION_ROUNDS: usize = 200;
/// Seed of the heuristic run that supplies the starting incumbent.
pub const START_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    /// A solution is known but optimality was not proven (limit reached).
    Feasible,
    Infeasible,
    /// A limit was reached before any solution was found.
    Unsolved,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Unsolved => "unsolved",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub lp_iterations: u64,
    pub rounds: u64,
    pub constraints_added: u64,
    pub candidates: u64,
    /// Columns left after dominance presolve.
    pub columns: u64,
    #[serde(skip)]
    pub wall_secs: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Limits {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

impl Limits {
    pub fn time(secs: f64) -> Self {
        Limits {
            time: Some(Duration::from_secs_f64(secs)),
            nodes: None,
        }
    }

    fn remaining(&self, start: Instant) -> Limits {
        Limits {
            time: self.time.map(|t| t.saturating_sub(start.elapsed())),
            nodes: self.nodes,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExactOptions {
    /// Drop columns dominated by a cheaper superset column. Never fires on
    /// an enumerated candidate set (each disk is the minimum enclosing disk
    /// of its defining points); useful for widened sets.
    pub presolve: bool,
    /// Starting incumbent in model space; ignored if infeasible.
    pub start: Option<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Selection {
    /// Candidate index in the model.
    pub index: usize,
    pub disk: Disk,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub status: Status,
    /// Nonzero variables in index order.
    pub selected: Vec<Selection>,
    pub objective: Option<f64>,
    /// For GMC the proven bound; for DGMC the GMC optimum.
    pub lower_bound: Option<f64>,
    /// Bound proven by the last branch-and-bound run on its own model.
    pub model_bound: Option<f64>,
    pub stats: SolveStats,
}

impl SolveResult {
    fn infeasible(stats: SolveStats) -> Self {
        SolveResult {
            status: Status::Infeasible,
            selected: Vec::new(),
            objective: None,
            lower_bound: None,
            model_bound: None,
            stats,
        }
    }

    /// Selected disks with multiplicities expanded.
    pub fn disks(&self) -> Vec<Disk> {
        self.selected
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.disk, s.multiplicity as usize))
            .collect()
    }

    pub fn to_solution(&self, inst: &Instance, method: &str) -> Solution {
        let disks = self.disks();
        let assignment = disks
            .iter()
            .map(|d| (0..inst.n()).filter(|&j| contains(d, &inst.points[j], TOL)).collect())
            .collect();
        Solution {
            method: method.to_string(),
            instance: inst.name.clone(),
            status: self.status,
            objective: total_area(&disks),
            disks,
            assignment,
            lower_bound: self.lower_bound,
            stats: Some(self.stats.clone()),
            meta: SolutionMeta {
                seed: None,
                iterations: self.stats.nodes,
                elapsed_secs: self.stats.wall_secs,
            },
        }
    }
}

pub fn solve_exact(model: &CoverModel, limits: &Limits) -> Result<SolveResult> {
    bnb::branch_and_bound(model, limits, &ExactOptions::default())
}

pub fn solve_exact_with(model: &CoverModel, limits: &Limits, opts: &ExactOptions) -> Result<SolveResult> {
    bnb::branch_and_bound(model, limits, opts)
}

/// Maps a heuristic solution onto candidates: each disk is replaced by the
/// cheapest candidate containing every point it contains.
fn start_from(sol: &Solution, inst: &Instance, c: &CandidateSet, model: &CoverModel) -> Option<Vec<u32>> {
    let mut x = vec![0u32; c.len()];
    for d in &sol.disks {
        let inside: Vec<usize> = (0..inst.n()).filter(|&j| contains(d, &inst.points[j], TOL)).collect();
        let best = (0..c.len())
            .filter(|&i| inside.iter().all(|j| c.covers[i].binary_search(j).is_ok()))
            .min_by(|&a, &b| c.disks[a].radius.total_cmp(&c.disks[b].radius).then(a.cmp(&b)))?;
        x[best] += 1;
    }
    model.check(&x).ok().map(|_| x)
}

/// Heuristic solution (seed [`START_SEED`]) mapped onto `c`, if it maps to a
/// feasible assignment of `model`.
pub fn heuristic_start(inst: &Instance, c: &CandidateSet, model: &CoverModel) -> Option<Vec<u32>> {
    let sol = solve_heuristic(inst, START_SEED).ok()?;
    start_from(&sol, inst, c, model)
}

/// Optimal GMC over the full candidate set, warm-started from the heuristic.
pub fn solve_gmc(inst: &Instance, limits: &Limits) -> Result<SolveResult> {
    inst.ensure_gmc_feasible()?;
    let c = enumerate_gmc(&inst.points);
    let model = build_gmc_model(&c, inst);
    let opts = ExactOptions {
        presolve: false,
        start: heuristic_start(inst, &c, &model),
    };
    solve_exact_with(&model, limits, &opts)
}

#[derive(Clone, Debug)]
pub struct DgmcOptions {
    pub ell: f64,
    pub alpha: f64,
    pub cliques: bool,
    /// Add the regular-polygon disks around multiply-covered points.
    pub augment: bool,
    pub limits: Limits,
    pub max_rounds: usize,
}

impl DgmcOptions {
    pub fn new(ell: f64) -> Self {
        DgmcOptions {
            ell,
            alpha: DEFAULT_ALPHA,
            cliques: true,
            augment: true,
            limits: Limits::default(),
            max_rounds: MAX_SEPARATION_ROUNDS,
        }
    }
}

/// Candidate set of the separated variant: GMC candidates no larger than
/// `alpha` times the largest disk of `gmc`, plus polygon disks.
pub fn dgmc_candidates(inst: &Instance, gmc: &SolveResult, opts: &DgmcOptions) -> Result<CandidateSet> {
    let r_max = gmc.selected.iter().map(|s| s.disk.radius).fold(0.0, f64::max);
    let base = prune_by_radius(&enumerate_gmc(&inst.points), opts.alpha * r_max);
    if opts.augment {
        augment_kgons(&base, inst, opts.ell)
    } else {
        Ok(base)
    }
}

/// GMC with center separation `ell`, solved over a discretized candidate
/// set with lazily added separation rows.
pub fn solve_dgmc(inst: &Instance, opts: &DgmcOptions) -> Result<SolveResult> {
    if !(opts.ell > 0.0 && opts.ell.is_finite()) {
        return Err(Error::InvalidArgument(format!("separation distance must be positive, got {}", opts.ell)));
    }
    if !(opts.alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be nonnegative, got {}", opts.alpha)));
    }
    let start = Instant::now();
    let gmc = solve_gmc(inst, &opts.limits)?;
    let mut stats = SolveStats {
        nodes: gmc.stats.nodes,
        lp_iterations: gmc.stats.lp_iterations,
        ..SolveStats::default()
    };
    if gmc.status == Status::Infeasible {
        return Ok(SolveResult::infeasible(stats));
    }
    let Some(gmc_objective) = gmc.objective else {
        stats.wall_secs = start.elapsed().as_secs_f64();
        return Ok(SolveResult {
            status: Status::Unsolved,
            selected: Vec::new(),
            objective: None,
            lower_bound: gmc.lower_bound,
            model_bound: None,
            stats,
        });
    };
    let lower_bound = if gmc.status == Status::Optimal {
        Some(gmc_objective)
    } else {
        gmc.lower_bound
    };

    let c = dgmc_candidates(inst, &gmc, opts)?;
    let mut model = build_gmc_model(&c, inst);
    model.binarize();
    stats.candidates = c.len() as u64;
    let mut cliques = CliqueState::default();

    let finish = |mut res: SolveResult, mut stats: SolveStats| {
        stats.wall_secs = start.elapsed().as_secs_f64();
        res.stats = stats;
        res.lower_bound = lower_bound;
        res
    };
    loop {
        let res = solve_exact_with(
            &model,
            &opts.limits.remaining(start),
            &ExactOptions {
                presolve: false,
                start: None,
            },
        )?;
        stats.nodes += res.stats.nodes;
        stats.lp_iterations += res.stats.lp_iterations;
        stats.columns = res.stats.columns;
        match res.status {
            Status::Infeasible => return Ok(finish(SolveResult::infeasible(SolveStats::default()), stats)),
            Status::Unsolved => return Ok(finish(res, stats)),
            Status::Optimal | Status::Feasible => {}
        }
        let selected: Vec<usize> = res.selected.iter().map(|s| s.index).collect();
        let disks: Vec<Disk> = res.selected.iter().map(|s| s.disk).collect();
        let violations = separation_violations(&disks, opts.ell);
        if violations.is_empty() {
            return Ok(finish(res, stats));
        }
        let out_of_rounds = stats.rounds as usize >= opts.max_rounds;
        if res.status == Status::Feasible || out_of_rounds {
            // The incumbent violates separation and cannot be repaired in time.
            let unsolved = SolveResult {
                status: Status::Unsolved,
                selected: Vec::new(),
                objective: None,
                lower_bound: None,
                model_bound: res.model_bound,
                stats: SolveStats::default(),
            };
            return Ok(finish(unsolved, stats));
        }
        let added = add_separation_cuts(&mut model, &c, &selected, &violations, opts.ell, opts.cliques, &mut cliques);
        debug_assert!(added > 0, "violated incumbent must yield a new row");
        stats.rounds += 1;
        stats.constraints_added += added as u64;
    }
}

/// `(alg - reference) / alg`; 0 when both are 0.
pub fn compute_gap(alg: f64, reference: f64) -> Result<f64> {
    if !(alg.is_finite() && reference.is_finite()) || reference < 0.0 || alg < reference - 1e-6 {
        return Err(Error::InvalidGap { alg, reference });
    }
    if alg <= reference || alg == 0.0 {
        return Ok(0.0);
    }
    Ok((alg - reference) / alg)
}
