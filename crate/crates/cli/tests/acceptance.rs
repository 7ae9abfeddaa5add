//! Acceptance criteria, one PASS/FAIL line each on stderr.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multicover::candidates::enumerate_gmc;
use multicover::geometry::{obtuse_fraction_estimate, Region};
use multicover::instance::{generate, GeneratorConfig};
use multicover::solver::{
    brute_force_oracle, build_gmc_model, compute_gap, separation_violations, solve_dgmc, solve_exact_with, solve_gmc,
    DgmcOptions, ExactOptions, Limits, Status,
};
use multicover::{solve_heuristic, Disk, Error, Instance, Origin, Point, SpatialIndex};

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn add(&mut self, id: u32, pass: bool, text: String) {
        if self.lines.is_empty() {
            let _ = writeln!(std::io::stderr());
        }
        let line = format!("[{}] criterion {id}: {text}", if pass { "PASS" } else { "FAIL" });
        // Written past the test harness capture so the lines always show.
        let _ = writeln!(std::io::stderr(), "{line}");
        self.lines.push((pass, line));
    }
}

fn tiny(seed: u64) -> Instance {
    let n = 3 + (seed % 5) as usize;
    let m = 1 + ((seed / 5) % 3) as usize;
    let cfg = GeneratorConfig {
        width: 20.0,
        height: 20.0,
        kappa_choices: vec![1, 2],
        seed,
    };
    generate(n, m, &cfg).unwrap()
}

/// Instances with a finite optimum compared in criteria 1 and 2.
const TINY_FEASIBLE: usize = 200;

/// Optimum per tiny instance; `None` when the budget is below the largest
/// requirement.
fn criterion_1(r: &mut Report) -> Vec<(Instance, Option<f64>)> {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut mismatches = 0;
    let mut infeasible = 0;
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() - infeasible < TINY_FEASIBLE && seed < 10_000 {
        let inst = tiny(seed);
        seed += 1;
        let oracle = brute_force_oracle(&enumerate_gmc(&inst.points), &inst).unwrap();
        let solved = match solve_gmc(&inst, &Limits::default()) {
            Ok(res) if res.status == Status::Optimal => res.objective,
            Err(Error::Infeasible { .. }) => None,
            _ => {
                mismatches += 1;
                None
            }
        };
        match (oracle, solved) {
            (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
            (None, None) => infeasible += 1,
            _ => mismatches += 1,
        }
        out.push((inst, oracle));
    }
    let secs = t.elapsed().as_secs_f64();
    let feasible = out.len() - infeasible;
    let pass = mismatches == 0 && worst <= 1e-9 && secs < 60.0 && feasible >= TINY_FEASIBLE;
    r.add(
        1,
        pass,
        format!(
            "oracle equivalence on {feasible} feasible and {infeasible} infeasible instances, \
             max |diff| {worst:.1e} (tol 1e-9), {mismatches} mismatches, {secs:.1}s (limit 60s)"
        ),
    );
    out
}

const EXTRA_DISKS: usize = 10_000;

fn criterion_2(r: &mut Report, tiny: &[(Instance, Option<f64>)]) {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut checked = 0;
    for (k, (inst, optimum)) in tiny.iter().enumerate() {
        let Some(optimum) = *optimum else { continue };
        let idx = SpatialIndex::build(&inst.points);
        let mut wide = enumerate_gmc(&inst.points);
        let mut rng = ChaCha8Rng::seed_from_u64(1_000_000 + k as u64);
        for e in 0..EXTRA_DISKS {
            let center = Point::new(rng.gen_range(-5.0..25.0), rng.gen_range(-5.0..25.0));
            let r_max = if e % 2 == 0 { 3.0 } else { 25.0 };
            wide.push(Disk::new(center, rng.gen_range(0.0..r_max)), Origin::External, &idx);
        }
        let opts = ExactOptions {
            presolve: true,
            start: None,
        };
        let res = solve_exact_with(&build_gmc_model(&wide, inst), &Limits::default(), &opts).unwrap();
        match res.objective {
            Some(v) if res.status == Status::Optimal => worst = worst.max((v - optimum).abs()),
            _ => failures += 1,
        }
        checked += 1;
    }
    let secs = t.elapsed().as_secs_f64();
    r.add(
        2,
        failures == 0 && worst <= 1e-9,
        format!(
            "candidate sufficiency on {checked} instances widened by {EXTRA_DISKS} disks, \
             max |diff| {worst:.1e} (tol 1e-9), {failures} failures, {secs:.1}s"
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let t = Instant::now();
    let mut gaps = Vec::new();
    let mut infeasible = 0;
    for k in 0..25u64 {
        let n = [20, 40, 60][(k % 3) as usize];
        let inst = generate(n, 20, &GeneratorConfig::with_seed(500 + k)).unwrap();
        let heur = solve_heuristic(&inst, k).unwrap();
        if !heur.is_feasible(&inst) {
            infeasible += 1;
            continue;
        }
        let ip = solve_gmc(&inst, &Limits::default()).unwrap();
        assert_eq!(ip.status, Status::Optimal);
        gaps.push(compute_gap(heur.objective, ip.objective.unwrap()).unwrap());
    }
    let mean = gaps.iter().sum::<f64>() / gaps.len().max(1) as f64;
    let (lo, hi) = gaps.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &g| (a.min(g), b.max(g)));
    let secs = t.elapsed().as_secs_f64();
    r.add(
        3,
        infeasible == 0 && (0.10..=0.45).contains(&mean) && secs < 300.0,
        format!(
            "heuristic on 25 instances: {infeasible} infeasible, mean gap {mean:.4} in [0.10, 0.45] \
             (min {lo:.4}, max {hi:.4}), {secs:.1}s (limit 300s)"
        ),
    );
}

struct DgmcCase {
    inst: Instance,
    status: Status,
    objective: Option<f64>,
    nodes: u64,
    rounds: u64,
    rows: u64,
}

const ELL: f64 = 5.0;
const DGMC_TARGET: usize = 50;

fn dgmc_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=15);
    let side = rng.gen_range(30.0..40.0);
    let cfg = GeneratorConfig {
        width: side,
        height: side,
        kappa_choices: vec![1, 2],
        seed,
    };
    let mut inst = generate(n, 5, &cfg).unwrap();
    inst.m = rng.gen_range(inst.kappa_max() as usize..=5);
    inst
}

fn solve_case(inst: &Instance, cliques: bool) -> DgmcCase {
    let opts = DgmcOptions {
        cliques,
        ..DgmcOptions::new(ELL)
    };
    let res = solve_dgmc(inst, &opts).unwrap();
    DgmcCase {
        inst: inst.clone(),
        status: res.status,
        objective: res.objective,
        nodes: res.stats.nodes,
        rounds: res.stats.rounds,
        rows: res.stats.constraints_added,
    }
}

/// Cases with cliques on, in seed order, until `DGMC_TARGET` are solved.
fn criterion_4(r: &mut Report) -> Vec<DgmcCase> {
    let t = Instant::now();
    let mut cases = Vec::new();
    let mut solved = 0;
    let mut bad = Vec::new();
    let mut seed = 0;
    while solved < DGMC_TARGET && seed < 1000 {
        let inst = dgmc_instance(seed);
        seed += 1;
        let opts = DgmcOptions::new(ELL);
        let res = solve_dgmc(&inst, &opts).unwrap();
        if res.status == Status::Optimal {
            solved += 1;
            let sol = res.to_solution(&inst, "dgmc-ip");
            let separated = separation_violations(&sol.disks, ELL).is_empty();
            let gmc = solve_gmc(&inst, &Limits::default()).unwrap().objective.unwrap();
            let obj = res.objective.unwrap();
            if !(separated && sol.is_feasible(&inst) && obj >= gmc - 1e-9) {
                bad.push(inst.name.clone());
            }
        } else if res.status != Status::Infeasible {
            bad.push(format!("{} ({})", inst.name, res.status));
        }
        cases.push(DgmcCase {
            inst,
            status: res.status,
            objective: res.objective,
            nodes: res.stats.nodes,
            rounds: res.stats.rounds,
            rows: res.stats.constraints_added,
        });
    }
    let iso = Instance::new("iso", vec![Point::new(0.0, 0.0)], vec![2], 2).unwrap();
    let iso_obj = solve_dgmc(&iso, &DgmcOptions::new(4.0)).unwrap().objective;
    let iso_ok = iso_obj.is_some_and(|v| (v - 8.0 * PI).abs() <= 1e-6);
    let rejected = cases.len() - solved;
    let secs = t.elapsed().as_secs_f64();
    r.add(
        4,
        solved == DGMC_TARGET && bad.is_empty() && iso_ok,
        format!(
            "DGMC on {solved} solved instances ({rejected} infeasible under the discretization skipped): \
             {} violations {:?}; isolated point {:?} vs 8pi = {:.9}; {secs:.1}s",
            bad.len(),
            bad,
            iso_obj,
            8.0 * PI
        ),
    );
    cases
}

fn criterion_5(r: &mut Report, on: &[DgmcCase]) {
    let t = Instant::now();
    let mut differ = Vec::new();
    let mut off_stats = (0, 0, 0);
    for case in on {
        let off = solve_case(&case.inst, false);
        off_stats = (off_stats.0 + off.nodes, off_stats.1 + off.rounds, off_stats.2 + off.rows);
        let same = case.status == off.status
            && match (case.objective, off.objective) {
                (Some(a), Some(b)) => (a - b).abs() <= 1e-6,
                (None, None) => true,
                _ => false,
            };
        if !same {
            differ.push(case.inst.name.clone());
        }
    }
    let on_stats = on
        .iter()
        .fold((0, 0, 0), |s, c| (s.0 + c.nodes, s.1 + c.rounds, s.2 + c.rows));
    let secs = t.elapsed().as_secs_f64();
    r.add(
        5,
        differ.is_empty(),
        format!(
            "cliques on/off on {} instances: {} differ {:?}; nodes/rounds/rows on {:?}, off {:?}; {secs:.1}s",
            on.len(),
            differ.len(),
            differ,
            on_stats,
            off_stats
        ),
    );
}

fn criterion_6(r: &mut Report) {
    let t = Instant::now();
    let mean = |region| {
        (1..=5u64)
            .map(|s| obtuse_fraction_estimate(region, 1_000_000, s).unwrap())
            .sum::<f64>()
            / 5.0
    };
    let square = mean(Region::UnitSquare);
    let disk = mean(Region::UnitDisk);
    let secs = t.elapsed().as_secs_f64();
    let pass = (square - 0.725206).abs() <= 0.003 && (disk - 0.719715).abs() <= 0.003 && secs < 30.0;
    r.add(
        6,
        pass,
        format!(
            "non-acute fraction: square {square:.6} (target 0.725206), disk {disk:.6} \
             (target 0.719715), tol 0.003, {secs:.1}s (limit 30s)"
        ),
    );
}

fn cli(dir: &Path, args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_multicover"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn multicover");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

/// Runs a fixed command script in `dir`; returns every artifact and stdout.
fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut outs = Vec::new();
    outs.push(("generate".into(), cli(dir, &["generate", "--n", "12", "--m", "4", "--seed", "7", "--kappa", "1,2", "-o", "inst.json"])));
    outs.push(("suite".into(), cli(dir, &["generate", "--family", "uni_fix_n", "--scale", "small", "--seed", "3", "-o", "suite"])));
    for m in ["heuristic", "gmc-ip", "dgmc-ip"] {
        let o = format!("{m}.json");
        outs.push((m.into(), cli(dir, &["solve", "--method", m, "--seed", "3", "--alpha", "inf", "-o", &o, "--export-lp", "model.lp", "inst.json"])));
    }
    fs::create_dir(dir.join("mini")).unwrap();
    for (k, seed) in [11u64, 12, 13, 14].iter().enumerate() {
        let path = format!("mini/i{k}.json");
        cli(dir, &["generate", "--n", "10", "--m", "4", "--seed", &seed.to_string(), "--kappa", "1,2", "-o", &path]);
    }
    outs.push((
        "benchmark".into(),
        cli(dir, &["benchmark", "mini", "--methods", "heuristic,gmc-ip,dgmc-ip", "--jobs", "3", "-o", "bench.csv"]),
    ));
    outs.push(("render".into(), cli(dir, &["render", "--instance", "inst.json", "--solution", "dgmc-ip.json", "--ell", "5", "-o", "out.svg"])));
    let mut files = Vec::new();
    collect(dir, dir, &mut files);
    files.sort();
    for f in files {
        let bytes = fs::read(dir.join(&f)).unwrap();
        outs.push((f, bytes));
    }
    outs
}

fn collect(root: &Path, dir: &Path, out: &mut Vec<String>) {
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            collect(root, &p, out);
        } else {
            out.push(p.strip_prefix(root).unwrap().to_string_lossy().into_owned());
        }
    }
}

fn criterion_7(r: &mut Report) {
    let t = Instant::now();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = artifacts(a.path());
    let second = artifacts(b.path());
    let differing: Vec<&String> = first
        .iter()
        .zip(&second)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| &x.0)
        .collect();
    let pass = first.len() == second.len() && differing.is_empty();
    let secs = t.elapsed().as_secs_f64();
    r.add(
        7,
        pass,
        format!(
            "{} CLI artifacts from generate/solve/benchmark/render compared byte for byte across two runs, \
             differing {:?}; {secs:.1}s",
            first.len(),
            differing
        ),
    );
}

#[test]
fn acceptance_criteria() {
    let mut r = Report { lines: Vec::new() };
    let tiny = criterion_1(&mut r);
    criterion_2(&mut r, &tiny);
    criterion_3(&mut r);
    let dgmc = criterion_4(&mut r);
    criterion_5(&mut r, &dgmc);
    criterion_6(&mut r);
    criterion_7(&mut r);
    let _ = writeln!(
        std::io::stderr(),
        "[INFO] criterion 8: absolute runtimes, full-scale memory behavior, large-instance DGMC gaps and \
         the published figure objectives are not reproduced at desk scale (see README)"
    );
    let failed: Vec<&String> = r.lines.iter().filter(|(p, _)| !p).map(|(_, l)| l).collect();
    assert!(failed.is_empty(), "failed criteria:\n{failed:#?}");
}
