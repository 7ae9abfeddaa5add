//! Argument definitions and the four subcommands.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use multicover::instance::{generate, make_suite_scaled, GeneratorConfig, Scale};
use multicover::solver::{build_gmc_model, heuristic_start, write_lp, DEFAULT_ALPHA};
use multicover::candidates::enumerate_gmc;
use multicover::{Family, Instance, Solution};

use crate::bench::{run_method, run_suite, write_suite, Method, RunConfig, DEFAULT_TIME_LIMIT};
use crate::record::{append_records, to_csv};
use crate::render::render_svg;
use crate::{CliError, CliResult};

const CSV_HELP: &str = "CSV columns (header row first, `version` = 1): version, instance, n, m, ell, method, \
status, objective, lower_bound, gap, wall_secs, seed, nodes, rounds, constraints_added, error. \
Empty cells mean not applicable. gap = (objective - lower_bound) / objective. For heuristic rows in a \
benchmark, lower_bound is the gmc-ip bound of the same instance; for dgmc-ip rows it is the GMC optimum. \
wall_secs is only filled with --timing, which makes the output machine dependent.";

#[derive(Debug, Parser)]
#[command(name = "multicover", version, about = "Minimum-area disk multi-covers of weighted point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random instance, or a benchmark suite directory with a manifest.
    Generate(GenerateArgs),
    /// Solve one instance, write the solution JSON and emit a run record.
    #[command(after_help = CSV_HELP)]
    Solve(SolveArgs),
    /// Run methods on every instance of a suite and write one CSV table.
    #[command(after_help = CSV_HELP)]
    Benchmark(BenchmarkArgs),
    /// Draw an instance and its solution as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Full,
    Small,
}

impl From<ScaleArg> for Scale {
    fn from(s: ScaleArg) -> Scale {
        match s {
            ScaleArg::Full => Scale::Full,
            ScaleArg::Small => Scale::Small,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["n", "family"])))]
pub struct GenerateArgs {
    /// Number of points.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), requires = "m")]
    pub n: Option<u64>,
    /// Disk budget.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: Option<u64>,
    /// Benchmark family; writes a directory of instances and a manifest.
    #[arg(long, value_parser = ["uni_sm", "uni_lg", "uni_fix_n"], conflicts_with_all = ["n", "m"])]
    pub family: Option<String>,
    /// Suite size; `small` caps sizes at 60.
    #[arg(long, value_enum, default_value = "full", requires = "family")]
    pub scale: ScaleArg,
    /// Instance seed, or base seed of a suite.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100.0)]
    pub width: f64,
    #[arg(long, default_value_t = 100.0)]
    pub height: f64,
    /// Requirement values drawn uniformly.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub kappa: Vec<u32>,
    /// Separation distance stored in the instance.
    #[arg(long)]
    pub ell: Option<f64>,
    /// Output file, or directory for a suite.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Heuristic seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Separation distance for dgmc-ip [default: the instance's, else 5].
    #[arg(long)]
    pub ell: Option<f64>,
    /// dgmc-ip keeps candidates up to alpha times the largest GMC disk.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "on")]
    pub cliques: Toggle,
    /// Seconds per exact solve.
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT)]
    pub time_limit: f64,
    /// Fill the wall_secs column.
    #[arg(long)]
    pub timing: bool,
}

impl SolverArgs {
    fn config(&self) -> CliResult<RunConfig> {
        if let Some(ell) = self.ell {
            if !(ell > 0.0 && ell.is_finite()) {
                return Err(CliError::usage(format!("--ell must be positive, got {ell}")));
            }
        }
        if !(self.alpha >= 0.0) {
            return Err(CliError::usage(format!("--alpha must be nonnegative, got {}", self.alpha)));
        }
        if !(self.time_limit > 0.0 && self.time_limit.is_finite()) {
            return Err(CliError::usage(format!("--time-limit must be positive, got {}", self.time_limit)));
        }
        Ok(RunConfig {
            seed: self.seed,
            ell: self.ell,
            alpha: self.alpha,
            cliques: self.cliques == Toggle::On,
            time_limit: self.time_limit,
            timing: self.timing,
        })
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON file.
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Solution file [default: <instance stem>.<method>.json next to the instance].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Append the run record to this CSV file instead of printing it.
    #[arg(long)]
    pub record: Option<PathBuf>,
    /// Also write the GMC model in LP format, with the heuristic start as a comment.
    #[arg(long)]
    pub export_lp: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Suite directory written by `generate --family`.
    pub suite: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "heuristic,gmc-ip")]
    pub methods: Vec<Method>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// CSV output [default: stdout].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    /// Draw and label center pairs closer than 1.5 times this distance.
    #[arg(long)]
    pub ell: Option<f64>,
    #[arg(short, long)]
    pub output: PathBuf,
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn print(text: &str) -> CliResult<()> {
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io(format!("stdout: {e}")))
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Benchmark(a) => cmd_benchmark(&a),
        Command::Render(a) => cmd_render(&a),
    }
}

pub fn cmd_generate(a: &GenerateArgs) -> CliResult<()> {
    if let Some(family) = &a.family {
        let family: Family = family.parse()?;
        let scale = a.scale.into();
        let suite = make_suite_scaled(family, a.seed, scale);
        write_suite(&a.output, family, a.seed, scale, &suite)?;
        return Ok(());
    }
    let (Some(n), Some(m)) = (a.n, a.m) else {
        return Err(CliError::usage("--n and --m are required without --family"));
    };
    let cfg = GeneratorConfig {
        width: a.width,
        height: a.height,
        kappa_choices: a.kappa.clone(),
        seed: a.seed,
    };
    let mut inst = generate(n as usize, m as usize, &cfg)?;
    if let Some(ell) = a.ell {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(CliError::usage(format!("--ell must be positive, got {ell}")));
        }
        inst = inst.with_ell(ell);
    }
    inst.save(&a.output)?;
    Ok(())
}

fn default_solution_path(instance: &Path, method: Method) -> PathBuf {
    let stem = instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    instance.with_file_name(format!("{stem}.{method}.json"))
}

pub fn cmd_solve(a: &SolveArgs) -> CliResult<()> {
    let cfg = a.solver.config()?;
    let inst = Instance::load(&a.instance)?;
    if let Some(path) = &a.export_lp {
        let c = enumerate_gmc(&inst.points);
        let model = build_gmc_model(&c, &inst);
        let start = heuristic_start(&inst, &c, &model);
        write_lp(&model, start.as_deref(), path)?;
    }
    let out = run_method(&inst, a.method, &cfg)?;
    let path = a.output.clone().unwrap_or_else(|| default_solution_path(&a.instance, a.method));
    out.solution.save(&path)?;
    match &a.record {
        Some(csv) => append_records(csv, &[out.record])
            .map_err(|e| CliError::io(format!("{}: {e}", csv.display())))?,
        None => print(&to_csv(&[out.record]))?,
    }
    Ok(())
}

pub fn cmd_benchmark(a: &BenchmarkArgs) -> CliResult<()> {
    if a.methods.is_empty() {
        return Err(CliError::usage("--methods must name at least one method"));
    }
    let cfg = a.solver.config()?;
    let rows = run_suite(&a.suite, &a.methods, &cfg, a.jobs)?;
    let text = to_csv(&rows);
    match &a.output {
        Some(path) => write_file(path, &text),
        None => print(&text),
    }
}

pub fn cmd_render(a: &RenderArgs) -> CliResult<()> {
    if let Some(ell) = a.ell {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(CliError::usage(format!("--ell must be positive, got {ell}")));
        }
    }
    let inst = Instance::load(&a.instance)?;
    let sol = Solution::load(&a.solution)?;
    let svg = render_svg(&inst, &sol, a.ell)?;
    write_file(&a.output, &svg)
}
