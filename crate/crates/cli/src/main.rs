//! `fwlab`: command-line front end of the verification harness.
//!
//! Every run writes a JSON report (to `--out`, or stdout) and exits with
//! 0 when all asserted items pass, 1 when an assertion fails and 2 on usage
//! or configuration errors.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fwlab::calculus::{Picture, SetLabel};
use fwlab::dirac::DiracContext;
use fwlab::maxwell::MaxwellContext;
use fwlab::verify::{
    check_algebra, check_o4, dirac_boost_check, dirac_invariance, dirac_negative_control, dirac_spins, maxwell_invariance,
    maxwell_negative_control, rapidity, run_all, CheckReport, FlowConfig, FlowRecord, InvarianceConfig, SuiteConfig,
};
use serde::Serialize;

use config::{Config, UsageError};

const THREADS_VAR: &str = "FWLAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "fwlab", version, about = "Verification harness for canonical-representation invariance generators")]
struct Cli {
    /// key=value or JSON file with defaults for any flag; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solution-mapping check of one generator family on a grid.
    Invariance(InvarianceArgs),
    /// Structure constants of one Dirac family.
    Algebra(AlgebraArgs),
    /// Nonlocal O(4) spin operators.
    O4(O4Args),
    /// Expectation-value flow under one boost.
    Boost(BoostArgs),
    /// The full acceptance suite.
    All(AllArgs),
}

#[derive(Args, Debug)]
struct InvarianceArgs {
    /// dirac or maxwell
    #[arg(long)]
    equation: Option<String>,
    /// q1, q2, q3 or q4
    #[arg(long)]
    set: Option<String>,
    /// original or canonical
    #[arg(long)]
    rep: Option<String>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long = "box")]
    box_len: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run the companion negative control instead.
    #[arg(long)]
    control: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    rep: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct O4Args {
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoostArgs {
    #[arg(long)]
    set: Option<String>,
    /// 1, 2 or 3
    #[arg(long)]
    axis: Option<usize>,
    /// Final rapidity.
    #[arg(long, conflicts_with = "velocity")]
    theta: Option<f64>,
    /// Final velocity; the rapidity is artanh|V|.
    #[arg(long)]
    velocity: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AllArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Assertion,
}

impl From<fwlab::Error> for Failure {
    fn from(e: fwlab::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

fn threads() -> Result<usize, Failure> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::Usage(format!("{THREADS_VAR}={v} is not a positive integer"))),
        },
    }
}

fn write_json<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("reports contain only plain data") + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summarize(report: &CheckReport) {
    let verdict = if report.pass { "pass" } else { "FAIL" };
    eprintln!("{verdict} {} max_residual={:.3e} ({:.1}s)", report.check, report.max_residual, report.wall_time_s);
    for name in report.failures() {
        eprintln!("  failed: {name}");
    }
}

fn finish(pass: bool) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::Assertion)
    }
}

fn invariance(a: &InvarianceArgs, cfg: &Config) -> Result<(), Failure> {
    let equation = cfg.pick(a.equation.clone(), "equation")?.unwrap_or_else(|| "dirac".into());
    let label: SetLabel = cfg.required(a.set.clone(), "set")?;
    let picture: Picture = cfg.required(a.rep.clone(), "rep")?;
    let defaults = InvarianceConfig::default();
    let mut ic = InvarianceConfig {
        n: cfg.pick(a.grid, "grid")?.unwrap_or(defaults.n),
        l: cfg.pick(a.box_len, "box")?.unwrap_or(defaults.l),
        mass: cfg.pick(a.mass, "mass")?.unwrap_or(defaults.mass),
        tol: cfg.pick(a.tol, "tol")?.unwrap_or(defaults.tol),
        seed: cfg.pick(a.seed, "seed")?.unwrap_or(defaults.seed),
        threads: threads()?,
        ..defaults
    };
    ic.sigma = cfg.pick(None, "sigma")?;
    if let Some(dt) = cfg.pick(None, "dt")? {
        ic.dt = dt;
    }
    let report = match equation.as_str() {
        "dirac" => {
            let ctx = DiracContext::new(ic.mass)?;
            if a.control {
                dirac_negative_control(&ctx, label, picture, &ic)?
            } else {
                dirac_invariance(&ctx, label, picture, &ic)?
            }
        }
        "maxwell" => {
            let ctx = MaxwellContext::new();
            if a.control {
                maxwell_negative_control(&ctx, label, picture, &ic)?
            } else {
                maxwell_invariance(&ctx, label, picture, &ic)?
            }
        }
        other => return Err(Failure::Usage(format!("unknown equation `{other}`; expected dirac or maxwell"))),
    };
    summarize(&report);
    write_json(&report, cfg.out(a.out.as_ref())?.as_ref())?;
    finish(report.pass)
}

fn algebra(a: &AlgebraArgs, cfg: &Config) -> Result<(), Failure> {
    let label: SetLabel = cfg.required(a.set.clone(), "set")?;
    let picture: Picture = cfg.required(a.rep.clone(), "rep")?;
    let seed = cfg.pick(a.seed, "seed")?.unwrap_or(42);
    let ctx = DiracContext::new(cfg.pick(None, "mass")?.unwrap_or(1.0))?;
    let report = check_algebra(&ctx.build_set(label, picture)?, &dirac_spins(&ctx)?, seed)?;
    summarize(&report);
    write_json(&report, cfg.out(a.out.as_ref())?.as_ref())?;
    finish(report.pass)
}

fn o4(a: &O4Args, cfg: &Config) -> Result<(), Failure> {
    let ctx = DiracContext::new(cfg.pick(a.mass, "mass")?.unwrap_or(1.0))?;
    let samples = cfg.pick(a.samples, "samples")?.unwrap_or(225);
    let report = check_o4(&ctx, cfg.pick(a.seed, "seed")?.unwrap_or(42), samples)?;
    summarize(&report);
    write_json(&report, cfg.out(a.out.as_ref())?.as_ref())?;
    finish(report.pass)
}

#[derive(Serialize)]
struct BoostOutput<'a> {
    #[serde(flatten)]
    report: &'a CheckReport,
    theta_max: f64,
    flow: &'a FlowRecord,
}

fn boost(a: &BoostArgs, cfg: &Config) -> Result<(), Failure> {
    let label: SetLabel = cfg.required(a.set.clone(), "set")?;
    let axis = cfg.pick(a.axis, "axis")?.unwrap_or(1);
    let theta = cfg.pick(a.theta, "theta")?;
    let velocity = cfg.pick(a.velocity, "velocity")?;
    let defaults = FlowConfig::default();
    let theta_max = match (theta, velocity) {
        (Some(_), Some(_)) => return Err(Failure::Usage("give either theta or velocity, not both".into())),
        (Some(t), None) => t,
        (None, Some(v)) => rapidity(v)?,
        (None, None) => defaults.theta_max,
    };
    let fc = FlowConfig {
        n: cfg.pick(None, "grid")?.unwrap_or(defaults.n),
        l: cfg.pick(None, "box")?.unwrap_or(defaults.l),
        sigma: cfg.pick(None, "sigma")?.unwrap_or(defaults.sigma),
        dtheta: cfg.pick(None, "dtheta")?.unwrap_or(defaults.dtheta),
        theta_max,
        ..defaults
    };
    let ctx = DiracContext::new(cfg.pick(None, "mass")?.unwrap_or(1.0))?;
    let (report, flow) = dirac_boost_check(&ctx, label, axis, &fc)?;
    summarize(&report);
    write_json(&BoostOutput { report: &report, theta_max, flow: &flow }, cfg.out(a.out.as_ref())?.as_ref())?;
    finish(report.pass)
}

fn all(a: &AllArgs, cfg: &Config) -> Result<(), Failure> {
    let seed = cfg.pick(a.seed, "seed")?.unwrap_or(42);
    let suite_cfg = SuiteConfig::new(seed).with_threads(threads()?);
    let suite = run_all(&suite_cfg, |c, r| {
        eprint!("[criterion {c}] ");
        summarize(r);
    })?;
    for c in 1..=9 {
        eprintln!("criterion {c}: {}", if suite.criterion_passes(c) { "pass" } else { "FAIL" });
    }
    match cfg.out(a.out.as_ref())? {
        Some(path) => suite.write(&path)?,
        None => println!("{}", suite.to_json()),
    }
    finish(suite.pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Config::load(cli.config.as_deref()).map_err(Failure::from).and_then(|cfg| match &cli.command {
        Command::Invariance(a) => invariance(a, &cfg),
        Command::Algebra(a) => algebra(a, &cfg),
        Command::O4(a) => o4(a, &cfg),
        Command::Boost(a) => boost(a, &cfg),
        Command::All(a) => all(a, &cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
