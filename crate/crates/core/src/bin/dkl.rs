use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dkl::cli::{self, parse_charts, parse_seeds, Overrides, Report, RunConfig};

#[derive(Parser)]
#[command(name = "dkl", version, about = "Numerical checks of the Dirac-Kähler field in curved spacetime")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Charts as NAME[:key=value...], comma separated
    #[arg(long, global = true)]
    chart: Option<String>,
    /// Seeds, comma separated
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Sample points per chart and seed
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Degree of the random polynomial fields
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Coefficient bound of the random polynomial fields
    #[arg(long, global = true)]
    bound: Option<f64>,
    /// Field mass
    #[arg(long, global = true)]
    mass: Option<f64>,
    /// key = value configuration file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Gamma matrix identities, expansion round trips and block tables
    VerifyAlgebra,
    /// Metric, connection, curvature and Levi-Civita checks per chart
    VerifyGeometry,
    /// Agreement of all formulations, flat reduction and gauge covariance
    Equivalence,
    /// Parity sectors: constraints, reduced systems and curvature identities
    Sectors,
    /// Projected equations of the four-fermion matrix against the tensor system
    CompareV,
    /// Every suite
    All,
}

fn run(args: Args) -> dkl::Result<Report> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(Overrides {
        charts: args.chart.as_deref().map(parse_charts).transpose()?,
        seeds: args.seed.as_deref().map(parse_seeds).transpose()?,
        points: args.points,
        degree: args.degree,
        bound: args.bound,
        mass: args.mass,
    });
    cfg.validate()?;
    let report = match args.command {
        Command::VerifyAlgebra => cli::cmd_verify_algebra(),
        Command::VerifyGeometry => cli::cmd_verify_geometry(&cfg)?,
        Command::Equivalence => cli::cmd_equivalence(&cfg)?,
        Command::Sectors => cli::cmd_sectors(&cfg)?,
        Command::CompareV => cli::cmd_compare_v(&cfg)?,
        Command::All => cli::cmd_all(&cfg)?,
    };
    let json = report.to_json()?;
    match &args.out {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(report)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(report) => {
            for c in report.failures() {
                eprintln!("FAIL {} chart={:?} seed={:?} value={:e} tolerance={:e}", c.name, c.chart, c.seed, c.value.0, c.tolerance.0);
            }
            let s = &report.summary;
            eprintln!("{}: {} checks, {} passed, {} failed", report.command, s.total, s.passed, s.failed);
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
