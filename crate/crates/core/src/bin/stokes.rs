use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use stokes_core::cli::{error_value, exit_code, run_pipeline, Command, Options};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Validate,
    Solve,
    Gauge,
    Shift,
    Borel,
    Sum,
    Stokes,
    Compose,
    Separate,
    Witness,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Solve => Command::Solve,
            Cmd::Gauge => Command::Gauge,
            Cmd::Shift => Command::Shift,
            Cmd::Borel => Command::Borel,
            Cmd::Sum => Command::Sum,
            Cmd::Stokes => Command::Stokes,
            Cmd::Compose => Command::Compose,
            Cmd::Separate => Command::Separate,
            Cmd::Witness => Command::Witness,
        }
    }
}

/// Formal solutions, gauge reduction, Borel-Laplace sums and Stokes data
/// for planar irregular singular systems.
#[derive(Debug, Parser)]
#[command(name = "stokes", version)]
struct Args {
    command: Cmd,
    /// System spec (JSON).
    spec: PathBuf,
    #[arg(long, default_value_t = 40)]
    order: usize,
    /// Summation direction in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    /// Sample ray in radians (defaults to --theta).
    #[arg(long, allow_negative_numbers = true)]
    ray: Option<f64>,
    #[arg(long, default_value_t = 12)]
    samples: usize,
    #[arg(long, default_value_t = 0.08)]
    xmin: f64,
    #[arg(long, default_value_t = 0.8)]
    xmax: f64,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for the JSON report and CSV tables.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Polynomial coefficients from degree 0, e.g. "0,1,1/2"; repeatable.
    #[arg(long = "poly")]
    polys: Vec<String>,
    /// Relation F(X, Z11, Z21, ...) as JSON.
    #[arg(long)]
    relation: Option<PathBuf>,
    /// Quadrature profile: fast, default or precise.
    #[arg(long)]
    profile: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options {
        order: args.order,
        theta: args.theta,
        ray: args.ray,
        samples: args.samples,
        xmin: args.xmin,
        xmax: args.xmax,
        tol: args.tol,
        seed: args.seed,
        polys: args.polys,
        relation: args.relation,
        profile: args.profile,
    };
    let result = run_pipeline(args.command.into(), &args.spec, &opts).and_then(|report| {
        match &args.out {
            Some(dir) => {
                for p in report.write(dir)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            None => print!("{}", report.stdout_text()),
        }
        Ok(report.status)
    });
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&error_value(&e)).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
