//! `minsurf` command line: argument parsing, subcommands and reports.

mod commands;
pub mod report;
mod source;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

pub use report::{Check, ErrorReport, RunReport, Status, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "minsurf", version, about = "Numerical workbench for minimal surfaces")]
struct Cli {
    /// Print the run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomised sample.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Record wall-clock time per phase.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Degree,
    Spherical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Project {
    Xyz,
    Xyw,
    Xzw,
    Yzw,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a Dirichlet problem for the minimal graph equation.
    SolveGraph {
        problem: PathBuf,
        /// CSV output; defaults to the problem path with a .csv extension.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Conformality, harmonicity, nullity and mean curvature checks.
    Check {
        /// `catalog:<name>` or a Weierstrass JSON file.
        surface: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Periods and flux over the homology generators of the domain.
    Periods { data: String },
    /// Total curvature from the Gauss map.
    TotalCurvature {
        data: String,
        #[arg(long, value_enum, default_value_t = Method::Degree)]
        method: Method,
        /// Integration region for the spherical route:
        /// `disc:R`, `annulus:A,B` or `rect:U0,U1,V0,V1`.
        #[arg(long)]
        region: Option<String>,
        /// Treat the surface as complete (a transcendental Gauss map then
        /// means infinite total curvature).
        #[arg(long)]
        complete: bool,
    },
    /// Sample a surface into a triangle mesh and write Wavefront OBJ.
    Mesh {
        surface: String,
        /// Grid resolution `NUxNV`.
        #[arg(long, value_parser = source::parse_resolution)]
        res: (usize, usize),
        #[arg(short, long)]
        output: PathBuf,
        /// Coordinate 3-plane for surfaces in R⁴.
        #[arg(long, value_enum)]
        project: Option<Project>,
        /// Parameter patch, same syntax as `--region`.
        #[arg(long)]
        patch: Option<String>,
    },
    /// Catenoids spanning two coaxial unit-height circles of radius r.
    PlateauCatenoid {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
    },
    /// List or describe the built-in surfaces.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List,
    Info { name: String },
}

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit status 2.
    Input(String),
    /// A computation did not deliver: exit status 1.
    Compute(String),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }

    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Compute(_) => 1,
        }
    }

    fn report(&self) -> ErrorReport {
        let (kind, message) = match self {
            Failure::Input(m) => ("input", m),
            Failure::Compute(m) => ("compute", m),
        };
        ErrorReport {
            kind: kind.into(),
            message: message.clone(),
        }
    }
}

impl From<minsurf::Error> for Failure {
    fn from(e: minsurf::Error) -> Self {
        use minsurf::Error as E;
        match e {
            E::NonConvergence { .. } | E::NotImmersed { .. } | E::NotConformal { .. } => {
                Failure::Compute(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Per-run state handed to the subcommands.
pub(crate) struct Ctx {
    pub seed: u64,
    pub report: RunReport,
    pub summary: Vec<String>,
    timings: Option<BTreeMap<String, f64>>,
    phase: Instant,
}

impl Ctx {
    /// Closes the current timing phase under `name`.
    pub fn lap(&mut self, name: &str) {
        let now = Instant::now();
        if let Some(t) = &mut self.timings {
            t.insert(name.into(), (now - self.phase).as_secs_f64() * 1e3);
        }
        self.phase = now;
    }

    pub fn say(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }
}

/// What the process should print and return.
#[derive(Debug)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

/// Runs one command line (including the program name).
pub fn run(argv: &[String]) -> Output {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => return usage_error(argv, e),
    };
    let echo = argv.iter().skip(1).cloned().collect();
    let start = Instant::now();
    let mut ctx = Ctx {
        seed: cli.seed,
        report: RunReport::new(echo, cli.seed),
        summary: Vec::new(),
        timings: cli.timings.then(BTreeMap::new),
        phase: start,
    };
    let outcome = commands::dispatch(&cli.command, &mut ctx);
    let mut report = std::mem::replace(&mut ctx.report, RunReport::new(Vec::new(), 0));
    match outcome {
        Ok(()) => report.settle(),
        Err(f) => {
            report.status = if f.code() == 1 { Status::Fail } else { Status::Error };
            report.error = Some(f.report());
        }
    }
    if let Some(mut t) = ctx.timings.take() {
        t.insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
        report.timings = Some(t);
    }
    let stdout = if cli.json {
        report.to_json()
    } else {
        report.to_text(&ctx.summary)
    };
    Output {
        code: report.status.exit_code(),
        stdout,
        stderr: String::new(),
        report: Some(report),
    }
}

fn usage_error(argv: &[String], e: clap::Error) -> Output {
    use clap::error::ErrorKind;
    if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        return Output {
            code: 0,
            stdout: e.to_string(),
            stderr: String::new(),
            report: None,
        };
    }
    let message = e.render().to_string();
    if !argv.iter().any(|a| a == "--json") {
        return Output {
            code: 2,
            stdout: String::new(),
            stderr: message,
            report: None,
        };
    }
    let mut report = RunReport::new(argv.iter().skip(1).cloned().collect(), 42);
    report.status = Status::Error;
    report.error = Some(ErrorReport {
        kind: "usage".into(),
        message: message.trim_end().to_string(),
    });
    Output {
        code: 2,
        stdout: report.to_json(),
        stderr: String::new(),
        report: Some(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(args: &[&str]) -> Vec<String> {
        std::iter::once("minsurf")
            .chain(args.iter().copied())
            .map(String::from)
            .collect()
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_with_two() {
        let out = run(&argv(&["frobnicate"]));
        assert_eq!(out.code, 2);
        assert!(out.report.is_none());
        let out = run(&argv(&[
            "--json",
            "mesh",
            "catalog:enneper",
            "--res",
            "7",
            "-o",
            "x.obj",
        ]));
        assert_eq!(out.code, 2);
        assert_eq!(out.report.unwrap().error.unwrap().kind, "usage");
    }

    #[test]
    fn help_exits_cleanly() {
        let out = run(&argv(&["--help"]));
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("plateau-catenoid"));
    }

    #[test]
    fn solver_failure_is_a_check_failure() {
        let f: Failure = minsurf::Error::NonConvergence {
            what: "newton",
            estimate: 1.0,
            residual: 1.0,
        }
        .into();
        assert_eq!(f.code(), 1);
        let f: Failure = minsurf::Error::InvalidInput("x".into()).into();
        assert_eq!(f.code(), 2);
    }
}
