use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sddapprox_cli::commands::{self, ElementKind, ZERO_TOL_ENV};
use sddapprox_cli::error::EXIT_INPUT;
use sddapprox_cli::{CliResult, Outcome};

#[derive(Parser)]
#[command(
    name = "sddapprox",
    version,
    about = "Approximate SPSD element matrices by SDD matrices and measure the fit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum, null space, A+ heuristic, lower bound and certificates for one matrix.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Absolute zero-eigenvalue threshold (overrides SDDAPPROX_ZERO_TOL).
        #[arg(long)]
        zero_tol: Option<f64>,
    },
    /// Generalized spectrum and condition number of the pencil (A, B).
    Compare {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild a reference family and check its claimed properties.
    Reproduce {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        example: u8,
        #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
        epsilon: f64,
        /// Coupling weight of family 3 (default 4/epsilon).
        #[arg(long = "M", allow_hyphen_values = true)]
        m: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Write a triangle element stiffness matrix in dense text format.
    Gen {
        kind: Kind,
        /// x1,y1,x2,y2,x3,y3
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        nodes: Vec<f64>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    P1,
    P2,
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let env = std::env::var(ZERO_TOL_ENV).ok();
    let env = env.as_deref();
    match cli.command {
        Command::Analyze {
            file,
            json,
            zero_tol,
        } => commands::analyze(&file, commands::resolve_zero_tol(zero_tol, env)?, json),
        Command::Compare {
            file_a,
            file_b,
            json,
        } => commands::compare(
            &file_a,
            &file_b,
            commands::resolve_zero_tol(None, env)?,
            json,
        ),
        Command::Reproduce {
            example,
            epsilon,
            m,
            json,
        } => commands::reproduce(
            example,
            epsilon,
            m,
            commands::resolve_zero_tol(None, env)?,
            json,
        ),
        Command::Gen {
            kind,
            nodes,
            theta,
            out,
        } => {
            let kind = match kind {
                Kind::P1 => ElementKind::P1,
                Kind::P2 => ElementKind::P2,
            };
            commands::gen(kind, &nodes, theta, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
