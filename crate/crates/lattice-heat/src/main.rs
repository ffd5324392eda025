//! Batch front end for lattice heat kernels, Green functions, identity
//! suites and walk generating functions.
//!
//! Exit codes: 0 when every check passes, 2 on usage errors, 3 when a
//! numerical check fails or a computation does not converge.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::green::GreenArgs;
use commands::identities::IdentityArgs;
use commands::kernel::KernelArgs;
use commands::matrix::MatrixArgs;
use commands::walks::WalkArgs;
use commands::CliError;
use report::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "lattice-heat",
    version,
    about = "Heat kernels, Green functions and walk counts on lattice graphs"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    format: OutputFormat,
    /// Record wall-clock time in the report (otherwise it goes to stderr).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Heat kernel values by image sum, mode sum, or both.
    Kernel(KernelArgs),
    /// Green function values, in floating point or exact rationals.
    Green(GreenArgs),
    /// Run the Bessel and trigonometric identity suites.
    Identities(IdentityArgs),
    /// Closed-walk generating functions, bump tables, determinants and trees.
    Walks(WalkArgs),
    /// Exact adjacency, Laplacian or Green matrices.
    Matrix(MatrixArgs),
}

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Kernel(a) => commands::kernel::run(a),
        Command::Green(a) => commands::green::run(a),
        Command::Identities(a) => commands::identities::run(a),
        Command::Walks(a) => commands::walks::run(a),
        Command::Matrix(a) => commands::matrix::run(a),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let mut report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("lattice-heat: {e}");
            return ExitCode::from(match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Numerical(_) => EXIT_NUMERICAL,
            });
        }
    };
    report.arguments = std::env::args().skip(1).collect();
    if cli.timing {
        report.wall_clock_seconds = Some(elapsed);
    } else {
        eprintln!("lattice-heat: {} finished in {elapsed:.3}s", report.command);
    }
    let mut out = std::io::stdout().lock();
    if out
        .write_all(report.render(cli.format).as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        return ExitCode::from(EXIT_NUMERICAL);
    }
    match report.first_failure() {
        None => ExitCode::SUCCESS,
        Some(c) => {
            eprintln!("lattice-heat: check failed: {}", c.describe());
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
