use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod bench;
mod gen;
mod report;
mod solve;
mod verify;

/// Exit status for a declared infeasibility.
const EXIT_INFEASIBLE: u8 = 2;
/// Exit status for any other failure, including a failed verification.
const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "rolloutkit", version, about = "Rollout, auction, and assignment solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded instance as JSON.
    Gen(gen::GenArgs),
    /// Solve an instance file and report counts.
    Solve(solve::SolveArgs),
    /// Check a result file against its instance.
    Verify(verify::VerifyArgs),
    /// Run a count or round benchmark.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Assign2d,
    Assign3d,
    Assignnd,
    Facility,
    Separable3d,
    EpsSeparable3d,
    ToyDp,
}

/// Writes `text` to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| anyhow::anyhow!("writing {}: {e}", p.display())),
        None => print_out(text),
    }
}

/// Prints a line to standard output; a closed pipe is not an error.
pub fn print_out(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn is_infeasible(err: &anyhow::Error) -> bool {
    use rolloutkit::auction::AuctionError;
    use rolloutkit::discrete::facility::FacilityError;
    use rolloutkit::multidim::MultidimError;
    use rolloutkit::RolloutError;
    err.chain().any(|cause| {
        matches!(cause.downcast_ref::<AuctionError>(), Some(AuctionError::Infeasible))
            || matches!(
                cause.downcast_ref::<FacilityError>(),
                Some(FacilityError::Infeasible { .. } | FacilityError::InfeasiblePlacement { .. })
            )
            || matches!(
                cause.downcast_ref::<MultidimError>(),
                Some(MultidimError::Auction(AuctionError::Infeasible))
            )
            || matches!(
                cause.downcast_ref::<RolloutError>(),
                Some(RolloutError::InfeasibleStart | RolloutError::DeadEnd { .. })
            )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => gen::run(&args),
        Command::Solve(args) => solve::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Bench(args) => bench::run(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_infeasible(&e) {
                ExitCode::from(EXIT_INFEASIBLE)
            } else {
                ExitCode::from(EXIT_ERROR)
            }
        }
    }
}
