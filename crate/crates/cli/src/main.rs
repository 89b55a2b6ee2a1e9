//! `tplab`: command-line access to the kernel, ASM and positivity tools.

mod commands;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rug::Float;

use commands::{asm, cheb, conj, delta, kernel, logistic};
use error::CliError;
use output::{Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "tplab",
    version,
    about = "Total positivity experiments for 1/(x² + 2cos(πα)xy + y²)"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Working precision in bits (at least 64).
    #[arg(
        long,
        global = true,
        env = "TPLAB_PRECISION_BITS",
        default_value_t = 256
    )]
    precision: u32,
    /// Relative tolerance for identity checks.
    #[arg(long, global = true, default_value = "1e-20")]
    tol: String,
    /// Seed for randomized scans.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kernel values, determinants and minor scans.
    Kernel {
        #[command(subcommand)]
        cmd: kernel::Cmd,
    },
    /// The generalized logistic density.
    Logistic {
        #[command(subcommand)]
        cmd: logistic::Cmd,
    },
    /// Chebyshev quotients and q-factorials.
    Cheb {
        #[command(subcommand)]
        cmd: cheb::Cmd,
    },
    /// Alternating sign matrices.
    Asm {
        #[command(subcommand)]
        cmd: asm::Cmd,
    },
    /// The derivative determinant by any route.
    Delta(delta::DeltaArgs),
    /// F_{n,k}, band matrices and positivity scans.
    Conj {
        #[command(subcommand)]
        cmd: conj::Cmd,
    },
}

/// Settings shared by every subcommand.
pub struct Ctx {
    pub prec: u32,
    pub tol: Float,
    pub seed: u64,
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    if g.precision < 64 {
        return Err(CliError::usage("--precision must be at least 64"));
    }
    let tol = tplab_core::hp::parse_real(g.precision, &g.tol)?;
    if !(tol > 0 && tol.is_finite()) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let ctx = Ctx {
        prec: g.precision,
        tol,
        seed: g.seed,
    };
    match cli.command {
        Command::Kernel { cmd } => kernel::run(&ctx, cmd),
        Command::Logistic { cmd } => logistic::run(&ctx, cmd),
        Command::Cheb { cmd } => cheb::run(&ctx, cmd),
        Command::Asm { cmd } => asm::run(&ctx, cmd),
        Command::Delta(args) => delta::run(&ctx, args),
        Command::Conj { cmd } => conj::run(&ctx, cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::usage(e.render().to_string().trim_end());
            err.emit();
            return ExitCode::from(err.code());
        }
    };
    let format = cli.global.format;
    match run(cli) {
        Ok(report) => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = output::write(&report, format, &mut lock).and_then(|_| lock.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("{e}");
                }
                return ExitCode::FAILURE;
            }
            match report.violation {
                Some(msg) => {
                    let err = CliError::Violation(msg);
                    err.emit();
                    ExitCode::from(err.code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            err.emit();
            ExitCode::from(err.code())
        }
    }
}
