use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dblint_cli::commands::{self, Rendered, Steps};
use dblint_cli::{quad_order_from_env, CliError, ProblemFile};
use dblint_core::DEFAULT_PILOT;

/// Double integrals via Euler's method and Richardson extrapolation.
#[derive(Parser)]
#[command(name = "dblint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve at a fixed stepsize and write `x,C,Z` at the coarse nodes.
    Solve {
        file: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long = "h")]
        h: Option<f64>,
        /// CSV destination; `-` for standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the stepsize for a tolerance from a pilot run, then solve.
    Tune {
        file: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_PILOT)]
        pilot: f64,
        /// Print planned stepsizes for ε = 1e-14 … 1e-4 instead of solving.
        #[arg(long)]
        table: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Attach a cubature rule and write its correction curve.
    Correct {
        file: PathBuf,
        #[arg(long, default_value = "simpson")]
        rule: String,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long = "h")]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the extrapolation weights of an order.
    Coeffs {
        #[arg(long)]
        order: usize,
    },
    /// Write the error-coefficient curves K~1 … K~5.
    Kcurves {
        file: PathBuf,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long = "h")]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(rendered: Rendered, out: Option<&Path>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("write failed: {e}"));
    let stdout = std::io::stdout();
    match (rendered.csv, out) {
        (Some(csv), Some(p)) if p == Path::new("-") => {
            stdout.lock().write_all(csv.as_bytes()).map_err(io)?;
            eprint!("{}", rendered.report);
            return Ok(());
        }
        (Some(csv), Some(p)) => std::fs::write(p, csv)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?,
        (Some(csv), None) if rendered.report.is_empty() => {
            stdout.lock().write_all(csv.as_bytes()).map_err(io)?;
        }
        _ => {}
    }
    stdout
        .lock()
        .write_all(rendered.report.as_bytes())
        .map_err(io)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let quad = quad_order_from_env()?;
    match cli.command {
        Command::Solve {
            file,
            order,
            steps,
            h,
            out,
        } => {
            let pf = ProblemFile::read(&file)?;
            let steps = Steps::choose(steps, h, &pf)?;
            emit(commands::solve(&pf, order, steps, quad)?, out.as_deref())
        }
        Command::Tune {
            file,
            tolerance,
            pilot,
            table,
            out,
        } => {
            let pf = ProblemFile::read(&file)?;
            if table {
                let (_, rendered) = commands::tune_table(&pf, pilot, quad)?;
                emit(rendered, out.as_deref())
            } else {
                let (_, _, rendered) = commands::tune(&pf, tolerance, pilot, quad)?;
                emit(rendered, out.as_deref())
            }
        }
        Command::Correct {
            file,
            rule,
            order,
            steps,
            h,
            out,
        } => {
            let pf = ProblemFile::read(&file)?;
            let steps = Steps::choose(steps, h, &pf)?;
            emit(
                commands::correct(&pf, &rule, order, steps, quad)?,
                out.as_deref(),
            )
        }
        Command::Coeffs { order } => emit(commands::coeffs(order)?, None),
        Command::Kcurves {
            file,
            steps,
            h,
            out,
        } => {
            let pf = ProblemFile::read(&file)?;
            let steps = Steps::choose(steps, h, &pf)?;
            emit(commands::kcurves(&pf, steps, quad)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
