#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod plot;
mod reproduce;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, OutputArgs, SweepSpec};
use commands::FisherArgs;
use error::{CliError, CliResult};
use table::Table;

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Steady { output, .. }
        | Command::Observables { output, .. }
        | Command::Spectrum { output, .. }
        | Command::Ladder { output, .. }
        | Command::Fisher { output, .. }
        | Command::Reproduce { output, .. } => output,
    }
}

fn compute(cmd: &Command) -> CliResult<Table> {
    match cmd {
        Command::Steady { params, .. } => commands::steady(&params.resolve()?),
        Command::Observables { params, sweep, .. } => {
            let sweep = sweep.as_deref().map(SweepSpec::parse).transpose()?;
            commands::observables(&params.resolve()?, sweep.as_ref())
        }
        Command::Spectrum { params, grid, peaks, prominence, .. } => {
            commands::spectrum(&params.resolve()?, grid.as_deref(), *peaks, *prominence)
        }
        Command::Ladder { params, exact, .. } => commands::ladder(&params.resolve()?, *exact),
        Command::Fisher { params, grid, sweep, sweep2, frame, eta, step_rel, .. } => {
            let a = FisherArgs {
                grid: grid.as_deref(),
                sweep: sweep.as_deref().map(SweepSpec::parse).transpose()?,
                sweep2: sweep2.as_deref().map(SweepSpec::parse).transpose()?,
                frame: *frame,
                eta: *eta,
                step_rel: *step_rel,
            };
            commands::fisher(&params.resolve()?, &a)
        }
        Command::Reproduce { figure, panel, .. } => reproduce::reproduce(*figure, panel),
    }
}

fn emit(table: &Table, out: &OutputArgs) -> CliResult<()> {
    match &out.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(|e| {
                CliError::Config(format!("cannot create {}: {e}", path.display()))
            })?);
            table.write(out.format, &mut w)?;
            w.flush()?;
            if out.plot {
                let svg = path.with_extension("svg");
                if plot::render(table, &svg)? {
                    log::info!("plot written to {}", svg.display());
                } else {
                    log::warn!("table `{}` has no plot layout", table.name);
                }
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            table.write(out.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    let out = output_args(&cli.command);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = out.jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let table = pool.install(|| compute(&cli.command))?;
    emit(&table, out)
}

/// Sweeps would repeat per-point validity warnings; they stay quiet unless
/// `RUST_LOG` asks otherwise.
fn default_log_level(cmd: &Command) -> &'static str {
    match cmd {
        Command::Reproduce { .. } => "error",
        Command::Observables { sweep: Some(_), .. } | Command::Fisher { sweep: Some(_), .. } => "error",
        _ => "warn",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(default_log_level(&cli.command)))
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
