//! Command-line front end for `royroot`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod check;
pub mod commands;
pub mod error;
pub mod render;
pub mod scenario;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::json;

use args::{Cli, Command, Precision};
use commands::GridKind;
use error::CliError;
use render::{num, Report, Table};

/// Environment variable capping the worker threads (0 or unset = all cores).
pub const THREADS_ENV: &str = "ROYROOT_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("{THREADS_ENV} must be a non-negative integer, got '{raw}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("{THREADS_ENV}: {e}")))?;
    }
    Ok(())
}

fn cmd_check(a: &args::CheckArgs, prec: Precision) -> Result<Report, CliError> {
    let outcomes = check::run(a.suite, a.seed)?;
    let mut table = Table::new(&["suite", "check", "measured", "limit", "pass"]);
    for o in &outcomes {
        table.push(vec![
            json!(o.suite),
            json!(o.check),
            num(o.measured, prec),
            num(o.limit, prec),
            json!(o.pass),
        ]);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.pass).map(|o| o.check.as_str()).collect();
    Ok(Report {
        command: "check",
        config: json!({ "suite": a.suite, "seed": a.seed }),
        table,
        single: false,
        notes: Vec::new(),
        failure: (!failed.is_empty()).then(|| CliError::CheckFailed(failed.join("; "))),
    })
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    configure_threads()?;
    let prec = cli.precision;
    match &cli.command {
        Command::Power(a) => commands::cmd_power(a, prec),
        Command::Table(a) => commands::cmd_table(a, prec),
        Command::Density(a) => commands::cmd_grid(GridKind::Density, a, prec),
        Command::Cdf(a) => commands::cmd_grid(GridKind::Cdf, a, prec),
        Command::Quantile(a) => commands::cmd_grid(GridKind::Quantile, a, prec),
        Command::Simulate(a) => commands::cmd_simulate(a, prec),
        Command::Check(a) => cmd_check(a, prec),
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            report.write(&mut w, cli.format)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.write(&mut w, cli.format).and_then(|_| w.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 2;
    }
    match report.failure {
        Some(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        None => 0,
    }
}
