//! Command-line front end for `ldpost`: point-set generation, evaluation,
//! optimization and the reproduction harness.

pub mod args;
pub mod error;
pub mod evaluate;
pub mod generate;
pub mod optimize;
pub mod output;
pub mod reference;
pub mod reproduce;

use anyhow::Context;
use serde_json::json;

use args::{Cli, Command, ReproduceArgs, THREADS_ENV};
use error::{CliError, CliResult};
use generate::TableChoice;

/// Sizes the global thread pool from the environment.
pub fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    if threads == 0 {
        return Err(CliError::Usage(format!("{THREADS_ENV} must be at least 1")));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

pub fn reproduce_options(args: &ReproduceArgs) -> CliResult<reproduce::Options> {
    Ok(reproduce::Options {
        ns: args.n.clone(),
        steps: args.steps,
        budget: args.budget,
        table: TableChoice::resolve(&args.table)?.table().clone(),
        init_files: args.init_file.clone(),
        n_max: args.n_max,
        n_step: args.n_step,
        repeats: args.repeats,
        seed: args.seed,
    })
}

fn run_reproduce(args: &ReproduceArgs) -> CliResult<()> {
    let opts = reproduce_options(args)?;
    let report = reproduce::run(args.target, &opts)?;
    output::ensure_dir(&args.out_dir)?;
    let (table, checks) = report.write(&args.out_dir)?;
    let failures: Vec<_> = report.failures().collect();
    let summary = json!({
        "target": report.name,
        "table": table.display().to_string(),
        "checks": checks.display().to_string(),
        "direction_table": opts.table.id(),
        "summary": report.summary(),
        "failures": failures,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)?
    );
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => generate::run(a),
        Command::Evaluate(a) => evaluate::run(a),
        Command::Optimize(a) => optimize::run(a).map(|_| ()),
        Command::Reproduce(a) => run_reproduce(a),
    }
}
