//! `zup`: z-upscaling of anisotropic image volumes.
//!
//! Exit codes: 0 success, 1 processing error, 2 usage error.

mod args;
mod commands;
mod config;
mod image_io;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::config::FileConfig;

/// Bad arguments or configuration; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()?;
    log::debug!("using {} worker thread(s)", pool.current_num_threads());
    pool.install(|| match &cli.command {
        Command::Upscale(a) => commands::upscale(a, &file),
        Command::Eval(a) => commands::eval(a, &file),
        Command::Prep(a) => commands::prep(a),
        Command::Flow(a) => commands::flow(a, &file),
        Command::Synth(a) => commands::synth(a),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
