use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use pdfa_bench::cli::{execute, parse_config, Cli};

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<pdfa_bench::Error>() {
        Some(pdfa_bench::Error::Config(_)) => 2,
        _ => 1,
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let config = parse_config(cli.command, &cli.opts).context("invalid configuration")?;
    let level = match config.verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    execute(&config).with_context(|| format!("{} failed", config.command))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
