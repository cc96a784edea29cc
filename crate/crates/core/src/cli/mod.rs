//! Batch front end behind the `lightcone` binary.

mod commands;
mod config;
mod report;
mod selftest;

pub use commands::SurfaceRef;
pub use config::{parse_config_text, read_config_file, Cli, CliCommand, Command, Flags, Format, RunConfig};
pub use report::{Check, Report, Table, REPORT_VERSION};

use crate::error::Result;
use clap::Parser;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

/// Runs one subcommand and returns its report.
pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut rep = Report::new(config.clone());
    match config.command {
        Command::Analyze => commands::analyze(config, &mut rep)?,
        Command::Pair => commands::pair(config, &mut rep)?,
        Command::Dual => commands::dual(config, &mut rep)?,
        Command::Darboux => commands::darboux(config, &mut rep)?,
        Command::Contact => commands::contact(config, &mut rep)?,
        Command::Catalog => commands::catalog_cmd(config, &mut rep)?,
        Command::Selftest => selftest::selftest(config, &mut rep)?,
    }
    rep.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

/// Writes the rendered report to `--out` or standard output.
pub fn emit(config: &RunConfig, rep: &Report) -> Result<()> {
    let text = rep.render(config.format)?;
    match &config.out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            let written = out.write_all(text.as_bytes()).and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") });
            match written {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

/// Parses arguments, runs, writes the report; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = RunConfig::from_cli(cli).and_then(|cfg| {
        let rep = run(&cfg)?;
        emit(&cfg, &rep)?;
        Ok(rep.exit_code())
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
