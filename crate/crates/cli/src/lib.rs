//! Command-line front end for `bellab`.

pub mod args;
pub mod commands;
pub mod config;
pub mod svg;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

pub use commands::{BtccArgs, PredictArgs, ScanArgs, SimulateArgs, TablesArgs};

#[derive(Debug, Parser)]
#[command(
    name = "bellab",
    version,
    about = "Bell-test laboratory: predictions, bounds, LHV checks and simulated runs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Print the quantum 3×3 outcome table for one pair of analyzer angles.
    Predict(PredictArgs),
    /// Tabulate G(φ) over the one-parameter quad family and locate violations.
    Scan(ScanArgs),
    /// Check the extreme-point limit table on random inefficiency tuples.
    Tables(TablesArgs),
    /// Run the perfect-correlation check on a local model.
    Btcc(BtccArgs),
    /// Simulate a run from a config file and report the count statistics.
    Simulate(SimulateArgs),
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Predict(a) => commands::predict(a),
        Command::Scan(a) => commands::scan(a),
        Command::Tables(a) => commands::tables(a),
        Command::Btcc(a) => commands::btcc(a),
        Command::Simulate(a) => commands::simulate(a),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("format `{s}`: expected text or json")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
        })
    }
}

/// Writes `body` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub(crate) fn json_body(value: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub(crate) fn path_display(p: &Option<PathBuf>) -> String {
    p.as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "-".into())
}
