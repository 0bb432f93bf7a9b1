//! Command-line driver: BER sweeps, operating points, minimum densities and
//! complexity tables, written as CSV next to a `manifest.toml`.
//!
//! Exit status: 0 on success, 2 for configuration problems, 3 for infeasible
//! user placement or failed searches, 1 for anything else.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

use crate::algorithm::Algorithm;
use crate::complexity::mult_count;
use crate::error::Error;
use crate::simulator::{delta_min_from_points, operating_points, simulate, Cell, DeltaMin};

pub use config::{load, ConfigError, FileConfig, Resolved, RunSection};

pub const MANIFEST_FILE: &str = "manifest.toml";

#[derive(Debug, Parser)]
#[command(name = "beamspace", version, about = "Sparse beamspace equalization sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration (a previous run's manifest.toml also works).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Overrides `sim.seed`.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    /// Dotted-key override such as `sim.trials=20`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// BER versus SNR for every (algorithm, δ) cell -> ber.csv
    Ber,
    /// BER curves plus SNR operating points -> ber.csv, opoint.csv
    Opoint,
    /// Minimum density per sparse algorithm -> ber.csv, opoint.csv, deltamin.csv
    Deltamin,
    /// Multiplication counts over the T grid -> complexity.csv
    Complexity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ber => "ber",
            Command::Opoint => "opoint",
            Command::Deltamin => "deltamin",
            Command::Complexity => "complexity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn other(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Placement { .. } | Error::SearchFailed(_) => 3,
            Error::Parameter(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self::config(e.0)
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::other(format!("{}: {e}", path.display()))
}

/// Files written by a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
}

fn cells_for(resolved: &Resolved, command: Command) -> Vec<Cell> {
    let mut algorithms = resolved.algorithms.clone();
    if command == Command::Deltamin && !algorithms.contains(&Algorithm::Lmmse) {
        algorithms.insert(0, Algorithm::Lmmse);
    }
    let mut cells = Vec::new();
    for alg in algorithms {
        if alg == Algorithm::Lmmse {
            cells.push(Cell::new(alg, 1.0));
        } else {
            cells.extend(resolved.sim.delta_grid.iter().map(|&d| Cell::new(alg, d)));
        }
    }
    cells
}

fn write_manifest(resolved: &Resolved, command: Command, out: &Path) -> Result<PathBuf, CliError> {
    let mut file = resolved.file.clone();
    file.run = Some(RunSection {
        command: command.name().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        out_dir: out.display().to_string(),
        started_unix_s: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    });
    let text = toml::to_string(&file).map_err(|e| CliError::other(format!("manifest: {e}")))?;
    let path = out.join(MANIFEST_FILE);
    std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

fn execute(resolved: &Resolved, command: Command, out: &Path) -> Result<RunOutput, CliError> {
    std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let mut files = vec![write_manifest(resolved, command, out)?];
    let sim = &resolved.sim;

    if command == Command::Complexity {
        let (b, u) = (sim.b as u64, sim.u as u64);
        let mut reports = Vec::new();
        for case in &resolved.complexity_cases {
            for &t in &resolved.t_grid {
                reports.push(mult_count(case.algorithm, b, u, case.k, t)?);
            }
        }
        let path = out.join("complexity.csv");
        output::write_complexity(&path, &reports).map_err(|e| io_err(&path, e))?;
        files.push(path);
        return Ok(RunOutput { files });
    }

    let cells = cells_for(resolved, command);
    let curves = simulate(sim, &cells)?;
    let path = out.join("ber.csv");
    output::write_ber(&path, &curves, sim.seed).map_err(|e| io_err(&path, e))?;
    files.push(path);
    if command == Command::Ber {
        return Ok(RunOutput { files });
    }

    let points = operating_points(&curves, sim.target_ber);
    let path = out.join("opoint.csv");
    output::write_opoint(&path, &points).map_err(|e| io_err(&path, e))?;
    files.push(path);
    if command == Command::Opoint {
        return Ok(RunOutput { files });
    }

    if !sim.delta_grid.contains(&1.0) {
        return Err(CliError::config("[sim] deltas must contain 1 for the minimum-density search"));
    }
    let lmmse = points
        .iter()
        .find(|p| p.algorithm == Algorithm::Lmmse)
        .expect("LMMSE cell is always simulated for deltamin");
    let mut found: Vec<DeltaMin> = Vec::new();
    let mut failures: Vec<String> = Vec::new();
    for alg in resolved.algorithms.iter().filter(|a| **a != Algorithm::Lmmse) {
        let own: Vec<_> = points.iter().filter(|p| p.algorithm == *alg).cloned().collect();
        match delta_min_from_points(&own, lmmse, sim.gap_db, sim.b) {
            Ok(d) => found.push(d),
            Err(e) => failures.push(e.to_string()),
        }
    }
    let path = out.join("deltamin.csv");
    output::write_deltamin(&path, &found).map_err(|e| io_err(&path, e))?;
    files.push(path);
    if !failures.is_empty() {
        return Err(CliError { code: 3, message: failures.join("; ") });
    }
    Ok(RunOutput { files })
}

/// Loads the configuration and runs `cli.command`.
pub fn run(cli: &Cli) -> Result<RunOutput, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("--config PATH is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let resolved = load(&text, &cli.overrides, cli.seed)
        .map_err(|e| CliError::config(format!("{}: {}", path.display(), e.0)))?;
    match cli.workers {
        Some(0) => Err(CliError::config("--workers must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::other(e.to_string()))?
            .install(|| execute(&resolved, cli.command, &cli.out)),
        None => execute(&resolved, cli.command, &cli.out),
    }
}

/// Parses `args`, runs, prints a diagnostic on failure and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("beamspace {}: error: {}", cli.command.name(), e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(command: Command, config: &Path, out: &Path) -> Cli {
        Cli {
            command,
            config: Some(config.to_path_buf()),
            out: out.to_path_buf(),
            seed: None,
            workers: None,
            overrides: vec![],
        }
    }

    #[test]
    fn complexity_command_writes_manifest_then_csv() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "[system]\nB = 128\nU = 16\n[complexity]\nalgorithms = [\"LMMSE\", \"EOMP\"]\nt_grid = [1, 10]\ndelta_min = { EOMP = 0.125 }\n").unwrap();
        let out = dir.path().join("o");
        let res = run(&cli(Command::Complexity, &cfg, &out)).unwrap();
        assert!(res.files[0].ends_with(MANIFEST_FILE));
        let text = std::fs::read_to_string(out.join("complexity.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "LMMSE,128,16,128,1,200672,8192,0,208864");
        assert!(lines[3].starts_with("EOMP,128,16,16,1,"));
    }

    #[test]
    fn missing_config_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cli(Command::Ber, &dir.path().join("none.toml"), dir.path());
        assert_eq!(run(&c).unwrap_err().code, 2);
        c.config = None;
        assert_eq!(run(&c).unwrap_err().code, 2);
    }

    #[test]
    fn error_codes() {
        let placement = Error::Placement { users: 200, sector_deg: 120.0, separation_deg: 1.0 };
        assert_eq!(CliError::from(placement).code, 3);
        assert_eq!(CliError::from(Error::SearchFailed("x".into())).code, 3);
        assert_eq!(CliError::from(Error::Rank).code, 1);
    }

    #[test]
    fn deltamin_always_simulates_lmmse() {
        let r = load("[system]\nB = 16\nU = 2\n[sim]\nalgorithms = [\"EOMP\"]\ndeltas = [0.5, 1.0]\n", &[], None).unwrap();
        let cells = cells_for(&r, Command::Deltamin);
        assert_eq!(cells.len(), 3);
        assert_eq!(cells[0].algorithm, Algorithm::Lmmse);
        assert_eq!(cells_for(&r, Command::Ber).len(), 2);
    }
}
