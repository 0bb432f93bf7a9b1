//! TOML run configuration.
//!
//! ```toml
//! [system]
//! B = 128            # antennas / beams (power of two), required
//! U = 16             # users, required
//! T = 16             # data transmissions per coherence block
//!
//! [channel]
//! scenario = "los"   # "los" or "nlos"; the remaining keys default per scenario
//!
//! [sim]
//! algorithms = ["LMMSE", "COMP", "LC", "EOMP", "LE"]
//! snr_db = [-10.0, -8.0, -6.0]
//! deltas = [0.0625, 0.125, 0.25, 0.5, 1.0]
//! trials = 100
//! seed = 1
//!
//! [complexity]
//! t_grid = [10, 100, 1000, 10000, 100000]
//! delta_min = { EOMP = 0.125 }
//! ```
//!
//! Unknown keys are rejected. A written `manifest.toml` is itself a valid
//! configuration; its `[run]` table is informational.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algorithm::Algorithm;
use crate::channel::{ChannelProfile, Scenario};
use crate::equalizers::k_from_delta;
use crate::simulator::{Modulation, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub system: SystemSection,
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub complexity: ComplexitySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "U")]
    pub u: usize,
    #[serde(rename = "T", default = "default_t")]
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    #[serde(default = "default_scenario")]
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths_per_user: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_distance_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_separation_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_path_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_ghz: Option<f64>,
}

impl Default for ChannelSection {
    fn default() -> Self {
        Self {
            scenario: default_scenario(),
            paths_per_user: None,
            sector_deg: None,
            min_distance_m: None,
            max_distance_m: None,
            min_separation_deg: None,
            weak_path_db: None,
            carrier_ghz: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_sim_algorithms")]
    pub algorithms: Vec<String>,
    #[serde(default = "default_modulation")]
    pub modulation: String,
    #[serde(default = "default_snr_grid")]
    pub snr_db: Vec<f64>,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_target_ber")]
    pub target_ber: f64,
    #[serde(default = "default_gap_db")]
    pub gap_db: f64,
    #[serde(default)]
    pub perfect_csi: bool,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            algorithms: default_sim_algorithms(),
            modulation: default_modulation(),
            snr_db: default_snr_grid(),
            deltas: default_deltas(),
            trials: default_trials(),
            seed: default_seed(),
            target_ber: default_target_ber(),
            gap_db: default_gap_db(),
            perfect_csi: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexitySection {
    #[serde(default = "default_complexity_algorithms")]
    pub algorithms: Vec<String>,
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<u64>,
    /// Densities evaluated for every sparse algorithm; `[sim] deltas` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    /// Per-algorithm density replacing `deltas`, e.g. a measured `δ_min`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub delta_min: BTreeMap<String, f64>,
}

impl Default for ComplexitySection {
    fn default() -> Self {
        Self {
            algorithms: default_complexity_algorithms(),
            t_grid: default_t_grid(),
            deltas: None,
            delta_min: BTreeMap::new(),
        }
    }
}

/// Provenance written into manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub command: String,
    pub tool_version: String,
    pub out_dir: String,
    pub started_unix_s: u64,
}

fn default_t() -> usize {
    16
}
fn default_scenario() -> String {
    "los".into()
}
fn default_sim_algorithms() -> Vec<String> {
    ["LMMSE", "COMP", "LC", "EOMP", "LE"].map(String::from).to_vec()
}
fn default_modulation() -> String {
    "16QAM".into()
}
fn default_snr_grid() -> Vec<f64> {
    (-10..=10).map(f64::from).collect()
}
fn default_deltas() -> Vec<f64> {
    vec![0.0625, 0.125, 0.25, 0.5, 1.0]
}
fn default_trials() -> usize {
    100
}
fn default_seed() -> u64 {
    1
}
fn default_target_ber() -> f64 {
    1e-2
}
fn default_gap_db() -> f64 {
    1.0
}
fn default_complexity_algorithms() -> Vec<String> {
    Algorithm::ALL.iter().map(|a| a.name().to_string()).collect()
}
fn default_t_grid() -> Vec<u64> {
    vec![10, 100, 1_000, 10_000, 100_000]
}

/// A configuration problem, reported with exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// One complexity-table entry: algorithm and support size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityCase {
    pub algorithm: Algorithm,
    pub k: u64,
}

/// Fully validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    /// Canonical form with every default made explicit.
    pub file: FileConfig,
    pub sim: SimConfig,
    pub algorithms: Vec<Algorithm>,
    pub complexity_cases: Vec<ComplexityCase>,
    pub t_grid: Vec<u64>,
}

/// Parses `text`, applies `key=value` overrides (dotted keys, TOML values)
/// and validates the result.
pub fn load(text: &str, overrides: &[String], seed: Option<u64>) -> Result<Resolved, ConfigError> {
    let file: FileConfig = if overrides.is_empty() {
        toml::from_str(text).map_err(|e| ConfigError(format!("invalid configuration: {e}")))?
    } else {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| ConfigError(format!("invalid configuration: {e}")))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e| ConfigError(format!("invalid configuration after overrides: {e}")))?
    };
    resolve(file, seed)
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<(), ConfigError> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("override `{item}` is not of the form key=value")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(ConfigError(format!("override key `{key}` is malformed")));
    }
    let value = parse_value(raw.trim());
    let (last, parents) = path.split_last().expect("non-empty path");
    let mut node = table;
    for p in parents {
        let entry = node
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError(format!("override key `{key}`: `{p}` is not a table")))?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}

/// TOML literal if it parses as one, plain string otherwise.
fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    toml::from_str::<toml::Table>(&doc)
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn parse_algorithms(names: &[String], section: &str) -> Result<Vec<Algorithm>, ConfigError> {
    let mut out: Vec<Algorithm> = Vec::new();
    for name in names {
        let alg: Algorithm = name
            .parse()
            .map_err(|e| ConfigError(format!("[{section}] algorithms: {e}")))?;
        if out.contains(&alg) {
            return Err(ConfigError(format!("[{section}] algorithms: {alg} listed twice")));
        }
        out.push(alg);
    }
    if out.is_empty() {
        return Err(ConfigError(format!("[{section}] algorithms must not be empty")));
    }
    Ok(out)
}

fn resolve_profile(section: &mut ChannelSection) -> Result<ChannelProfile, ConfigError> {
    let mut profile = match section.scenario.to_ascii_lowercase().as_str() {
        "los" => ChannelProfile::los(),
        "nlos" | "non-los" | "nonlos" => ChannelProfile::non_los(),
        other => {
            return Err(ConfigError(format!(
                "[channel] scenario must be \"los\" or \"nlos\", got \"{other}\""
            )))
        }
    };
    macro_rules! take {
        ($field:ident) => {
            match section.$field {
                Some(v) => profile.$field = v,
                None => section.$field = Some(profile.$field),
            }
        };
    }
    take!(paths_per_user);
    take!(sector_deg);
    take!(min_distance_m);
    take!(max_distance_m);
    take!(min_separation_deg);
    take!(weak_path_db);
    take!(carrier_ghz);
    section.scenario = match profile.scenario {
        Scenario::Los => "los".into(),
        Scenario::NonLos => "nlos".into(),
    };
    profile.validate().map_err(|e| ConfigError(format!("[channel] {e}")))?;
    Ok(profile)
}

fn resolve(mut file: FileConfig, seed: Option<u64>) -> Result<Resolved, ConfigError> {
    if let Some(seed) = seed {
        file.sim.seed = seed;
    }
    let profile = resolve_profile(&mut file.channel)?;
    let modulation = match file.sim.modulation.to_ascii_uppercase().replace(['-', '_'], "").as_str() {
        "16QAM" | "QAM16" => Modulation::Qam16,
        _ => {
            return Err(ConfigError(format!(
                "[sim] modulation: only \"16QAM\" is supported, got \"{}\"",
                file.sim.modulation
            )))
        }
    };
    file.sim.modulation = "16QAM".into();

    let algorithms = parse_algorithms(&file.sim.algorithms, "sim")?;
    if let Some(a) = algorithms.iter().find(|a| !a.is_buildable()) {
        return Err(ConfigError(format!(
            "[sim] algorithms: {a} has a complexity model only and cannot be simulated"
        )));
    }
    file.sim.algorithms = algorithms.iter().map(|a| a.name().to_string()).collect();

    let sim = SimConfig {
        b: file.system.b,
        u: file.system.u,
        modulation,
        snr_grid: file.sim.snr_db.clone(),
        delta_grid: file.sim.deltas.clone(),
        trials: file.sim.trials,
        transmissions: file.system.t,
        seed: file.sim.seed,
        profile,
        target_ber: file.sim.target_ber,
        gap_db: file.sim.gap_db,
        perfect_csi: file.sim.perfect_csi,
    };
    sim.validate().map_err(|e| ConfigError(format!("{e}")))?;

    let complexity_algs = parse_algorithms(&file.complexity.algorithms, "complexity")?;
    file.complexity.algorithms = complexity_algs.iter().map(|a| a.name().to_string()).collect();
    let mut delta_min = BTreeMap::new();
    for (name, &delta) in &file.complexity.delta_min {
        let alg: Algorithm = name
            .parse()
            .map_err(|e| ConfigError(format!("[complexity] delta_min: {e}")))?;
        delta_min.insert(alg, delta);
    }
    file.complexity.delta_min = delta_min.iter().map(|(a, d)| (a.name().to_string(), *d)).collect();
    let deltas = file.complexity.deltas.clone().unwrap_or_else(|| file.sim.deltas.clone());
    for &d in deltas.iter().chain(delta_min.values()) {
        if !(d > 0.0 && d <= 1.0) {
            return Err(ConfigError(format!("[complexity] density {d} is outside (0, 1]")));
        }
    }
    if file.complexity.t_grid.is_empty() {
        return Err(ConfigError("[complexity] t_grid must not be empty".into()));
    }
    let b = file.system.b;
    let mut complexity_cases = Vec::new();
    for &alg in &complexity_algs {
        if alg == Algorithm::Lmmse {
            complexity_cases.push(ComplexityCase { algorithm: alg, k: b as u64 });
            continue;
        }
        let ds: Vec<f64> = match delta_min.get(&alg) {
            Some(&d) => vec![d],
            None => deltas.clone(),
        };
        let mut ks: Vec<u64> = ds.iter().map(|&d| k_from_delta(d, b) as u64).collect();
        ks.sort_unstable();
        ks.dedup();
        complexity_cases.extend(ks.into_iter().map(|k| ComplexityCase { algorithm: alg, k }));
    }
    let t_grid = file.complexity.t_grid.clone();
    Ok(Resolved {
        file,
        sim,
        algorithms,
        complexity_cases,
        t_grid,
    })
}
