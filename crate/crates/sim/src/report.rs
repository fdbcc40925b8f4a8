//! Result persistence: `results.csv` with one row per trial and
//! `summary.json` with aggregates plus the resolved configuration, so a run
//! can be replayed exactly. No timestamps are written; identical inputs give
//! identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;
use crate::montecarlo::{TrialOutcome, SINGULAR_VALUES_KEPT};
use crate::{Result, SimError};

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Mean, sample standard deviation and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
}

impl Stats {
    /// `None` for an empty sample.
    pub fn from_samples(xs: &[f64]) -> Option<Self> {
        let n = xs.len();
        if n == 0 {
            return None;
        }
        let mean = pairwise_sum(xs) / n as f64;
        let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
        let var = if n > 1 { pairwise_sum(&dev) / (n - 1) as f64 } else { 0.0 };
        let std = var.sqrt();
        Some(Self {
            count: n,
            mean,
            std,
            stderr: std / (n as f64).sqrt(),
        })
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    /// Exact rate under the configured power policy.
    pub rate: Stats,
    pub rate_opa: Stats,
    pub rate_epa: Stats,
    pub rate_asymptotic: Stats,
    pub rate_epa_formula: Option<Stats>,
    pub required_power: Option<Stats>,
    /// Per index of the leading singular values.
    pub singular_values: Vec<Stats>,
}

impl Aggregates {
    pub fn from_trials(config: &ScenarioConfig, trials: &[TrialOutcome]) -> Option<Self> {
        let column = |f: &dyn Fn(&TrialOutcome) -> f64| Stats::from_samples(&trials.iter().map(f).collect::<Vec<_>>());
        let optional = |f: &dyn Fn(&TrialOutcome) -> Option<f64>| {
            let xs: Option<Vec<f64>> = trials.iter().map(f).collect();
            xs.and_then(|xs| Stats::from_samples(&xs))
        };
        let width = trials.iter().map(|t| t.singular_values.len()).min().unwrap_or(0);
        Some(Self {
            rate: column(&|t| t.rate(config.power_policy))?,
            rate_opa: column(&|t| t.rate_opa)?,
            rate_epa: column(&|t| t.rate_epa)?,
            rate_asymptotic: column(&|t| t.rate_asymptotic)?,
            rate_epa_formula: optional(&|t| t.rate_epa_formula),
            required_power: optional(&|t| t.required_power),
            singular_values: (0..width).filter_map(|i| column(&|t| t.singular_values[i])).collect(),
        })
    }
}

/// Per-trial results of a run with their aggregates and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub config: ScenarioConfig,
    pub trials: Vec<TrialOutcome>,
    pub aggregates: Option<Aggregates>,
    /// SHA-256 of the canonical TOML form of `config`.
    pub config_hash: String,
    pub version: String,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub trials: usize,
    pub aggregates: Option<Aggregates>,
    pub config: ScenarioConfig,
}

pub fn config_hash(config: &ScenarioConfig) -> String {
    hex::encode(Sha256::digest(config.to_toml_string().as_bytes()))
}

pub fn version_string() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

impl RateReport {
    pub fn new(config: ScenarioConfig, trials: Vec<TrialOutcome>) -> Self {
        let aggregates = Aggregates::from_trials(&config, &trials);
        Self {
            config_hash: config_hash(&config),
            version: version_string(),
            config,
            trials,
            aggregates,
        }
    }

    pub fn summary(&self) -> Summary {
        Summary {
            version: self.version.clone(),
            config_hash: self.config_hash.clone(),
            seed: self.config.seed,
            trials: self.trials.len(),
            aggregates: self.aggregates.clone(),
            config: self.config.clone(),
        }
    }

    /// Per-trial CSV. Floats use Rust's shortest round-trip formatting;
    /// absent values are empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,rate_opa,rate_epa,rate_asymptotic,rate_epa_formula,required_power");
        for i in 1..=SINGULAR_VALUES_KEPT {
            let _ = write!(out, ",sv_{i}");
        }
        out.push('\n');
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for t in &self.trials {
            let _ = write!(
                out,
                "{},{},{},{},{},{}",
                t.trial,
                t.rate_opa,
                t.rate_epa,
                t.rate_asymptotic,
                opt(t.rate_epa_formula),
                opt(t.required_power)
            );
            for i in 0..SINGULAR_VALUES_KEPT {
                let _ = write!(out, ",{}", opt(t.singular_values.get(i).copied()));
            }
            out.push('\n');
        }
        out
    }

    /// Parses rows written by [`RateReport::to_csv`].
    pub fn trials_from_csv(text: &str) -> Result<Vec<TrialOutcome>> {
        let bad = |line: usize, what: &str| SimError::Invalid(vec![format!("{RESULTS_FILE} line {line}: {what}")]);
        let mut rows = Vec::new();
        for (idx, line) in text.lines().enumerate().skip(1) {
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 + SINGULAR_VALUES_KEPT {
                return Err(bad(lineno, "wrong number of fields"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(lineno, &format!("`{s}` is not a number")));
            let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
            let mut singular_values = Vec::new();
            for s in &fields[6..] {
                if let Some(v) = opt(s)? {
                    singular_values.push(v);
                }
            }
            rows.push(TrialOutcome {
                trial: fields[0].parse().map_err(|_| bad(lineno, "bad trial index"))?,
                rate_opa: num(fields[1])?,
                rate_epa: num(fields[2])?,
                rate_asymptotic: num(fields[3])?,
                rate_epa_formula: opt(fields[4])?,
                required_power: opt(fields[5])?,
                singular_values,
            });
        }
        Ok(rows)
    }
}

fn write_file(path: PathBuf, contents: &str) -> Result<()> {
    fs::write(&path, contents).map_err(|source| SimError::Io { path, source })
}

/// Writes `results.csv` and `summary.json` into `dir`, creating it.
pub fn emit_report(report: &RateReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| SimError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write_file(dir.join(RESULTS_FILE), &report.to_csv())?;
    let mut json = serde_json::to_string_pretty(&report.summary())?;
    json.push('\n');
    write_file(dir.join(SUMMARY_FILE), &json)
}

/// Reads a `summary.json`; its `config` field replays the run.
pub fn load_summary(path: impl AsRef<Path>) -> Result<Summary> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| SimError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let summary: Summary = serde_json::from_str(&text)?;
    summary.config.validate()?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_small() {
        let s = Stats::from_samples(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.stderr - s.std / 2.0).abs() < 1e-15);
        assert!(Stats::from_samples(&[]).is_none());
        assert_eq!(Stats::from_samples(&[3.0]).unwrap().std, 0.0);
    }

    #[test]
    fn csv_round_trip() {
        let t = TrialOutcome {
            trial: 4,
            rate_opa: 0.1 + 0.2,
            rate_epa: 1e-300,
            rate_asymptotic: 12.5,
            rate_epa_formula: None,
            required_power: Some(3.25e-7),
            singular_values: vec![5.0, 1.0 / 3.0],
        };
        let r = RateReport::new(ScenarioConfig::reference(4, 4, 4, 1), vec![t.clone()]);
        assert_eq!(RateReport::trials_from_csv(&r.to_csv()).unwrap(), vec![t]);
    }

    #[test]
    fn hash_tracks_config() {
        let a = ScenarioConfig::reference(4, 4, 4, 1);
        let mut b = a.clone();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.seed += 1;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }
}
