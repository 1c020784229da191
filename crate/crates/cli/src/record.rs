//! Append-only JSON-lines run log.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use permoptics::sampling::SamplingResult;
use serde::{Deserialize, Serialize};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::error::CliError;

pub const LOG_ENV: &str = "PERMOPTICS_LOG";
pub const DEFAULT_LOG: &str = "permoptics-runs.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub permoptics: String,
    pub permoptics_cli: String,
}

impl Versions {
    pub fn current() -> Self {
        // the library is versioned with the workspace
        let v = env!("CARGO_PKG_VERSION");
        Self { permoptics: v.into(), permoptics_cli: v.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub config_hash: String,
    pub timestamp: String,
    pub versions: Versions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<usize>,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<serde_json::Value>,
    pub duration_s: f64,
}

impl RunRecord {
    pub fn new(command: &str, config_hash: String) -> Self {
        Self {
            command: command.into(),
            config_hash,
            timestamp: OffsetDateTime::now_utc().format(&Rfc3339).unwrap_or_default(),
            versions: Versions::current(),
            seed: None,
            partitions: None,
            sampling: None,
            analytic: None,
            duration_s: 0.0,
        }
    }

    /// The record without wall-clock fields; equal across reruns.
    pub fn payload(&self) -> Self {
        Self { timestamp: String::new(), duration_s: 0.0, ..self.clone() }
    }
}

/// `PERMOPTICS_LOG`, else `<out>/runs.jsonl`, else the working directory.
pub fn log_path(out: Option<&Path>) -> PathBuf {
    if let Some(p) = std::env::var_os(LOG_ENV).filter(|p| !p.is_empty()) {
        return PathBuf::from(p);
    }
    match out {
        Some(dir) => dir.join("runs.jsonl"),
        None => PathBuf::from(DEFAULT_LOG),
    }
}

/// Appends one line under an exclusive lock.
pub fn append(path: &Path, record: &RunRecord) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.lock()?;
    file.write_all(line.as_bytes())?;
    file.flush()?;
    file.unlock()?;
    Ok(())
}

pub fn read_log(path: &Path) -> Result<Vec<RunRecord>, CliError> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| CliError::Input(format!("bad log line: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use permoptics::sampling::{bernoulli_estimate, SamplingPlan};

    #[test]
    fn records_round_trip_through_log() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/log.jsonl");
        let mut rec = RunRecord::new("simulate", "abc".into());
        rec.seed = Some(3);
        rec.sampling = Some(bernoulli_estimate(0.3, &SamplingPlan::new(1000, 3)).unwrap());
        append(&path, &rec).unwrap();
        append(&path, &rec).unwrap();
        let back = read_log(&path).unwrap();
        assert_eq!(back, vec![rec.clone(), rec.clone()]);
        let line = std::fs::read_to_string(&path).unwrap();
        for key in ["\"config_hash\"", "\"p_hat\"", "\"ci\"", "\"generator\"", "\"n\"", "\"k\""] {
            assert!(line.contains(key), "{key}");
        }
    }
}
