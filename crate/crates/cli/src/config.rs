use std::path::Path;

use permoptics::photonic::{ExperimentDescriptor, ThermalBank};
use permoptics::sampling::SamplingPlan;
use permoptics::UnitaryMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Thermal sources, permanent of the HPSM.
    #[default]
    Thermal,
    /// One photon per input, `|Perm U|^2`.
    Unitary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    /// Defaults to `rep_rate_hz * accum_s`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<u64>,
    pub seed: u64,
    #[serde(default = "one")]
    pub partitions: usize,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

fn one() -> usize {
    1
}

fn default_confidence() -> f64 {
    0.95
}

/// Printed values a configuration is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    pub perm_exact: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_measured: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_measured_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_interference: Option<f64>,
    /// Value of one unit in the last printed digit.
    pub last_digit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub mode: Mode,
    pub experiment: ExperimentDescriptor,
    pub sampling: SamplingSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

/// A parsed configuration with every check already passed.
#[derive(Debug, Clone)]
pub struct ValidatedConfig {
    pub config: ExperimentConfig,
    pub unitary: UnitaryMatrix,
    pub bank: ThermalBank,
    pub plan: SamplingPlan,
    pub hash: String,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical))
    }

    pub fn plan(&self) -> SamplingPlan {
        let e = &self.experiment;
        let n = self.sampling.n_samples.unwrap_or_else(|| (e.rep_rate_hz * e.accum_s).round() as u64);
        SamplingPlan {
            n_samples: n,
            seed: self.sampling.seed,
            partitions: self.sampling.partitions,
            confidence: self.sampling.confidence,
        }
    }

    /// Applies command-line overrides, then checks everything.
    pub fn validate(mut self, seed: Option<u64>, partitions: Option<usize>) -> Result<ValidatedConfig, CliError> {
        if let Some(s) = seed {
            self.sampling.seed = s;
        }
        if let Some(p) = partitions {
            self.sampling.partitions = p;
        }
        let (unitary, bank) = self.experiment.validate()?;
        let plan = self.plan();
        plan.validate()?;
        let hash = self.hash();
        Ok(ValidatedConfig { config: self, unitary, bank, plan, hash })
    }
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        /// Configurations shipped with the binary, by file stem.
        pub const BUNDLED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../configs/", $name, ".json")))),*
        ];
    };
}

bundled!("table1_row1", "table1_row2", "table1_row3", "table1_row4", "hom_single_photon");

pub fn bundled(name: &str) -> Option<ExperimentConfig> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| ExperimentConfig::from_json(text).expect("bundled config parses"))
}

/// The four printed table rows, in order.
pub fn table_rows() -> Vec<ExperimentConfig> {
    (1..=4).map(|i| bundled(&format!("table1_row{i}")).expect("bundled row")).collect()
}
