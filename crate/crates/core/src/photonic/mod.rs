//! Optical configurations to click probabilities and count rates.

pub mod click;
pub mod counts;
pub mod fock;
pub mod thermal;

use serde::{Deserialize, Serialize};

pub use click::{
    click_probability_interfering, click_probability_no_interference, hpsm_permanent, interference_visibility,
    no_interference_sum, single_photon_click_probability, Convention, SourceWeight,
};
pub use counts::{permanent_from_counts, reconstruct_unitary_moduli, simulate_count_rates, CountRates};
pub use fock::{fock_oracle_probability, transition_amplitude, DetectionKind, DetectionModel, OracleResult};
pub use thermal::{apply_loss, mean_photon_number, mu_from_mean, precompensate_loss, thermal_pmf, ThermalBank};

use crate::error::Result;
use crate::matrix::{ComplexMatrix, Laxity, UnitaryMatrix};

/// JSON experiment descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentDescriptor {
    pub unitary: ComplexMatrix,
    pub mus: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub etas: Option<Vec<f64>>,
    #[serde(default = "default_detection")]
    pub detection: DetectionModel,
    #[serde(default = "default_rep_rate")]
    pub rep_rate_hz: f64,
    #[serde(default = "default_accum")]
    pub accum_s: f64,
    /// Tolerance tier for the unitary; `experimental` for printed data.
    #[serde(default = "default_laxity")]
    pub unitarity: Laxity,
}

fn default_detection() -> DetectionModel {
    DetectionModel::exact(4)
}

fn default_rep_rate() -> f64 {
    80e6
}

fn default_accum() -> f64 {
    1.0
}

fn default_laxity() -> Laxity {
    Laxity::Constructed
}

impl ExperimentDescriptor {
    pub fn unitary(&self) -> Result<UnitaryMatrix> {
        UnitaryMatrix::with_laxity(self.unitary.clone(), self.unitarity)
    }

    pub fn bank(&self) -> Result<ThermalBank> {
        let etas = self.etas.clone().unwrap_or_else(|| vec![1.0; self.mus.len()]);
        ThermalBank::new(self.mus.clone(), etas)
    }

    /// Checks every field and cross-field dimension.
    pub fn validate(&self) -> Result<(UnitaryMatrix, ThermalBank)> {
        let u = self.unitary()?;
        let bank = self.bank()?;
        if u.dim() != bank.dim() {
            return Err(crate::Error::LengthMismatch { expected: u.dim(), got: bank.dim() });
        }
        if !(self.rep_rate_hz > 0.0 && self.accum_s > 0.0) {
            return Err(crate::Error::Invalid("rep_rate_hz and accum_s must be positive".into()));
        }
        Ok((u, bank))
    }
}
