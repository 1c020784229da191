use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric photon-number distribution `(1 - mu) mu^n`.
pub fn thermal_pmf(mu: f64, n: u32) -> Result<f64> {
    check_mu(mu)?;
    Ok((1.0 - mu) * mu.powi(n as i32))
}

/// `<n> = mu / (1 - mu)`.
#[inline]
pub fn mean_photon_number(mu: f64) -> f64 {
    mu / (1.0 - mu)
}

/// Inverse of [`mean_photon_number`].
#[inline]
pub fn mu_from_mean(mean: f64) -> f64 {
    mean / (1.0 + mean)
}

/// A thermal state through a channel of efficiency `eta` stays thermal with
/// `<n> -> eta <n>`; returns the output `mu`.
#[inline]
pub fn apply_loss(mu: f64, eta: f64) -> f64 {
    mu_from_mean(eta * mean_photon_number(mu))
}

fn check_mu(mu: f64) -> Result<()> {
    if !(0.0..1.0).contains(&mu) {
        return Err(Error::OutOfRange { name: "mu", value: mu, range: "[0, 1)" });
    }
    Ok(())
}

/// Per-input thermal sources and their channel efficiencies.
///
/// `mus` are the source parameters. What the interferometer effectively sees
/// is [`ThermalBank::effective_mus`], the sources after loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalBank {
    mus: Vec<f64>,
    etas: Vec<f64>,
}

impl ThermalBank {
    pub fn new(mus: Vec<f64>, etas: Vec<f64>) -> Result<Self> {
        if mus.is_empty() {
            return Err(Error::Invalid("thermal bank needs at least one mode".into()));
        }
        if etas.len() != mus.len() {
            return Err(Error::LengthMismatch { expected: mus.len(), got: etas.len() });
        }
        for &mu in &mus {
            check_mu(mu)?;
        }
        for &eta in &etas {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::OutOfRange { name: "eta", value: eta, range: "(0, 1]" });
            }
        }
        Ok(Self { mus, etas })
    }

    pub fn lossless(mus: Vec<f64>) -> Result<Self> {
        let etas = vec![1.0; mus.len()];
        Self::new(mus, etas)
    }

    pub fn dim(&self) -> usize {
        self.mus.len()
    }

    pub fn mus(&self) -> &[f64] {
        &self.mus
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    pub fn is_lossless(&self) -> bool {
        self.etas.iter().all(|&e| e == 1.0)
    }

    /// Parameters after the loss map; equal to `mus` when lossless.
    pub fn effective_mus(&self) -> Vec<f64> {
        self.mus.iter().zip(&self.etas).map(|(&mu, &eta)| if eta == 1.0 { mu } else { apply_loss(mu, eta) }).collect()
    }

    /// `prod (1 - mu_i)` over the effective parameters.
    pub fn vacuum_factor(&self) -> f64 {
        self.effective_mus().iter().map(|m| 1.0 - m).product()
    }
}

/// Source settings that land on `target_mus` after each channel's loss.
pub fn precompensate_loss(bank: &ThermalBank, target_mus: &[f64]) -> Result<ThermalBank> {
    if target_mus.len() != bank.dim() {
        return Err(Error::LengthMismatch { expected: bank.dim(), got: target_mus.len() });
    }
    let mut source = Vec::with_capacity(target_mus.len());
    for (&target, &eta) in target_mus.iter().zip(bank.etas()) {
        check_mu(target)?;
        let mu = mu_from_mean(mean_photon_number(target) / eta);
        if !(mu < 1.0) {
            return Err(Error::OutOfRange { name: "required source mu", value: mu, range: "[0, 1)" });
        }
        source.push(mu);
    }
    ThermalBank::new(source, bank.etas().to_vec())
}
