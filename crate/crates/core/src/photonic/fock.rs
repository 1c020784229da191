//! Brute-force Fock-space oracle for small interferometers.
//!
//! Thermal inputs are expanded into their photon-number components up to a
//! cutoff per mode. For each input configuration the output is evaluated
//! either through the transition amplitude
//! `Perm(U[m, n]) / sqrt(prod n_i! prod m_j!)` (exact single-photon
//! detection) or by expanding `prod_i (sum_j U_ji b_j^dag)^{n_i}` and summing
//! every output pattern that fires all detectors (threshold detection). The
//! probability mass of configurations beyond the cutoff is returned as a
//! rigorous error bound.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::thermal::{thermal_pmf, ThermalBank};
use crate::error::{Error, Result};
use crate::matrix::UnitaryMatrix;
use crate::permanent::{permanent, GRAY_MAX_DIM};

pub const ORACLE_MAX_MODES: usize = 4;
pub const ORACLE_MAX_CUTOFF: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionKind {
    ExactSinglePhoton,
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionModel {
    pub kind: DetectionKind,
    #[serde(rename = "cutoff")]
    pub fock_cutoff: u32,
}

impl DetectionModel {
    pub fn exact(cutoff: u32) -> Self {
        Self { kind: DetectionKind::ExactSinglePhoton, fock_cutoff: cutoff }
    }

    pub fn threshold(cutoff: u32) -> Self {
        Self { kind: DetectionKind::Threshold, fock_cutoff: cutoff }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub probability: f64,
    /// Total thermal weight of input configurations beyond the cutoff.
    pub truncation_bound: f64,
    pub configurations: usize,
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Amplitude for Fock input `input` to reach Fock output `output`.
pub fn transition_amplitude(u: &UnitaryMatrix, input: &[u32], output: &[u32]) -> Result<Complex64> {
    let m = u.dim();
    for v in [input, output] {
        if v.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: v.len() });
        }
    }
    let total: u32 = input.iter().sum();
    if total != output.iter().sum::<u32>() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if total == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if total as usize > GRAY_MAX_DIM {
        return Err(Error::Guard(format!("{total} photons exceed the permanent limit")));
    }
    let repeat = |occ: &[u32]| -> Vec<usize> {
        occ.iter().enumerate().flat_map(|(k, &c)| std::iter::repeat_n(k, c as usize)).collect()
    };
    let sub = u.matrix().select(&repeat(output), &repeat(input))?;
    let norm: f64 = input.iter().chain(output).map(|&c| factorial(c)).product();
    Ok(permanent(&sub)? / norm.sqrt())
}

fn truncation_mass(mus: &[f64], cutoff: u32) -> f64 {
    let log_kept: f64 = mus.iter().map(|&mu| (-mu.powi(cutoff as i32 + 1)).ln_1p()).sum();
    -log_kept.exp_m1()
}

/// Joint detection probability by explicit photon-number enumeration.
pub fn fock_oracle_probability(u: &UnitaryMatrix, bank: &ThermalBank, model: DetectionModel) -> Result<OracleResult> {
    let m = u.dim();
    if bank.dim() != m {
        return Err(Error::LengthMismatch { expected: m, got: bank.dim() });
    }
    if m > ORACLE_MAX_MODES {
        return Err(Error::Guard(format!("oracle supports at most {ORACLE_MAX_MODES} modes, got {m}")));
    }
    if model.fock_cutoff < 1 || model.fock_cutoff > ORACLE_MAX_CUTOFF {
        return Err(Error::Guard(format!("cutoff must be in 1..={ORACLE_MAX_CUTOFF}, got {}", model.fock_cutoff)));
    }
    let mus = bank.effective_mus();
    let pmf: Vec<Vec<f64>> = mus
        .iter()
        .map(|&mu| (0..=model.fock_cutoff).map(|n| thermal_pmf(mu, n)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let truncation_bound = truncation_mass(&mus, model.fock_cutoff);
    let (probability, configurations) = match model.kind {
        DetectionKind::ExactSinglePhoton => exact_single_photon(u, &pmf, model.fock_cutoff)?,
        DetectionKind::Threshold => threshold(u, &pmf),
    };
    Ok(OracleResult { probability, truncation_bound, configurations })
}

fn exact_single_photon(u: &UnitaryMatrix, pmf: &[Vec<f64>], cutoff: u32) -> Result<(f64, usize)> {
    let m = u.dim();
    let target = vec![1u32; m];
    let mut occ = vec![0u32; m];
    let mut total = 0.0;
    let mut count = 0;
    // all occupations with sum m and each entry <= cutoff
    loop {
        if occ.iter().sum::<u32>() == m as u32 {
            let weight: f64 = occ.iter().enumerate().map(|(i, &n)| pmf[i][n as usize]).product();
            total += weight * transition_amplitude(u, &occ, &target)?.norm_sqr();
            count += 1;
        }
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok((total, count));
            }
            occ[pos] += 1;
            if occ[pos] <= cutoff.min(m as u32) {
                break;
            }
            occ[pos] = 0;
            pos += 1;
        }
    }
}

type Poly = BTreeMap<[u8; ORACLE_MAX_MODES], Complex64>;

fn multiply_linear(poly: &Poly, u: &UnitaryMatrix, input: usize) -> Poly {
    let mut out = Poly::new();
    for (exp, &c) in poly {
        for j in 0..u.dim() {
            let a = u[(j, input)];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let mut e = *exp;
            e[j] += 1;
            *out.entry(e).or_insert(Complex64::new(0.0, 0.0)) += c * a;
        }
    }
    out
}

struct ThresholdWalk<'a> {
    u: &'a UnitaryMatrix,
    pmf: &'a [Vec<f64>],
    factorials: Vec<f64>,
    total: f64,
    count: usize,
}

impl ThresholdWalk<'_> {
    /// Depth-first over input modes; each level extends the parent's
    /// expanded polynomial by one more creation operator.
    fn visit(&mut self, mode: usize, poly: &Poly, weight: f64, input_norm: f64, photons: usize) {
        let m = self.u.dim();
        if mode == m {
            self.count += 1;
            if photons < m || weight == 0.0 {
                return;
            }
            let mut p = 0.0;
            for (exp, c) in poly {
                if exp[..m].iter().all(|&k| k >= 1) {
                    let out_norm: f64 = exp[..m].iter().map(|&k| self.factorials[k as usize]).product();
                    p += c.norm_sqr() * out_norm;
                }
            }
            self.total += weight * p / input_norm;
            return;
        }
        let mut current = poly.clone();
        for n in 0..self.pmf[mode].len() {
            if n > 0 {
                current = multiply_linear(&current, self.u, mode);
            }
            let w = weight * self.pmf[mode][n];
            self.visit(mode + 1, &current, w, input_norm * self.factorials[n], photons + n);
        }
    }
}

fn threshold(u: &UnitaryMatrix, pmf: &[Vec<f64>]) -> (f64, usize) {
    let max_photons = pmf.iter().map(|p| p.len() - 1).sum::<usize>();
    let mut walk =
        ThresholdWalk { u, pmf, factorials: (0..=max_photons as u32).map(factorial).collect(), total: 0.0, count: 0 };
    let mut vacuum = Poly::new();
    vacuum.insert([0; ORACLE_MAX_MODES], Complex64::new(1.0, 0.0));
    walk.visit(0, &vacuum, 1.0, 1.0, 0);
    (walk.total, walk.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{network_to_unitary, BeamSplitter, BeamSplitterChain};

    fn balanced() -> UnitaryMatrix {
        network_to_unitary(&BeamSplitterChain::new(vec![BeamSplitter::balanced((1, 2))]), 2).unwrap()
    }

    #[test]
    fn single_mode_exact() {
        let bank = ThermalBank::lossless(vec![0.1]).unwrap();
        let r = fock_oracle_probability(&UnitaryMatrix::identity(1), &bank, DetectionModel::exact(4)).unwrap();
        assert!((r.probability - 0.09).abs() < 1e-16);
        let t = fock_oracle_probability(&UnitaryMatrix::identity(1), &bank, DetectionModel::threshold(8)).unwrap();
        // P(n >= 1) = mu, minus the truncated tail
        assert!((t.probability + t.truncation_bound - 0.1).abs() < 1e-15);
    }

    #[test]
    fn balanced_splitter_one_source() {
        let bank = ThermalBank::lossless(vec![0.2, 0.0]).unwrap();
        let r = fock_oracle_probability(&balanced(), &bank, DetectionModel::exact(6)).unwrap();
        assert!((r.probability - 0.016).abs() <= r.truncation_bound + 1e-15);
        assert!((r.probability - 0.016).abs() < 1e-15);
    }

    #[test]
    fn guards() {
        let bank = ThermalBank::lossless(vec![0.1; 5]).unwrap();
        assert!(matches!(
            fock_oracle_probability(&UnitaryMatrix::identity(5), &bank, DetectionModel::exact(2)),
            Err(Error::Guard(_))
        ));
        let bank = ThermalBank::lossless(vec![0.1; 2]).unwrap();
        let id = UnitaryMatrix::identity(2);
        assert!(fock_oracle_probability(&id, &bank, DetectionModel::exact(9)).is_err());
        assert!(fock_oracle_probability(&id, &bank, DetectionModel::exact(0)).is_err());
    }

    #[test]
    fn expansion_matches_permanent_amplitudes() {
        let u = network_to_unitary(
            &BeamSplitterChain::new(vec![
                BeamSplitter::with_phase((1, 2), 0.6, 0.4),
                BeamSplitter::with_phase((2, 3), 0.3, 2.0),
            ]),
            3,
        )
        .unwrap();
        let input = [2u32, 0, 1];
        let mut poly = Poly::new();
        poly.insert([0; 4], Complex64::new(1.0, 0.0));
        for (mode, &n) in input.iter().enumerate() {
            for _ in 0..n {
                poly = multiply_linear(&poly, &u, mode);
            }
        }
        let in_norm: f64 = input.iter().map(|&n| factorial(n)).product();
        let mut total = 0.0;
        for (exp, c) in &poly {
            let out = [exp[0] as u32, exp[1] as u32, exp[2] as u32];
            let out_norm: f64 = out.iter().map(|&k| factorial(k)).product();
            let from_poly = c * (out_norm / in_norm).sqrt();
            let from_perm = transition_amplitude(&u, &input, &out).unwrap();
            assert!((from_poly - from_perm).norm() < 1e-14);
            total += from_poly.norm_sqr();
        }
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn amplitude_edge_cases() {
        let u = balanced();
        assert_eq!(transition_amplitude(&u, &[1, 0], &[1, 1]).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(transition_amplitude(&u, &[0, 0], &[0, 0]).unwrap(), Complex64::new(1.0, 0.0));
        // Hong-Ou-Mandel: |1,1> never exits as |1,1>
        assert!(transition_amplitude(&u, &[1, 1], &[1, 1]).unwrap().norm() < 1e-15);
        assert!((transition_amplitude(&u, &[1, 1], &[2, 0]).unwrap().norm_sqr() - 0.5).abs() < 1e-15);
    }
}
