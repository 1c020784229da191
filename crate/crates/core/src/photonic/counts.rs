//! Expected detector count rates and the inverse maps back to `|U|` and the
//! permanent.

use serde::{Deserialize, Serialize};

use super::click::click_probability_interfering;
use super::thermal::{mean_photon_number, mu_from_mean, ThermalBank};
use crate::error::{Error, Result};
use crate::matrix::UnitaryMatrix;

/// Above this `mu`, `sum_j mu_ij ~ mu_i` is no longer a good approximation.
pub const WEAK_SOURCE_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRates {
    pub rep_rate_hz: f64,
    pub accum_s: f64,
    /// `singles[i][j]`: counts at detector `j` from input `i` alone.
    pub singles: Vec<Vec<f64>>,
    pub coincidences: f64,
    /// Set when some source exceeds [`WEAK_SOURCE_LIMIT`].
    pub strong_source: bool,
}

impl CountRates {
    pub fn pulses(&self) -> f64 {
        self.rep_rate_hz * self.accum_s
    }

    /// `C_i = sum_j C_ij`.
    pub fn input_totals(&self) -> Vec<f64> {
        self.singles.iter().map(|row| row.iter().sum()).collect()
    }
}

fn check_rates(f: f64, t: f64) -> Result<()> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::OutOfRange { name: "repetition rate", value: f, range: "(0, inf) Hz" });
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange { name: "accumulation time", value: t, range: "(0, inf) s" });
    }
    Ok(())
}

/// Expected counts over `t` seconds at `f` pulses per second.
///
/// A thermal pulse split by the interferometer reaches detector `j` as a
/// thermal state with `<n_ij> = |U_ji|^2 <n_i>`; an on/off detector fires on
/// it with probability `mu_ij`.
pub fn simulate_count_rates(u: &UnitaryMatrix, bank: &ThermalBank, f: f64, t: f64) -> Result<CountRates> {
    check_rates(f, t)?;
    if u.dim() != bank.dim() {
        return Err(Error::LengthMismatch { expected: u.dim(), got: bank.dim() });
    }
    let pulses = f * t;
    let mus = bank.effective_mus();
    let singles = mus
        .iter()
        .enumerate()
        .map(|(i, &mu)| {
            let mean = mean_photon_number(mu);
            (0..u.dim()).map(|j| pulses * mu_from_mean(u.transition(j, i) * mean)).collect()
        })
        .collect();
    Ok(CountRates {
        rep_rate_hz: f,
        accum_s: t,
        singles,
        coincidences: pulses * click_probability_interfering(u, bank)?,
        strong_source: mus.iter().any(|&m| m > WEAK_SOURCE_LIMIT),
    })
}

/// `|U_ji|` (indexed `[j][i]`) from single counts.
///
/// Counts are first linearized to mean photon numbers,
/// `<n_ij> = C_ij / (ft - C_ij)`, which makes the column normalization exact;
/// for weak sources this is `sqrt(C_ij / C_i)`.
pub fn reconstruct_unitary_moduli(counts: &CountRates) -> Result<Vec<Vec<f64>>> {
    let pulses = counts.pulses();
    let m = counts.singles.len();
    if counts.singles.iter().any(|row| row.len() != m) {
        return Err(Error::Invalid("singles must be square".into()));
    }
    let mut moduli = vec![vec![0.0; m]; m];
    for (i, row) in counts.singles.iter().enumerate() {
        if row.iter().any(|&c| !(0.0..pulses).contains(&c)) {
            return Err(Error::Invalid(format!("counts of input {i} must lie in [0, f t)")));
        }
        let means: Vec<f64> = row.iter().map(|&c| c / (pulses - c)).collect();
        let total: f64 = means.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroCounts(i));
        }
        for (j, &n) in means.iter().enumerate() {
            moduli[j][i] = (n / total).sqrt();
        }
    }
    Ok(moduli)
}

/// Permanent estimate from counts, per pulse:
/// `(C_c / ft) / prod_i (1 - C_i / ft)`.
pub fn permanent_from_counts(counts: &CountRates) -> Result<f64> {
    let pulses = counts.pulses();
    let mut denom = 1.0;
    for (i, c) in counts.input_totals().into_iter().enumerate() {
        if c >= pulses {
            return Err(Error::Invalid(format!("input {i} counts exceed the number of pulses")));
        }
        denom *= 1.0 - c / pulses;
    }
    Ok(counts.coincidences / pulses / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;

    #[test]
    fn singles_formula() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = UnitaryMatrix::new(ComplexMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]).unwrap()).unwrap();
        // choose mu so that each output half sees mu_ij = 1e-3
        let mu = mu_from_mean(2.0 * mean_photon_number(1e-3));
        let bank = ThermalBank::lossless(vec![mu, mu]).unwrap();
        let c = simulate_count_rates(&u, &bank, 80e6, 1.0).unwrap();
        for row in &c.singles {
            for &x in row {
                assert!((x - 8e4).abs() < 1e-6, "{x}");
            }
        }
        assert!(!c.strong_source);
    }

    #[test]
    fn bad_rates() {
        let bank = ThermalBank::lossless(vec![0.1]).unwrap();
        let id = UnitaryMatrix::identity(1);
        assert!(simulate_count_rates(&id, &bank, 0.0, 1.0).is_err());
        assert!(simulate_count_rates(&id, &bank, 1.0, -1.0).is_err());
        let strong = simulate_count_rates(&id, &ThermalBank::lossless(vec![0.06]).unwrap(), 1.0, 1.0).unwrap();
        assert!(strong.strong_source);
    }

    #[test]
    fn reconstruct_equal_counts() {
        let counts = CountRates {
            rep_rate_hz: 1e6,
            accum_s: 1.0,
            singles: vec![vec![500.0, 500.0], vec![500.0, 500.0]],
            coincidences: 0.0,
            strong_source: false,
        };
        for row in reconstruct_unitary_moduli(&counts).unwrap() {
            for x in row {
                assert!((x - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
            }
        }
        let mut zero = counts.clone();
        zero.singles[1] = vec![0.0, 0.0];
        assert_eq!(reconstruct_unitary_moduli(&zero).unwrap_err(), Error::ZeroCounts(1));
    }
}
