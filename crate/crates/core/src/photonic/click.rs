//! Probability that every output detector records exactly one photon.

use serde::{Deserialize, Serialize};

use super::thermal::{mean_photon_number, ThermalBank};
use crate::error::{Error, Result};
use crate::hpsm::hpsm_from;
use crate::matrix::UnitaryMatrix;
use crate::permanent::permanent;

/// Largest dimension accepted by the ordered-assignment sum (`M^M` terms).
pub const NO_INTERFERENCE_MAX_DIM: usize = 8;

fn check_dims(u: &UnitaryMatrix, bank: &ThermalBank) -> Result<()> {
    if u.dim() != bank.dim() {
        return Err(Error::LengthMismatch { expected: u.dim(), got: bank.dim() });
    }
    Ok(())
}

/// `Perm[U D U^dag]` for the bank's effective parameters.
pub fn hpsm_permanent(u: &UnitaryMatrix, bank: &ThermalBank) -> Result<f64> {
    check_dims(u, bank)?;
    let a = hpsm_from(u, &bank.effective_mus())?;
    // HPSM permanents are real and nonnegative; drop rounding residue.
    Ok(permanent(a.matrix())?.re.max(0.0))
}

/// Joint detection probability with fully interfering thermal inputs:
/// `Perm[U D U^dag] * prod (1 - mu_i)`.
pub fn click_probability_interfering(u: &UnitaryMatrix, bank: &ThermalBank) -> Result<f64> {
    Ok((hpsm_permanent(u, bank)? * bank.vacuum_factor()).clamp(0.0, 1.0))
}

/// Single photon in every input: `|Perm[U]|^2`.
pub fn single_photon_click_probability(u: &UnitaryMatrix) -> Result<f64> {
    Ok(permanent(u.matrix())?.norm_sqr().min(1.0))
}

/// Bunching factor assigned to detection events that share a thermal source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `prod_s n_s!` where `n_s` photons are detected from source `s`; the
    /// ordered moment of a thermal mode.
    FactorialRule,
    /// The printed four-mode table: 24, 6, 4, 2, 1 for the multiplicity
    /// patterns 4, 3+1, 2+1+1, 2+2, 1+1+1+1 (2 and 1 at two modes).
    PaperLiteral,
}

/// What multiplies each transition weight `|U_{ds}|^2` in the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceWeight {
    /// The geometric parameter `mu`; exact for distinguishable sources.
    Mu,
    /// The mean photon number `mu / (1 - mu)`; the weak-source form used for
    /// the printed comparison values.
    MeanPhotonNumber,
}

fn enhancement(multiplicities: &[usize], convention: Convention) -> Result<f64> {
    match convention {
        Convention::FactorialRule => Ok(multiplicities.iter().map(|&k| (1..=k).product::<usize>() as f64).product()),
        Convention::PaperLiteral => {
            let mut pattern: Vec<usize> = multiplicities.iter().copied().filter(|&k| k > 0).collect();
            pattern.sort_unstable_by(|a, b| b.cmp(a));
            Ok(match pattern.as_slice() {
                [2] => 2.0,
                [1, 1] => 1.0,
                [4] => 24.0,
                [3, 1] => 6.0,
                [2, 1, 1] => 4.0,
                [2, 2] => 2.0,
                [1, 1, 1, 1] => 1.0,
                _ => return Err(Error::Unsupported { dim: multiplicities.len(), what: "paper_literal convention" }),
            })
        }
    }
}

/// `sum over ordered assignments d -> s(d) of prod_d |U_{d,s(d)}|^2 w_{s(d)}`
/// times the enhancement factor of the assignment.
pub fn no_interference_sum(
    u: &UnitaryMatrix,
    mus: &[f64],
    convention: Convention,
    weight: SourceWeight,
) -> Result<f64> {
    let m = u.dim();
    if mus.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: mus.len() });
    }
    if convention == Convention::PaperLiteral && !matches!(m, 2 | 4) {
        return Err(Error::Unsupported { dim: m, what: "paper_literal convention (M must be 2 or 4)" });
    }
    if m > NO_INTERFERENCE_MAX_DIM {
        return Err(Error::Guard(format!("no-interference sum limited to M <= {NO_INTERFERENCE_MAX_DIM}")));
    }
    let w: Vec<f64> = match weight {
        SourceWeight::Mu => mus.to_vec(),
        SourceWeight::MeanPhotonNumber => mus.iter().map(|&x| mean_photon_number(x)).collect(),
    };
    let mut assignment = vec![0usize; m];
    let mut counts = vec![0usize; m];
    let mut total = 0.0;
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut term = 1.0;
        for (det, &src) in assignment.iter().enumerate() {
            counts[src] += 1;
            term *= u.transition(det, src) * w[src];
        }
        if term != 0.0 {
            total += term * enhancement(&counts, convention)?;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(total);
            }
            assignment[pos] += 1;
            if assignment[pos] < m {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Joint detection probability with mutually distinguishable thermal inputs.
///
/// Uses the effective `mu` weights so that the result is the exact
/// probability `prod (1 - mu_i) * sum` under the factorial rule.
pub fn click_probability_no_interference(u: &UnitaryMatrix, bank: &ThermalBank, convention: Convention) -> Result<f64> {
    check_dims(u, bank)?;
    let sum = no_interference_sum(u, &bank.effective_mus(), convention, SourceWeight::Mu)?;
    Ok((sum * bank.vacuum_factor()).clamp(0.0, 1.0))
}

/// Two-point visibility `(p_no - p_int) / p_no` of the interference dip.
pub fn interference_visibility(u: &UnitaryMatrix, bank: &ThermalBank, convention: Convention) -> Result<f64> {
    let p_no = click_probability_no_interference(u, bank, convention)?;
    let p_int = click_probability_interfering(u, bank)?;
    if p_no == 0.0 {
        return Err(Error::Invalid("no-interference probability is zero".into()));
    }
    Ok((p_no - p_int) / p_no)
}
