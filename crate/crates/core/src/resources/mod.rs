//! Sample-complexity formulas and bounds for permanent estimation by
//! coincidence counting.
//!
//! Coincidence counting is a Bernoulli process with success probability `p`.
//! Under the normal approximation the estimate `p_hat` lands within
//! `z_c sqrt(p(1-p)/N)` of `p` with confidence `delta`, where
//! `z_c = sqrt(2) erf^{-1}(delta)`. Requiring that window to equal a target
//! error gives every sample count in this module.
//!
//! Infinite sample counts (`p = 0`, degenerate rescaling) are returned as
//! values with `n_required = None`, never as errors.

pub mod erf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use erf::{critical_value, erf, erfc, inverse_erf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// Error `epsilon * p` on the thermal click probability.
    MultiplicativeThermal,
    /// Error `epsilon * |Perm U|^2` with single photons.
    MultiplicativeUnitary,
    /// Error `epsilon * sqrt(Perm A)` after rescaling by `mu_max`.
    AlmostMultiplicativeThermal,
    /// Absolute error `epsilon` on `|Perm U|^2`; needs at most
    /// `2 (erf^{-1}(delta) / epsilon)^2` samples.
    AlmostMultiplicativeUnitary,
}

impl Flavor {
    pub fn formula_id(self) -> &'static str {
        match self {
            Flavor::MultiplicativeThermal => "thermal-multiplicative",
            Flavor::MultiplicativeUnitary => "unitary-multiplicative",
            Flavor::AlmostMultiplicativeThermal => "thermal-almost-multiplicative",
            Flavor::AlmostMultiplicativeUnitary => "unitary-almost-multiplicative",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceQuery {
    /// Click probability, or `|Perm U|^2` for the unitary flavors.
    pub p: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub flavor: Flavor,
    /// Source spectrum; required by `almost_multiplicative_thermal` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mus: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    /// Ceiling of `n_real`; `None` when infinite.
    pub n_required: Option<u64>,
    pub n_real: f64,
    pub z_c: f64,
    pub formula_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl ResourceEstimate {
    fn finite(n_real: f64, z_c: f64, flavor: Flavor) -> Self {
        // guard against 38030.999999 style float noise pushing a value up
        let n = if n_real <= 0.0 { 0 } else { (n_real * (1.0 - 1e-15)).ceil() as u64 };
        Self { n_required: Some(n), n_real, z_c, formula_id: flavor.formula_id().into(), diagnostic: None }
    }

    fn infinite(z_c: f64, flavor: Flavor, why: impl Into<String>) -> Self {
        Self {
            n_required: None,
            n_real: f64::INFINITY,
            z_c,
            formula_id: flavor.formula_id().into(),
            diagnostic: Some(why.into()),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.n_required.is_none()
    }
}

fn check_common(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::OutOfRange { name: "epsilon", value: epsilon, range: "(0, inf)" });
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::OutOfRange { name: "delta", value: delta, range: "[0, 1)" });
    }
    Ok(())
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name, value: p, range: "[0, 1]" });
    }
    Ok(())
}

/// `2 erf^{-1}(delta)^2`.
fn two_erfinv_sq(delta: f64) -> Result<f64> {
    let e = inverse_erf(delta)?;
    Ok(2.0 * e * e)
}

fn multiplicative(p: f64, epsilon: f64, delta: f64, flavor: Flavor) -> Result<ResourceEstimate> {
    check_common(epsilon, delta)?;
    check_probability("p", p)?;
    let z_c = critical_value(delta)?;
    if p == 0.0 {
        return Ok(ResourceEstimate::infinite(z_c, flavor, "zero success probability"));
    }
    let n = two_erfinv_sq(delta)? * (1.0 - p) / (epsilon * epsilon * p);
    Ok(ResourceEstimate::finite(n, z_c, flavor))
}

/// `N = 2 erf^{-1}(delta)^2 (1 - p) / (epsilon^2 p)`.
pub fn samples_multiplicative_thermal(p: f64, epsilon: f64, delta: f64) -> Result<ResourceEstimate> {
    multiplicative(p, epsilon, delta, Flavor::MultiplicativeThermal)
}

/// As [`samples_multiplicative_thermal`] with `p = |Perm U|^2`.
pub fn samples_multiplicative_unitary(perm_u2: f64, epsilon: f64, delta: f64) -> Result<ResourceEstimate> {
    multiplicative(perm_u2, epsilon, delta, Flavor::MultiplicativeUnitary)
}

/// `epsilon = erf^{-1}(delta) sqrt(2 (1 - p) / (N p))`.
pub fn margin_of_error(p: f64, n: f64, delta: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange { name: "p", value: p, range: "(0, 1]" });
    }
    if !(n >= 1.0) {
        return Err(Error::OutOfRange { name: "N", value: n, range: "[1, inf)" });
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::OutOfRange { name: "delta", value: delta, range: "[0, 1)" });
    }
    Ok(inverse_erf(delta)? * (2.0 * (1.0 - p) / (n * p)).sqrt())
}

/// Samples for error `epsilon sqrt(Perm A)` when `A` is rescaled by its
/// largest eigenvalue before the optical run:
/// `N = 2 erf^{-1}(delta)^2 (1 - p) mu_max^M / (epsilon^2 prod' (1 - mu_i / mu_max))`.
///
/// The product skips the one mode that carries `mu_max` (its factor is
/// identically zero). Any other mode tied with `mu_max`, or `M = 1`, has no
/// physical rescaled source and gives an infinite result.
pub fn samples_almost_multiplicative_thermal(
    mus: &[f64],
    p: f64,
    epsilon: f64,
    delta: f64,
) -> Result<ResourceEstimate> {
    check_common(epsilon, delta)?;
    check_probability("p", p)?;
    let flavor = Flavor::AlmostMultiplicativeThermal;
    let z_c = critical_value(delta)?;
    if mus.is_empty() {
        return Err(Error::Invalid("mus must not be empty".into()));
    }
    if let Some((i, &m)) = mus.iter().enumerate().find(|(_, &m)| !(m >= 0.0 && m.is_finite())) {
        return Err(Error::NegativeSpectrum { index: i, value: m });
    }
    let (arg_max, &mu_max) =
        mus.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0))).expect("non-empty");
    if mu_max <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    if mus.len() == 1 {
        return Ok(ResourceEstimate::infinite(z_c, flavor, "M = 1: the single rescaled source sits at mu = 1"));
    }
    let denom: f64 = mus.iter().enumerate().filter(|&(i, _)| i != arg_max).map(|(_, &m)| 1.0 - m / mu_max).product();
    if denom <= 0.0 {
        return Ok(ResourceEstimate::infinite(z_c, flavor, "a second mode shares mu_max"));
    }
    let n = two_erfinv_sq(delta)? * (1.0 - p) * mu_max.powi(mus.len() as i32) / (epsilon * epsilon * denom);
    Ok(ResourceEstimate::finite(n, z_c, flavor))
}

/// `N = 2 erf^{-1}(delta)^2 (1 - |Perm U|^2) / epsilon^2`, never above
/// `2 (erf^{-1}(delta) / epsilon)^2`.
pub fn samples_almost_multiplicative_unitary(perm_u2: f64, epsilon: f64, delta: f64) -> Result<ResourceEstimate> {
    check_common(epsilon, delta)?;
    check_probability("|Perm U|^2", perm_u2)?;
    let z_c = critical_value(delta)?;
    let n = two_erfinv_sq(delta)? * (1.0 - perm_u2) / (epsilon * epsilon);
    Ok(ResourceEstimate::finite(n, z_c, Flavor::AlmostMultiplicativeUnitary))
}

/// Upper bound on [`samples_almost_multiplicative_unitary`].
pub fn almost_multiplicative_unitary_bound(epsilon: f64, delta: f64) -> Result<f64> {
    check_common(epsilon, delta)?;
    let e = inverse_erf(delta)? / epsilon;
    Ok(2.0 * e * e)
}

/// Dispatches on the query flavor.
pub fn samples(query: &ResourceQuery) -> Result<ResourceEstimate> {
    let ResourceQuery { p, epsilon, delta, flavor, ref mus } = *query;
    match flavor {
        Flavor::MultiplicativeThermal => samples_multiplicative_thermal(p, epsilon, delta),
        Flavor::MultiplicativeUnitary => samples_multiplicative_unitary(p, epsilon, delta),
        Flavor::AlmostMultiplicativeThermal => {
            let mus = mus.as_deref().ok_or_else(|| Error::Invalid("almost_multiplicative_thermal needs mus".into()))?;
            samples_almost_multiplicative_thermal(mus, p, epsilon, delta)
        }
        Flavor::AlmostMultiplicativeUnitary => samples_almost_multiplicative_unitary(p, epsilon, delta),
    }
}

/// Haar average `<|Perm U|^2> = (M-1)! M! / (2M-1)!`.
pub fn haar_average_permanent(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange { name: "M", value: 0.0, range: "[1, inf)" });
    }
    // r(1) = 1, r(k+1) / r(k) = (k+1) / (2 (2k+1))
    Ok((1..m).fold(1.0, |r, k| r * (k + 1) as f64 / (2.0 * (2 * k + 1) as f64)))
}

/// Large-`M` form `sqrt(4 pi M) / 4^M` of [`haar_average_permanent`].
pub fn haar_average_asymptote(m: usize) -> f64 {
    (4.0 * std::f64::consts::PI * m as f64).sqrt() / 4f64.powi(m as i32)
}

/// Largest thermal click probability for `M` modes, attained by one source
/// with `mu = M/(M+1)` spread uniformly: `M! / (M+1)^(M+1)`.
pub fn max_click_probability(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange { name: "M", value: 0.0, range: "[1, inf)" });
    }
    let base = (m + 1) as f64;
    Ok((1..=m).map(|k| k as f64 / base).product::<f64>() / base)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub m: usize,
    pub eta: f64,
    /// `4^M / sqrt(M) * eta^-M`, Haar-averaged optical sample scaling.
    pub loc_scaling: f64,
    /// `M^2 2^M`, Gray-code exact evaluation.
    pub classical_scaling: f64,
    pub ratio: f64,
    /// Smallest `M' >= 2` from which the optical curve exceeds the classical
    /// one at every larger size (searched up to 200).
    pub loc_dominates_from: Option<usize>,
}

fn cost_ratio(m: usize, eta: f64) -> f64 {
    let m_f = m as f64;
    // (4^M / sqrt(M) / eta^M) / (M^2 2^M) = (2 / eta)^M / M^2.5
    (2.0 / eta).powi(m as i32) / m_f.powf(2.5)
}

/// Scaling of optical estimation against classical exact evaluation.
pub fn cost_comparison(m: usize, eta: f64) -> Result<CostReport> {
    if m == 0 {
        return Err(Error::OutOfRange { name: "M", value: 0.0, range: "[1, inf)" });
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::OutOfRange { name: "eta", value: eta, range: "(0, 1]" });
    }
    let m_f = m as f64;
    let loc_scaling = 4f64.powi(m as i32) / m_f.sqrt() / eta.powi(m as i32);
    let classical_scaling = m_f * m_f * 2f64.powi(m as i32);
    // the ratio is eventually increasing, so scan back from the top
    const SCAN: usize = 200;
    let mut from = None;
    for k in (2..=SCAN).rev() {
        if cost_ratio(k, eta) > 1.0 {
            from = Some(k);
        } else {
            break;
        }
    }
    Ok(CostReport {
        m,
        eta,
        loc_scaling,
        classical_scaling,
        ratio: loc_scaling / classical_scaling,
        loc_dominates_from: from,
    })
}
