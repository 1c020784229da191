//! Seeded Monte Carlo emulation of coincidence counting.
//!
//! Each pulse is a Bernoulli trial at the exact click probability. Trials are
//! grouped in fixed blocks of [`BLOCK_LEN`]; block `b` draws from its own
//! stream keyed by `(seed, b)`. Partitions only decide which worker handles
//! which blocks, so the pooled count is identical for every partition count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::UnitaryMatrix;
use crate::photonic::{click_probability_interfering, single_photon_click_probability, ThermalBank};
use crate::resources::{critical_value, margin_of_error};
use crate::rng::{CounterRng, GENERATOR_ID};

pub const BLOCK_LEN: u64 = 1 << 20;

/// Below this success probability trials are skipped geometrically.
pub const SKIP_THRESHOLD: f64 = 0.1;

/// Normal-approximation warning threshold for `N p` and `N (1 - p)`.
pub const MIN_EXPECTED_COUNT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub n_samples: u64,
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

impl SamplingPlan {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        Self { n_samples, seed, partitions: 1, confidence: 0.95 }
    }

    pub fn with_partitions(mut self, partitions: usize) -> Self {
        self.partitions = partitions;
        self
    }

    pub fn with_confidence(mut self, confidence: f64) -> Self {
        self.confidence = confidence;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::OutOfRange { name: "n_samples", value: 0.0, range: "[1, inf)" });
        }
        if self.partitions == 0 {
            return Err(Error::OutOfRange { name: "partitions", value: 0.0, range: "[1, inf)" });
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::OutOfRange { name: "confidence", value: self.confidence, range: "(0, 1)" });
        }
        Ok(())
    }

    fn blocks(&self) -> u64 {
        self.n_samples.div_ceil(BLOCK_LEN)
    }

    /// Half-open block range handled by `partition`.
    fn partition_blocks(&self, partition: usize) -> (u64, u64) {
        let nb = self.blocks() as u128;
        let p = self.partitions as u128;
        let lo = nb * partition as u128 / p;
        let hi = nb * (partition as u128 + 1) / p;
        (lo as u64, hi as u64)
    }
}

/// What the sampled probability stands for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// A bare success probability.
    Probability,
    /// Thermal click probability; the permanent is `p / vacuum_factor`.
    Thermal { vacuum_factor: f64 },
    /// Single-photon click probability `|Perm U|^2`.
    Unitary,
}

impl Target {
    fn perm_scale(self) -> Option<f64> {
        match self {
            Target::Probability => None,
            Target::Thermal { vacuum_factor } => Some(1.0 / vacuum_factor),
            Target::Unitary => Some(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingResult {
    pub n: u64,
    pub k: u64,
    pub p_hat: f64,
    pub stderr: f64,
    pub ci: (f64, f64),
    pub confidence: f64,
    pub z_c: f64,
    /// Probability the trials were drawn at.
    pub p_exact: f64,
    pub target: Target,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_estimate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_ci: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_exact: Option<f64>,
    pub generator: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SamplingResult {
    fn from_counts(n: u64, k: u64, p_exact: f64, confidence: f64, target: Target) -> Result<Self> {
        let z_c = critical_value(confidence)?;
        let nf = n as f64;
        let p_hat = k as f64 / nf;
        let stderr = (p_hat * (1.0 - p_hat) / nf).sqrt();
        let ci = ((p_hat - z_c * stderr).max(0.0), (p_hat + z_c * stderr).min(1.0));
        let mut warnings = Vec::new();
        if nf * p_hat < MIN_EXPECTED_COUNT || nf * (1.0 - p_hat) < MIN_EXPECTED_COUNT {
            warnings.push(format!(
                "normal approximation is unreliable: N p_hat = {:.3}, N (1 - p_hat) = {:.3}",
                nf * p_hat,
                nf * (1.0 - p_hat)
            ));
        }
        let scale = target.perm_scale();
        Ok(Self {
            n,
            k,
            p_hat,
            stderr,
            ci,
            confidence,
            z_c,
            p_exact,
            target,
            perm_estimate: scale.map(|s| p_hat * s),
            perm_stderr: scale.map(|s| stderr * s),
            perm_ci: scale.map(|s| (ci.0 * s, ci.1 * s)),
            perm_exact: scale.map(|s| p_exact * s),
            generator: GENERATOR_ID.into(),
            warnings,
        })
    }

    /// Whether `value` lies within `sigmas` standard errors of the permanent
    /// estimate (or of `p_hat` when there is no permanent context).
    pub fn within_sigmas(&self, value: f64, sigmas: f64) -> bool {
        let (est, se) = match (self.perm_estimate, self.perm_stderr) {
            (Some(e), Some(s)) => (e, s),
            _ => (self.p_hat, self.stderr),
        };
        (est - value).abs() <= sigmas * se
    }
}

/// Successes among `len` trials of block `block`.
fn block_successes(p: f64, seed: u64, block: u64, len: u64) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return len;
    }
    let mut rng = CounterRng::new(seed).split(block);
    if p < SKIP_THRESHOLD {
        // failures before the next success are geometric
        let log_q = (-p).ln_1p();
        let mut k = 0;
        let mut pos: u64 = 0;
        loop {
            let gap = (rng.uniform_open0().ln() / log_q).floor();
            if gap >= (len - pos) as f64 {
                return k;
            }
            pos += gap as u64 + 1;
            k += 1;
            if pos >= len {
                return k;
            }
        }
    }
    (0..len).filter(|_| rng.uniform() < p).count() as u64
}

fn run_blocks(p: f64, plan: &SamplingPlan, range: (u64, u64)) -> (u64, u64) {
    let mut n = 0;
    let mut k = 0;
    for b in range.0..range.1 {
        let len = BLOCK_LEN.min(plan.n_samples - b * BLOCK_LEN);
        n += len;
        k += block_successes(p, plan.seed, b, len);
    }
    (n, k)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name: "p", value: p, range: "[0, 1]" });
    }
    Ok(())
}

fn estimate(p: f64, plan: &SamplingPlan, target: Target) -> Result<SamplingResult> {
    check_probability(p)?;
    plan.validate()?;
    let (n, k) = (0..plan.partitions)
        .into_par_iter()
        .map(|i| run_blocks(p, plan, plan.partition_blocks(i)))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    SamplingResult::from_counts(n, k, p, plan.confidence, target)
}

/// `N` Bernoulli trials at probability `p`.
pub fn bernoulli_estimate(p: f64, plan: &SamplingPlan) -> Result<SamplingResult> {
    estimate(p, plan, Target::Probability)
}

/// The trials of one partition alone; `None` when it owns no block.
/// Merging every partition reproduces [`bernoulli_estimate`] exactly.
pub fn bernoulli_partition(p: f64, plan: &SamplingPlan, partition: usize) -> Result<Option<SamplingResult>> {
    check_probability(p)?;
    plan.validate()?;
    if partition >= plan.partitions {
        return Err(Error::OutOfRange { name: "partition", value: partition as f64, range: "[0, partitions)" });
    }
    let (n, k) = run_blocks(p, plan, plan.partition_blocks(partition));
    if n == 0 {
        return Ok(None);
    }
    SamplingResult::from_counts(n, k, p, plan.confidence, Target::Probability).map(Some)
}

/// Samples the thermal click probability and inverts
/// `p = Perm[A] prod (1 - mu_i)` for the permanent.
pub fn estimate_permanent_thermal(
    u: &UnitaryMatrix,
    bank: &ThermalBank,
    plan: &SamplingPlan,
) -> Result<SamplingResult> {
    let p = click_probability_interfering(u, bank)?;
    estimate(p, plan, Target::Thermal { vacuum_factor: bank.vacuum_factor() })
}

/// Samples `|Perm U|^2` with one photon per input.
pub fn estimate_permanent_unitary(u: &UnitaryMatrix, plan: &SamplingPlan) -> Result<SamplingResult> {
    let p = single_photon_click_probability(u)?;
    estimate(p, plan, Target::Unitary)
}

/// Pools the trials of runs drawn at the same probability.
pub fn merge(results: &[SamplingResult]) -> Result<SamplingResult> {
    let first = results.first().ok_or_else(|| Error::Merge("nothing to merge".into()))?;
    for r in &results[1..] {
        if r.p_exact.to_bits() != first.p_exact.to_bits() || r.target != first.target {
            return Err(Error::Merge("results come from different probabilities".into()));
        }
        if r.confidence != first.confidence || r.generator != first.generator {
            return Err(Error::Merge("results use different confidence levels or generators".into()));
        }
    }
    let n = results.iter().map(|r| r.n).sum();
    let k = results.iter().map(|r| r.k).sum();
    SamplingResult::from_counts(n, k, first.p_exact, first.confidence, first.target)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    pub delta: f64,
    /// `delta`-quantile of `|p_hat - p| / p` over the repeats.
    pub epsilon_empirical: f64,
    /// Normal-approximation margin of error at `(p, N, delta)`.
    pub epsilon_theory: f64,
}

/// Empirical relative error against the margin-of-error formula, at a bare
/// probability `p`. Repeat `r` at grid point `N` uses a seed derived from
/// `(seed, N, r)`; every `delta` reuses the same repeats.
pub fn error_sweep(p: f64, n_grid: &[u64], deltas: &[f64], repeats: usize, seed: u64) -> Result<Vec<SweepRow>> {
    check_probability(p)?;
    if p == 0.0 {
        return Err(Error::Invalid("relative error is undefined at p = 0".into()));
    }
    if n_grid.is_empty() || deltas.is_empty() || repeats == 0 {
        return Err(Error::Invalid("sweep needs a nonempty grid, deltas and repeats".into()));
    }
    let root = CounterRng::new(seed);
    let mut rows = Vec::with_capacity(n_grid.len() * deltas.len());
    for &n in n_grid {
        let stream = root.split(n);
        let mut errors: Vec<f64> = (0..repeats as u64)
            .into_par_iter()
            .map(|r| {
                let plan = SamplingPlan::new(n, stream.at(r));
                bernoulli_estimate(p, &plan).map(|res| (res.p_hat - p).abs() / p)
            })
            .collect::<Result<_>>()?;
        errors.sort_by(f64::total_cmp);
        for &delta in deltas {
            let idx = ((delta * repeats as f64).ceil() as usize).clamp(1, repeats) - 1;
            rows.push(SweepRow {
                n,
                delta,
                epsilon_empirical: errors[idx],
                epsilon_theory: margin_of_error(p, n as f64, delta)?,
            });
        }
    }
    Ok(rows)
}

/// [`error_sweep`] at the thermal click probability of a configuration.
pub fn empirical_error_sweep(
    u: &UnitaryMatrix,
    bank: &ThermalBank,
    n_grid: &[u64],
    deltas: &[f64],
    repeats: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    error_sweep(click_probability_interfering(u, bank)?, n_grid, deltas, repeats, seed)
}

/// Least-squares slope of `ln epsilon_empirical` against `ln N`.
pub fn log_log_slope(rows: &[SweepRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.epsilon_empirical > 0.0)
        .map(|r| ((r.n as f64).ln(), r.epsilon_empirical.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_probabilities() {
        let plan = SamplingPlan::new(3_000_000, 1);
        let zero = bernoulli_estimate(0.0, &plan).unwrap();
        assert_eq!((zero.k, zero.p_hat), (0, 0.0));
        assert_eq!(zero.ci, (0.0, 0.0));
        assert!(!zero.warnings.is_empty());
        let all = bernoulli_estimate(1.0, &plan).unwrap();
        assert_eq!((all.k, all.n, all.p_hat), (3_000_000, 3_000_000, 1.0));
    }

    #[test]
    fn fair_coin() {
        let r = bernoulli_estimate(0.5, &SamplingPlan::new(1_000_000, 7)).unwrap();
        assert!((r.p_hat - 0.5).abs() < 3.0 * 5e-4, "{}", r.p_hat);
        assert!(r.warnings.is_empty());
        assert!(r.ci.0 < r.p_hat && r.p_hat < r.ci.1);
    }

    #[test]
    fn skip_sampler_mean() {
        // 1e-4 over 2e7 trials: expect 2000 +- 45
        let r = bernoulli_estimate(1e-4, &SamplingPlan::new(20_000_000, 3)).unwrap();
        assert!((r.k as f64 - 2000.0).abs() < 4.0 * 45.0, "{}", r.k);
    }

    #[test]
    fn partition_invariance() {
        for &p in &[0.3, 1e-3] {
            let base = SamplingPlan::new(5 * BLOCK_LEN + 17, 99);
            let one = bernoulli_estimate(p, &base).unwrap();
            for parts in [2, 4, 7, 11] {
                let plan = base.with_partitions(parts);
                assert_eq!(bernoulli_estimate(p, &plan).unwrap(), one);
                let pieces: Vec<_> = (0..parts).filter_map(|i| bernoulli_partition(p, &plan, i).unwrap()).collect();
                assert_eq!(merge(&pieces).unwrap(), one);
            }
        }
    }

    #[test]
    fn merge_rules() {
        let a = SamplingResult::from_counts(10, 3, 0.4, 0.95, Target::Probability).unwrap();
        let b = SamplingResult::from_counts(10, 7, 0.4, 0.95, Target::Probability).unwrap();
        let m = merge(&[a.clone(), b]).unwrap();
        assert_eq!((m.k, m.n, m.p_hat), (10, 20, 0.5));
        assert!(matches!(merge(&[]), Err(Error::Merge(_))));
        let c = SamplingResult::from_counts(10, 7, 0.2, 0.95, Target::Probability).unwrap();
        assert!(merge(&[a, c]).is_err());
    }

    #[test]
    fn plan_validation() {
        assert!(bernoulli_estimate(0.5, &SamplingPlan::new(0, 1)).is_err());
        assert!(bernoulli_estimate(0.5, &SamplingPlan::new(10, 1).with_partitions(0)).is_err());
        assert!(bernoulli_estimate(0.5, &SamplingPlan::new(10, 1).with_confidence(1.0)).is_err());
        assert!(bernoulli_estimate(1.5, &SamplingPlan::new(10, 1)).is_err());
    }

    #[test]
    fn slope_of_exact_law() {
        let rows: Vec<SweepRow> = [1e4_f64, 1e5, 1e6]
            .iter()
            .map(|&n| SweepRow { n: n as u64, delta: 0.95, epsilon_empirical: 3.0 / n.sqrt(), epsilon_theory: 0.0 })
            .collect();
        assert!((log_log_slope(&rows).unwrap() + 0.5).abs() < 1e-12);
    }
}
