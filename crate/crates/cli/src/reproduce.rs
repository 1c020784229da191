//! Reproduction recipes for the printed table and figures.

use permoptics::haar::haar_with_rng;
use permoptics::network::{network_to_unitary, BeamSplitter, BeamSplitterChain};
use permoptics::permanent;
use permoptics::photonic::{
    click_probability_interfering, click_probability_no_interference, hpsm_permanent, no_interference_sum, Convention,
    SourceWeight, ThermalBank,
};
use permoptics::resources::{haar_average_asymptote, haar_average_permanent, max_click_probability};
use permoptics::rng::CounterRng;
use permoptics::sampling::{error_sweep, estimate_permanent_thermal, log_log_slope, SweepRow};
use serde::{Deserialize, Serialize};

use crate::config::{table_rows, ExperimentConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub row: usize,
    pub modes: usize,
    pub perm_exact: f64,
    pub perm_exact_printed: f64,
    pub perm_exact_ok: bool,
    /// Factorial rule weighted by mean photon number.
    pub no_interference: f64,
    pub no_interference_literal: f64,
    pub no_interference_printed: f64,
    pub no_interference_ok: bool,
    pub no_interference_literal_ok: bool,
    pub n_samples: u64,
    pub k: u64,
    pub perm_simulated: f64,
    pub perm_simulated_sigma: f64,
    pub simulated_within_3sigma: bool,
    pub perm_measured_printed: f64,
    pub perm_measured_sigma_printed: f64,
}

/// Exact, no-interference and simulated values for the four printed rows.
pub fn table1(seed: Option<u64>, partitions: Option<usize>) -> Result<Vec<Table1Row>, CliError> {
    table_rows().into_iter().enumerate().map(|(i, c)| table1_row(i + 1, c, seed, partitions)).collect()
}

pub fn table1_row(
    row: usize,
    config: ExperimentConfig,
    seed: Option<u64>,
    partitions: Option<usize>,
) -> Result<Table1Row, CliError> {
    let reference = config.reference.clone().ok_or_else(|| CliError::Input("row has no reference".into()))?;
    let v = config.validate(seed, partitions)?;
    let tol = 2.0 * reference.last_digit;
    let perm_exact = hpsm_permanent(&v.unitary, &v.bank)?;
    let mus = v.bank.effective_mus();
    let no_int = no_interference_sum(&v.unitary, &mus, Convention::FactorialRule, SourceWeight::MeanPhotonNumber)?;
    let no_int_lit = no_interference_sum(&v.unitary, &mus, Convention::PaperLiteral, SourceWeight::MeanPhotonNumber)?;
    let printed_no_int = reference.no_interference.unwrap_or(f64::NAN);
    let sim = estimate_permanent_thermal(&v.unitary, &v.bank, &v.plan)?;
    let est = sim.perm_estimate.unwrap_or(0.0);
    let sigma = sim.perm_stderr.unwrap_or(0.0);
    Ok(Table1Row {
        row,
        modes: v.unitary.dim(),
        perm_exact,
        perm_exact_printed: reference.perm_exact,
        perm_exact_ok: (perm_exact - reference.perm_exact).abs() <= tol,
        no_interference: no_int,
        no_interference_literal: no_int_lit,
        no_interference_printed: printed_no_int,
        no_interference_ok: (no_int - printed_no_int).abs() <= tol,
        no_interference_literal_ok: (no_int_lit - printed_no_int).abs() <= tol,
        n_samples: sim.n,
        k: sim.k,
        perm_simulated: est,
        perm_simulated_sigma: sigma,
        simulated_within_3sigma: (est - reference.perm_exact).abs() <= 3.0 * sigma,
        perm_measured_printed: reference.perm_measured.unwrap_or(f64::NAN),
        perm_measured_sigma_printed: reference.perm_measured_sigma.unwrap_or(f64::NAN),
    })
}

pub const FIG3_P: f64 = 1e-3;
pub const FIG3_GRID: [u64; 4] = [10_000, 100_000, 1_000_000, 10_000_000];
pub const FIG3_DELTAS: [f64; 2] = [0.95, 0.997];
pub const FIG3_REPEATS: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig3Report {
    pub p: f64,
    pub repeats: usize,
    pub rows: Vec<SweepRow>,
    /// `(delta, slope)` of `ln epsilon` against `ln N`.
    pub slopes: Vec<(f64, f64)>,
}

/// Empirical relative error against the margin formula over the grid.
pub fn fig3(p: f64, grid: &[u64], deltas: &[f64], repeats: usize, seed: u64) -> Result<Fig3Report, CliError> {
    let rows = error_sweep(p, grid, deltas, repeats, seed)?;
    let slopes = deltas
        .iter()
        .map(|&d| {
            let sub: Vec<SweepRow> = rows.iter().copied().filter(|r| r.delta == d).collect();
            (d, log_log_slope(&sub).unwrap_or(f64::NAN))
        })
        .collect();
    Ok(Fig3Report { p, repeats, rows, slopes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityRow {
    pub mu: f64,
    pub p_no_interference: f64,
    pub p_interference: f64,
    pub visibility: f64,
}

/// Two equal thermal sources on a balanced splitter.
pub fn visibility(mus: &[f64]) -> Result<Vec<VisibilityRow>, CliError> {
    let u = network_to_unitary(&BeamSplitterChain::new(vec![BeamSplitter::balanced((1, 2))]), 2)?;
    mus.iter()
        .map(|&mu| {
            let bank = ThermalBank::lossless(vec![mu, mu])?;
            let p_no = click_probability_no_interference(&u, &bank, Convention::FactorialRule)?;
            let p_int = click_probability_interfering(&u, &bank)?;
            Ok(VisibilityRow { mu, p_no_interference: p_no, p_interference: p_int, visibility: (p_no - p_int) / p_no })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaarRow {
    pub modes: usize,
    pub exact: f64,
    pub asymptote: f64,
    pub samples: usize,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    /// `(mc_mean - exact) / mc_stderr`.
    pub z_score: f64,
}

/// Monte Carlo `<|Perm U|^2>` over Haar unitaries against the closed form.
pub fn haar(modes: &[usize], samples: usize, seed: u64) -> Result<Vec<HaarRow>, CliError> {
    let root = CounterRng::new(seed);
    modes
        .iter()
        .map(|&m| {
            let mut rng = root.split(m as u64);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..samples {
                let x = permanent(haar_with_rng(m, &mut rng).matrix())?.norm_sqr();
                sum += x;
                sum_sq += x * x;
            }
            let n = samples as f64;
            let mean = sum / n;
            let var = (sum_sq - n * mean * mean) / (n - 1.0).max(1.0);
            let se = (var.max(0.0) / n).sqrt();
            let exact = haar_average_permanent(m)?;
            Ok(HaarRow {
                modes: m,
                exact,
                asymptote: haar_average_asymptote(m),
                samples,
                mc_mean: mean,
                mc_stderr: se,
                z_score: (mean - exact) / se,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub modes: usize,
    pub bound: f64,
    pub exp_neg_m: f64,
    pub below_exp: bool,
    /// Largest click probability found by random search (small `M` only).
    pub search_max: Option<f64>,
    pub search_instances: Option<usize>,
}

/// Largest thermal click probability per mode count, with a random search
/// over interferometers and source brightnesses for `M <= search_modes`.
pub fn bounds(max_modes: usize, search_modes: usize, instances: usize, seed: u64) -> Result<Vec<BoundRow>, CliError> {
    let root = CounterRng::new(seed);
    let mut best = vec![0.0f64; search_modes + 1];
    let mut counts = vec![0usize; search_modes + 1];
    for i in 0..instances as u64 {
        let mut rng = root.split(i);
        let m = 1 + (rng.next() % search_modes as u64) as usize;
        let u = haar_with_rng(m, &mut rng);
        let mut mus: Vec<f64> = (0..m).map(|_| 0.99 * rng.uniform()).collect();
        if i % 2 == 0 {
            // probe the single bright source corner
            mus.iter_mut().skip(1).for_each(|x| *x *= 0.05);
        }
        let p = click_probability_interfering(&u, &ThermalBank::lossless(mus)?)?;
        best[m] = best[m].max(p);
        counts[m] += 1;
    }
    (1..=max_modes)
        .map(|m| {
            let bound = max_click_probability(m)?;
            let e = (-(m as f64)).exp();
            Ok(BoundRow {
                modes: m,
                bound,
                exp_neg_m: e,
                below_exp: bound <= e,
                search_max: (m <= search_modes).then(|| best[m]),
                search_instances: (m <= search_modes).then(|| counts[m]),
            })
        })
        .collect()
}
