use permoptics::network::{network_to_unitary, BeamSplitter, BeamSplitterChain};
use permoptics::photonic::{hpsm_permanent, ThermalBank};
use permoptics::rng::CounterRng;
use permoptics::sampling::{
    bernoulli_estimate, error_sweep, estimate_permanent_thermal, estimate_permanent_unitary, log_log_slope, merge,
    SamplingPlan,
};
use permoptics::{haar_random_unitary, permanent, UnitaryMatrix};

fn balanced() -> UnitaryMatrix {
    network_to_unitary(&BeamSplitterChain::new(vec![BeamSplitter::balanced((1, 2))]), 2).unwrap()
}

#[test]
fn interval_coverage() {
    let p = 1e-2;
    let seeds = CounterRng::new(8);
    let hits = (0..1000u64)
        .filter(|&r| {
            let res = bernoulli_estimate(p, &SamplingPlan::new(10_000, seeds.at(r))).unwrap();
            res.ci.0 <= p && p <= res.ci.1
        })
        .count();
    let coverage = hits as f64 / 1000.0;
    assert!((coverage - 0.95).abs() <= 0.02, "{coverage}");
}

#[test]
fn estimator_unbiased() {
    let p = 3e-3;
    let seeds = CounterRng::new(9);
    let reps = 400;
    let n = 100_000u64;
    let mean = (0..reps).map(|r| bernoulli_estimate(p, &SamplingPlan::new(n, seeds.at(r))).unwrap().p_hat).sum::<f64>()
        / reps as f64;
    let pooled_sigma = (p * (1.0 - p) / (n as f64 * reps as f64)).sqrt();
    assert!((mean - p).abs() < 3.0 * pooled_sigma, "{mean}");
}

#[test]
fn relative_error_follows_inverse_square_root() {
    let rows = error_sweep(1e-3, &[10_000, 100_000, 1_000_000], &[0.95], 800, 21).unwrap();
    let slope = log_log_slope(&rows).unwrap();
    assert!((slope + 0.5).abs() <= 0.05, "{slope}");
    for r in &rows {
        let ratio = r.epsilon_empirical / r.epsilon_theory;
        assert!((0.8..=1.2).contains(&ratio), "{r:?}");
    }
    let e1 = rows[0].epsilon_theory;
    let e2 = permoptics::resources::margin_of_error(1e-3, 20_000.0, 0.95).unwrap();
    assert!((e1 / e2 - 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn runs_are_deterministic() {
    let u = haar_random_unitary(3, 5).unwrap();
    let bank = ThermalBank::lossless(vec![0.02, 0.03, 0.01]).unwrap();
    let plan = SamplingPlan::new(30_000_000, 1234);
    let a = estimate_permanent_thermal(&u, &bank, &plan).unwrap();
    let b = estimate_permanent_thermal(&u, &bank, &plan).unwrap();
    let c = estimate_permanent_thermal(&u, &bank, &plan.with_partitions(4)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
    let other = estimate_permanent_thermal(&u, &bank, &SamplingPlan::new(30_000_000, 1235)).unwrap();
    assert_ne!(a.k, other.k);
}

#[test]
fn thermal_splitter_estimate() {
    let bank = ThermalBank::lossless(vec![0.1, 0.1]).unwrap();
    let u = balanced();
    let res = estimate_permanent_thermal(&u, &bank, &SamplingPlan::new(10_000_000, 17)).unwrap();
    let exact = hpsm_permanent(&u, &bank).unwrap();
    assert!((res.perm_exact.unwrap() - exact).abs() <= 1e-15 * exact);
    assert!(res.within_sigmas(exact, 3.0), "{res:?}");
    let (lo, hi) = res.perm_ci.unwrap();
    assert!(lo < res.perm_estimate.unwrap() && res.perm_estimate.unwrap() < hi);
}

#[test]
fn dark_sources_estimate_zero() {
    let bank = ThermalBank::lossless(vec![0.0, 0.0]).unwrap();
    let res = estimate_permanent_thermal(&balanced(), &bank, &SamplingPlan::new(1_000_000, 1)).unwrap();
    assert_eq!(res.k, 0);
    assert_eq!(res.perm_estimate, Some(0.0));
}

#[test]
fn single_photon_estimates() {
    let id = estimate_permanent_unitary(&UnitaryMatrix::identity(4), &SamplingPlan::new(1000, 1)).unwrap();
    assert_eq!((id.p_hat, id.ci), (1.0, (1.0, 1.0)));
    let hom = estimate_permanent_unitary(&balanced(), &SamplingPlan::new(1000, 1)).unwrap();
    assert_eq!(hom.k, 0);
    let u = haar_random_unitary(3, 42).unwrap();
    let res = estimate_permanent_unitary(&u, &SamplingPlan::new(1_000_000, 3)).unwrap();
    let exact = permanent(u.matrix()).unwrap().norm_sqr();
    assert!(res.within_sigmas(exact, 3.0), "{} vs {exact}", res.p_hat);
}

#[test]
fn merged_independent_runs_pool_counts() {
    let a = bernoulli_estimate(0.2, &SamplingPlan::new(5000, 1)).unwrap();
    let b = bernoulli_estimate(0.2, &SamplingPlan::new(7000, 2)).unwrap();
    let ab = merge(&[a.clone(), b.clone()]).unwrap();
    let ba = merge(&[b, a.clone()]).unwrap();
    assert_eq!(ab, ba);
    assert_eq!(ab.n, 12_000);
    let thermal = estimate_permanent_thermal(
        &balanced(),
        &ThermalBank::lossless(vec![0.1, 0.1]).unwrap(),
        &SamplingPlan::new(100, 1),
    )
    .unwrap();
    assert!(merge(&[a, thermal]).is_err());
}
