use permoptics::haar::haar_with_rng;
use permoptics::photonic::{click_probability_interfering, ThermalBank};
use permoptics::resources::{
    almost_multiplicative_unitary_bound, erf, haar_average_permanent, inverse_erf, margin_of_error,
    max_click_probability, samples, samples_almost_multiplicative_unitary, samples_multiplicative_thermal, Flavor,
    ResourceQuery,
};
use permoptics::rng::CounterRng;
use permoptics::{haar_random_unitary, permanent};
use proptest::prelude::*;

#[test]
fn inverse_erf_agrees_with_independent_implementation() {
    for i in -999..=999 {
        let x = i as f64 / 1000.0;
        let ours = inverse_erf(x).unwrap();
        let reference = statrs::function::erf::erf_inv(x);
        assert!((ours - reference).abs() <= 1e-13 * (1.0 + reference.abs()), "{x}: {ours} {reference}");
    }
}

#[test]
fn erf_against_high_precision_values() {
    // 40-digit reference evaluations
    let table = [
        (2.0001, 0.995_324_331_304_196_660_2),
        (2.33, 0.999_016_195_006_549_803_3),
        (2.5, 0.999_593_047_982_555_041_1),
        (3.0, 0.999_977_909_503_001_414_6),
    ];
    for (x, want) in table {
        assert!((erf(x) - want).abs() <= 2e-16, "{x}");
    }
}

#[test]
fn inverse_erf_round_trip_fine_grid() {
    let mut worst: f64 = 0.0;
    let mut x: f64 = -1.0 + 1e-6;
    while x < 1.0 {
        worst = worst.max((erf(inverse_erf(x).unwrap()) - x).abs());
        x += 1e-6;
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

proptest! {
    #[test]
    fn sample_count_and_margin_are_inverse(p in 1e-6..0.99f64, eps in 0.01..0.5f64, delta in 0.5..0.999f64) {
        let n = samples_multiplicative_thermal(p, eps, delta).unwrap().n_required.unwrap();
        prop_assume!(n > 1);
        prop_assert!(margin_of_error(p, n as f64, delta).unwrap() <= eps * (1.0 + 1e-12));
        prop_assert!(margin_of_error(p, (n - 1) as f64, delta).unwrap() > eps * (1.0 - 1e-12));
    }

    #[test]
    fn sample_count_monotone(p in 1e-6..0.5f64, eps in 0.01..0.5f64, delta in 0.5..0.99f64) {
        let base = samples_multiplicative_thermal(p, eps, delta).unwrap().n_real;
        prop_assert!(samples_multiplicative_thermal(p * 1.5, eps, delta).unwrap().n_real < base);
        prop_assert!(samples_multiplicative_thermal(p, eps * 1.5, delta).unwrap().n_real < base);
        prop_assert!(samples_multiplicative_thermal(p, eps, (delta + 1.0) / 2.0).unwrap().n_real > base);
    }

    #[test]
    fn almost_multiplicative_unitary_within_bound(p in 0.0..=1.0f64, eps in 0.001..1.0f64, delta in 0.0..0.9999f64) {
        let n = samples_almost_multiplicative_unitary(p, eps, delta).unwrap().n_real;
        prop_assert!(n <= almost_multiplicative_unitary_bound(eps, delta).unwrap());
    }
}

#[test]
fn dispatcher_needs_spectrum_for_rescaled_flavor() {
    let mut q =
        ResourceQuery { p: 1e-3, epsilon: 0.1, delta: 0.95, flavor: Flavor::AlmostMultiplicativeThermal, mus: None };
    assert!(samples(&q).is_err());
    q.mus = Some(vec![2.0, 1.0]);
    assert_eq!(samples(&q).unwrap().n_required, Some(3071));
    let json = serde_json::to_string(&samples(&q).unwrap()).unwrap();
    assert!(json.contains("\"n_required\":3071"));
    q.p = 0.0;
    q.flavor = Flavor::MultiplicativeThermal;
    let inf = samples(&q).unwrap();
    assert!(serde_json::to_string(&inf).unwrap().contains("\"n_required\":null"));
}

#[test]
fn click_probability_never_exceeds_bound() {
    let root = CounterRng::new(77);
    for trial in 0..10_000u64 {
        let mut rng = root.split(trial);
        let m = 1 + (rng.next() % 4) as usize;
        let u = haar_with_rng(m, &mut rng);
        let mut mus: Vec<f64> = (0..m).map(|_| rng.uniform() * 0.99).collect();
        // half the trials probe the single-source corner where the bound is tight
        if trial % 2 == 0 {
            mus.iter_mut().skip(1).for_each(|x| *x *= 0.05);
        }
        let p = click_probability_interfering(&u, &ThermalBank::lossless(mus).unwrap()).unwrap();
        assert!(p <= max_click_probability(m).unwrap() * (1.0 + 1e-12), "trial {trial}: M={m} p={p}");
    }
}

#[test]
fn bound_is_attained_by_uniform_single_source() {
    for m in 1..=4usize {
        // discrete Fourier matrix spreads mode 1 uniformly
        let f = permoptics::ComplexMatrix::from_fn(m, |j, k| {
            permoptics::Complex64::from_polar(
                1.0 / (m as f64).sqrt(),
                2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64,
            )
        });
        let u = permoptics::UnitaryMatrix::new(f).unwrap();
        let mut mus = vec![0.0; m];
        mus[0] = m as f64 / (m as f64 + 1.0);
        let p = click_probability_interfering(&u, &ThermalBank::lossless(mus).unwrap()).unwrap();
        assert!((p - max_click_probability(m).unwrap()).abs() < 1e-15, "{m}");
    }
}

#[test]
fn bound_below_exponential() {
    for m in 1..=20 {
        assert!(max_click_probability(m).unwrap() <= (-(m as f64)).exp());
    }
}

#[test]
fn haar_average_small_monte_carlo() {
    let mut rng = CounterRng::new(3);
    let n = 20_000;
    let draws: Vec<f64> = (0..n).map(|_| permanent(haar_with_rng(2, &mut rng).matrix()).unwrap().norm_sqr()).collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - haar_average_permanent(2).unwrap()).abs() < 3.0 * se, "{mean} +- {se}");
    // seeds are honoured
    assert_eq!(haar_random_unitary(3, 1).unwrap(), haar_random_unitary(3, 1).unwrap());
}
