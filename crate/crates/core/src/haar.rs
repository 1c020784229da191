//! Haar-distributed random unitaries.
//!
//! A complex Ginibre matrix is QR-factorized with Householder reflections and
//! each column of `Q` is multiplied by the phase of the matching diagonal
//! entry of `R`. Without that correction the factorization is not unique and
//! the result is not Haar distributed.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};
use crate::rng::CounterRng;

pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::Shape { rows: 0, entries: 0 });
    }
    let mut rng = CounterRng::new(seed);
    Ok(haar_with_rng(dim, &mut rng))
}

/// Draws from an existing stream, for Monte Carlo loops.
pub fn haar_with_rng(dim: usize, rng: &mut CounterRng) -> UnitaryMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    });
    let (mut q, r) = householder_qr(&g);
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    UnitaryMatrix::trusted(q)
}

/// Returns `(Q, R)` with `A = Q R`, `Q` unitary and `R` upper triangular.
pub(crate) fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(1) {
        let norm = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // r <- (I - 2 v v^dag) r on rows k..n
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * r[(k + t, j)]).sum();
            for (t, vt) in v.iter().enumerate() {
                r[(k + t, j)] -= vt * dot * 2.0;
            }
        }
        // q <- q (I - 2 v v^dag) on columns k..n
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| q[(i, k + t)] * vt).sum();
            for (t, vt) in v.iter().enumerate() {
                q[(i, k + t)] -= dot * vt.conj() * 2.0;
            }
        }
        for i in k + 1..n {
            r[(i, k)] = zero;
        }
    }
    (q, r)
}
