//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};

pub const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to the
/// Frobenius norm of the input.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-8;
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Columns are eigenvectors, ordered like `eigenvalues`.
    pub basis: UnitaryMatrix,
    /// Sorted descending; ties keep the original diagonal order.
    pub eigenvalues: Vec<f64>,
    /// Set when some eigenvalue is below `-PSD_TOL`.
    pub psd_violation: bool,
    pub sweeps: usize,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let u = self.basis.matrix();
        let d = ComplexMatrix::from_diagonal(&self.eigenvalues);
        &(u * &d) * &u.adjoint()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition `A = U diag(mu) U^dag` of a Hermitian matrix.
pub fn spectral_decompose(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    a.check_finite()?;
    let deviation = a.hermiticity_error();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.dim();
    let mut w = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = OFF_DIAGONAL_TOL * scale;

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&w);
    while off > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&w);
    }

    let diag: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort: equal eigenvalues keep their index order
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let basis = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    let psd_violation = eigenvalues.iter().any(|&x| x < -PSD_TOL);
    Ok(SpectralDecomposition { basis: UnitaryMatrix::trusted(basis), eigenvalues, psd_violation, sweeps })
}

/// Annihilates `w[(p, q)]` with `w <- J^dag w J` and accumulates `v <- v J`.
fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = w[(p, q)];
    let mag = g.norm();
    if mag == 0.0 {
        return;
    }
    // Strip the phase of the pivot, then apply a real symmetric rotation:
    // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
    let phase = g / mag;
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = w.dim();
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = wkp * jpp + wkq * jqp;
        w[(k, q)] = wkp * jpq + wkq * jqq;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = jpp.conj() * wpk + jqp.conj() * wqk;
        w[(q, k)] = jpq.conj() * wpk + jqq.conj() * wqk;
    }
    w[(p, q)] = Complex64::new(0.0, 0.0);
    w[(q, p)] = Complex64::new(0.0, 0.0);
    w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
    w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
