//! Hermitian positive semidefinite matrices `A = U diag(mu) U^dag`.

use num_complex::Complex64;

use crate::eigen::{self, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};
use crate::permanent;

pub const HERMITIAN_TOL: f64 = 1e-10;

/// An HPSM together with the spectral data it was built from.
#[derive(Debug, Clone)]
pub struct Hpsm {
    matrix: ComplexMatrix,
    basis: UnitaryMatrix,
    spectrum: Vec<f64>,
}

impl Hpsm {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &UnitaryMatrix {
        &self.basis
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn mu_max(&self) -> f64 {
        self.spectrum.iter().copied().fold(0.0, f64::max)
    }

    pub fn permanent(&self) -> Result<Complex64> {
        permanent::permanent(&self.matrix)
    }

    /// `||A - U diag(mu) U^dag||_max`.
    pub fn reconstruction_error(&self) -> f64 {
        self.matrix.max_abs_diff(&compose(&self.basis, &self.spectrum))
    }
}

fn compose(u: &UnitaryMatrix, mus: &[f64]) -> ComplexMatrix {
    let u = u.matrix();
    // U diag(mu) U^dag without forming the diagonal matrix
    ComplexMatrix::from_fn(u.dim(), |i, j| mus.iter().enumerate().map(|(k, &m)| u[(i, k)] * u[(j, k)].conj() * m).sum())
        .hermitian_part()
}

pub fn validate_spectrum(mus: &[f64], dim: usize) -> Result<()> {
    if mus.len() != dim {
        return Err(Error::LengthMismatch { expected: dim, got: mus.len() });
    }
    for (index, &value) in mus.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::OutOfRange { name: "mu", value, range: "finite reals" });
        }
        if value < 0.0 {
            return Err(Error::NegativeSpectrum { index, value });
        }
    }
    Ok(())
}

/// Builds `A = U diag(mus) U^dag`, symmetrized to be exactly Hermitian.
pub fn hpsm_from(u: &UnitaryMatrix, mus: &[f64]) -> Result<Hpsm> {
    validate_spectrum(mus, u.dim())?;
    Ok(Hpsm { matrix: compose(u, mus), basis: u.clone(), spectrum: mus.to_vec() })
}

/// Decomposes a Hermitian matrix; see [`eigen::spectral_decompose`].
pub fn spectral_decompose(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    eigen::spectral_decompose(a)
}

impl TryFrom<&ComplexMatrix> for Hpsm {
    type Error = Error;

    /// Fails on non-Hermitian input or a negative eigenvalue beyond tolerance.
    fn try_from(a: &ComplexMatrix) -> Result<Self> {
        let d = eigen::spectral_decompose(a)?;
        if let Some((index, &value)) = d.eigenvalues.iter().enumerate().find(|(_, &x)| x < -eigen::PSD_TOL) {
            return Err(Error::NegativeSpectrum { index, value });
        }
        let spectrum = d.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
        Ok(Hpsm { matrix: a.hermitian_part(), basis: d.basis, spectrum })
    }
}

/// Rescales `A` to `A / mu_max` so that its spectrum lies in `[0, 1]`.
///
/// `Perm[A] = mu_max^M * Perm[A / mu_max]`.
pub fn scale_hpsm(a: &Hpsm) -> Result<(Hpsm, f64)> {
    let mu_max = a.mu_max();
    if mu_max <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let inv = 1.0 / mu_max;
    let scaled = Hpsm {
        matrix: a.matrix.scale(Complex64::new(inv, 0.0)),
        basis: a.basis.clone(),
        spectrum: a.spectrum.iter().map(|&m| m * inv).collect(),
    };
    Ok((scaled, mu_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_basis() {
        let h = hpsm_from(&UnitaryMatrix::identity(2), &[0.3, 0.7]).unwrap();
        assert_eq!(h.matrix(), &ComplexMatrix::from_diagonal(&[0.3, 0.7]));
        assert_eq!(h.reconstruction_error(), 0.0);
    }

    #[test]
    fn errors() {
        let u = UnitaryMatrix::identity(2);
        assert!(matches!(hpsm_from(&u, &[0.1]), Err(Error::LengthMismatch { expected: 2, got: 1 })));
        assert!(matches!(hpsm_from(&u, &[0.1, -0.2]), Err(Error::NegativeSpectrum { index: 1, .. })));
        let z = hpsm_from(&u, &[0.0, 0.0]).unwrap();
        assert_eq!(scale_hpsm(&z).unwrap_err(), Error::ZeroMatrix);
    }

    #[test]
    fn scaling_examples() {
        let u = UnitaryMatrix::identity(2);
        let (s, mu_max) = scale_hpsm(&hpsm_from(&u, &[2.0, 2.0]).unwrap()).unwrap();
        assert_eq!(mu_max, 2.0);
        assert_eq!(s.matrix(), &ComplexMatrix::identity(2));
        let a = hpsm_from(&u, &[3.0, 1.0]).unwrap();
        let (s, mu_max) = scale_hpsm(&a).unwrap();
        assert_eq!(mu_max, 3.0);
        let p = s.permanent().unwrap().re;
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
        assert!((mu_max.powi(2) * p - a.permanent().unwrap().re).abs() < 1e-14);
    }

    #[test]
    fn hpsm_from_matrix_rejects_indefinite() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(Hpsm::try_from(&a), Err(Error::NegativeSpectrum { .. })));
        let b = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let h = Hpsm::try_from(&b).unwrap();
        assert!((h.spectrum()[0] - 3.0).abs() < 1e-14);
        assert!(h.reconstruction_error() < 1e-14);
    }
}
