//! Dense square complex matrices and the unitary wrapper used for
//! interferometers.
//!
//! Matrices are stored row-major. The JSON exchange form is
//! `{"dim": M, "re": [[...]], "im": [[...]]}`; `im` may be omitted for real
//! matrices.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance applied to matrices built by this crate.
pub const CONSTRUCTED_TOLERANCE: f64 = 1e-10;

/// Tolerance applied to measured matrices printed to three decimals.
///
/// The printed 4x4 interferometers carry dark-count noise entries of order
/// 0.02-0.04, which puts `U^dag U` about 0.05 away from the identity.
pub const EXPERIMENTAL_TOLERANCE: f64 = 6e-2;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Shape { rows: dim, entries: data.len() });
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape { rows: dim, entries: rows.iter().map(Vec::len).sum() });
        }
        Self::new(dim, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dim must be >= 1");
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            Some(p) => Err(Error::NonFinite { row: p / self.dim, col: p % self.dim }),
            None => Ok(()),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn scale_row(&self, row: usize, c: Complex64) -> Self {
        let mut m = self.clone();
        for j in 0..self.dim {
            m[(row, j)] *= c;
        }
        m
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |U^dag U - I|`.
    pub fn unitarity_error(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    /// `(A + A^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Copy of the submatrix selecting (possibly repeated) rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::LengthMismatch { expected: rows.len(), got: cols.len() });
        }
        Ok(Self::from_fn(rows.len(), |i, j| self[(rows[i], cols[j])]))
    }

    pub fn to_wire(&self) -> MatrixWire {
        let part = |f: fn(&Complex64) -> f64| (0..self.dim).map(|i| self.row(i).iter().map(f).collect()).collect();
        MatrixWire { dim: self.dim, re: part(|z| z.re), im: Some(part(|z| z.im)) }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let cells: Vec<String> = self.row(i).iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Serialized form of a [`ComplexMatrix`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixWire {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl TryFrom<MatrixWire> for ComplexMatrix {
    type Error = Error;

    fn try_from(w: MatrixWire) -> Result<Self> {
        let dim = w.dim;
        if w.re.len() != dim || w.re.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape { rows: w.re.len(), entries: w.re.iter().map(Vec::len).sum() });
        }
        let im = match w.im {
            Some(im) => {
                if im.len() != dim || im.iter().any(|r| r.len() != dim) {
                    return Err(Error::Shape { rows: im.len(), entries: im.iter().map(Vec::len).sum() });
                }
                im
            }
            None => vec![vec![0.0; dim]; dim],
        };
        let data =
            w.re.iter().zip(&im).flat_map(|(r, i)| r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b))).collect();
        ComplexMatrix::new(dim, data)
    }
}

impl From<&ComplexMatrix> for MatrixWire {
    fn from(m: &ComplexMatrix) -> Self {
        m.to_wire()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(d)?;
        ComplexMatrix::try_from(wire).map_err(serde::de::Error::custom)
    }
}

/// How strictly a [`UnitaryMatrix`] was checked on ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Laxity {
    Constructed,
    Experimental,
    Custom(f64),
}

impl Laxity {
    pub fn tolerance(self) -> f64 {
        match self {
            Laxity::Constructed => CONSTRUCTED_TOLERANCE,
            Laxity::Experimental => EXPERIMENTAL_TOLERANCE,
            Laxity::Custom(t) => t,
        }
    }
}

/// A matrix that passed a unitarity check at a recorded tolerance.
///
/// Experimental matrices are stored verbatim; nothing here ever
/// renormalizes them.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
    laxity: Laxity,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_laxity(matrix, Laxity::Constructed)
    }

    pub fn experimental(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_laxity(matrix, Laxity::Experimental)
    }

    pub fn with_laxity(matrix: ComplexMatrix, laxity: Laxity) -> Result<Self> {
        let deviation = matrix.unitarity_error();
        let tolerance = laxity.tolerance();
        if !(deviation <= tolerance) {
            return Err(Error::NotUnitary { deviation, tolerance });
        }
        Ok(Self { matrix, laxity })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim), laxity: Laxity::Constructed }
    }

    /// Wraps a matrix produced by a unitary-preserving construction.
    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.unitarity_error() < 1e-8, "{:e}", matrix.unitarity_error());
        Self { matrix, laxity: Laxity::Constructed }
    }

    pub fn laxity(&self) -> Laxity {
        self.laxity
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn unitarity_error(&self) -> f64 {
        self.matrix.unitarity_error()
    }

    /// `|U_{ji}|^2` for output `j` and input `i`.
    #[inline]
    pub fn transition(&self, output: usize, input: usize) -> f64 {
        self.matrix[(output, input)].norm_sqr()
    }
}

impl Index<(usize, usize)> for UnitaryMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.matrix[idx]
    }
}

impl AsRef<ComplexMatrix> for UnitaryMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(ComplexMatrix::new(0, vec![]).is_err());
        assert!(ComplexMatrix::new(2, vec![c(1.0, 0.0); 3]).is_err());
        let err = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(f64::NAN, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(err.unwrap_err(), Error::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn wire_format_parses_real_and_complex() {
        let m: ComplexMatrix = serde_json::from_str(r#"{"dim":2,"re":[[1,2],[3,4]],"im":[[0,1],[0,0]]}"#).unwrap();
        assert_eq!(m[(0, 1)], c(2.0, 1.0));
        let real: ComplexMatrix = serde_json::from_str(r#"{"dim":1,"re":[[5]]}"#).unwrap();
        assert_eq!(real[(0, 0)], c(5.0, 0.0));
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"dim":2,"re":[[1,2]]}"#).is_err());
        let back: ComplexMatrix = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn unitary_check_uses_laxity() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bs = ComplexMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]).unwrap();
        assert!(UnitaryMatrix::new(bs).is_ok());
        let rough = ComplexMatrix::from_real_rows(&[vec![0.707, 0.709], vec![-0.707, 0.705]]).unwrap();
        assert!(matches!(UnitaryMatrix::new(rough.clone()), Err(Error::NotUnitary { .. })));
        let u = UnitaryMatrix::experimental(rough.clone()).unwrap();
        assert_eq!(u.matrix(), &rough);
        assert_eq!(u.laxity(), Laxity::Experimental);
    }

    #[test]
    fn product_and_adjoint() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.0, 2.0)], vec![c(3.0, 0.0), c(1.0, -1.0)]]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(&a * &id, a);
        let aa = &a.adjoint() * &a;
        assert!(aa.hermiticity_error() < 1e-15);
        assert_eq!(a.adjoint()[(0, 1)], c(3.0, 0.0));
        assert_eq!(a.adjoint()[(1, 0)], c(0.0, -2.0));
    }
}
