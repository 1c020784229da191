//! Exact permanent engines.
//!
//! Three independent formulations are kept so they can check each other:
//! the permutation sum (oracle only, `dim <= 10`), Ryser's inclusion-exclusion
//! formula and Glynn's formula, both walked in Gray-code order so that each
//! step costs `O(M)` updates.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub const NAIVE_MAX_DIM: usize = 10;
pub const GRAY_MAX_DIM: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PermanentMethod {
    Naive,
    Ryser,
    Glynn,
}

impl PermanentMethod {
    pub const ALL: [PermanentMethod; 3] = [Self::Naive, Self::Ryser, Self::Glynn];

    pub fn max_dim(self) -> usize {
        match self {
            Self::Naive => NAIVE_MAX_DIM,
            Self::Ryser | Self::Glynn => GRAY_MAX_DIM,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Naive => "naive",
            Self::Ryser => "ryser",
            Self::Glynn => "glynn",
        }
    }
}

impl fmt::Display for PermanentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PermanentMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(Self::Naive),
            "ryser" => Ok(Self::Ryser),
            "glynn" => Ok(Self::Glynn),
            other => Err(Error::Invalid(format!("unknown permanent method '{other}'"))),
        }
    }
}

/// Permanent of `a` by the chosen method.
pub fn permanent_exact(a: &ComplexMatrix, method: PermanentMethod) -> Result<Complex64> {
    let limit = method.max_dim();
    if a.dim() > limit {
        return Err(Error::DimensionLimit { dim: a.dim(), limit, method: method.name() });
    }
    a.check_finite()?;
    Ok(match method {
        PermanentMethod::Naive => naive(a),
        PermanentMethod::Ryser => ryser(a),
        PermanentMethod::Glynn => glynn(a),
    })
}

/// Permanent by Glynn's formula, the default engine.
pub fn permanent(a: &ComplexMatrix) -> Result<Complex64> {
    permanent_exact(a, PermanentMethod::Glynn)
}

fn naive(a: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    let term = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| a[(i, j)]).product::<Complex64>();
    let mut total = term(&perm);
    // Heap's algorithm, iterative form.
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += term(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total
}

fn ryser(a: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut row_sums = vec![zero; n];
    let mut total = zero;
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        gray ^= 1 << col;
        let added = gray & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += a[(i, col)];
            } else {
                *s -= a[(i, col)];
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        // (-1)^(n - |S|)
        if (n as u32 - gray.count_ones()).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

fn glynn(a: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    if n == 1 {
        return a[(0, 0)];
    }
    let mut col_sums: Vec<Complex64> = (0..n).map(|j| (0..n).map(|i| a[(i, j)]).sum()).collect();
    let mut signs = vec![1.0f64; n];
    let mut positive = true;
    let mut total: Complex64 = col_sums.iter().product();
    for k in 1u64..(1u64 << (n - 1)) {
        let row = k.trailing_zeros() as usize + 1;
        signs[row] = -signs[row];
        let two_delta = 2.0 * signs[row];
        for (j, s) in col_sums.iter_mut().enumerate() {
            *s += a[(row, j)] * two_delta;
        }
        positive = !positive;
        let prod: Complex64 = col_sums.iter().product();
        if positive {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total / (1u64 << (n - 1)) as f64
}
