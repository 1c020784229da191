//! Beam-splitter chains and the diagonal phase gauge `U -> V U W`.
//!
//! A lossless splitter with real transmissivity `t`, reflectivity `r` and
//! reflection phase `phi` acts on its two modes as
//!
//! ```text
//! [ r e^{i phi}   t               ]
//! [ t             r e^{i(pi-phi)} ]
//! ```
//!
//! (rows are outputs, columns inputs). Chains multiply these embeddings in
//! the order light traverses them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};

const SPLIT_TOL: f64 = 1e-12;

/// One splitter acting on modes `modes.0` and `modes.1` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitter {
    pub modes: (usize, usize),
    pub t: f64,
    pub r: f64,
    #[serde(default = "default_phase")]
    pub phi: f64,
}

fn default_phase() -> f64 {
    PI
}

impl BeamSplitter {
    /// Splitter with `r = sqrt(1 - t^2)` and the default phase `pi`.
    pub fn new(modes: (usize, usize), t: f64) -> Self {
        Self::with_phase(modes, t, PI)
    }

    pub fn with_phase(modes: (usize, usize), t: f64, phi: f64) -> Self {
        Self { modes, t, r: (1.0 - t * t).max(0.0).sqrt(), phi }
    }

    pub fn balanced(modes: (usize, usize)) -> Self {
        Self::new(modes, std::f64::consts::FRAC_1_SQRT_2)
    }

    /// The 2x2 block `[[a, b], [c, d]]`.
    pub fn block(&self) -> [[Complex64; 2]; 2] {
        let t = Complex64::new(self.t, 0.0);
        [[Complex64::from_polar(self.r, self.phi), t], [t, Complex64::from_polar(self.r, PI - self.phi)]]
    }
}

/// Ordered list of splitters, first element applied first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BeamSplitterChain {
    pub stages: Vec<BeamSplitter>,
}

impl BeamSplitterChain {
    pub fn new(stages: Vec<BeamSplitter>) -> Self {
        Self { stages }
    }

    /// The three-splitter 4-mode network: BS1 on modes 1-2 and BS3 on modes
    /// 3-4 act first (in parallel), BS2 then mixes modes 2-3.
    pub fn four_mode(t: [f64; 3], phi: [f64; 3]) -> Self {
        Self::new(vec![
            BeamSplitter::with_phase((1, 2), t[0], phi[0]),
            BeamSplitter::with_phase((3, 4), t[2], phi[2]),
            BeamSplitter::with_phase((2, 3), t[1], phi[1]),
        ])
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        for (stage, bs) in self.stages.iter().enumerate() {
            let (a, b) = bs.modes;
            if a == b || a == 0 || b == 0 || a > dim || b > dim {
                return Err(Error::InvalidModePair(a, b));
            }
            let sum = bs.t * bs.t + bs.r * bs.r;
            if !bs.t.is_finite() || !bs.r.is_finite() || bs.t < 0.0 || bs.r < 0.0 || (sum - 1.0).abs() > SPLIT_TOL {
                return Err(Error::InvalidSplitter { stage, sum });
            }
            if !bs.phi.is_finite() {
                return Err(Error::OutOfRange { name: "phi", value: bs.phi, range: "finite radians" });
            }
        }
        Ok(())
    }
}

/// Interferometer matrix of a chain on `dim` modes.
pub fn network_to_unitary(chain: &BeamSplitterChain, dim: usize) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::Shape { rows: 0, entries: 0 });
    }
    chain.validate(dim)?;
    let mut u = ComplexMatrix::identity(dim);
    for bs in &chain.stages {
        let (a, b) = (bs.modes.0 - 1, bs.modes.1 - 1);
        let [[m00, m01], [m10, m11]] = bs.block();
        // u <- B u: only rows a and b change
        for col in 0..dim {
            let ua = u[(a, col)];
            let ub = u[(b, col)];
            u[(a, col)] = m00 * ua + m01 * ub;
            u[(b, col)] = m10 * ua + m11 * ub;
        }
    }
    Ok(UnitaryMatrix::trusted(u))
}

/// `V U W` with `V = diag(e^{i alpha})`, `W = diag(e^{i beta})`.
pub fn apply_phase_gauge(u: &UnitaryMatrix, alpha: &[f64], beta: &[f64]) -> Result<UnitaryMatrix> {
    let n = u.dim();
    for v in [alpha, beta] {
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: v.len() });
        }
    }
    let m = ComplexMatrix::from_fn(n, |i, j| u[(i, j)] * Complex64::from_polar(1.0, alpha[i] + beta[j]));
    Ok(match u.laxity() {
        crate::matrix::Laxity::Constructed => UnitaryMatrix::trusted(m),
        lax => UnitaryMatrix::with_laxity(m, lax)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_stage_pattern() {
        let u = network_to_unitary(&BeamSplitterChain::new(vec![BeamSplitter::balanced((1, 2))]), 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = ComplexMatrix::from_real_rows(&[vec![-s, s], vec![s, s]]).unwrap();
        assert!(u.matrix().max_abs_diff(&expect) < 1e-15);
        assert!(u.unitarity_error() < 1e-15);
    }

    #[test]
    fn transmissive_stage_swaps() {
        let u = network_to_unitary(&BeamSplitterChain::new(vec![BeamSplitter::new((1, 2), 1.0)]), 2).unwrap();
        let swap = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(u.matrix().max_abs_diff(&swap) < 1e-15);
    }

    #[test]
    fn invalid_chains() {
        let bad = BeamSplitterChain::new(vec![BeamSplitter::balanced((1, 3))]);
        assert_eq!(network_to_unitary(&bad, 2).unwrap_err(), Error::InvalidModePair(1, 3));
        let same = BeamSplitterChain::new(vec![BeamSplitter::balanced((2, 2))]);
        assert!(network_to_unitary(&same, 2).is_err());
        let lossy = BeamSplitterChain::new(vec![BeamSplitter { modes: (1, 2), t: 0.5, r: 0.5, phi: PI }]);
        assert!(matches!(network_to_unitary(&lossy, 2), Err(Error::InvalidSplitter { stage: 0, .. })));
    }

    #[test]
    fn gauge_basics() {
        let u = network_to_unitary(&BeamSplitterChain::four_mode([0.6, 0.7, 0.8], [PI; 3]), 4).unwrap();
        assert_eq!(apply_phase_gauge(&u, &[0.0; 4], &[0.0; 4]).unwrap(), u);
        let neg = apply_phase_gauge(&u, &[PI; 4], &[0.0; 4]).unwrap();
        assert!(neg.matrix().max_abs_diff(&u.matrix().scale(Complex64::new(-1.0, 0.0))) < 1e-15);
        assert!(apply_phase_gauge(&u, &[0.0; 3], &[0.0; 4]).is_err());
    }
}
