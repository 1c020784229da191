//! Matrix permanents through linear optics.
//!
//! The crate covers four layers:
//!
//! * exact permanent engines and HPSM construction ([`permanent`], [`hpsm`],
//!   [`eigen`], [`haar`], [`network`]),
//! * the optical click-probability model with thermal or single-photon
//!   inputs, plus a brute-force Fock-space oracle ([`photonic`]),
//! * seeded Monte Carlo emulation of coincidence counting ([`sampling`]),
//! * closed-form sample-complexity and bound calculations ([`resources`]).
//!
//! ```
//! use permoptics::{hpsm_from, permanent, UnitaryMatrix};
//!
//! let a = hpsm_from(&UnitaryMatrix::identity(2), &[0.3, 0.7])?;
//! let p = permanent(a.matrix())?;
//! assert!((p.re - 0.21).abs() < 1e-15);
//! # Ok::<(), permoptics::Error>(())
//! ```

pub mod eigen;
pub mod error;
pub mod haar;
pub mod hpsm;
pub mod matrix;
pub mod network;
pub mod permanent;
pub mod photonic;
pub mod resources;
pub mod rng;
pub mod sampling;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use haar::haar_random_unitary;
pub use hpsm::{hpsm_from, scale_hpsm, spectral_decompose, Hpsm};
pub use matrix::{ComplexMatrix, Laxity, MatrixWire, UnitaryMatrix};
pub use network::{apply_phase_gauge, network_to_unitary, BeamSplitter, BeamSplitterChain};
pub use permanent::{permanent, permanent_exact, PermanentMethod};
