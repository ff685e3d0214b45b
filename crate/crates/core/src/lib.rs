//! Finite-dimensional representations of the Schwinger-Dunkl algebra sd(2),
//! the symmetry algebra of the planar Dunkl oscillator.
//!
//! The crate builds the generator matrices from exact Fock-space actions of
//! parabosonic ladder operators, diagonalizes them numerically, and compares
//! every result against independent closed forms (special polynomials,
//! block-triangular spectra, Heun series).
//!
//! ```
//! use sd2_core::{params::OscParams, repmat, numerics::dense_eigen};
//!
//! let p = OscParams::new(4, 0.3, 0.7).unwrap();
//! let gens = repmat::build_circular(&p, repmat::BasisOrdering::CircularB2).unwrap();
//! let eig = dense_eigen(&gens.j2).unwrap();
//! let closed = repmat::spectrum_closed_form(&p, repmat::SpectrumOp::J2);
//! for (z, x) in eig.values.iter().zip(&closed) {
//!     assert!((z.re - x).abs() < 1e-10);
//! }
//! ```

pub mod cli;
pub mod error;
pub mod fock;
pub mod interbasis;
pub mod j2rep;
pub mod numerics;
pub mod params;
pub mod qdiag;
pub mod repmat;
pub mod specfun;
pub mod verify;

pub use error::{Result, Sd2Error};
pub use numerics::{DenseMatrix, Tolerances, C64};
pub use params::{OscParams, Parity};
