//! Spectral enclosures for block operator matrices
//! `S = [[A, B], [-B*, D]]` with Hermitian diagonal blocks.
//!
//! The crate computes enclosure regions for the spectrum of `S` from cheap
//! data (spectra of `A` and `D`, norms of `B`), pointwise certificates for
//! non-real spectrum, quadratic-numerical-range samples, sharpness
//! constructions and J-frame operator enclosures. Every region can be checked
//! against the dense eigenvalue oracle in [`linalg`].

pub mod certificate;
pub mod enclosure;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod jframe;
pub mod linalg;
pub mod qnr;
pub mod region;
pub mod sharpness;

pub use error::{Error, Result};
pub use exec::Execution;
pub use region::{Disc, Rect, Region, Side};
pub use linalg::{BlockOperator, CMatrix, CVector, HermitianMatrix, SpectralDecomposition};
pub use num_complex::Complex64;
