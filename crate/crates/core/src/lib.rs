//! Error rates of Kitaev-tetron qubits with spatially resolved quasiparticle
//! detection.
//!
//! A tetron is two Kitaev chains of `n` sites. [`bdg`] diagonalizes each chain,
//! [`wannier`] builds its localized quasiparticle (WQP) basis, [`codes`] picks
//! the stabilizers of the code `C_d`, and [`noise`] estimates loss and
//! bit-flip rates by evaluating each error pattern exactly in the fermionic
//! Gaussian formalism of [`gaussian`]. [`analytic`] has the fixed-point closed
//! forms and [`oracle`] a dense Fock-space cross-check for small `n`.

// NaN must fail the range checks, hence `!(x > 0.0)` rather than `x <= 0.0`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bdg;
pub mod cli;
pub mod codes;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod noise;
pub mod oracle;
pub mod wannier;

pub use error::{Error, Result};
