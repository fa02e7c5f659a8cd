//! Fermionic Gaussian evaluation of tetron expectation values.
//!
//! States are described by the real antisymmetric covariance matrix
//! `M_ab = −i⟨c_a c_b⟩` (for `a ≠ b`) in the tetron's WQP Majorana ordering:
//! chain `p` occupies indices `(p−1)·2n .. p·2n`, each laid out as
//! `γ, c'_2, c'_3, …, c'_{2n−1}, γ` (see [`crate::codes`]).

mod covariance;
mod expectation;
pub mod pfaffian;

pub use covariance::{error_rotation, initial_covariance, BasisChange, CovarianceState};
pub use expectation::{
    evaluate_codes, evaluate_sample, expectation_ps, expectation_znum, second_moments, MomentMatrix,
    CLAMP_TOL,
};
pub use pfaffian::{pfaffian, pfaffian_real};
