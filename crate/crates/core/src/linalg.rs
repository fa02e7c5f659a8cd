//! Dense matrix helpers shared by the BdG, Wannier and Gaussian modules.
//!
//! Particle/hole coordinates are interleaved per site: index `2j` is
//! `|j,1⟩ = a†_j` and `2j + 1` is `|j,2⟩ = a_j` (sites 0-based). Majorana
//! coordinates are ordered `c_1, c_2, …, c_{2n}` so that site `j` owns
//! Majorana indices `2j` and `2j + 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Unitary whose columns are the Majorana basis vectors `|c_b/√2⟩` written
/// in particle/hole coordinates, for a chain of `n` sites.
///
/// `a_j = (c_{2j-1} + i c_{2j})/2`, hence `|c_{2j-1}/√2⟩ = (|j,1⟩ + |j,2⟩)/√2`
/// and `|c_{2j}/√2⟩ = i(|j,1⟩ − |j,2⟩)/√2`.
pub fn majorana_unitary(n: usize) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        let (p, h) = (2 * j, 2 * j + 1);
        u[(p, p)] = c(s);
        u[(h, p)] = c(s);
        u[(p, h)] = I * s;
        u[(h, h)] = -I * s;
    }
    u
}

/// Particle-hole conjugation `τ_x K` of a vector in particle/hole coordinates.
pub fn ph_conjugate(v: &CVec) -> CVec {
    let mut out = v.map(|z| z.conj());
    for j in 0..v.len() / 2 {
        out.swap_rows(2 * j, 2 * j + 1);
    }
    out
}

/// `τ_x K A K τ_x` for a matrix in particle/hole coordinates.
pub fn ph_conjugate_matrix(a: &CMat) -> CMat {
    let dim = a.nrows();
    let tau = |i: usize| i ^ 1;
    CMat::from_fn(dim, dim, |r, col| a[(tau(r), tau(col))].conj())
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().map(|z| z.abs()).fold(0.0, f64::max)
}

pub fn hermiticity_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
pub fn hermitian_eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(m.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Eigen-decomposition of a real symmetric matrix with eigenvalues sorted ascending.
pub fn symmetric_eigh(m: &RMat) -> (Vec<f64>, RMat) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = RMat::from_fn(m.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Operator 2-norm of a Hermitian matrix (largest absolute eigenvalue).
pub fn hermitian_norm(m: &CMat) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}
