//! Kitaev-chain Bogoliubov-de Gennes matrices and their particle-hole
//! symmetric diagonalization.
//!
//! A chain of `n` sites is described by the Hamiltonian
//!
//! ```text
//! H = −Σ_j μ_j (a†_j a_j − 1/2) + Σ_j (−w a†_j a_{j+1} + Δ a_j a_{j+1} + h.c.)
//! ```
//!
//! with `μ_j = μ + disorder_j`. The BdG matrix `A` acts on linear fermionic
//! operators written in the interleaved particle/hole basis (see
//! [`crate::linalg`]): a vector `v` represents `L = Σ_j v_{j,1} a†_j + v_{j,2} a_j`
//! and `[H, L]` is represented by `A v`.

use log::debug;
use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{check, Error, Result};
use crate::linalg::{
    self, c, hermitian_eigh, hermiticity_residual, max_abs, ph_conjugate, ph_conjugate_matrix,
    CMat, CVec, RMat, I,
};

/// Numerical tolerances used when validating BdG matrices and spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub particle_hole: f64,
    pub eigen_residual: f64,
    pub reconstruction: f64,
    /// Warn when `ε_0 > mzm_gap_ratio · ε_1`.
    pub mzm_gap_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-12,
            particle_hole: 1e-12,
            eigen_residual: 1e-10,
            reconstruction: 1e-9,
            mzm_gap_ratio: 0.1,
        }
    }
}

/// Physical parameters of one Kitaev chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    pub mu: f64,
    pub w: f64,
    pub delta: f64,
    pub n: usize,
    /// Per-site offsets added to `mu`.
    pub disorder: Vec<f64>,
    /// Which chain of the tetron (1 or 2).
    pub chain_id: u8,
}

impl ChainParams {
    pub fn new(mu: f64, w: f64, delta: f64, n: usize) -> Self {
        ChainParams {
            mu,
            w,
            delta,
            n,
            disorder: vec![0.0; n],
            chain_id: 1,
        }
    }

    /// `μ = 0`, `w = Δ = 1`.
    pub fn fixed_point(n: usize) -> Self {
        Self::new(0.0, 1.0, 1.0, n)
    }

    pub fn with_chain_id(mut self, chain_id: u8) -> Self {
        self.chain_id = chain_id;
        self
    }

    pub fn with_disorder(mut self, disorder: Vec<f64>) -> Self {
        self.disorder = disorder;
        self
    }

    /// Draws i.i.d. on-site offsets from `Uniform[−amplitude, amplitude]`.
    pub fn with_random_disorder<R: Rng + ?Sized>(mut self, amplitude: f64, rng: &mut R) -> Self {
        self.disorder = (0..self.n)
            .map(|_| {
                if amplitude > 0.0 {
                    rng.random_range(-amplitude..=amplitude)
                } else {
                    0.0
                }
            })
            .collect();
        self
    }

    pub fn is_fixed_point(&self) -> bool {
        self.mu == 0.0
            && self.w == 1.0
            && self.delta == 1.0
            && self.disorder.iter().all(|&d| d == 0.0)
    }

    /// Chemical potential on site `j` (0-based).
    pub fn onsite(&self, j: usize) -> f64 {
        self.mu + self.disorder[j]
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInput(format!(
                "chain needs at least 2 sites, got {}",
                self.n
            )));
        }
        if self.disorder.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "disorder has {} entries for {} sites",
                self.disorder.len(),
                self.n
            )));
        }
        if !(self.w > 0.0) {
            return Err(Error::InvalidInput(format!("hopping w must be > 0, got {}", self.w)));
        }
        if !(self.delta >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "pairing delta must be >= 0, got {}",
                self.delta
            )));
        }
        if !(self.mu.is_finite() && self.disorder.iter().all(|d| d.is_finite())) {
            return Err(Error::InvalidInput("non-finite chemical potential".into()));
        }
        if !matches!(self.chain_id, 1 | 2) {
            return Err(Error::InvalidInput(format!(
                "chain_id must be 1 or 2, got {}",
                self.chain_id
            )));
        }
        Ok(())
    }
}

/// Hermitian, particle-hole antisymmetric `2n × 2n` BdG matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BdgMatrix {
    n: usize,
    matrix: CMat,
}

impl BdgMatrix {
    /// Wraps an arbitrary matrix, checking Hermiticity and `τ_x K A K τ_x = −A`.
    pub fn from_matrix(matrix: CMat, tol: &Tolerances) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || !matrix.nrows().is_multiple_of(2) || matrix.nrows() < 4 {
            return Err(Error::InvalidInput(format!(
                "BdG matrix must be square with even dimension >= 4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let bdg = BdgMatrix {
            n: matrix.nrows() / 2,
            matrix,
        };
        check("BdG hermiticity", bdg.hermiticity_residual(), tol.hermiticity)?;
        check("BdG particle-hole", bdg.particle_hole_residual(), tol.particle_hole)?;
        Ok(bdg)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.matrix)
    }

    pub fn particle_hole_residual(&self) -> f64 {
        max_abs(&(ph_conjugate_matrix(&self.matrix) + &self.matrix))
    }

    /// The same operator in the Majorana basis; purely imaginary, `i·h` with
    /// `h` real antisymmetric and `H = (i/4) Σ h_ab c_a c_b`.
    pub fn majorana(&self) -> CMat {
        to_majorana_basis_matrix(&self.matrix).expect("square even matrix")
    }

    /// The real antisymmetric `h` of `H = (i/4) Σ h_ab c_a c_b`.
    pub fn majorana_couplings(&self) -> RMat {
        let m = self.majorana();
        RMat::from_fn(m.nrows(), m.ncols(), |r, k| m[(r, k)].im)
    }
}

/// Assembles the BdG matrix of a (possibly disordered) Kitaev chain.
pub fn build_bdg(params: &ChainParams) -> Result<BdgMatrix> {
    params.validate()?;
    let n = params.n;
    // Single-particle block h and antisymmetric pairing block D with
    // H = Σ h_ik a†_i a_k + ½ Σ (D_ik a†_i a†_k + h.c.) + const.
    let mut h = DMatrix::<f64>::zeros(n, n);
    let mut d = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        h[(j, j)] = -params.onsite(j);
    }
    for j in 0..n - 1 {
        h[(j, j + 1)] = -params.w;
        h[(j + 1, j)] = -params.w;
        d[(j, j + 1)] = -params.delta;
        d[(j + 1, j)] = params.delta;
    }
    let (p, q) = (|j: usize| 2 * j, |j: usize| 2 * j + 1);
    let mut a = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for k in 0..n {
            a[(p(i), p(k))] = c(h[(i, k)]);
            a[(q(i), q(k))] = c(-h[(i, k)]);
            a[(p(i), q(k))] = c(d[(i, k)]);
            a[(q(i), p(k))] = c(-d[(i, k)]);
        }
    }
    BdgMatrix::from_matrix(a, &Tolerances::default())
}

/// Positive-branch BdG eigenpairs of one chain.
///
/// Column `k` of `modes` is `|e_k⟩` in particle/hole coordinates with energy
/// `energies[k]`; `k = 0` is the Majorana zero-mode pair, `k ≥ 1` are the
/// quasiparticles. The hole partner of `|e_k⟩` is `τ_x K |e_k⟩` with energy `−ε_k`.
#[derive(Debug, Clone)]
pub struct QuasiparticleSpectrum {
    energies: Vec<f64>,
    modes: CMat,
    /// Raised when the zero mode is not well separated from the gap.
    pub mzm_warning: bool,
}

impl QuasiparticleSpectrum {
    /// Builds a spectrum from externally supplied eigenpairs (used to test
    /// gauge invariance of downstream constructions).
    pub fn from_parts(energies: Vec<f64>, modes: CMat) -> Result<Self> {
        if modes.ncols() != energies.len() || modes.nrows() != 2 * energies.len() {
            return Err(Error::DimensionMismatch {
                expected: 2 * energies.len(),
                got: modes.nrows(),
            });
        }
        Ok(QuasiparticleSpectrum {
            energies,
            modes,
            mzm_warning: false,
        })
    }

    pub fn n(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn modes(&self) -> &CMat {
        &self.modes
    }

    pub fn mode(&self, k: usize) -> CVec {
        self.modes.column(k).into_owned()
    }

    pub fn hole_partner(&self, k: usize) -> CVec {
        ph_conjugate(&self.mode(k))
    }

    /// First quasiparticle energy `ε_1`.
    pub fn gap(&self) -> f64 {
        self.energies[1]
    }

    pub fn mzm_energy(&self) -> f64 {
        self.energies[0]
    }

    /// `Σ_k ε_k (|e_k⟩⟨e_k| − τ_xK|e_k⟩⟨e_k|Kτ_x)`.
    pub fn reconstruct(&self) -> CMat {
        let dim = 2 * self.n();
        let mut a = CMat::zeros(dim, dim);
        for (k, &eps) in self.energies.iter().enumerate() {
            let e = self.mode(k);
            let h = ph_conjugate(&e);
            a += (&e * e.adjoint() - &h * h.adjoint()) * c(eps);
        }
        a
    }
}

/// Diagonalizes with default tolerances.
pub fn diagonalize(bdg: &BdgMatrix) -> Result<QuasiparticleSpectrum> {
    diagonalize_with(bdg, &Tolerances::default())
}

/// Diagonalizes a BdG matrix, returning the sorted non-negative branch.
///
/// The two eigenvalues closest to zero are treated as the zero-mode pair. Its
/// positive-branch vector is rebuilt from a real Majorana basis of the pair's
/// span so that `|e_0⟩ ⊥ τ_xK|e_0⟩` even when the pair is numerically degenerate.
pub fn diagonalize_with(bdg: &BdgMatrix, tol: &Tolerances) -> Result<QuasiparticleSpectrum> {
    check("BdG hermiticity", bdg.hermiticity_residual(), tol.hermiticity)?;
    check("BdG particle-hole", bdg.particle_hole_residual(), tol.particle_hole)?;
    let n = bdg.n();
    let u = linalg::majorana_unitary(n);
    let maj = bdg.majorana();
    let (values, vectors) = hermitian_eigh(&maj);

    let mut energies = Vec::with_capacity(n);
    let mut modes = CMat::zeros(2 * n, n);

    let zero_pair = zero_mode_real_pair(&vectors.columns(n - 1, 2).into_owned(), tol)?;
    let e0 = (zero_pair.column(0).map(c) - zero_pair.column(1).map(c) * I) * c(std::f64::consts::FRAC_1_SQRT_2);
    let rayleigh = (e0.adjoint() * &maj * &e0)[(0, 0)].re;
    let e0 = if rayleigh >= 0.0 { e0 } else { e0.map(|z| z.conj()) };
    energies.push(rayleigh.abs());
    modes.set_column(0, &(&u * e0));

    for k in 1..n {
        energies.push(values[n + k]);
        modes.set_column(k, &(&u * vectors.column(n + k)));
    }

    let spec = QuasiparticleSpectrum {
        energies,
        modes,
        mzm_warning: false,
    };
    validate_spectrum(bdg, &spec, tol)?;
    let mzm_warning = spec.energies[0] > tol.mzm_gap_ratio * spec.energies[1];
    if mzm_warning {
        debug!(
            "zero mode energy {:.3e} exceeds {} x gap {:.3e}; parameters may be outside the topological phase",
            spec.energies[0], tol.mzm_gap_ratio, spec.energies[1]
        );
    }
    Ok(QuasiparticleSpectrum { mzm_warning, ..spec })
}

/// Real orthonormal basis (Majorana coordinates) of the span of two complex
/// vectors that is closed under complex conjugation.
pub(crate) fn zero_mode_real_pair(pair: &CMat, tol: &Tolerances) -> Result<RMat> {
    let dim = pair.nrows();
    let mut real = RMat::zeros(dim, 4);
    for k in 0..2 {
        for r in 0..dim {
            real[(r, 2 * k)] = pair[(r, k)].re;
            real[(r, 2 * k + 1)] = pair[(r, k)].im;
        }
    }
    let svd = real.svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let leak = svd.singular_values[order[2]] / svd.singular_values[order[0]];
    check("zero-mode subspace particle-hole closure", leak, tol.eigen_residual.sqrt())?;
    Ok(RMat::from_fn(dim, 2, |r, k| u[(r, order[k])]))
}

fn validate_spectrum(bdg: &BdgMatrix, spec: &QuasiparticleSpectrum, tol: &Tolerances) -> Result<()> {
    let a = bdg.matrix();
    let n = spec.n();
    let mut eig_res: f64 = 0.0;
    for k in 0..n {
        let e = spec.mode(k);
        let r = a * &e - &e * c(spec.energies[k]);
        eig_res = eig_res.max(r.norm());
        let h = spec.hole_partner(k);
        let r = a * &h + &h * c(spec.energies[k]);
        eig_res = eig_res.max(r.norm());
    }
    // The zero-mode vector is only an approximate eigenvector when the pair is
    // split by an exponentially small energy; scale by the matrix norm.
    let scale = 1.0 + max_abs(a);
    check("BdG eigen residual", eig_res / scale, tol.eigen_residual)?;
    let gram = spec.modes.adjoint() * &spec.modes;
    let ortho = max_abs(&(gram - CMat::identity(n, n)));
    check("BdG mode orthonormality", ortho, tol.eigen_residual)?;
    let recon = max_abs(&(spec.reconstruct() - a));
    check("BdG reconstruction", recon / scale, tol.reconstruction)
}

/// Converts a particle/hole-coordinate vector to Majorana coordinates.
pub fn to_majorana_basis(v: &CVec) -> Result<CVec> {
    if !v.len().is_multiple_of(2) || v.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: v.len() + 1,
            got: v.len(),
        });
    }
    Ok(linalg::majorana_unitary(v.len() / 2).adjoint() * v)
}

pub fn from_majorana_basis(v: &CVec) -> Result<CVec> {
    if !v.len().is_multiple_of(2) || v.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: v.len() + 1,
            got: v.len(),
        });
    }
    Ok(linalg::majorana_unitary(v.len() / 2) * v)
}

/// `U† A U`: a particle/hole-coordinate operator in Majorana coordinates.
pub fn to_majorana_basis_matrix(a: &CMat) -> Result<CMat> {
    if a.nrows() != a.ncols() || !a.nrows().is_multiple_of(2) || a.nrows() == 0 {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let u = linalg::majorana_unitary(a.nrows() / 2);
    Ok(u.adjoint() * a * u)
}

pub fn from_majorana_basis_matrix(a: &CMat) -> Result<CMat> {
    if a.nrows() != a.ncols() || !a.nrows().is_multiple_of(2) || a.nrows() == 0 {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let u = linalg::majorana_unitary(a.nrows() / 2);
    Ok(&u * a * u.adjoint())
}

/// Minimum over `k` of the infinite-chain dispersion
/// `√((2w cos k + μ)² + 4Δ² sin² k)`, sampled on a fine grid.
pub fn bulk_gap(mu: f64, w: f64, delta: f64) -> f64 {
    const STEPS: usize = 200_000;
    (0..=STEPS)
        .map(|s| {
            let k = std::f64::consts::PI * s as f64 / STEPS as f64;
            ((2.0 * w * k.cos() + mu).powi(2) + 4.0 * delta * delta * k.sin().powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}
