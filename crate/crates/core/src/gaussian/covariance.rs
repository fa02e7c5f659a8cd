use crate::bdg::ChainParams;
use crate::error::{check, Error, Result};
use crate::linalg::{max_abs_real, RMat};
use crate::noise::ErrorSample;
use crate::wannier::{chain_basis, ChainBasis};

/// Covariance matrix of a pure Gaussian tetron state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    m: RMat,
}

/// Partner index and sign of `M0` in row `i`: `M0[i, partner] = sign`.
pub(crate) fn m0_partner(i: usize, n: usize, zeta: u8) -> (usize, f64) {
    let m = 2 * n;
    let (off, k) = (i / m * m, i % m);
    let mzm = if zeta.is_multiple_of(2) { 1.0 } else { -1.0 };
    if k == 0 {
        (off + m - 1, mzm)
    } else if k == m - 1 {
        (off, -mzm)
    } else if k % 2 == 1 {
        (off + k + 1, 1.0)
    } else {
        (off + k - 1, -1.0)
    }
}

/// Covariance of the logical state `|ζ̄⟩`: every WQP empty (`M_{2l,2l+1} = 1`)
/// and both MZM pairs with `M_{1,2n} = (−1)^ζ` (1-based, per chain).
pub fn initial_covariance(n: usize, zeta: u8) -> Result<CovarianceState> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n} < 2")));
    }
    let mut m = RMat::zeros(4 * n, 4 * n);
    for i in 0..4 * n {
        let (k, s) = m0_partner(i, n, zeta);
        m[(i, k)] = s;
    }
    Ok(CovarianceState { m })
}

impl CovarianceState {
    /// Wraps a matrix after checking it is square and antisymmetric.
    pub fn from_matrix(m: RMat) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(4) {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        check("covariance antisymmetry", max_abs_real(&(&m + m.transpose())), 1e-12)?;
        Ok(CovarianceState { m })
    }

    pub fn matrix(&self) -> &RMat {
        &self.m
    }

    /// Sites per chain.
    pub fn n(&self) -> usize {
        self.m.nrows() / 4
    }

    /// `‖M Mᵀ − 1‖_max`; zero for pure states.
    pub fn purity_residual(&self) -> f64 {
        let d = self.m.nrows();
        max_abs_real(&(&self.m * self.m.transpose() - RMat::identity(d, d)))
    }

    /// State after conjugation by a Gaussian unitary acting as `c ↦ R c`.
    pub fn rotated(&self, r: &RMat) -> Result<Self> {
        if r.nrows() != self.m.nrows() || r.ncols() != self.m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.m.nrows(),
                got: r.nrows(),
            });
        }
        Ok(CovarianceState {
            m: r * &self.m * r.transpose(),
        })
    }
}

/// Orthogonal change from the tetron's site Majoranas to its WQP/MZM Majoranas.
///
/// Row `a` of `o` holds the site-basis coefficients of the new Majorana `c'_a`,
/// so `c' = O c`; the matrix is block diagonal over the two chains.
#[derive(Debug, Clone)]
pub struct BasisChange {
    n: usize,
    o: RMat,
    chains: Option<Box<[ChainBasis; 2]>>,
}

impl BasisChange {
    pub fn from_chains(first: ChainBasis, second: ChainBasis) -> Result<Self> {
        let n = first.params.n;
        if second.params.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: second.params.n,
            });
        }
        let m = 2 * n;
        let mut o = RMat::zeros(2 * m, 2 * m);
        o.view_mut((0, 0), (m, m)).copy_from(&first.wannier.o);
        o.view_mut((m, m), (m, m)).copy_from(&second.wannier.o);
        Ok(BasisChange {
            n,
            o,
            chains: Some(Box::new([first, second])),
        })
    }

    /// Builds both chains' Wannier bases.
    pub fn from_params(first: &ChainParams, second: &ChainParams) -> Result<Self> {
        let first = chain_basis(&first.clone().with_chain_id(1))?;
        let second = chain_basis(&second.clone().with_chain_id(2))?;
        Self::from_chains(first, second)
    }

    /// Two identical clean chains.
    pub fn uniform(params: &ChainParams) -> Result<Self> {
        Self::from_params(params, params)
    }

    /// Any orthogonal `4n × 4n` matrix.
    pub fn from_matrix(o: RMat) -> Result<Self> {
        if o.nrows() != o.ncols() || !o.nrows().is_multiple_of(4) || o.nrows() < 8 {
            return Err(Error::InvalidInput(format!(
                "basis change must be 4n x 4n with n >= 2, got {}x{}",
                o.nrows(),
                o.ncols()
            )));
        }
        let d = o.nrows();
        check("basis orthogonality", max_abs_real(&(&o * o.transpose() - RMat::identity(d, d))), 1e-10)?;
        Ok(BasisChange {
            n: d / 4,
            o,
            chains: None,
        })
    }

    /// Sites per chain.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMat {
        &self.o
    }

    pub fn chains(&self) -> Option<&[ChainBasis; 2]> {
        self.chains.as_deref()
    }
}

/// `O R Oᵀ`: the error's action `c' ↦ R' c'` in the WQP basis.
///
/// Conjugation by `E_{p,j} = −i c_{2j−1} c_{2j}` maps `c_{2j−1} ↦ −c_{2j−1}`
/// and `c_{2j} ↦ −c_{2j}`, so `R` is the diagonal sign matrix of the flipped
/// Majoranas and `O R Oᵀ = 1 − 2 O_F O_Fᵀ` with `O_F` the flipped columns.
pub fn error_rotation(sample: &ErrorSample, basis: &BasisChange) -> Result<RMat> {
    let n = basis.n();
    if sample.j1().iter().chain(sample.j2()).any(|&j| j == 0 || j > n) {
        return Err(Error::InvalidInput(format!("error sample site outside 1..={n}")));
    }
    let d = 4 * n;
    let mut r = RMat::identity(d, d);
    for f in sample.flipped_majoranas(n) {
        let col = basis.o.column(f);
        r -= 2.0 * col * col.transpose();
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RVec;

    #[test]
    fn m0_pattern() {
        let m = initial_covariance(2, 0).unwrap();
        let m = m.matrix();
        assert_eq!(m[(1, 2)], 1.0);
        assert_eq!(m[(2, 1)], -1.0);
        assert_eq!(m[(0, 3)], 1.0);
        assert_eq!(m[(3, 0)], -1.0);
        assert_eq!(m[(4, 7)], 1.0);
        assert_eq!(m[(5, 6)], 1.0);
        assert_eq!(m.iter().filter(|x| **x != 0.0).count(), 8);
        let m1 = initial_covariance(3, 1).unwrap();
        assert_eq!(m1.matrix()[(0, 5)], -1.0);
        assert_eq!(m1.matrix()[(6, 11)], -1.0);
        for n in 2..7 {
            assert_eq!(initial_covariance(n, 0).unwrap().purity_residual(), 0.0);
        }
    }

    #[test]
    fn rotation_is_sign_flip_at_identity_basis() {
        let n = 3;
        let basis = BasisChange::from_matrix(RMat::identity(4 * n, 4 * n)).unwrap();
        assert_eq!(error_rotation(&ErrorSample::empty(), &basis).unwrap(), RMat::identity(12, 12));
        let s = ErrorSample::new(n, vec![2], vec![3]).unwrap();
        let r = error_rotation(&s, &basis).unwrap();
        let diag: Vec<f64> = r.diagonal().iter().copied().collect();
        let mut expect = vec![1.0; 12];
        for i in [2, 3, 10, 11] {
            expect[i] = -1.0;
        }
        assert_eq!(diag, expect);
        assert!(error_rotation(&ErrorSample::from_masks(4, 0b1000, 0), &basis).is_err());
    }

    #[test]
    fn rotation_preserves_purity_for_real_basis() {
        let basis = BasisChange::uniform(&ChainParams::new(0.3, 1.0, 0.4, 6)).unwrap();
        let m = initial_covariance(6, 0).unwrap();
        let s = ErrorSample::new(6, vec![1, 4, 5], vec![2]).unwrap();
        let r = error_rotation(&s, &basis).unwrap();
        let rt = m.rotated(&r).unwrap();
        assert!(rt.purity_residual() < 1e-9);
        let twice = rt.rotated(&r).unwrap();
        assert!(max_abs_real(&(twice.matrix() - m.matrix())) < 1e-12);
        let v = RVec::from_fn(24, |i, _| i as f64);
        assert!(((&r * &v).norm() - v.norm()).abs() < 1e-10);
    }
}
