use num_complex::Complex64;

use super::covariance::{m0_partner, BasisChange, CovarianceState};
use super::pfaffian::pfaffian;
use crate::codes::StabilizerSet;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec, RMat, I};
use crate::noise::ErrorSample;

/// Expectations this far outside their admissible range are clamped; larger
/// violations are errors.
pub const CLAMP_TOL: f64 = 1e-9;

/// Largest imaginary part tolerated in a Hermitian expectation value.
const IMAG_TOL: f64 = 1e-8;

/// Wick matrix `A_{jk} = ⟨L_j L_k⟩` of linear Majorana operators `L_j = Σ_a v_{j,a} c_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    pub a: CMat,
}

impl MomentMatrix {
    /// `⟨L_1 L_2 ⋯ L_{2m}⟩`.
    pub fn pfaffian(&self) -> Result<Complex64> {
        pfaffian(&self.a)
    }
}

/// `A_{jk} = v_jᵀ(1 + iM)v_k` for `j < k`, antisymmetrically completed.
pub fn second_moments(state: &CovarianceState, ops: &[CVec]) -> Result<MomentMatrix> {
    if !ops.len().is_multiple_of(2) {
        return Err(Error::OddDimension(ops.len()));
    }
    let dim = state.matrix().nrows();
    if let Some(v) = ops.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: v.len(),
        });
    }
    let g = CMat::identity(dim, dim) + state.matrix().map(|x| I * x);
    let k = ops.len();
    let mut a = CMat::zeros(k, k);
    for j in 0..k {
        let gv = g.transpose() * &ops[j];
        for l in j + 1..k {
            let x = gv.dot(&ops[l]);
            a[(j, l)] = x;
            a[(l, j)] = -x;
        }
    }
    Ok(MomentMatrix { a })
}

type SparseOp = Vec<(usize, Complex64)>;

fn sparse_moments(m: &RMat, ops: &[SparseOp]) -> CMat {
    let k = ops.len();
    let mut a = CMat::zeros(k, k);
    for j in 0..k {
        for l in j + 1..k {
            let mut x = Complex64::new(0.0, 0.0);
            for &(p, u) in &ops[j] {
                for &(q, v) in &ops[l] {
                    let g = if p == q { c(1.0) } else { I * m[(p, q)] };
                    x += u * v * g;
                }
            }
            a[(j, l)] = x;
            a[(l, j)] = -x;
        }
    }
    a
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * (1.0 + z.re.abs()) {
        return Err(Error::invariant(format!("{what} imaginary part"), z.im.abs(), IMAG_TOL));
    }
    Ok(z.re)
}

/// `(⟨P_S⟩, ⟨P_S Z̄ P_S⟩)` from the covariance entries among the given indices.
///
/// `pairs` are the `(c'_{2l}, c'_{2l+1})` positions of the QP stabilizers in
/// ascending `(p, l)`; `mzm` are the positions of `γ_1..γ_4`.
fn stabilizer_expectations(m: &RMat, pairs: &[(usize, usize)], mzm: [usize; 4]) -> Result<(f64, f64)> {
    // (1 − i c_a c_b)/2 = c_a (c_a − i c_b)/2
    let mut base: Vec<SparseOp> = Vec::with_capacity(2 * pairs.len() + 4);
    for &(a, b) in pairs {
        base.push(vec![(a, c(1.0))]);
        base.push(vec![(a, c(1.0)), (b, -I)]);
    }
    let with = |extra: &[usize]| -> Result<Complex64> {
        let mut ops = base.clone();
        ops.extend(extra.iter().map(|&i| vec![(i, c(1.0))]));
        pfaffian(&sparse_moments(m, &ops))
    };
    let scale = 0.5f64.powi(pairs.len() as i32);
    let [g1, g2, g3, g4] = mzm;
    let p_qp = with(&[])?;
    // Q_parity = −γ_1γ_2γ_3γ_4
    let p_par = -with(&[g1, g2, g3, g4])?;
    let z12 = -I * with(&[g1, g2])?;
    let z34 = -I * with(&[g3, g4])?;
    let ps = real_part((p_qp + p_par) * (0.5 * scale), "<P_S>")?;
    let zn = real_part((z12 + z34) * (0.5 * scale), "Z numerator")?;

    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&ps) {
        return Err(Error::invariant("<P_S> outside [0, 1]", (ps - ps.clamp(0.0, 1.0)).abs(), CLAMP_TOL));
    }
    let ps = ps.clamp(0.0, 1.0);
    if zn.abs() > ps + CLAMP_TOL {
        return Err(Error::invariant("|Z numerator| above <P_S>", zn.abs() - ps, CLAMP_TOL));
    }
    Ok((ps, zn.clamp(-ps, ps)))
}

fn check_n(state_n: usize, stab: &StabilizerSet) -> Result<()> {
    if state_n != stab.n {
        return Err(Error::DimensionMismatch {
            expected: stab.n,
            got: state_n,
        });
    }
    Ok(())
}

fn qp_pairs(stab: &StabilizerSet) -> Vec<(usize, usize)> {
    stab.qp_labels().map(|(p, l)| stab.qp_support(p, l)).collect()
}

/// `⟨P_S⟩`, the probability that no stabilizer reports a detection.
pub fn expectation_ps(state: &CovarianceState, stab: &StabilizerSet) -> Result<f64> {
    check_n(state.n(), stab)?;
    Ok(stabilizer_expectations(state.matrix(), &qp_pairs(stab), stab.mzm_support())?.0)
}

/// `⟨P_S Z̄ P_S⟩` with `Z̄ = −iγ_1γ_2`.
pub fn expectation_znum(state: &CovarianceState, stab: &StabilizerSet) -> Result<f64> {
    check_n(state.n(), stab)?;
    Ok(stabilizer_expectations(state.matrix(), &qp_pairs(stab), stab.mzm_support())?.1)
}

/// `(⟨P_S⟩, Znum)` of `E|0̄⟩` for one code.
pub fn evaluate_sample(basis: &BasisChange, stab: &StabilizerSet, sample: &ErrorSample) -> Result<(f64, f64)> {
    Ok(evaluate_codes(basis, std::slice::from_ref(stab), sample)?[0])
}

/// `(⟨P_S⟩, Znum)` of `E|0̄⟩` for several codes sharing one error.
///
/// Only the rows and columns of the rotated covariance touched by some
/// stabilizer are formed: with `B = (1 − 2 O_F O_Fᵀ)[U, :]` the block is `B M0 Bᵀ`.
pub fn evaluate_codes(basis: &BasisChange, stabs: &[StabilizerSet], sample: &ErrorSample) -> Result<Vec<(f64, f64)>> {
    let n = basis.n();
    for stab in stabs {
        check_n(n, stab)?;
    }
    let dim = 4 * n;
    let mut local = vec![usize::MAX; dim];
    let mut union: Vec<usize> = stabs
        .iter()
        .flat_map(|s| {
            let mut v: Vec<usize> = qp_pairs(s).into_iter().flat_map(|(a, b)| [a, b]).collect();
            v.extend(s.mzm_support());
            v
        })
        .collect();
    union.sort_unstable();
    union.dedup();
    for (r, &u) in union.iter().enumerate() {
        local[u] = r;
    }

    let o = basis.matrix();
    let flipped = sample.flipped_majoranas(n);
    if flipped.iter().any(|&f| f >= dim) {
        return Err(Error::InvalidInput(format!("error sample site outside 1..={n}")));
    }
    let rows = union.len();
    let mut b = RMat::zeros(rows, dim);
    for (r, &u) in union.iter().enumerate() {
        b[(r, u)] = 1.0;
    }
    if !flipped.is_empty() {
        let o_f = o.select_columns(&flipped);
        let o_uf = o_f.select_rows(&union);
        b -= 2.0 * o_uf * o_f.transpose();
    }
    let mut cm = RMat::zeros(rows, dim);
    for k in 0..dim {
        let (p, s) = m0_partner(k, n, 0);
        // M0[p, k] = −s
        cm.set_column(k, &(b.column(p) * -s));
    }
    let block = &cm * b.transpose();
    let block = (&block - block.transpose()) * 0.5;

    stabs
        .iter()
        .map(|s| {
            let pairs: Vec<(usize, usize)> = qp_pairs(s).into_iter().map(|(a, b)| (local[a], local[b])).collect();
            let mzm = s.mzm_support().map(|i| local[i]);
            stabilizer_expectations(&block, &pairs, mzm)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdg::ChainParams;
    use crate::codes::{stabilizer_set, CodeSpec};
    use crate::gaussian::{error_rotation, initial_covariance};

    fn stabs(n: usize, d: usize) -> StabilizerSet {
        stabilizer_set(&CodeSpec::coarsest(n, d).unwrap()).unwrap()
    }

    #[test]
    fn moments_of_single_pairs() {
        let m = initial_covariance(2, 0).unwrap();
        let e = |i: usize| CVec::from_fn(8, |r, _| if r == i { c(1.0) } else { c(0.0) });
        let a = second_moments(&m, &[e(1), e(2)]).unwrap();
        assert_eq!(a.a[(0, 1)], I);
        let a = second_moments(&m, &[e(3), e(3)]).unwrap();
        assert_eq!(a.a[(0, 1)], c(1.0));
        assert!(second_moments(&m, &[e(1)]).is_err());
    }

    #[test]
    fn code_state_is_stabilized() {
        for (n, d) in [(2, 0), (5, 2), (8, 3)] {
            let m = initial_covariance(n, 0).unwrap();
            let s = stabs(n, d);
            assert!((expectation_ps(&m, &s).unwrap() - 1.0).abs() < 1e-10);
            assert!((expectation_znum(&m, &s).unwrap() - 1.0).abs() < 1e-10);
            let m1 = initial_covariance(n, 1).unwrap();
            assert!((expectation_znum(&m1, &s).unwrap() + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn block_path_matches_full_rotation() {
        let n = 6;
        let basis = BasisChange::from_params(
            &ChainParams::new(0.3, 1.0, 0.4, n),
            &ChainParams::new(0.5, 1.0, 0.7, n),
        )
        .unwrap();
        let m0 = initial_covariance(n, 0).unwrap();
        let sets = [stabs(n, 0), stabs(n, 1), stabs(n, 2)];
        for (m1, m2) in [(0b1, 0b0), (0b100101, 0b10), (0b111111, 0b110000), (0, 0)] {
            let sample = ErrorSample::from_masks(n, m1, m2);
            let r = error_rotation(&sample, &basis).unwrap();
            let m = m0.rotated(&r).unwrap();
            let fast = evaluate_codes(&basis, &sets, &sample).unwrap();
            for (s, (ps, zn)) in sets.iter().zip(fast) {
                assert!((expectation_ps(&m, s).unwrap() - ps).abs() < 1e-12);
                assert!((expectation_znum(&m, s).unwrap() - zn).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fixed_point_detection_is_deterministic() {
        let n = 8;
        let basis = BasisChange::uniform(&ChainParams::fixed_point(n)).unwrap();
        let s = stabs(n, 2);
        // Single error inside a detection interval.
        let (ps, _) = evaluate_sample(&basis, &s, &ErrorSample::new(n, vec![2], vec![]).unwrap()).unwrap();
        assert!(ps.abs() < 1e-10);
        // Both chains' left regions fully covered: undetected logical flip.
        let e = ErrorSample::new(n, vec![1, 2, 3], vec![1, 2, 3]).unwrap();
        let (ps, zn) = evaluate_sample(&basis, &s, &e).unwrap();
        assert!((ps - 1.0).abs() < 1e-10);
        assert!((zn + 1.0).abs() < 1e-10);
        assert!(s.fixed_point_flips_logical_z(&e));
        assert!(s.fixed_point_syndrome(&e).is_empty());
    }
}
