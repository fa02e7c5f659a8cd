//! Dense Fock-space brute force for small tetrons (`n ≤ 5` sites per chain).
//!
//! Modes are Jordan–Wigner ordered chain 1 sites `1..n`, then chain 2 sites
//! `1..n`; basis state bit `k` is the occupation of mode `k`. With
//! `a_k = (c_{2k+1} + i c_{2k+2})/2` every Majorana maps basis states to basis
//! states with a phase, which is how they are stored and applied.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic;
use crate::bdg::ChainParams;
use crate::codes::{stabilizer_set, CodeSpec, StabilizerSet};
use crate::error::{check, Error, Result};
use crate::gaussian::{
    error_rotation, evaluate_sample, expectation_ps, expectation_znum, initial_covariance, pfaffian,
    second_moments, BasisChange, CovarianceState,
};
use crate::linalg::{majorana_unitary, max_abs_real, CMat, CVec, RMat};
use crate::noise::{
    estimate_rates, pairwise_sum, sample_error, sample_rng, summarize, ErrorSample, RateEstimate, Sampling,
};

pub const MAX_ORACLE_N: usize = 5;
/// Largest `n` for exhaustive dense channel averages.
pub const MAX_EXHAUSTIVE_ORACLE_N: usize = 4;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const IM: Complex64 = Complex64::new(0.0, 1.0);
const HALF: Complex64 = Complex64::new(0.5, 0.0);

/// The `4n` tetron Majoranas as signed permutations of the Fock basis.
#[derive(Debug, Clone)]
pub struct DenseMajoranaSet {
    n: usize,
    /// `c_a |s⟩ = phase[a][s] |s ^ (1 << a/2)⟩`.
    phase: Vec<Vec<Complex64>>,
}

pub fn build_majoranas(n: usize) -> Result<DenseMajoranaSet> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one site".into()));
    }
    if n > MAX_ORACLE_N {
        return Err(Error::TooLarge { n, max: MAX_ORACLE_N });
    }
    let modes = 2 * n;
    let dim = 1usize << modes;
    let mut phase = Vec::with_capacity(2 * modes);
    for k in 0..modes {
        let below = (1usize << k) - 1;
        let string = |s: usize| if (s & below).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        // c_odd = a + a†
        phase.push((0..dim).map(|s| ONE * string(s)).collect());
        // c_even = −i(a − a†)
        phase.push(
            (0..dim)
                .map(|s| {
                    let occupied = s >> k & 1 == 1;
                    (if occupied { -IM } else { IM }) * string(s)
                })
                .collect(),
        );
    }
    Ok(DenseMajoranaSet { n, phase })
}

impl DenseMajoranaSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << (2 * self.n)
    }

    pub fn len(&self) -> usize {
        self.phase.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phase.is_empty()
    }

    pub fn apply(&self, a: usize, v: &CVec) -> CVec {
        let bit = 1usize << (a / 2);
        let ph = &self.phase[a];
        CVec::from_fn(v.len(), |t, _| {
            let s = t ^ bit;
            ph[s] * v[s]
        })
    }

    /// `Σ_a coeffs[a] c_a |v⟩`.
    pub fn apply_linear(&self, coeffs: &[Complex64], v: &CVec) -> CVec {
        let mut out = CVec::zeros(v.len());
        for (a, &x) in coeffs.iter().enumerate() {
            if x != ZERO {
                out += self.apply(a, v) * x;
            }
        }
        out
    }

    pub fn apply_real(&self, coeffs: &[f64], v: &CVec) -> CVec {
        let cs: Vec<Complex64> = coeffs.iter().map(|&x| ONE * x).collect();
        self.apply_linear(&cs, v)
    }

    /// `c_a` as a dense matrix.
    pub fn matrix(&self, a: usize) -> CMat {
        let dim = self.dim();
        let bit = 1usize << (a / 2);
        let mut m = CMat::zeros(dim, dim);
        for s in 0..dim {
            m[(s ^ bit, s)] = self.phase[a][s];
        }
        m
    }

    /// `(−1)^N |v⟩`.
    pub fn parity(&self, v: &CVec) -> CVec {
        CVec::from_fn(v.len(), |s, _| if s.count_ones() % 2 == 0 { v[s] } else { -v[s] })
    }

    /// `E(J_1, J_2)|v⟩` with `E_{p,j} = −i c_{2j−1} c_{2j}`.
    pub fn apply_error(&self, sample: &ErrorSample, v: &CVec) -> CVec {
        let mut out = v.clone();
        let flips = sample.flipped_majoranas(self.n);
        for pair in flips.chunks(2) {
            out = self.apply(pair[0], &self.apply(pair[1], &out)) * -IM;
        }
        out
    }
}

/// Unit-norm Fock-space state.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub psi: CVec,
}

impl DenseState {
    pub fn new(psi: CVec) -> Result<Self> {
        check("dense state normalization", (psi.norm() - 1.0).abs(), 1e-12)?;
        Ok(DenseState { psi })
    }
}

/// Majorana-coordinate coefficients (length `4n`) of the operator represented
/// by a particle/hole vector of chain `chain`.
fn operator_coeffs(v: &CVec, chain: usize, n: usize) -> Vec<Complex64> {
    let m = majorana_unitary(n).adjoint() * v;
    let mut out = vec![ZERO; 4 * n];
    for (b, x) in m.iter().enumerate() {
        out[chain * 2 * n + b] = x * std::f64::consts::FRAC_1_SQRT_2;
    }
    out
}

fn row(o: &RMat, a: usize) -> Vec<f64> {
    o.row(a).iter().copied().collect()
}

/// `|0̄⟩`: all WQPs empty and `−iγ_1γ_2 = −iγ_3γ_4 = +1`.
///
/// Built by projecting seeded random vectors; fails unless the projections of
/// two independent vectors agree up to phase.
pub fn logical_zero_state(set: &DenseMajoranaSet, basis: &BasisChange) -> Result<DenseState> {
    let n = set.n();
    if basis.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: basis.n() });
    }
    let o = basis.matrix();
    // φ† and φ coefficient lists per WQP.
    let mut annihilators: Vec<(Vec<Complex64>, Vec<Complex64>)> = Vec::new();
    for chain in 0..2 {
        for l in 1..n {
            let dagger = match basis.chains() {
                Some(ch) => operator_coeffs(&ch[chain].wannier.creation.column(l - 1).into_owned(), chain, n),
                None => {
                    let off = chain * 2 * n;
                    let (x, y) = (row(o, off + 2 * l - 1), row(o, off + 2 * l));
                    x.iter().zip(&y).map(|(a, b)| Complex64::new(*a, -*b) * 0.5).collect()
                }
            };
            let plain = dagger.iter().map(|z| z.conj()).collect();
            annihilators.push((dagger, plain));
        }
    }
    let mzm_pairs = [(0, 2 * n - 1), (2 * n, 4 * n - 1)];

    let project = |mut v: CVec| {
        for (dagger, plain) in &annihilators {
            // φφ† projects on φ-empty states.
            v = set.apply_linear(plain, &set.apply_linear(dagger, &v));
        }
        for &(a, b) in &mzm_pairs {
            let q = set.apply_real(&row(o, a), &set.apply_real(&row(o, b), &v)) * -IM;
            v = (&v + q) * HALF;
        }
        v
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7);
    let mut random = || {
        CVec::from_fn(set.dim(), |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    };
    let first = project(random());
    let second = project(random());
    let (n1, n2) = (first.norm(), second.norm());
    if n1 < 1e-6 || n2 < 1e-6 {
        return Err(Error::invariant("logical state projection is empty", n1.min(n2), 1e-6));
    }
    let psi = first / Complex64::new(n1, 0.0);
    let overlap = psi.dotc(&(second / Complex64::new(n2, 0.0))).norm();
    check("logical state uniqueness", 1.0 - overlap, 1e-8)?;
    DenseState::new(psi)
}

/// `M_ab = −i⟨c'_a c'_b⟩` (`a ≠ b`) in the WQP basis.
pub fn dense_covariance(set: &DenseMajoranaSet, basis: &BasisChange, state: &DenseState) -> Result<RMat> {
    let d = 4 * set.n();
    let o = basis.matrix();
    let images: Vec<CVec> = (0..d).map(|a| set.apply_real(&row(o, a), &state.psi)).collect();
    let mut m = RMat::zeros(d, d);
    let mut imag: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            if a != b {
                let x = images[a].dotc(&images[b]) * -IM;
                imag = imag.max(x.im.abs());
                m[(a, b)] = x.re;
            }
        }
    }
    check("dense covariance reality", imag, 1e-10)?;
    Ok(m)
}

/// `(⟨P_S⟩, ⟨P_S Z̄ P_S⟩)` by explicit projection.
pub fn dense_expectations(
    set: &DenseMajoranaSet,
    basis: &BasisChange,
    stab: &StabilizerSet,
    state: &DenseState,
) -> (f64, f64) {
    let o = basis.matrix();
    let q = |a: usize, b: usize, v: &CVec| set.apply_real(&row(o, a), &set.apply_real(&row(o, b), v)) * -IM;
    let mut v = state.psi.clone();
    for (p, l) in stab.qp_labels() {
        let (a, b) = stab.qp_support(p, l);
        v = (&v + q(a, b, &v)) * HALF;
    }
    let [g1, g2, g3, g4] = stab.mzm_support();
    // Q_parity = (−iγ_1γ_2)(−iγ_3γ_4)
    let par = q(g1, g2, &q(g3, g4, &v));
    v = (&v + par) * HALF;
    let ps = v.norm_squared();
    let zn = v.dotc(&q(g1, g2, &v)).re;
    (ps, zn)
}

/// Dense channel average for one code; exhaustive enumeration is
/// lexicographic over `(J_1, J_2)`.
pub fn exact_rates(basis: &BasisChange, code: &CodeSpec, q: f64, sampling: Sampling) -> Result<RateEstimate> {
    let n = basis.n();
    let set = build_majoranas(n)?;
    let stab = stabilizer_set(code)?;
    let zero = logical_zero_state(&set, basis)?;
    let eval = |s: &ErrorSample| {
        let state = DenseState {
            psi: set.apply_error(s, &zero.psi),
        };
        dense_expectations(&set, basis, &stab, &state)
    };
    match sampling {
        Sampling::Exhaustive => {
            if n > MAX_EXHAUSTIVE_ORACLE_N {
                return Err(Error::TooLarge { n, max: MAX_EXHAUSTIVE_ORACLE_N });
            }
            let size = 1u64 << n;
            let (mut ps, mut zn) = (Vec::new(), Vec::new());
            for m1 in 0..size {
                for m2 in 0..size {
                    let s = ErrorSample::from_masks(n, m1, m2);
                    let w = crate::noise::sample_probability(&s, q, n);
                    let (p, z) = eval(&s);
                    ps.push(w * p);
                    zn.push(w * z);
                }
            }
            let (ps, zn) = (pairwise_sum(&ps), pairwise_sum(&zn));
            if !(ps > 0.0) {
                return Err(Error::InsufficientStatistics { mean: ps, stderr: 0.0 });
            }
            Ok(RateEstimate {
                p_loss: (1.0 - ps).clamp(0.0, 1.0),
                p_loss_se: 0.0,
                p_bitflip: ((1.0 - zn / ps) / 2.0).clamp(0.0, 1.0),
                p_bitflip_se: 0.0,
                samples: size * size,
                seed: 0,
            })
        }
        Sampling::MonteCarlo { samples, seed } => {
            let (ps, zn): (Vec<f64>, Vec<f64>) = (0..samples)
                .map(|i| eval(&sample_error(&mut sample_rng(seed, i), q, n)))
                .unzip();
            summarize(&ps, &zn, seed)
        }
    }
}

/// Outcome of one named oracle cross-check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Random topological-phase chain with `μ ∈ [0, 0.9]`, `Δ ∈ [0.1, 1]`, `w = 1`.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ChainParams {
    ChainParams::new(rng.random_range(0.0..=0.9), 1.0, rng.random_range(0.1..=1.0), n)
}

/// Largest deviation between Gaussian and dense `(⟨P_S⟩, Znum)` over `count`
/// random (parameters, code, error) draws with `n` sites per chain.
pub fn gaussian_dense_deviation(n: usize, count: usize, seed: u64) -> Result<(f64, f64)> {
    let set = build_majoranas(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut dev_ps, mut dev_zn): (f64, f64) = (0.0, 0.0);
    for _ in 0..count {
        let (p1, p2) = (random_params(&mut rng, n), random_params(&mut rng, n));
        let basis = BasisChange::from_params(&p1, &p2)?;
        let d = rng.random_range(0..n.div_ceil(2));
        let stab = stabilizer_set(&CodeSpec::coarsest(n, d)?)?;
        let q = rng.random_range(0.05..0.6);
        let sample = sample_error(&mut rng, q, n);
        let zero = logical_zero_state(&set, &basis)?;
        let state = DenseState {
            psi: set.apply_error(&sample, &zero.psi),
        };
        let (ps_d, zn_d) = dense_expectations(&set, &basis, &stab, &state);
        let (ps_g, zn_g) = evaluate_sample(&basis, &stab, &sample)?;
        dev_ps = dev_ps.max((ps_d - ps_g).abs());
        dev_zn = dev_zn.max((zn_d - zn_g).abs());
    }
    Ok((dev_ps, dev_zn))
}

fn outcome(name: &str, result: Result<(bool, String)>) -> CheckOutcome {
    match result {
        Ok((passed, detail)) => CheckOutcome {
            name: name.into(),
            passed,
            detail,
        },
        Err(e) => CheckOutcome {
            name: name.into(),
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn anticommutators(n: usize) -> Result<(bool, String)> {
    let set = build_majoranas(n)?;
    let dim = set.dim();
    let mats: Vec<CMat> = (0..set.len()).map(|a| set.matrix(a)).collect();
    let mut worst: f64 = 0.0;
    for a in 0..mats.len() {
        for b in 0..mats.len() {
            let ac = &mats[a] * &mats[b] + &mats[b] * &mats[a];
            let target = if a == b { CMat::identity(dim, dim) * (ONE * 2.0) } else { CMat::zeros(dim, dim) };
            worst = worst.max(crate::linalg::max_abs(&(ac - target)));
        }
        worst = worst.max(crate::linalg::max_abs(&(&mats[a] - mats[a].adjoint())));
    }
    Ok((worst < 1e-12, format!("max residual {worst:.1e}")))
}

fn code_state_checks(params: &ChainParams) -> Result<(bool, String)> {
    let n = params.n;
    let basis = BasisChange::uniform(params)?;
    let set = build_majoranas(n)?;
    let zero = logical_zero_state(&set, &basis)?;
    let m = dense_covariance(&set, &basis, &zero)?;
    let cov_dev = max_abs_real(&(m - initial_covariance(n, 0)?.matrix()));
    let d = (n - 1) / 2;
    let stab = stabilizer_set(&CodeSpec::coarsest(n, d)?)?;
    let (ps, zn) = dense_expectations(&set, &basis, &stab, &zero);
    let parity = zero.psi.dotc(&set.parity(&zero.psi)).re;
    let passed = cov_dev < 1e-10 && (ps - 1.0).abs() < 1e-10 && (zn - 1.0).abs() < 1e-10 && (parity - 1.0).abs() < 1e-10;
    Ok((
        passed,
        format!("covariance dev {cov_dev:.1e}, <P_S> {ps:.12}, Znum {zn:.12}, parity {parity:.12}"),
    ))
}

fn rotation_check(seed: u64) -> Result<(bool, String)> {
    let n = 4;
    let set = build_majoranas(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = BasisChange::from_params(&random_params(&mut rng, n), &random_params(&mut rng, n))?;
    let zero = logical_zero_state(&set, &basis)?;
    let m0 = initial_covariance(n, 0)?;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let sample = sample_error(&mut rng, 0.3, n);
        let state = DenseState {
            psi: set.apply_error(&sample, &zero.psi),
        };
        let dense = dense_covariance(&set, &basis, &state)?;
        let rotated = m0.rotated(&error_rotation(&sample, &basis)?)?;
        worst = worst.max(max_abs_real(&(dense - rotated.matrix())));
    }
    Ok((worst < 1e-10, format!("max deviation {worst:.1e} over 50 samples")))
}

fn wick_check(seed: u64) -> Result<(bool, String)> {
    let n = 3;
    let set = build_majoranas(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = BasisChange::from_params(&random_params(&mut rng, n), &random_params(&mut rng, n))?;
    let zero = logical_zero_state(&set, &basis)?;
    let mut worst: f64 = 0.0;
    for k in [2usize, 4, 6] {
        let sample = sample_error(&mut rng, 0.4, n);
        let state = DenseState {
            psi: set.apply_error(&sample, &zero.psi),
        };
        let cov = CovarianceState::from_matrix(dense_covariance(&set, &basis, &state)?)?;
        let ops: Vec<CVec> = (0..k)
            .map(|_| CVec::from_fn(4 * n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect();
        let wick = second_moments(&cov, &ops)?.pfaffian()?;
        // ops are in the WQP basis; convert to site coefficients for the dense product.
        let o = basis.matrix();
        let mut v = state.psi.clone();
        for op in ops.iter().rev() {
            let site: Vec<Complex64> = (0..4 * n).map(|s| (0..4 * n).map(|a| op[a] * o[(a, s)]).sum()).collect();
            v = set.apply_linear(&site, &v);
        }
        let dense = state.psi.dotc(&v);
        worst = worst.max((dense - wick).norm());
    }
    Ok((worst < 1e-10, format!("max deviation {worst:.1e}")))
}

fn fixed_point_stabilizer_identity(n: usize) -> Result<(bool, String)> {
    let set = build_majoranas(n)?;
    let basis = BasisChange::uniform(&ChainParams::fixed_point(n))?;
    let chains = basis.chains().expect("built from parameters");
    let dim = set.dim();
    let mut worst: f64 = 0.0;
    for (ci, chain) in chains.iter().enumerate() {
        for l in 1..n {
            let dagger = operator_coeffs(&chain.wannier.creation.column(l - 1).into_owned(), ci, n);
            let plain: Vec<Complex64> = dagger.iter().map(|z| z.conj()).collect();
            let off = ci * 2 * n;
            for s in 0..dim {
                let e = CVec::from_fn(dim, |r, _| if r == s { ONE } else { ZERO });
                let number = set.apply_linear(&dagger, &set.apply_linear(&plain, &e));
                let parity = &e - number * (ONE * 2.0);
                let stab = set.apply(off + 2 * l - 1, &set.apply(off + 2 * l, &e)) * -IM;
                worst = worst.max((parity - stab).camax());
            }
        }
    }
    Ok((worst < 1e-10, format!("max deviation {worst:.1e}")))
}

fn znum_normalization() -> Result<(bool, String)> {
    let n = 2;
    let set = build_majoranas(n)?;
    let basis = BasisChange::from_matrix(RMat::identity(4 * n, 4 * n))?;
    let stab = stabilizer_set(&CodeSpec::coarsest(n, 0)?)?;
    let [g1, g2, g3, g4] = stab.mzm_support();
    let o = basis.matrix();
    let q = |a: usize, b: usize, v: &CVec| set.apply_real(&row(o, a), &set.apply_real(&row(o, b), v)) * -IM;
    let dim = set.dim();
    let mut worst: f64 = 0.0;
    for s in 0..dim {
        let e = CVec::from_fn(dim, |r, _| if r == s { ONE } else { ZERO });
        let proj = |v: &CVec| (v + q(g1, g2, &q(g3, g4, v))) * HALF;
        let lhs = proj(&q(g1, g2, &proj(&e)));
        let rhs = (q(g1, g2, &e) + q(g3, g4, &e)) * HALF;
        worst = worst.max((lhs - rhs).camax());
    }
    Ok((worst < 1e-12, format!("P(-ig1g2)P vs (-ig1g2 - ig3g4)/2: {worst:.1e}")))
}

fn pfaffian_check(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for m in (2..=20).step_by(2) {
        let mut a = CMat::zeros(m, m);
        for i in 0..m {
            for j in i + 1..m {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                a[(i, j)] = z;
                a[(j, i)] = -z;
            }
        }
        let pf = pfaffian(&a)?;
        let det = a.determinant();
        worst = worst.max((pf * pf - det).norm() / det.norm());
    }
    Ok((worst < 1e-8, format!("max relative |Pf^2 - det| {worst:.1e}")))
}

fn exhaustive_agreement(params: &ChainParams, d: usize, q: f64) -> Result<(bool, String)> {
    let basis = BasisChange::uniform(params)?;
    let code = CodeSpec::coarsest(params.n, d)?;
    let dense = exact_rates(&basis, &code, q, Sampling::Exhaustive)?;
    let gauss = estimate_rates(&basis, &code, q, Sampling::Exhaustive)?;
    let dev = (dense.p_loss - gauss.p_loss).abs().max((dense.p_bitflip - gauss.p_bitflip).abs());
    let mut detail = format!(
        "dense ({:.6e}, {:.6e}) gaussian ({:.6e}, {:.6e})",
        dense.p_loss, dense.p_bitflip, gauss.p_loss, gauss.p_bitflip
    );
    let mut passed = dev < 1e-10;
    if params.is_fixed_point() {
        let a = analytic::fixed_point_rates(d, q)?;
        let dev_a = (dense.p_loss - a.p_loss).abs().max((dense.p_bitflip - a.p_bitflip).abs());
        detail.push_str(&format!(", closed form dev {dev_a:.1e}"));
        passed &= dev_a < 1e-10;
    }
    Ok((passed, detail))
}

/// Runs every oracle cross-check.
pub fn validate_suite(seed: u64) -> Vec<CheckOutcome> {
    let mut out = vec![
        outcome("majorana anticommutators n=2", anticommutators(2)),
        outcome("code state at fixed point n=2", code_state_checks(&ChainParams::fixed_point(2))),
        outcome("code state at mu=0.3 delta=0.4 n=4", code_state_checks(&ChainParams::new(0.3, 1.0, 0.4, 4))),
        outcome("error rotation vs dense covariance n=4", rotation_check(seed)),
        outcome("wick theorem vs dense products n=3", wick_check(seed)),
        outcome("fixed-point stabilizer equals WQP parity n=4", fixed_point_stabilizer_identity(4)),
        outcome("parity-projected Z normalization", znum_normalization()),
        outcome("pfaffian squared equals determinant", pfaffian_check(seed)),
    ];
    let dev = gaussian_dense_deviation(4, 100, seed).map(|(ps, zn)| {
        (ps < 1e-8 && zn < 1e-8, format!("max |dPS| {ps:.1e}, max |dZnum| {zn:.1e}"))
    });
    out.push(outcome("gaussian vs dense, 100 random draws n=4", dev));
    out.push(outcome(
        "exhaustive rates fixed point n=4 d=1 q=0.1",
        exhaustive_agreement(&ChainParams::fixed_point(4), 1, 0.1),
    ));
    out.push(outcome(
        "exhaustive rates mu=0.3 delta=0.4 n=4 d=1 q=0.1",
        exhaustive_agreement(&ChainParams::new(0.3, 1.0, 0.4, 4), 1, 0.1),
    ));
    out.push(outcome(
        "gaussian expectations on dense covariance",
        (|| {
            let n = 3;
            let set = build_majoranas(n)?;
            let basis = BasisChange::uniform(&ChainParams::new(0.5, 1.0, 0.6, n))?;
            let stab = stabilizer_set(&CodeSpec::coarsest(n, 1)?)?;
            let zero = logical_zero_state(&set, &basis)?;
            let sample = ErrorSample::new(n, vec![1], vec![3])?;
            let state = DenseState {
                psi: set.apply_error(&sample, &zero.psi),
            };
            let cov = CovarianceState::from_matrix(dense_covariance(&set, &basis, &state)?)?;
            let (ps, zn) = dense_expectations(&set, &basis, &stab, &state);
            let dev = (expectation_ps(&cov, &stab)? - ps).abs().max((expectation_znum(&cov, &stab)? - zn).abs());
            Ok((dev < 1e-10, format!("deviation {dev:.1e}")))
        })(),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_majoranas() {
        let set = build_majoranas(1).unwrap();
        assert_eq!(set.len(), 4);
        assert_eq!(set.dim(), 4);
        assert!(anticommutators(1).unwrap().0);
        assert!(build_majoranas(6).is_err());
        // c_a² = 1 and parity commutes with bilinears.
        let set = build_majoranas(2).unwrap();
        for a in 0..8 {
            let m = set.matrix(a);
            assert!(crate::linalg::max_abs(&(&m * &m - CMat::identity(16, 16))) < 1e-15);
        }
        let par = CMat::from_fn(16, 16, |r, k| if r == k { ONE * if r.count_ones() % 2 == 0 { 1.0 } else { -1.0 } } else { ZERO });
        let bil = set.matrix(1) * set.matrix(6);
        assert!(crate::linalg::max_abs(&(&par * &bil - &bil * &par)) < 1e-15);
    }

    #[test]
    fn fixed_point_code_state() {
        let (passed, detail) = code_state_checks(&ChainParams::fixed_point(2)).unwrap();
        assert!(passed, "{detail}");
    }

    #[test]
    fn znum_carries_one_half() {
        let (passed, detail) = znum_normalization().unwrap();
        assert!(passed, "{detail}");
    }

    #[test]
    fn dense_rates_at_q_zero() {
        let basis = BasisChange::uniform(&ChainParams::fixed_point(2)).unwrap();
        let r = exact_rates(&basis, &CodeSpec::coarsest(2, 0).unwrap(), 0.0, Sampling::Exhaustive).unwrap();
        assert!(r.p_loss.abs() < 1e-12 && r.p_bitflip.abs() < 1e-12);
    }
}
