//! Quasiparticle projector, quasiparticle position operator and the Wannier
//! quasiparticle (WQP) Majorana basis of a single chain.

use log::debug;

use crate::bdg::{self, ChainParams, QuasiparticleSpectrum, Tolerances};
use crate::error::{check, Error, Result};
use crate::linalg::{
    c, hermitian_eigh, hermiticity_residual, max_abs, max_abs_real, ph_conjugate_matrix,
    symmetric_eigh, CMat, CVec, RMat, RVec,
};

/// Centers closer than this are flagged as degenerate.
pub const CENTER_DEGENERACY_TOL: f64 = 1e-6;

/// `P_qp = Σ_{k≥1} |e_k⟩⟨e_k|`, the projector on quasiparticle creation operators.
#[derive(Debug, Clone)]
pub struct QpProjector {
    matrix: CMat,
    pub excluded_mode_index: usize,
}

impl QpProjector {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// `P̄_qp = τ_xK P_qp Kτ_x`, the projector on annihilation operators.
    pub fn hole_projector(&self) -> CMat {
        ph_conjugate_matrix(&self.matrix)
    }

    /// `N_qp = P_qp − P̄_qp`.
    pub fn number_operator(&self) -> CMat {
        &self.matrix - self.hole_projector()
    }

    pub fn idempotency_residual(&self) -> f64 {
        max_abs(&(&self.matrix * &self.matrix - &self.matrix))
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `max |P_qp P̄_qp|`.
    pub fn overlap_residual(&self) -> f64 {
        max_abs(&(&self.matrix * self.hole_projector()))
    }
}

pub fn build_pqp(spec: &QuasiparticleSpectrum) -> Result<QpProjector> {
    let n = spec.n();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "spectrum has {n} modes, need at least 2"
        )));
    }
    let v = spec.modes().columns(1, n - 1);
    let p = QpProjector {
        matrix: v * v.adjoint(),
        excluded_mode_index: 0,
    };
    check("P_qp idempotency", p.idempotency_residual(), 1e-10)?;
    check("P_qp trace", (p.trace() - (n - 1) as f64).abs(), 1e-10)?;
    check("P_qp P̄_qp = 0", p.overlap_residual(), 1e-10)?;
    Ok(p)
}

/// `X_qp = P_qp X̃ P_qp − P̄_qp X̃ P̄_qp` with `X̃ = Σ_j j (|j,1⟩⟨j,1| + |j,2⟩⟨j,2|)`.
#[derive(Debug, Clone)]
pub struct PositionOperator {
    matrix: CMat,
    projector: QpProjector,
}

impl PositionOperator {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn projector(&self) -> &QpProjector {
        &self.projector
    }

    pub fn particle_hole_residual(&self) -> f64 {
        max_abs(&(ph_conjugate_matrix(&self.matrix) + &self.matrix))
    }

    pub fn commutator_residual(&self) -> f64 {
        let nqp = self.projector.number_operator();
        max_abs(&(&self.matrix * &nqp - &nqp * &self.matrix))
    }
}

/// Site-position operator `X̃` (1-based site labels).
pub fn site_position(n: usize) -> CMat {
    CMat::from_fn(2 * n, 2 * n, |r, k| {
        if r == k {
            c((r / 2 + 1) as f64)
        } else {
            c(0.0)
        }
    })
}

pub fn build_xqp(p: &QpProjector) -> Result<PositionOperator> {
    let n = p.matrix.nrows() / 2;
    let xt = site_position(n);
    let pb = p.hole_projector();
    let matrix = &p.matrix * &xt * &p.matrix - &pb * &xt * &pb;
    let x = PositionOperator {
        matrix,
        projector: p.clone(),
    };
    check("X_qp hermiticity", hermiticity_residual(&x.matrix), 1e-10)?;
    check("X_qp particle-hole", x.particle_hole_residual(), 1e-10)?;
    check("[X_qp, N_qp] = 0", x.commutator_residual(), 1e-10)?;
    Ok(x)
}

/// Real orthogonal change of Majorana basis for one chain.
///
/// Row 0 is `γ_L`, rows `2l−1, 2l` (for `l = 1..n−1`) are the WQP Majoranas
/// `c'_{2l}, c'_{2l+1}`, row `2n−1` is `γ_R`. Each row lists the coefficients
/// of the new Majorana in the site Majoranas `c_1..c_{2n}`. With this
/// convention `−i c'_{2l} c'_{2l+1} = 1 − 2 φ†_l φ_l`.
#[derive(Debug, Clone)]
pub struct WannierBasis {
    /// Sorted WQP centers `x_1 ≤ … ≤ x_{n−1}` in 1-based site units.
    pub centers: Vec<f64>,
    /// Column `l−1` is `|φ_l⟩` (creation operator) in particle/hole coordinates.
    pub creation: CMat,
    /// The orthogonal matrix described above.
    pub o: RMat,
    /// Pairs `(l, l+1)` whose centers coincide within [`CENTER_DEGENERACY_TOL`].
    pub degenerate_centers: Vec<(usize, usize)>,
    /// WQP labels `l` for which `round(x_l − 1/2) ≠ l`.
    pub relabelled: Vec<usize>,
}

impl WannierBasis {
    pub fn n(&self) -> usize {
        self.o.nrows() / 2
    }

    pub fn gamma_left(&self) -> RVec {
        self.o.row(0).transpose()
    }

    pub fn gamma_right(&self) -> RVec {
        self.o.row(self.o.nrows() - 1).transpose()
    }

    /// The two real Majorana rows of WQP `l` (1-based).
    pub fn wqp_majoranas(&self, l: usize) -> (RVec, RVec) {
        (
            self.o.row(2 * l - 1).transpose(),
            self.o.row(2 * l).transpose(),
        )
    }

    pub fn orthogonality_residual(&self) -> f64 {
        let d = self.o.nrows();
        max_abs_real(&(&self.o * self.o.transpose() - RMat::identity(d, d)))
    }

    /// Site whose stabilizer label the WQP `l` is assigned to: `round(x_l − 1/2)`.
    pub fn assigned_label(&self, l: usize) -> i64 {
        (self.centers[l - 1] - 0.5).round() as i64
    }

    /// `Σ_l |φ_l⟩⟨φ_l|`.
    pub fn projector(&self) -> CMat {
        &self.creation * self.creation.adjoint()
    }
}

/// Diagonalizes `X_qp` on the range of `P_qp` and assembles the chain's
/// `γ_L, WQP…, γ_R` Majorana basis.
pub fn wannier_basis(x: &PositionOperator, spec: &QuasiparticleSpectrum) -> Result<WannierBasis> {
    let n = spec.n();
    let v = spec.modes().columns(1, n - 1).into_owned();
    let restricted = v.adjoint() * x.matrix() * &v;
    let restricted = (&restricted + restricted.adjoint()) * c(0.5);
    let (centers, coeffs) = hermitian_eigh(&restricted);
    let creation = &v * coeffs;

    let u = crate::linalg::majorana_unitary(n);
    let mut o = RMat::zeros(2 * n, 2 * n);
    let (gamma_l, gamma_r) = fix_mzm_pair(spec)?;
    o.set_row(0, &gamma_l.transpose());
    o.set_row(2 * n - 1, &gamma_r.transpose());
    let s2 = std::f64::consts::SQRT_2;
    let mut phased = creation.clone();
    for l in 1..n {
        let mut m = u.adjoint() * creation.column(l - 1);
        fix_phase(&mut m);
        phased.set_column(l - 1, &(&u * &m));
        for b in 0..2 * n {
            o[(2 * l - 1, b)] = s2 * m[b].re;
            o[(2 * l, b)] = -s2 * m[b].im;
        }
    }

    let mut degenerate_centers = Vec::new();
    for l in 1..n - 1 {
        if (centers[l] - centers[l - 1]).abs() < CENTER_DEGENERACY_TOL {
            degenerate_centers.push((l, l + 1));
        }
    }
    let basis = WannierBasis {
        relabelled: (1..n)
            .filter(|&l| (centers[l - 1] - 0.5).round() as i64 != l as i64)
            .collect(),
        centers,
        creation: phased,
        o,
        degenerate_centers,
    };
    if !basis.degenerate_centers.is_empty() {
        debug!("degenerate Wannier centers: {:?}", basis.degenerate_centers);
    }
    check("Wannier basis orthogonality", basis.orthogonality_residual(), 1e-10)?;
    Ok(basis)
}

/// Rotates `m` so its first near-maximal component is real and positive.
fn fix_phase(m: &mut CVec) {
    let max = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(z) = m.iter().find(|z| z.norm() >= max * (1.0 - 1e-6)).copied() {
        let phase = z.conj() / z.norm();
        m.iter_mut().for_each(|x| *x *= phase);
    }
}

/// Left- and right-edge Majorana zero modes as real Majorana-coordinate vectors.
///
/// The pair spans `{|e_0⟩, τ_xK|e_0⟩}` and diagonalizes the left-half weight
/// within that real plane; each is signed so its largest coefficient is positive.
pub fn fix_mzm_pair(spec: &QuasiparticleSpectrum) -> Result<(RVec, RVec)> {
    let n = spec.n();
    let e0 = bdg::to_majorana_basis(&spec.mode(0))?;
    let both = CMat::from_columns(&[e0.clone(), e0.map(|z| z.conj())]);
    let plane = bdg::zero_mode_real_pair(&both, &Tolerances::default())?;
    let weight = |b: usize| {
        let twice_site = 2 * (b / 2) + 1;
        match twice_site.cmp(&n) {
            std::cmp::Ordering::Less => 1.0,
            std::cmp::Ordering::Equal => 0.5,
            std::cmp::Ordering::Greater => 0.0,
        }
    };
    let w = RMat::from_fn(2, 2, |r, k| {
        (0..2 * n)
            .map(|b| plane[(b, r)] * weight(b) * plane[(b, k)])
            .sum()
    });
    let (_, vecs) = symmetric_eigh(&w);
    let mut left: RVec = &plane * vecs.column(1);
    let mut right: RVec = &plane * vecs.column(0);
    sign_fix(&mut left);
    sign_fix(&mut right);
    Ok((left, right))
}

fn sign_fix(v: &mut RVec) {
    let max = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if let Some(&x) = v.iter().find(|x| x.abs() >= max * (1.0 - 1e-9)) {
        if x < 0.0 {
            *v *= -1.0;
        }
    }
}

/// Fraction of a Majorana-coordinate vector's weight on the left half of the chain.
pub fn left_weight(v: &RVec) -> f64 {
    let n = v.len() / 2;
    let total: f64 = v.iter().map(|x| x * x).sum();
    let left: f64 = v
        .iter()
        .enumerate()
        .map(|(b, x)| {
            let twice_site = 2 * (b / 2) + 1;
            let w = match twice_site.cmp(&n) {
                std::cmp::Ordering::Less => 1.0,
                std::cmp::Ordering::Equal => 0.5,
                std::cmp::Ordering::Greater => 0.0,
            };
            w * x * x
        })
        .sum();
    left / total
}

/// Exponential-decay fit `a_j ≈ C e^{−κ|j − x|}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationFit {
    pub prefactor: f64,
    pub rate: f64,
    /// Coefficient of determination of the log-linear fit; 0 when the fit
    /// window is too small.
    pub fit_quality: f64,
    pub points: usize,
}

impl LocalizationFit {
    pub const MIN_QUALITY: f64 = 0.9;

    /// The fitted decay rate, if the fit is good enough to report.
    pub fn kappa(&self) -> Option<f64> {
        (self.fit_quality >= Self::MIN_QUALITY).then_some(self.rate)
    }
}

/// Per-site amplitude `max_m |⟨j,m|v⟩|` of a particle/hole-coordinate vector.
pub fn site_amplitudes(v: &CVec) -> Vec<f64> {
    (0..v.len() / 2)
        .map(|j| v[2 * j].norm().max(v[2 * j + 1].norm()))
        .collect()
}

/// Per-site amplitude of a real Majorana-coordinate vector.
pub fn site_amplitudes_majorana(v: &RVec) -> Vec<f64> {
    (0..v.len() / 2)
        .map(|j| v[2 * j].abs().max(v[2 * j + 1].abs()))
        .collect()
}

/// Least-squares fit of `ln a_j = ln C − κ |j − center|`.
///
/// `amplitudes[j-1]` belongs to site `j`. Sites within two sites of either
/// chain end and amplitudes at or below `1e-12` are excluded.
pub fn localization_fit(amplitudes: &[f64], center: f64) -> LocalizationFit {
    const EDGE: usize = 2;
    const FLOOR: f64 = 1e-12;
    let n = amplitudes.len();
    let pts: Vec<(f64, f64)> = amplitudes
        .iter()
        .enumerate()
        .map(|(i, &a)| (i + 1, a))
        .filter(|&(j, a)| j > EDGE && j + EDGE <= n && a > FLOOR)
        .map(|(j, a)| ((j as f64 - center).abs(), a.ln()))
        .collect();
    let failed = LocalizationFit {
        prefactor: f64::NAN,
        rate: f64::NAN,
        fit_quality: 0.0,
        points: pts.len(),
    };
    if pts.len() < 3 {
        return failed;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx <= 0.0 {
        return failed;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let quality = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    LocalizationFit {
        prefactor: intercept.exp(),
        rate: -slope,
        fit_quality: quality,
        points: pts.len(),
    }
}

/// Everything the downstream code needs about one chain.
#[derive(Debug, Clone)]
pub struct ChainBasis {
    pub params: ChainParams,
    pub spectrum: QuasiparticleSpectrum,
    pub position: PositionOperator,
    pub wannier: WannierBasis,
}

/// Runs the full single-chain pipeline: BdG, diagonalization, `P_qp`, `X_qp`, WQPs.
pub fn chain_basis(params: &ChainParams) -> Result<ChainBasis> {
    let spectrum = bdg::diagonalize(&bdg::build_bdg(params)?)?;
    let position = build_xqp(&build_pqp(&spectrum)?)?;
    let wannier = wannier_basis(&position, &spectrum)?;
    Ok(ChainBasis {
        params: params.clone(),
        spectrum,
        position,
        wannier,
    })
}

/// Decay fit of the `P_qp` matrix elements along the row of the central site.
pub fn projector_decay_fit(p: &QpProjector) -> LocalizationFit {
    let n = p.matrix().nrows() / 2;
    let j0 = n / 2;
    let amps: Vec<f64> = (0..n)
        .map(|j| {
            let mut a: f64 = 0.0;
            for m in 0..2 {
                for mp in 0..2 {
                    a = a.max(p.matrix()[(2 * j0 + m, 2 * j + mp)].norm());
                }
            }
            a
        })
        .collect();
    localization_fit(&amps, (j0 + 1) as f64)
}
