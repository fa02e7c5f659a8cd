use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tetron::analytic::{p_bitflip_fixed, p_loss_fixed};
use tetron::bdg::{build_bdg, diagonalize, ChainParams, QuasiparticleSpectrum};
use tetron::codes::{detection_intervals, stabilizer_set, CodeSpec, StabilizerLabel};
use tetron::gaussian::{error_rotation, evaluate_sample, initial_covariance, pfaffian, BasisChange};
use tetron::linalg::{max_abs, ph_conjugate};
use tetron::noise::{sample_error, ErrorSample};
use tetron::wannier::{build_pqp, build_xqp, wannier_basis};

fn topological() -> impl Strategy<Value = ChainParams> {
    (0.0..1.5f64, 0.1..1.2f64, 3usize..12).prop_map(|(mu, delta, n)| ChainParams::new(mu, 1.0, delta, n))
}

fn random_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    g.qr().q()
}

fn random_antisym(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            a[(i, j)] = z;
            a[(j, i)] = -z;
        }
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bdg_is_hermitian_and_particle_hole_antisymmetric(p in topological(), seed in any::<u64>()) {
        let p = p.with_random_disorder(0.3, &mut ChaCha8Rng::seed_from_u64(seed));
        let a = build_bdg(&p).unwrap();
        prop_assert!(a.hermiticity_residual() < 1e-12);
        prop_assert!(a.particle_hole_residual() < 1e-12);
    }

    #[test]
    fn spectral_sum_rule(p in topological()) {
        let a = build_bdg(&p).unwrap();
        let spec = diagonalize(&a).unwrap();
        let sum: f64 = spec.energies().iter().map(|e| e * e).sum();
        let frob = a.matrix().iter().map(|z| z.norm_sqr()).sum::<f64>();
        prop_assert!((sum - 0.5 * frob).abs() < 1e-8, "{} vs {}", sum, 0.5 * frob);
    }

    #[test]
    fn modes_are_orthogonal_to_their_hole_partners(p in topological()) {
        let spec = diagonalize(&build_bdg(&p).unwrap()).unwrap();
        prop_assume!(spec.mzm_energy() > 1e-6);
        let m = spec.modes();
        let holes = DMatrix::from_columns(&(0..spec.n()).map(|k| ph_conjugate(&spec.mode(k))).collect::<Vec<_>>());
        prop_assert!(max_abs(&(m.adjoint() * holes)) < 1e-10);
    }

    #[test]
    fn position_operator_spectrum_and_completeness(p in topological()) {
        let spec = diagonalize(&build_bdg(&p).unwrap()).unwrap();
        let x = build_xqp(&build_pqp(&spec).unwrap()).unwrap();
        let wb = wannier_basis(&x, &spec).unwrap();
        prop_assert_eq!(wb.centers.len(), p.n - 1);
        prop_assert!(wb.centers.iter().all(|&c| c > 0.0));
        prop_assert!(max_abs(&(wb.projector() - x.projector().matrix())) < 1e-9);
    }

    #[test]
    fn interval_union_is_the_stabilizer_set(n in 2usize..40, d_frac in 0.0..1.0f64) {
        let d = ((n - 1) / 2) as f64 * d_frac;
        let d = d as usize;
        prop_assume!(2 * d < n);
        let spec = CodeSpec::coarsest(n, d).unwrap();
        let mut from_intervals = detection_intervals(&spec).unwrap().labels();
        from_intervals.push(StabilizerLabel::Parity);
        from_intervals.sort();
        let mut labels = stabilizer_set(&spec).unwrap().labels;
        labels.sort();
        prop_assert_eq!(from_intervals, labels);
    }

    #[test]
    fn rotations_preserve_purity_and_bound_expectations(
        mu in 0.0..0.9f64, delta in 0.1..1.0f64, n in 3usize..9, q in 0.0..0.6f64, seed in any::<u64>()
    ) {
        let basis = BasisChange::uniform(&ChainParams::new(mu, 1.0, delta, n)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = sample_error(&mut rng, q, n);
        let r = error_rotation(&e, &basis).unwrap();
        let m = initial_covariance(n, 0).unwrap().rotated(&r).unwrap();
        prop_assert!(m.purity_residual() < 1e-9);
        for d in 0..n.div_ceil(2) {
            let stabs = stabilizer_set(&CodeSpec::coarsest(n, d).unwrap()).unwrap();
            let (ps, zn) = evaluate_sample(&basis, &stabs, &e).unwrap();
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&ps), "P_S = {}", ps);
            prop_assert!(zn.abs() <= ps + 1e-9, "Znum {} vs P_S {}", zn, ps);
        }
    }

    #[test]
    fn pfaffian_of_rotated_matrix(half in 1usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 2 * half;
        let a = random_antisym(dim, &mut rng);
        let r = random_orthogonal(dim, &mut rng);
        let rc = r.map(|x| Complex64::new(x, 0.0));
        let lhs = pfaffian(&(&rc * &a * rc.transpose())).unwrap();
        let rhs = pfaffian(&a).unwrap() * r.determinant();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1e-12), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn fixed_point_detection_is_all_or_nothing(n in 3usize..9, m1 in any::<u64>(), m2 in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let e = ErrorSample::from_masks(n, m1 & mask, m2 & mask);
        let basis = BasisChange::uniform(&ChainParams::fixed_point(n)).unwrap();
        for d in 0..n.div_ceil(2) {
            let stabs = stabilizer_set(&CodeSpec::coarsest(n, d).unwrap()).unwrap();
            let (ps, zn) = evaluate_sample(&basis, &stabs, &e).unwrap();
            let detected = !stabs.fixed_point_syndrome(&e).is_empty();
            let expect_ps = if detected { 0.0 } else { 1.0 };
            prop_assert!((ps - expect_ps).abs() < 1e-12);
            if !detected {
                let flip = stabs.fixed_point_flips_logical_z(&e);
                let expect_zn = if flip { -1.0 } else { 1.0 };
                prop_assert!((zn - expect_zn).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_forms_are_monotone_in_d(d in 1usize..10, q in 0.0..0.5f64) {
        prop_assert!(p_bitflip_fixed(d, q).unwrap() <= p_bitflip_fixed(d - 1, q).unwrap());
        prop_assert!(p_loss_fixed(d, q).unwrap() >= p_loss_fixed(d - 1, q).unwrap());
    }

    #[test]
    fn loss_is_symmetric_under_q_reflection(d in 0usize..10, q in 0.0..=1.0f64) {
        prop_assert!((p_loss_fixed(d, q).unwrap() - p_loss_fixed(d, 1.0 - q).unwrap()).abs() < 1e-12);
    }
}

/// Centers and the WQP projector do not depend on how a degenerate
/// quasiparticle eigenbasis is chosen.
#[test]
fn wannier_basis_is_gauge_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, degenerate) in [
        (ChainParams::fixed_point(10), true),
        (ChainParams::new(0.3, 1.0, 0.4, 12), false),
        (ChainParams::new(0.7, 1.0, 0.9, 9), false),
    ] {
        let spec = diagonalize(&build_bdg(&p).unwrap()).unwrap();
        let n = spec.n();
        let mut modes = spec.modes().clone();
        for k in 0..n {
            let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let col = modes.column(k) * phase;
            modes.set_column(k, &col);
        }
        if degenerate {
            // All quasiparticles share one energy: mix them with a random unitary.
            let g = DMatrix::from_fn(n - 1, n - 1, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let u = g.qr().q();
            let mixed = modes.columns(1, n - 1) * u;
            modes.columns_mut(1, n - 1).copy_from(&mixed);
        } else {
            modes.swap_columns(n - 1, n - 2);
        }
        let mut energies = spec.energies().to_vec();
        if !degenerate {
            energies.swap(n - 1, n - 2);
        }
        let other = QuasiparticleSpectrum::from_parts(energies, modes).unwrap();

        let wb = |s: &QuasiparticleSpectrum| wannier_basis(&build_xqp(&build_pqp(s).unwrap()).unwrap(), s).unwrap();
        let (a, b) = (wb(&spec), wb(&other));
        let center_dev = a.centers.iter().zip(&b.centers).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(center_dev < 1e-8, "{center_dev}");
        assert!(max_abs(&(a.projector() - b.projector())) < 1e-8);
    }
}

/// The decay rate of the QP projector does not grow as the gap closes.
#[test]
fn projector_decay_follows_gap() {
    let n = 40;
    let mut last = (f64::INFINITY, f64::INFINITY);
    for mu in [0.3, 0.6, 0.9, 0.99] {
        // Pairing interpolated linearly between (0.3, 0.4) and (0.99, 0.05).
        let delta = 0.4 + (mu - 0.3) / (0.99 - 0.3) * (0.05 - 0.4);
        let spec = diagonalize(&build_bdg(&ChainParams::new(mu, 1.0, delta, n)).unwrap()).unwrap();
        let fit = tetron::wannier::projector_decay_fit(&build_pqp(&spec).unwrap());
        assert!(spec.gap() < last.0, "gap not decreasing at mu = {mu}");
        assert!(fit.rate <= last.1 + 1e-9, "rate {} rose above {} at mu = {mu}", fit.rate, last.1);
        last = (spec.gap(), fit.rate);
    }
}
