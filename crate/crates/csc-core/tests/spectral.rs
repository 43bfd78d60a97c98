mod common;

use common::*;
use csc_core::drive::Orientation;
use csc_core::models::{
    model_a_analytic_spectrum, model_a_generator, model_b_generator, ModelAParams, ModelBParams,
};
use csc_core::spectral::*;
use csc_core::{re, CMat, CVec, Error, C, I};
use proptest::prelude::*;

fn qubit(delta: f64, kappa: f64, gp: f64, gm: f64) -> ModelAParams {
    ModelAParams {
        delta,
        kappa,
        gamma_plus: gp,
        gamma_minus: gm,
    }
}

/// Right side of the hybrid master equation by direct matrix products.
fn rhs_direct(h: &CMat, jumps: &[Jump], q: f64, rho: &CMat) -> CMat {
    let heff = effective_hamiltonian(h, jumps);
    let mut out = (&heff * rho - rho * heff.adjoint()) * (-I);
    for j in jumps {
        out += &j.op * rho * j.op.adjoint() * re(q * j.rate);
    }
    out
}

fn random_generator(h: CMat, ops: Vec<CMat>, rates: Vec<f64>, q: f64) -> HybridGenerator {
    let h = (&h + h.adjoint()) * re(0.5);
    let jumps = ops
        .into_iter()
        .zip(rates)
        .map(|(o, r)| Jump::new(o, r))
        .collect();
    HybridGenerator::new(h, jumps, q).unwrap()
}

#[test]
fn vectorize_examples() {
    let id = CMat::identity(2, 2);
    assert_eq!(vectorize(&id), ket(&[1.0, 0.0, 0.0, 1.0]));
    let p0 = DensityState::pure(&ket(&[1.0, 0.0]));
    assert_eq!(p0.vectorize(), ket(&[1.0, 0.0, 0.0, 0.0]));
    assert_eq!(devectorize(&ket(&[1.0, 0.0, 0.0, 1.0])).unwrap(), id);
    let p1 = devectorize(&ket(&[0.0, 0.0, 0.0, 1.0])).unwrap();
    assert_eq!(p1, DensityState::pure(&ket(&[0.0, 1.0])).matrix);
    assert_eq!(
        devectorize(&ket(&[1.0, 0.0, 0.0])),
        Err(Error::NonSquareLength(3))
    );
}

#[test]
fn lower_branch_projector_vectorizes_in_row_order() {
    let spec = model_a_analytic_spectrum(&qubit(0.3, 0.12, 0.0, 0.1)).unwrap();
    let t = spec.theta_minus;
    let rho = DensityState::pure(&spec.eigvec(false));
    let n = 1.0 + t.norm_sqr();
    let expected = CVec::from_vec(vec![re(1.0), t.conj(), t, re(t.norm_sqr())]) / re(n);
    assert!((rho.vectorize() - expected).camax() < 1e-14);
}

#[test]
fn empty_generator_assembles_to_zero() {
    let g = HybridGenerator::new(CMat::zeros(2, 2), vec![], 1.0).unwrap();
    assert_eq!(assemble_superop(&g), CMat::zeros(4, 4));
}

#[test]
fn pure_decay_relaxes_to_ground_state() {
    let l = assemble_superop(&model_a_generator(&qubit(0.0, 0.0, 0.0, 0.1), 1.0).unwrap());
    let ss = steady_state(&l).unwrap();
    let ground = DensityState::pure(&ket(&[0.0, 1.0]));
    assert!(max_abs(&(ss.matrix - ground.matrix)) < 1e-12);
}

#[test]
fn qubit_heff_eigenvalues_at_reference_point() {
    let g = model_a_generator(&qubit(0.0, 0.12, 0.0, 0.1), 0.0).unwrap();
    let spec = eig_bi(g.h_eff(), None).unwrap();
    // ξ = (1/4)(−0.1i ± √(16κ² − 0.01))
    let r = (16.0f64 * 0.0144 - 0.01).sqrt() / 4.0;
    let expected = [C::new(r, -0.025), C::new(-r, -0.025)];
    assert!(multiset_distance(&spec.eigvals, &expected) < 1e-12);
    assert!((r - 0.11737).abs() < 1e-5);
    assert!(multiset_distance(&spec.eigvals, &eig2(g.h_eff())) < 1e-12);
}

#[test]
fn qubit_heff_at_ep_is_degenerate() {
    let g = model_a_generator(&qubit(0.0, 0.025, 0.0, 0.1), 0.0).unwrap();
    assert!(matches!(
        eig_bi(g.h_eff(), None),
        Err(Error::DegenerateSpectrum { .. })
    ));
}

#[test]
fn diagonal_matrix_has_standard_eigenbasis() {
    let m = CMat::from_diagonal(&ket(&[1.0, 2.0]));
    let s = eig_bi(&m, None).unwrap();
    let mut pairs: Vec<(f64, usize)> = s
        .eigvals
        .iter()
        .enumerate()
        .map(|(k, l)| (l.re, k))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    assert_eq!(
        pairs.iter().map(|p| p.0).collect::<Vec<_>>(),
        vec![1.0, 2.0]
    );
    for (i, &(_, k)) in pairs.iter().enumerate() {
        assert!((s.right[(i, k)].norm() - 1.0).abs() < 1e-14);
        assert!((s.left[(k, i)].norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn drazin_of_diagonal_eigenbasis() {
    let l = CMat::from_diagonal(&ket(&[0.0, -1.0, -2.0, -3.0]));
    let spec = eig_bi(&l, None).unwrap();
    let lp = drazin_inverse(&l, &spec).unwrap();
    let expected = CMat::from_diagonal(&ket(&[0.0, -1.0, -0.5, -1.0 / 3.0]));
    assert!(max_abs(&(lp - expected)) < 1e-14);
}

fn endpoint_liouvillian(kappa: f64, gp: f64) -> CMat {
    assemble_superop(&model_a_generator(&qubit(0.0, kappa, 0.0, gp), 1.0).unwrap())
}

#[test]
fn drazin_projector_identity_at_loop_endpoint() {
    let l = endpoint_liouvillian(0.12, 0.1);
    let ss = steady_state(&l).unwrap().vectorize();
    let p = &ss * trace_functional(2).transpose();
    let q = CMat::identity(4, 4) - &p;
    let spec = eig_bi(&l, None).unwrap();
    let eig = drazin_inverse(&l, &spec).unwrap();
    let direct = drazin_direct(&l, &ss).unwrap();
    for lp in [&eig, &direct] {
        assert!(max_abs(&(&l * lp - &q)) < 1e-8);
        assert!(max_abs(&(lp * &l - &q)) < 1e-8);
        assert!((lp * &ss).camax() < 1e-10);
    }
    assert!(max_abs(&(eig - direct)) < 1e-9);
}

#[test]
fn qubit_endpoint_steady_state_closed_form() {
    for &(k, gp) in &[(0.12, 0.1), (0.25, 0.1), (0.03, 0.06)] {
        let ss = steady_state(&endpoint_liouvillian(k, gp)).unwrap();
        let n = 8.0 * k * k + gp * gp;
        let expected = CMat::from_row_slice(
            2,
            2,
            &[
                re(4.0 * k * k),
                C::new(0.0, -2.0 * k * gp),
                C::new(0.0, 2.0 * k * gp),
                re(4.0 * k * k + gp * gp),
            ],
        ) / re(n);
        assert!(max_abs(&(ss.matrix - expected)) < 1e-10, "kappa = {k}");
    }
}

#[test]
fn two_qubit_endpoint_steady_state_closed_form() {
    for &(g, gp) in &[(0.01, 0.025), (0.01, 0.001), (0.2, 0.1)] {
        let p = ModelBParams {
            epsilon: 1.0,
            delta: 0.0,
            g,
            gamma1_plus: gp,
            gamma2_minus: gp,
        };
        let l = assemble_superop(&model_b_generator(&p, 1.0).unwrap());
        let ss = steady_state(&l).unwrap();
        let n = gp * gp / (4.0 * gp * gp * g * g + gp.powi(4));
        let c = C::new(0.0, gp * g);
        let z = re(0.0);
        let expected = CMat::from_row_slice(
            4,
            4,
            &[
                re(g * g),
                z,
                z,
                z,
                z,
                re(gp * gp + g * g),
                c,
                z,
                z,
                c.conj(),
                re(g * g),
                z,
                z,
                z,
                z,
                re(g * g),
            ],
        ) * re(n);
        // the coherence sign depends on which qubit carries the pump
        let diag_err = (0..4)
            .map(|i| (ss.matrix[(i, i)] - expected[(i, i)]).norm())
            .fold(0.0, f64::max);
        assert!(diag_err < 1e-10, "g = {g}");
        assert!((ss.matrix[(1, 2)].norm() - expected[(1, 2)].norm()).abs() < 1e-10);
        assert!(ss.matrix[(1, 2)].re.abs() < 1e-12);
    }
}

#[test]
fn reference_loop_eigenvalues_are_odd_about_half_period() {
    let driven = model_a(0.12);
    let cfg = reference_loop(Orientation::Ccw, 2000.0, 400);
    let series =
        BranchedSpectrumSeries::build(&cfg.grid(), |s| driven.heff_at(s, &cfg), DEFAULT_GAP_TOL)
            .unwrap();
    assert_eq!(series.branches(), 2);
    let n = cfg.n_steps;
    let shift = |i: usize| series.spectra[i].eigvals.iter().map(|l| l.im).sum::<f64>() / 2.0;
    // the decay rate of each branch, measured from the common shift, is odd
    // about s = 1/2; the oscillation frequencies swap sign between branches
    for i in 0..=n {
        let j = n - i;
        for k in 0..2 {
            let a = series.spectra[i].eigvals[k].im - shift(i);
            let b = series.spectra[j].eigvals[k].im - shift(j);
            assert!((a + b).abs() < 1e-9, "branch {k} at s = {}", series.grid[i]);
            let other = series.spectra[j].eigvals[1 - k].re;
            assert!((series.spectra[i].eigvals[k].re + other).abs() < 1e-9);
        }
        assert!((shift(i) - shift(j)).abs() < 1e-12);
    }
}

#[test]
fn constant_generator_gives_identical_branches() {
    let l = endpoint_liouvillian(0.12, 0.1);
    let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let series = BranchedSpectrumSeries::build(&grid, |_| Ok(l.clone()), DEFAULT_GAP_TOL).unwrap();
    for sp in &series.spectra[1..] {
        assert_eq!(sp.eigvals, series.spectra[0].eigvals);
        assert!(max_abs(&(&sp.right - &series.spectra[0].right)) < 1e-14);
    }
}

#[test]
fn reversed_grid_follows_the_same_branches() {
    let driven = model_a(0.12);
    let cfg = reference_loop(Orientation::Cw, 2000.0, 200);
    let fwd_grid = cfg.grid();
    let bwd_grid: Vec<f64> = fwd_grid.iter().rev().copied().collect();
    let heff = |s: f64| driven.heff_at(s, &cfg);
    let fwd = BranchedSpectrumSeries::build(&fwd_grid, heff, DEFAULT_GAP_TOL).unwrap();
    let bwd = BranchedSpectrumSeries::build(&bwd_grid, heff, DEFAULT_GAP_TOL).unwrap();
    // each backward branch, read in reverse, must coincide with one forward branch
    let n = fwd.len();
    let start = |k: usize| bwd.spectra[0].eigvals[k];
    for kb in 0..2 {
        let kf = (0..2)
            .min_by(|&a, &b| {
                let da = (fwd.spectra[n - 1].eigvals[a] - start(kb)).norm();
                let db = (fwd.spectra[n - 1].eigvals[b] - start(kb)).norm();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        for i in 0..n {
            let d = (bwd.spectra[n - 1 - i].eigvals[kb] - fwd.spectra[i].eigvals[kf]).norm();
            assert!(d < 1e-12);
        }
    }
    // the loop does not encircle the EP: branches return to themselves
    for k in 0..2 {
        assert!((fwd.spectra[0].eigvals[k] - fwd.spectra[n - 1].eigvals[k]).norm() < 1e-12);
    }
}

#[test]
fn encircling_loop_swaps_branches() {
    let driven = model_a(0.03);
    let cfg = reference_loop(Orientation::Ccw, 2000.0, 2000);
    let series =
        BranchedSpectrumSeries::build(&cfg.grid(), |s| driven.heff_at(s, &cfg), DEFAULT_GAP_TOL)
            .unwrap();
    let (a, b) = (&series.spectra[0], series.spectra.last().unwrap());
    assert!((a.eigvals[0] - b.eigvals[1]).norm() < 1e-9);
    assert!((a.eigvals[1] - b.eigvals[0]).norm() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn vectorize_round_trip(a in cmat(4)) {
        let h = &a + a.adjoint();
        prop_assert_eq!(devectorize(&vectorize(&h)).unwrap(), h);
    }

    #[test]
    fn superop_matches_direct_products(
        h in cmat(3),
        ops in proptest::collection::vec(cmat(3), 2),
        rates in proptest::collection::vec(0.0..1.0f64, 2),
        q in 0.0..=1.0f64,
        rho in cmat(3),
    ) {
        let g = random_generator(h.clone(), ops.clone(), rates.clone(), q);
        let l = assemble_superop(&g);
        let lhs = devectorize(&(l * vectorize(&rho))).unwrap();
        let rhs = rhs_direct(g.h(), g.jumps(), q, &rho);
        prop_assert!(max_abs(&(&lhs - &rhs)) < 1e-12);
        prop_assert!(max_abs(&(g.apply(&rho) - rhs)) < 1e-12);
    }

    #[test]
    fn full_generator_preserves_trace(
        h in cmat(3),
        ops in proptest::collection::vec(cmat(3), 3),
        rates in proptest::collection::vec(0.0..1.0f64, 3),
    ) {
        let l = assemble_superop(&random_generator(h, ops, rates, 1.0));
        let left = trace_functional(3).transpose() * l;
        prop_assert!(left.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn nhh_limit_eigenvalues_pair_up(
        h in cmat(3),
        ops in proptest::collection::vec(cmat(3), 2),
        rates in proptest::collection::vec(0.01..1.0f64, 2),
    ) {
        let g = random_generator(h, ops, rates, 0.0);
        let xi = eig_bi_unchecked(g.h_eff()).unwrap().eigvals;
        let lam = eig_bi_unchecked(&assemble_superop(&g)).unwrap().eigvals;
        let mut expected = Vec::new();
        for l in &xi {
            for m in &xi {
                expected.push(-I * (m - l.conj()));
            }
        }
        prop_assert!(multiset_distance(&lam, &expected) < 1e-9);
    }

    #[test]
    fn spectra_are_biorthonormal_and_reconstruct(
        delta in -1.0..1.0f64,
        kappa in 0.06..0.5f64,
        gm in 0.0..0.2f64,
        q in 0.0..=1.0f64,
    ) {
        let l = assemble_superop(&model_a_generator(&qubit(delta, kappa, 0.0, gm), q).unwrap());
        let spec = eig_bi_unchecked(&l).unwrap();
        prop_assert!(spec.biorthonormality_error() < 1e-9);
        prop_assert!(max_abs(&(spec.reconstruct() - &l)) / l.norm() < 1e-8);
    }

    #[test]
    fn steady_state_is_a_physical_zero_mode(
        delta in -1.0..1.0f64,
        kappa in 0.01..0.5f64,
        gp in 0.0..0.2f64,
        gm in 0.01..0.2f64,
    ) {
        let l = assemble_superop(&model_a_generator(&qubit(delta, kappa, gp, gm), 1.0).unwrap());
        let ss = steady_state(&l).unwrap();
        prop_assert!((&l * ss.vectorize()).camax() < 1e-10);
        prop_assert!((ss.trace() - re(1.0)).norm() < 1e-12);
        prop_assert!(max_abs(&(&ss.matrix - ss.matrix.adjoint())) < 1e-12);
        let (vals, _) = hermitian_eig(&ss.matrix);
        prop_assert!(vals[0] > -1e-10);
        let spec = eig_bi(&l, None).unwrap();
        let lp = drazin_inverse(&l, &spec).unwrap();
        let p = ss.vectorize() * trace_functional(2).transpose();
        let q = CMat::identity(4, 4) - p;
        prop_assert!(max_abs(&(&l * &lp - &q)) < 1e-8);
        prop_assert!(max_abs(&(&lp * &l - &q)) < 1e-8);
    }
}
