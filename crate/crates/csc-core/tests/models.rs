mod common;

use common::*;
use csc_core::models::*;
use csc_core::spectral::{assemble_superop, eig_bi, eig_bi_unchecked, Spectrum};
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

fn pair(epsilon: f64, delta: f64, g: f64, g1: f64, g2: f64) -> ModelBParams {
    ModelBParams {
        epsilon,
        delta,
        g,
        gamma1_plus: g1,
        gamma2_minus: g2,
    }
}

/// `|⟨a|b⟩| / (‖a‖‖b‖)`: one for vectors equal up to a complex factor.
fn collinearity(a: &CVec, b: &CVec) -> f64 {
    a.dotc(b).norm() / (a.norm() * b.norm())
}

/// Right eigenvector of `spec` whose eigenvalue is closest to `xi`.
fn vec_for(spec: &Spectrum, xi: C) -> CVec {
    let k = (0..spec.dim())
        .min_by(|&a, &b| {
            (spec.eigvals[a] - xi)
                .norm()
                .partial_cmp(&(spec.eigvals[b] - xi).norm())
                .unwrap()
        })
        .unwrap();
    spec.right_vec(k)
}

#[test]
fn qubit_eta_at_reference_point() {
    let a = model_a_analytic_spectrum(&qubit(0.0, 0.12, 0.0, 0.1)).unwrap();
    // η² = 16κ² + (−iΓ⁻)² = 0.2304 − 0.01
    let eta = (0.2304f64 - 0.01).sqrt();
    assert!((a.eta - re(eta)).norm() < 1e-14);
    assert!((eta - 0.46947).abs() < 1e-5);
    assert!((a.xi_plus - C::new(eta, -0.1) / 4.0).norm() < 1e-14);
    assert!((a.xi_minus - C::new(-eta, -0.1) / 4.0).norm() < 1e-14);
}

#[test]
fn qubit_uniform_dissipation_splits_like_hermitian() {
    let a = model_a_analytic_spectrum(&qubit(0.0, 0.2, 0.07, 0.07)).unwrap();
    assert!((a.eta - re(0.8)).norm() < 1e-14);
    assert!((a.xi_plus - C::new(0.2, -0.035)).norm() < 1e-14);
    assert!((a.xi_minus - C::new(-0.2, -0.035)).norm() < 1e-14);
}

#[test]
fn qubit_ep_closes_the_gap() {
    let a = model_a_analytic_spectrum(&qubit(0.0, 0.1 / 4.0, 0.0, 0.1)).unwrap();
    assert!(a.eta.norm() < 1e-15);
    assert_eq!(
        model_a_analytic_spectrum(&qubit(0.0, 0.0, 0.0, 0.1)),
        Err(Error::ZeroCoupling)
    );
}

#[test]
fn qubit_without_coupling_has_uniform_shift() {
    let p = qubit(0.4, 0.0, 0.05, 0.05);
    let g = model_a_generator(&p, 0.0).unwrap();
    let expected = p.hamiltonian() - CMat::identity(2, 2) * (I * 0.025);
    assert!(max_abs(&(g.h_eff() - expected)) < 1e-15);
}

#[test]
fn two_qubit_block_structure_without_coupling() {
    let h = model_b_generator(&pair(1.0, 0.3, 0.0, 0.02, 0.04), 0.0)
        .unwrap()
        .h_eff()
        .clone();
    assert_eq!(h[(1, 2)], re(0.0));
    assert_eq!(h[(2, 1)], re(0.0));
    assert!(max_abs(&(&h - CMat::from_diagonal(&h.diagonal()))) == 0.0);
    assert_eq!(
        model_b_analytic_spectrum(&pair(1.0, 0.3, 0.0, 0.02, 0.04)),
        Err(Error::ZeroCoupling)
    );
}

#[test]
fn two_qubit_single_excitation_block() {
    let p = pair(1.0, 0.3, 0.2, 0.02, 0.04);
    let h = model_b_generator(&p, 0.0).unwrap().h_eff().clone();
    // in the order (|10⟩, |01⟩) the block reads [[ε, g], [g, ε + δ − iΓ⁺/2]]
    let sub = h.view((1, 1), (2, 2)).into_owned();
    let expected = CMat::from_row_slice(2, 2, &[re(1.0), re(0.2), re(0.2), C::new(1.3, -0.03)]);
    assert!(max_abs(&(sub - expected)) < 1e-15);
    let b = model_b_analytic_spectrum(&p).unwrap();
    assert_eq!(b.xi_0, C::new(0.0, -0.01));
}

#[test]
fn two_qubit_ep_location() {
    let p = pair(1.0, 0.0, 0.1 / 4.0, 0.05, 0.05);
    assert!(model_b_analytic_spectrum(&p).unwrap().eta_prime.norm() < 1e-15);
    let h = model_b_generator(&p, 0.0).unwrap().h_eff().clone();
    assert!(matches!(
        eig_bi(&h, None),
        Err(Error::DegenerateSpectrum { .. })
    ));
}

/// Largest infidelity between a Bell state and the nearest NHH eigenvector.
fn bell_infidelity(g: f64, rate: f64) -> f64 {
    let b = model_b_analytic_spectrum(&pair(1.0, 0.0, g, rate, rate)).unwrap();
    let (tp, tm) = target_states(ModelKind::B);
    let sets = [b.eigvec(true), b.eigvec(false)];
    [tp, tm]
        .iter()
        .map(|t| {
            1.0 - sets
                .iter()
                .map(|v| collinearity(v, t).powi(2))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

#[test]
fn two_qubit_symmetric_point_approaches_bell_eigenvectors() {
    // only |01⟩ decays, so the Bell states are eigenvectors only as Γ⁺/g → 0
    let (a, b) = (bell_infidelity(0.2, 0.02), bell_infidelity(0.2, 0.01));
    assert!(a < 1e-3);
    assert!((a / b - 4.0).abs() < 0.05, "ratio {}", a / b);
    assert!(bell_infidelity(0.2, 0.0) < 1e-15);
}

#[test]
fn global_model_closed_form_eigenvalues() {
    for &(g, d) in &[(0.2, 0.0), (0.2, 0.7), (0.01, -1.0), (1.0, 0.05)] {
        let p = ModelGParams::from(pair(0.5, d, g, 0.03, 0.05));
        let a = model_g_analytic_spectrum(&p).unwrap();
        assert!((a.omega_cap - (4.0 * g * g + d * d).sqrt()).abs() < 1e-15);
        let h = model_g_generator(&p, 0.0).unwrap().h_eff().clone();
        let spec = eig_bi_unchecked(&h).unwrap();
        assert!(
            multiset_distance(&spec.eigvals, &a.eigvals()) < 1e-9,
            "g = {g}, d = {d}"
        );
    }
}

#[test]
fn global_model_has_no_ep_on_a_dense_grid() {
    let mut min_gap = f64::INFINITY;
    for i in 0..=40 {
        for j in 0..=40 {
            let g = 0.005 * i as f64;
            let d = -1.0 + 0.05 * j as f64;
            if g == 0.0 && d == 0.0 {
                continue;
            }
            let p = ModelGParams::from(pair(0.0, d, g, 0.1, 0.1));
            let a = model_g_analytic_spectrum(&p).unwrap();
            min_gap = min_gap.min((a.xi_plus - a.xi_minus).norm());
            let spec = eig_bi_unchecked(model_g_generator(&p, 0.0).unwrap().h_eff()).unwrap();
            let near = |xi: C| {
                spec.eigvals
                    .iter()
                    .map(|l| (l - xi).norm())
                    .fold(f64::INFINITY, f64::min)
            };
            assert!(near(a.xi_plus) < 1e-9 && near(a.xi_minus) < 1e-9);
        }
    }
    assert!(min_gap > 0.0);
}

#[test]
fn ep_locations() {
    let a = ModelParams::A(qubit(0.0, 0.1, 0.0, 0.1));
    assert_eq!(ep_location(&a), vec![(0.0, 0.025), (0.0, -0.025)]);
    assert_eq!(
        ep_location(&ModelParams::B(pair(0.0, 0.0, 0.1, 0.05, 0.05))),
        vec![(0.0, 0.025)]
    );
    let g = ModelParams::G(ModelGParams::from(pair(0.0, 0.0, 0.1, 0.05, 0.05)));
    assert!(ep_location(&g).is_empty());
}

#[test]
fn targets_are_orthonormal_in_the_declared_basis() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (p, m) = target_states(ModelKind::A);
    assert_eq!((p.clone(), m.clone()), (ket(&[h, h]), ket(&[h, -h])));
    for kind in [ModelKind::A, ModelKind::B, ModelKind::G] {
        let (p, m) = target_states(kind);
        assert!((p.norm() - 1.0).abs() < 1e-15 && (m.norm() - 1.0).abs() < 1e-15);
        assert!(p.dotc(&m).norm() < 1e-15);
    }
    let (p, m) = target_states(ModelKind::B);
    assert_eq!(p, ket(&[0.0, h, h, 0.0]));
    assert_eq!(m, ket(&[0.0, -h, h, 0.0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn qubit_closed_form_matches_numerics(
        delta in -1.0..1.0f64,
        kappa in 0.01..0.5f64,
        gp in 0.0..0.2f64,
        gm in 0.0..0.2f64,
    ) {
        let p = qubit(delta, kappa, gp, gm);
        let a = model_a_analytic_spectrum(&p).unwrap();
        prop_assume!(a.eta.norm() > 1e-3);
        let h = model_a_generator(&p, 0.0).unwrap().h_eff().clone();
        let spec = eig_bi_unchecked(&h).unwrap();
        prop_assert!(multiset_distance(&spec.eigvals, &[a.xi_plus, a.xi_minus]) < 1e-9);
        // characteristic polynomial
        for xi in [a.xi_plus, a.xi_minus] {
            let det = (h[(0, 0)] - xi) * (h[(1, 1)] - xi) - h[(0, 1)] * h[(1, 0)];
            prop_assert!(det.norm() < 1e-10);
            let plus = xi == a.xi_plus;
            prop_assert!(collinearity(&a.eigvec(plus), &vec_for(&spec, xi)) > 1.0 - 1e-9);
        }
        let z = C::new(a.omega, -4.0 * delta * (gm - gp));
        prop_assert!((a.zeta - ((z.norm() + a.omega) / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qubit_liouvillian_eigenvalue_relations(
        delta in -1.0..1.0f64,
        kappa in 0.01..0.5f64,
        gp in 0.0..0.2f64,
        gm in 0.0..0.2f64,
    ) {
        let p = qubit(delta, kappa, gp, gm);
        let a = model_a_analytic_spectrum(&p).unwrap();
        let lam = a.superop_eigvals();
        let get = |l: bool, m: bool| lam.iter().find(|e| e.0 == (l, m)).unwrap().1;
        prop_assert!((get(false, false) + get(true, true) - re(-p.big_gamma_plus())).norm() < 1e-12);
        prop_assert!((get(false, true) - get(true, false).conj()).norm() < 1e-12);
        let l = assemble_superop(&model_a_generator(&p, 0.0).unwrap());
        let num = eig_bi_unchecked(&l).unwrap().eigvals;
        let closed: Vec<C> = lam.iter().map(|e| e.1).collect();
        prop_assert!(multiset_distance(&num, &closed) < 1e-9);
    }

    #[test]
    fn two_qubit_closed_form_matches_numerics(
        eps in -1.0..1.0f64,
        delta in -1.0..1.0f64,
        g in 0.01..0.5f64,
        g1 in 0.0..0.2f64,
        g2 in 0.0..0.2f64,
    ) {
        let p = pair(eps, delta, g, g1, g2);
        let b = model_b_analytic_spectrum(&p).unwrap();
        prop_assume!(b.eta_prime.norm() > 1e-3);
        let gen = model_b_generator(&p, 0.0).unwrap();
        let spec = eig_bi_unchecked(gen.h_eff()).unwrap();
        prop_assert!(multiset_distance(&spec.eigvals, &b.eigvals()) < 1e-9);
        for plus in [true, false] {
            let xi = if plus { b.xi_plus } else { b.xi_minus };
            let v = b.eigvec(plus);
            prop_assert!(((gen.h_eff() * &v) - &v * xi).camax() < 1e-10);
        }
        // the superoperator spectrum pairs up the closed-form eigenvalues
        let xi = b.eigvals();
        let mut closed = Vec::new();
        for l in &xi {
            for m in &xi {
                closed.push(-I * (m - l.conj()));
            }
        }
        let num = eig_bi_unchecked(&assemble_superop(&gen)).unwrap().eigvals;
        prop_assert!(multiset_distance(&num, &closed) < 1e-9);
    }

    #[test]
    fn global_model_never_degenerates(
        g in 0.0..1.0f64,
        delta in -1.0..1.0f64,
        rate in 0.0..0.3f64,
    ) {
        let p = ModelGParams::from(pair(0.0, delta, g, rate, rate));
        prop_assume!(p.omega_cap() > 1e-6);
        let a = model_g_analytic_spectrum(&p).unwrap();
        prop_assert!((a.xi_plus - a.xi_minus).norm() > 0.0);
        prop_assert!((a.xi_plus - a.xi_minus).re.abs() >= a.omega_cap - 1e-12);
    }
}
