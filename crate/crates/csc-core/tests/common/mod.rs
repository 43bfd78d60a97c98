#![allow(dead_code)]

use csc_core::drive::{DriveConfig, DrivenModel, Orientation, RateBinding};
use csc_core::models::{ModelAParams, ModelBParams, ModelGParams, ModelParams};
use csc_core::spectral::DensityState;
use csc_core::{re, CMat, CVec, C};
use proptest::prelude::*;

pub fn loop_cfg(o: Orientation, delta0: f64, gp: f64, g0: f64, t: f64, n: usize) -> DriveConfig {
    DriveConfig {
        delta0,
        gamma_prime: gp,
        gamma0: g0,
        orientation: o,
        period_t: t,
        n_steps: n,
    }
}

/// The standard single-qubit loop `δ₀ = 1, γ′ = γ₀ = 0.1`.
pub fn reference_loop(o: Orientation, t: f64, n: usize) -> DriveConfig {
    loop_cfg(o, 1.0, 0.1, 0.1, t, n)
}

pub fn model_a(kappa: f64) -> DrivenModel {
    DrivenModel::new(
        ModelParams::A(ModelAParams {
            delta: 0.0,
            kappa,
            gamma_plus: 0.0,
            gamma_minus: 0.0,
        }),
        RateBinding::GammaMinus,
    )
    .unwrap()
}

pub fn model_b(g: f64, epsilon: f64) -> DrivenModel {
    DrivenModel::new(
        ModelParams::B(ModelBParams {
            epsilon,
            delta: 0.0,
            g,
            gamma1_plus: 0.0,
            gamma2_minus: 0.0,
        }),
        RateBinding::Pair,
    )
    .unwrap()
}

pub fn model_g(g: f64, epsilon: f64) -> DrivenModel {
    DrivenModel::new(
        ModelParams::G(ModelGParams {
            epsilon,
            delta: 0.0,
            g,
            gamma1_plus: 0.0,
            gamma2_minus: 0.0,
        }),
        RateBinding::Pair,
    )
    .unwrap()
}

pub fn ket(v: &[f64]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&x| re(x)))
}

pub fn plus_a() -> DensityState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityState::pure(&ket(&[h, h]))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn complex() -> impl Strategy<Value = C> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C::new(a, b))
}

pub fn cmat(d: usize) -> impl Strategy<Value = CMat> {
    proptest::collection::vec(complex(), d * d).prop_map(move |v| CMat::from_row_slice(d, d, &v))
}

pub fn cvec(d: usize) -> impl Strategy<Value = CVec> {
    proptest::collection::vec(complex(), d).prop_map(CVec::from_vec)
}

/// Random density matrix `A A† / tr(A A†)`.
pub fn density(d: usize) -> impl Strategy<Value = DensityState> {
    cmat(d).prop_filter_map("rank deficient", |a| {
        let m = &a * a.adjoint();
        let t = m.trace().re;
        (t > 1e-3).then(|| DensityState::new(m / re(t)).unwrap())
    })
}

/// Match two eigenvalue lists as multisets; returns the largest mismatch.
pub fn multiset_distance(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Eigenvalues of a 2×2 matrix from its trace and determinant.
pub fn eig2(m: &CMat) -> [C; 2] {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}
