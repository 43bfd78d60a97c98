//! Model constructors and closed-form spectra.
//!
//! Model A lives in `{|0⟩, |1⟩}` with `|0⟩` the excited level. Models B and G
//! use `{|11⟩, |10⟩, |01⟩, |00⟩}`, i.e. the Kronecker product of single-qubit
//! bases `{excited, ground}` with qubit 1 as the left factor.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::spectral::{HybridGenerator, Jump, JumpDot};
use crate::{re, CMat, CVec, C, I};

/// Below this value of `Ω` the two-qubit Hamiltonian counts as degenerate.
pub const OMEGA_TOL: f64 = 1e-12;

fn sigma_plus() -> CMat {
    CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(0.0), re(0.0)])
}

fn sigma_minus() -> CMat {
    sigma_plus().transpose()
}

fn on_qubit(k: usize, op: &CMat) -> CMat {
    let id = CMat::identity(2, 2);
    if k == 1 {
        op.kronecker(&id)
    } else {
        id.kronecker(op)
    }
}

fn basis(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = re(1.0);
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    A,
    B,
    G,
}

impl ModelKind {
    pub fn dim(self) -> usize {
        match self {
            ModelKind::A => 2,
            ModelKind::B | ModelKind::G => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelAParams {
    pub delta: f64,
    pub kappa: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
}

impl ModelAParams {
    pub fn validate(&self) -> Result<()> {
        if self.gamma_plus < 0.0 || self.gamma_minus < 0.0 {
            return Err(Error::InvalidParameter("model A rates must be >= 0".into()));
        }
        if self.kappa < 0.0 {
            return Err(Error::InvalidParameter("kappa must be >= 0".into()));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> CMat {
        CMat::from_row_slice(
            2,
            2,
            &[re(self.delta), re(self.kappa), re(self.kappa), re(0.0)],
        )
    }

    pub fn jumps(&self) -> Vec<Jump> {
        vec![
            Jump::new(sigma_plus(), self.gamma_plus),
            Jump::new(sigma_minus(), self.gamma_minus),
        ]
    }

    /// `Γ⁺ = γ⁻ + γ⁺`.
    pub fn big_gamma_plus(&self) -> f64 {
        self.gamma_minus + self.gamma_plus
    }

    /// `Γ⁻ = γ⁻ − γ⁺`.
    pub fn big_gamma_minus(&self) -> f64 {
        self.gamma_minus - self.gamma_plus
    }
}

pub fn model_a_generator(p: &ModelAParams, q: f64) -> Result<HybridGenerator> {
    p.validate()?;
    HybridGenerator::new(p.hamiltonian(), p.jumps(), q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSpectrumA {
    pub xi_plus: C,
    pub xi_minus: C,
    pub theta_plus: C,
    pub theta_minus: C,
    pub eta: C,
    pub zeta: f64,
    pub omega: f64,
}

impl AnalyticSpectrumA {
    /// Normalized eigenvector `(|0⟩ + Θ|1⟩)/√(1+|Θ|²)`.
    pub fn eigvec(&self, plus: bool) -> CVec {
        let t = if plus {
            self.theta_plus
        } else {
            self.theta_minus
        };
        let n = (1.0 + t.norm_sqr()).sqrt();
        CVec::from_vec(vec![re(1.0 / n), t / n])
    }

    /// Superoperator eigenvalues at `q = 0` keyed by `(l, m)` with
    /// `l, m ∈ {+, −}`: `λ_lm = −i(ξ_l − ξ_m*)` for `|ψ_l⟩⟨ψ_m|`.
    pub fn superop_eigvals(&self) -> [((bool, bool), C); 4] {
        let xi = |p: bool| if p { self.xi_plus } else { self.xi_minus };
        let lam = |l: bool, m: bool| -I * (xi(l) - xi(m).conj());
        [
            ((true, true), lam(true, true)),
            ((true, false), lam(true, false)),
            ((false, true), lam(false, true)),
            ((false, false), lam(false, false)),
        ]
    }
}

/// Closed-form eigenvalues and eigenvector ratios of `H_eff` for model A.
pub fn model_a_analytic_spectrum(p: &ModelAParams) -> Result<AnalyticSpectrumA> {
    if p.kappa == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let (d, k) = (p.delta, p.kappa);
    let gm = p.big_gamma_minus();
    let gp = p.big_gamma_plus();
    let omega = 16.0 * k * k + 4.0 * d * d - gm * gm;
    let z = C::new(omega, -4.0 * d * gm);
    let eta = z.sqrt();
    let zeta = ((z.norm() + omega) / 2.0).sqrt();
    let base = C::new(2.0 * d, -gp);
    let xi_plus = (base + eta) / 4.0;
    let xi_minus = (base - eta) / 4.0;
    let shift = I * (p.gamma_minus / 2.0) - d;
    Ok(AnalyticSpectrumA {
        xi_plus,
        xi_minus,
        theta_plus: (xi_plus + shift) / k,
        theta_minus: (xi_minus + shift) / k,
        eta,
        zeta,
        omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelBParams {
    pub epsilon: f64,
    pub delta: f64,
    pub g: f64,
    pub gamma1_plus: f64,
    pub gamma2_minus: f64,
}

impl ModelBParams {
    pub fn validate(&self) -> Result<()> {
        if self.gamma1_plus < 0.0 || self.gamma2_minus < 0.0 {
            return Err(Error::InvalidParameter(
                "two-qubit rates must be >= 0".into(),
            ));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParameter("g must be >= 0".into()));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> CMat {
        let (sp, sm) = (sigma_plus(), sigma_minus());
        let n1 = on_qubit(1, &(&sp * &sm));
        let n2 = on_qubit(2, &(&sp * &sm));
        let hop = on_qubit(1, &sp) * on_qubit(2, &sm);
        n1 * re(self.epsilon)
            + n2 * re(self.epsilon + self.delta)
            + (&hop + hop.adjoint()) * re(self.g)
    }

    /// `∂H/∂δ`.
    pub fn hamiltonian_delta_derivative() -> CMat {
        let sp = sigma_plus();
        on_qubit(2, &(&sp * sp.transpose()))
    }

    pub fn jumps(&self) -> Vec<Jump> {
        vec![
            Jump::new(on_qubit(1, &sigma_plus()), self.gamma1_plus),
            Jump::new(on_qubit(2, &sigma_minus()), self.gamma2_minus),
        ]
    }

    /// `Γ⁺ = γ₁⁺ + γ₂⁻`.
    pub fn big_gamma_plus(&self) -> f64 {
        self.gamma1_plus + self.gamma2_minus
    }

    /// `Ω = √(4g² + δ²)`.
    pub fn omega_cap(&self) -> f64 {
        (4.0 * self.g * self.g + self.delta * self.delta).sqrt()
    }
}

pub fn model_b_generator(p: &ModelBParams, q: f64) -> Result<HybridGenerator> {
    p.validate()?;
    HybridGenerator::new(p.hamiltonian(), p.jumps(), q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSpectrumB {
    pub xi_0: C,
    pub xi_plus: C,
    pub xi_minus: C,
    pub xi_1: C,
    pub theta_plus: C,
    pub theta_minus: C,
    pub eta_prime: C,
    pub zeta_tilde: f64,
    pub omega_tilde: f64,
}

impl AnalyticSpectrumB {
    /// Normalized `(|01⟩ + Θ|10⟩)/√(1+|Θ|²)` in the four-dimensional basis.
    pub fn eigvec(&self, plus: bool) -> CVec {
        let t = if plus {
            self.theta_plus
        } else {
            self.theta_minus
        };
        let n = (1.0 + t.norm_sqr()).sqrt();
        CVec::from_vec(vec![re(0.0), t / n, re(1.0 / n), re(0.0)])
    }

    /// Eigenvalues `{ξ₀, ξ₊, ξ₋, ξ₁}` of `H_eff`.
    pub fn eigvals(&self) -> [C; 4] {
        [self.xi_0, self.xi_plus, self.xi_minus, self.xi_1]
    }
}

pub fn model_b_analytic_spectrum(p: &ModelBParams) -> Result<AnalyticSpectrumB> {
    if p.g == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let (d, g, e) = (p.delta, p.g, p.epsilon);
    let gp = p.big_gamma_plus();
    let omega_tilde = 16.0 * g * g + 4.0 * d * d - gp * gp;
    let z = C::new(omega_tilde, -4.0 * gp * d);
    let eta_prime = z.sqrt();
    let zeta_tilde = ((z.norm() + omega_tilde) / 2.0).sqrt();
    let base = C::new(2.0 * d + 4.0 * e, -gp);
    let xi_plus = (base + eta_prime) / 4.0;
    let xi_minus = (base - eta_prime) / 4.0;
    let shift = I * (gp / 2.0) - (d + e);
    Ok(AnalyticSpectrumB {
        xi_0: C::new(0.0, -p.gamma1_plus / 2.0),
        xi_plus,
        xi_minus,
        xi_1: C::new(d + 2.0 * e, -p.gamma2_minus / 2.0),
        theta_plus: (xi_plus + shift) / g,
        theta_minus: (xi_minus + shift) / g,
        eta_prime,
        zeta_tilde,
        omega_tilde,
    })
}

/// Model B with dissipators acting between eigenstates of the full
/// two-qubit Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelGParams {
    pub epsilon: f64,
    pub delta: f64,
    pub g: f64,
    pub gamma1_plus: f64,
    pub gamma2_minus: f64,
}

impl From<ModelBParams> for ModelGParams {
    fn from(p: ModelBParams) -> Self {
        Self {
            epsilon: p.epsilon,
            delta: p.delta,
            g: p.g,
            gamma1_plus: p.gamma1_plus,
            gamma2_minus: p.gamma2_minus,
        }
    }
}

impl ModelGParams {
    fn as_b(&self) -> ModelBParams {
        ModelBParams {
            epsilon: self.epsilon,
            delta: self.delta,
            g: self.g,
            gamma1_plus: self.gamma1_plus,
            gamma2_minus: self.gamma2_minus,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.as_b().validate()?;
        let om = self.omega_cap();
        if om < OMEGA_TOL {
            return Err(Error::DegenerateHamiltonian(om));
        }
        Ok(())
    }

    pub fn omega_cap(&self) -> f64 {
        self.as_b().omega_cap()
    }

    pub fn big_gamma_plus(&self) -> f64 {
        self.gamma1_plus + self.gamma2_minus
    }

    pub fn hamiltonian(&self) -> CMat {
        self.as_b().hamiltonian()
    }

    /// Mixing angle: `|ε₊⟩ = cos θ|10⟩ + sin θ|01⟩` is the upper single-excitation
    /// eigenstate, `|ε₋⟩ = −sin θ|10⟩ + cos θ|01⟩` the lower one.
    pub fn mixing_angle(&self) -> f64 {
        0.5 * (2.0 * self.g).atan2(-self.delta)
    }

    /// `dθ/dδ = g/Ω²`.
    pub fn mixing_angle_delta_derivative(&self) -> f64 {
        let om = self.omega_cap();
        self.g / (om * om)
    }

    /// Single-excitation eigenstates `(|ε₊⟩, |ε₋⟩)` of the Hamiltonian.
    pub fn eigenstates(&self) -> (CVec, CVec) {
        let th = self.mixing_angle();
        (
            CVec::from_vec(vec![re(0.0), re(th.cos()), re(th.sin()), re(0.0)]),
            CVec::from_vec(vec![re(0.0), re(-th.sin()), re(th.cos()), re(0.0)]),
        )
    }

    /// Jump operators with their `δ`-derivatives. The order is
    /// `L₁(ε₋)†, L₂(ε₋), L₁(ε₊)†, L₂(ε₊)`.
    fn jumps_and_derivatives(&self) -> Vec<(CMat, CMat, f64)> {
        let th = self.mixing_angle();
        let dth = self.mixing_angle_delta_derivative();
        let (c, s) = (th.cos(), th.sin());
        let ep = CVec::from_vec(vec![re(0.0), re(c), re(s), re(0.0)]);
        let em = CVec::from_vec(vec![re(0.0), re(-s), re(c), re(0.0)]);
        // dε₊/dθ = ε₋ and dε₋/dθ = −ε₊.
        let dep = &em * re(dth);
        let dem = &ep * re(-dth);
        let e00 = basis(4, 3);
        let e11 = basis(4, 0);
        let p00 = &e00 * e00.transpose();
        let p11 = &e11 * e11.transpose();
        let sm = sigma_minus();
        let mut out = Vec::with_capacity(4);
        for (a, da, b, db) in [(&em, &dem, &ep, &dep), (&ep, &dep, &em, &dem)] {
            for k in [1usize, 2] {
                let sk = on_qubit(k, &sm);
                let pa = a * a.transpose();
                let pb = b * b.transpose();
                let dpa = da * a.transpose() + a * da.transpose();
                let dpb = db * b.transpose() + b * db.transpose();
                let l = &p00 * &sk * &pa + &pb * &sk * &p11;
                let dl = &p00 * &sk * dpa + dpb * &sk * &p11;
                if k == 1 {
                    out.push((l.adjoint(), dl.adjoint(), self.gamma1_plus));
                } else {
                    out.push((l, dl, self.gamma2_minus));
                }
            }
        }
        out
    }

    pub fn jumps(&self) -> Vec<Jump> {
        self.jumps_and_derivatives()
            .into_iter()
            .map(|(l, _, r)| Jump::new(l, r))
            .collect()
    }

    /// Jump data for the superoperator derivative along a drive with
    /// `dδ/ds = ddelta` and `dγ/ds = dgamma` applied to both rates.
    pub fn jump_derivatives(&self, ddelta: f64, dgamma: f64) -> Vec<JumpDot> {
        self.jumps_and_derivatives()
            .into_iter()
            .map(|(l, dl, r)| JumpDot {
                op: l,
                op_dot: Some(dl * re(ddelta)),
                rate: r,
                rate_dot: dgamma,
            })
            .collect()
    }
}

pub fn model_g_generator(p: &ModelGParams, q: f64) -> Result<HybridGenerator> {
    p.validate()?;
    HybridGenerator::new(p.hamiltonian(), p.jumps(), q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSpectrumG {
    pub xi_0: C,
    pub xi_2: C,
    pub xi_minus: C,
    pub xi_plus: C,
    pub omega_cap: f64,
}

impl AnalyticSpectrumG {
    pub fn eigvals(&self) -> [C; 4] {
        [self.xi_0, self.xi_2, self.xi_minus, self.xi_plus]
    }
}

/// Closed-form `H_eff` eigenvalues of model G. `ξ₋` belongs to the upper
/// single-excitation level `(δ + 2ε + Ω)/2`, `ξ₊` to the lower one.
pub fn model_g_analytic_spectrum(p: &ModelGParams) -> Result<AnalyticSpectrumG> {
    p.validate()?;
    let om = p.omega_cap();
    let gp = p.big_gamma_plus();
    let e2 = p.delta + 2.0 * p.epsilon;
    Ok(AnalyticSpectrumG {
        xi_0: C::new(0.0, -p.gamma1_plus / 2.0),
        xi_2: C::new(e2, -p.gamma2_minus / 2.0),
        xi_minus: C::new((e2 + om) / 2.0, -(gp / 4.0 + gp * p.delta / (4.0 * om))),
        xi_plus: C::new((e2 - om) / 2.0, -(gp / 4.0 - gp * p.delta / (4.0 * om))),
        omega_cap: om,
    })
}

/// Parameters of any of the three models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    A(ModelAParams),
    B(ModelBParams),
    G(ModelGParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::A(_) => ModelKind::A,
            ModelParams::B(_) => ModelKind::B,
            ModelParams::G(_) => ModelKind::G,
        }
    }

    pub fn generator(&self, q: f64) -> Result<HybridGenerator> {
        match self {
            ModelParams::A(p) => model_a_generator(p, q),
            ModelParams::B(p) => model_b_generator(p, q),
            ModelParams::G(p) => model_g_generator(p, q),
        }
    }
}

/// Exceptional points of the effective Hamiltonian as `(δ, coupling)` pairs.
pub fn ep_location(p: &ModelParams) -> Vec<(f64, f64)> {
    match p {
        ModelParams::A(a) => {
            let k = a.big_gamma_minus() / 4.0;
            if k == 0.0 {
                vec![(0.0, 0.0)]
            } else {
                vec![(0.0, k.abs()), (0.0, -k.abs())]
            }
        }
        ModelParams::B(b) => vec![(0.0, b.big_gamma_plus() / 4.0)],
        ModelParams::G(_) => Vec::new(),
    }
}

/// `(|ψ⁺_target⟩, |ψ⁻_target⟩)`.
pub fn target_states(kind: ModelKind) -> (CVec, CVec) {
    let h = re(FRAC_1_SQRT_2);
    match kind {
        ModelKind::A => (CVec::from_vec(vec![h, h]), CVec::from_vec(vec![h, -h])),
        ModelKind::B | ModelKind::G => (
            CVec::from_vec(vec![re(0.0), h, h, re(0.0)]),
            CVec::from_vec(vec![re(0.0), -h, h, re(0.0)]),
        ),
    }
}
