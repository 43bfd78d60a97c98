//! The closed parameter loop and models driven along it.
//!
//! `δ(s) = δ₀ x sin(2πs)` and `γ(s) = γ′ + γ₀ sin²(πs)` with `s = t/T`.
//! `x = +1` runs the loop clockwise, `x = −1` counter-clockwise.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::models::{ModelAParams, ModelBParams, ModelGParams, ModelKind, ModelParams};
use crate::spectral::{
    assemble_superop, heff_derivative, superop_derivative, HybridGenerator, JumpDot,
};
use crate::{re, CMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Cw,
    Ccw,
}

impl Orientation {
    pub fn x(self) -> f64 {
        match self {
            Orientation::Cw => 1.0,
            Orientation::Ccw => -1.0,
        }
    }

    pub fn from_x(x: f64) -> Result<Self> {
        if x == 1.0 {
            Ok(Orientation::Cw)
        } else if x == -1.0 {
            Ok(Orientation::Ccw)
        } else {
            Err(Error::InvalidParameter(format!(
                "orientation must be +1 or -1, got {x}"
            )))
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Cw => Orientation::Ccw,
            Orientation::Ccw => Orientation::Cw,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Orientation::Cw => "cw",
            Orientation::Ccw => "ccw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    pub delta0: f64,
    pub gamma_prime: f64,
    pub gamma0: f64,
    pub orientation: Orientation,
    pub period_t: f64,
    pub n_steps: usize,
}

impl DriveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.delta0.is_nan() || self.delta0 <= 0.0 {
            return Err(Error::InvalidParameter("delta0 must be > 0".into()));
        }
        if self.gamma_prime.is_nan()
            || self.gamma0.is_nan()
            || self.gamma_prime < 0.0
            || self.gamma0 < 0.0
        {
            return Err(Error::InvalidParameter(
                "gamma' and gamma0 must be >= 0".into(),
            ));
        }
        if !self.period_t.is_finite() || self.period_t <= 0.0 {
            return Err(Error::InvalidParameter("period T must be > 0".into()));
        }
        if self.n_steps < 4 {
            return Err(Error::InvalidParameter("n_steps must be >= 4".into()));
        }
        Ok(())
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = o;
        self
    }

    pub fn with_steps(mut self, n: usize) -> Self {
        self.n_steps = n;
        self
    }

    /// Uniform grid `s_k = k/n`, `k = 0..=n`.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.n_steps)
    }

    pub fn ds(&self) -> f64 {
        1.0 / self.n_steps as f64
    }
}

pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

/// `sin(πx)` with exact zeros at integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        0.0
    } else if r.abs() == 0.5 {
        r.signum()
    } else {
        (PI * r).sin()
    }
}

/// `cos(πx)` with exact zeros at half-integers.
fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// `(δ(s), γ(s))`.
pub fn drive_at(s: f64, cfg: &DriveConfig) -> (f64, f64) {
    let x = cfg.orientation.x();
    let sp = sin_pi(s);
    (
        cfg.delta0 * x * sin_pi(2.0 * s),
        cfg.gamma_prime + cfg.gamma0 * sp * sp,
    )
}

/// `(dδ/ds, dγ/ds)`.
pub fn drive_derivative(s: f64, cfg: &DriveConfig) -> (f64, f64) {
    let x = cfg.orientation.x();
    (
        2.0 * PI * x * cfg.delta0 * cos_pi(2.0 * s),
        PI * cfg.gamma0 * sin_pi(2.0 * s),
    )
}

/// Which rates follow `γ(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateBinding {
    /// Model A: `γ⁻ = γ(s)`, `γ⁺` held at its base value.
    GammaMinus,
    /// Model A: `γ⁺ = γ⁻ = γ(s)`.
    Uniform,
    /// Models B and G: `γ₁⁺ = γ₂⁻ = γ(s)`.
    Pair,
}

impl RateBinding {
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::A => RateBinding::GammaMinus,
            ModelKind::B | ModelKind::G => RateBinding::Pair,
        }
    }
}

/// A model whose detuning and rates follow the loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenModel {
    pub base: ModelParams,
    pub binding: RateBinding,
}

impl DrivenModel {
    pub fn new(base: ModelParams, binding: RateBinding) -> Result<Self> {
        let ok = matches!(
            (base.kind(), binding),
            (ModelKind::A, RateBinding::GammaMinus)
                | (ModelKind::A, RateBinding::Uniform)
                | (ModelKind::B, RateBinding::Pair)
                | (ModelKind::G, RateBinding::Pair)
        );
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "rate binding {binding:?} does not apply to model {:?}",
                base.kind()
            )));
        }
        Ok(Self { base, binding })
    }

    pub fn kind(&self) -> ModelKind {
        self.base.kind()
    }

    pub fn dim(&self) -> usize {
        self.kind().dim()
    }

    /// Instantaneous parameters at `s`.
    pub fn params_at(&self, s: f64, cfg: &DriveConfig) -> ModelParams {
        let (delta, gamma) = drive_at(s, cfg);
        match self.base {
            ModelParams::A(p) => {
                let gp = match self.binding {
                    RateBinding::Uniform => gamma,
                    _ => p.gamma_plus,
                };
                ModelParams::A(ModelAParams {
                    delta,
                    gamma_plus: gp,
                    gamma_minus: gamma,
                    ..p
                })
            }
            ModelParams::B(p) => ModelParams::B(ModelBParams {
                delta,
                gamma1_plus: gamma,
                gamma2_minus: gamma,
                ..p
            }),
            ModelParams::G(p) => ModelParams::G(ModelGParams {
                delta,
                gamma1_plus: gamma,
                gamma2_minus: gamma,
                ..p
            }),
        }
    }

    pub fn generator_at(&self, s: f64, cfg: &DriveConfig, q: f64) -> Result<HybridGenerator> {
        self.params_at(s, cfg).generator(q)
    }

    pub fn superop_at(&self, s: f64, cfg: &DriveConfig, q: f64) -> Result<CMat> {
        Ok(assemble_superop(&self.generator_at(s, cfg, q)?))
    }

    pub fn heff_at(&self, s: f64, cfg: &DriveConfig) -> Result<CMat> {
        Ok(self.generator_at(s, cfg, 0.0)?.h_eff().clone())
    }

    /// `Ḣ` and jump data along the loop at `s`.
    fn derivative_data(&self, s: f64, cfg: &DriveConfig) -> Result<(CMat, Vec<JumpDot>)> {
        let (dd, dg) = drive_derivative(s, cfg);
        let p = self.params_at(s, cfg);
        Ok(match p {
            ModelParams::A(a) => {
                let mut hd = CMat::zeros(2, 2);
                hd[(0, 0)] = re(dd);
                let dgp = if self.binding == RateBinding::Uniform {
                    dg
                } else {
                    0.0
                };
                let jumps = a
                    .jumps()
                    .into_iter()
                    .zip([dgp, dg])
                    .map(|(j, rd)| JumpDot {
                        op: j.op,
                        op_dot: None,
                        rate: j.rate,
                        rate_dot: rd,
                    })
                    .collect();
                (hd, jumps)
            }
            ModelParams::B(b) => {
                let hd = ModelBParams::hamiltonian_delta_derivative() * re(dd);
                let jumps = b
                    .jumps()
                    .into_iter()
                    .map(|j| JumpDot {
                        op: j.op,
                        op_dot: None,
                        rate: j.rate,
                        rate_dot: dg,
                    })
                    .collect();
                (hd, jumps)
            }
            ModelParams::G(g) => {
                g.validate()?;
                let hd = ModelBParams::hamiltonian_delta_derivative() * re(dd);
                (hd, g.jump_derivatives(dd, dg))
            }
        })
    }

    /// `dL_q/ds` at `s`, evaluated analytically.
    pub fn superop_dot_at(&self, s: f64, cfg: &DriveConfig, q: f64) -> Result<CMat> {
        let (hd, jumps) = self.derivative_data(s, cfg)?;
        Ok(superop_derivative(&hd, &jumps, q))
    }

    /// `dH_eff/ds` at `s`.
    pub fn heff_dot_at(&self, s: f64, cfg: &DriveConfig) -> Result<CMat> {
        let (hd, jumps) = self.derivative_data(s, cfg)?;
        Ok(heff_derivative(&hd, &jumps))
    }
}

/// Position of the effective-Hamiltonian EP relative to the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpPosition {
    EpLeft,
    Encircling,
    EpRight,
    NoEp,
}

/// Classify the loop against the EP on the `δ = 0` axis. The loop crosses
/// that axis at `γ′` and `γ′ + γ₀`; the EP sits at the rate `γ_EP` where the
/// model's coupling equals its EP value.
pub fn classify_ep_position(cfg: &DriveConfig, model: &DrivenModel) -> Result<EpPosition> {
    let gamma_ep = match (model.base, model.binding) {
        (ModelParams::A(a), RateBinding::GammaMinus) => 4.0 * a.kappa + a.gamma_plus,
        (ModelParams::A(_), _) => return Ok(EpPosition::NoEp),
        (ModelParams::B(b), _) => 2.0 * b.g,
        (ModelParams::G(_), _) => return Ok(EpPosition::NoEp),
    };
    let lo = cfg.gamma_prime;
    let hi = cfg.gamma_prime + cfg.gamma0;
    if gamma_ep == lo || gamma_ep == hi {
        return Err(Error::Boundary(format!(
            "EP rate {gamma_ep} coincides with a loop crossing"
        )));
    }
    Ok(if gamma_ep < lo {
        EpPosition::EpLeft
    } else if gamma_ep < hi {
        EpPosition::Encircling
    } else {
        EpPosition::EpRight
    })
}
