//! Fidelities, smoothing, closed-form conversion fidelities and chirality
//! summaries.

use std::f64::consts::PI;

use crate::drive::{DriveConfig, DrivenModel, Orientation, RateBinding};
use crate::error::{Error, Result};
use crate::models::{target_states, ModelKind, ModelParams};
use crate::propagate::propagate_full;
use crate::slowdrive::{sd_lindblad, sd_run};
use crate::spectral::DensityState;
use crate::{CMat, CVec};

/// Default moving-average window as a fraction of the run.
pub const DEFAULT_SMOOTHING_WINDOW: f64 = 0.02;
/// Margin above 1/2 for the Bell-fidelity entanglement witness.
pub const WITNESS_MARGIN: f64 = 1e-9;

/// `⟨t|ρ|t⟩` without any checks.
pub fn fidelity_raw(target: &CVec, rho: &CMat) -> f64 {
    (target.adjoint() * rho * target)[(0, 0)].re
}

/// `⟨t|ρ|t⟩` for a normalized target and unit-trace `ρ`, clamped to `[0, 1]`.
pub fn fidelity(target: &CVec, rho: &DensityState) -> Result<f64> {
    let tn = target.norm_squared();
    if (tn - 1.0).abs() > 1e-9 {
        return Err(Error::UnnormalizedInput(tn));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::UnnormalizedInput(tr.re));
    }
    if rho.dim() != target.len() {
        return Err(Error::WrongDimension {
            expected: rho.dim(),
            found: target.len(),
        });
    }
    Ok(fidelity_raw(target, &rho.matrix).clamp(0.0, 1.0))
}

/// Centered moving average with a window of `window_fraction · n` samples,
/// truncated at the boundaries.
pub fn moving_average(series: &[f64], window_fraction: f64) -> Vec<f64> {
    let n = series.len().saturating_sub(1);
    let half = (window_fraction.max(0.0) * n as f64 / 2.0).round() as usize;
    if half == 0 {
        return series.to_vec();
    }
    let mut prefix = Vec::with_capacity(series.len() + 1);
    prefix.push(0.0);
    for v in series {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..series.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n);
            (prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64
        })
        .collect()
}

/// Model-specific coupling entering the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormulaModel {
    A { kappa: f64 },
    B { g: f64 },
    G { g: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityFormulaInputs {
    pub model: FormulaModel,
    pub period_t: f64,
    pub x: f64,
    pub delta0: f64,
    pub gamma_prime: f64,
    pub gamma0: f64,
    pub order: usize,
}

impl FidelityFormulaInputs {
    /// Inputs matching a driven model and loop. Model A needs the
    /// `γ⁻`-bound drive with `γ⁺ = 0`.
    pub fn from_drive(driven: &DrivenModel, cfg: &DriveConfig, order: usize) -> Result<Self> {
        let model = match (driven.base, driven.binding) {
            (ModelParams::A(a), RateBinding::GammaMinus) if a.gamma_plus == 0.0 => {
                FormulaModel::A { kappa: a.kappa }
            }
            (ModelParams::B(b), _) => FormulaModel::B { g: b.g },
            (ModelParams::G(g), _) => FormulaModel::G { g: g.g },
            _ => {
                return Err(Error::InvalidParameter(
                    "no closed form for this model and rate binding".into(),
                ))
            }
        };
        Ok(Self {
            model,
            period_t: cfg.period_t,
            x: cfg.orientation.x(),
            delta0: cfg.delta0,
            gamma_prime: cfg.gamma_prime,
            gamma0: cfg.gamma0,
            order,
        })
    }
}

/// Closed-form endpoint fidelities with both targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormPrediction {
    pub plus: f64,
    pub minus: f64,
    /// False when the correction leaves the physically allowed range.
    pub valid: bool,
}

/// Endpoint fidelities of the Lindblad slow-driving expansion. Supported
/// orders: model A 1 and 3, model B 1 and 2, model G 1.
pub fn closed_form_fidelity(inp: &FidelityFormulaInputs) -> Result<ClosedFormPrediction> {
    let FidelityFormulaInputs {
        period_t: t,
        x,
        delta0: d0,
        gamma_prime: gp,
        gamma0: g0,
        order,
        ..
    } = *inp;
    if gp == 0.0 {
        return Err(Error::GammaPrimeZero);
    }
    if gp.is_nan() || t.is_nan() || gp <= 0.0 || t <= 0.0 {
        return Err(Error::InvalidParameter("gamma' and T must be > 0".into()));
    }
    match inp.model {
        FormulaModel::A { kappa: k } => {
            if order != 1 && order != 3 {
                return Err(Error::InvalidOrder(order));
            }
            let k2 = k * k;
            let base = 8.0 * k2 + gp * gp;
            let mut c = x * 16.0 * PI * k * d0 / (t * gp * base);
            if order == 3 {
                let poly = gp.powi(5) * (gp * gp + 5.0 * gp * g0 + 60.0 * d0 * d0)
                    + 256.0 * k2.powi(3) * (2.0 * gp + g0)
                    + 16.0 * gp * k2 * k2 * (12.0 * gp * gp + 11.0 * gp * g0 + 88.0 * d0 * d0)
                    + 8.0 * gp.powi(3) * k2 * (3.0 * gp * gp + 5.0 * gp * g0 + 64.0 * d0 * d0);
                c -= x * 256.0 * PI.powi(3) * d0 * k * poly
                    / (t.powi(3) * gp.powi(4) * base.powi(4));
            }
            Ok(ClosedFormPrediction {
                plus: 0.5 + c,
                minus: 0.5 - c,
                valid: c.abs() <= 0.5,
            })
        }
        FormulaModel::B { g } => {
            if order != 1 && order != 2 {
                return Err(Error::InvalidOrder(order));
            }
            let g2 = g * g;
            let base = 4.0 * g2 + gp * gp;
            let f0 = 0.5 - g2 / base;
            let c = x * 2.0 * PI * g * d0 / (t * gp * base);
            let even = if order == 2 {
                let num = gp.powi(4) * (3.0 * gp * g0 + 11.0 * d0 * d0) + 16.0 * d0 * d0 * g2 * g2
                    - 4.0 * gp * gp * g2 * (gp * g0 - 4.0 * d0 * d0);
                4.0 * PI * PI * g2 * num / (t * t * gp * gp * base.powi(4))
            } else {
                0.0
            };
            let (plus, minus) = (f0 + c + even, f0 - c + even);
            Ok(ClosedFormPrediction {
                plus,
                minus,
                valid: (0.0..=1.0).contains(&plus) && (0.0..=1.0).contains(&minus),
            })
        }
        FormulaModel::G { g } => {
            if order != 1 {
                return Err(Error::InvalidOrder(order));
            }
            let c = x * PI * d0 / (2.0 * t * gp * g);
            Ok(ClosedFormPrediction {
                plus: 0.25 + c,
                minus: 0.25 - c,
                valid: c.abs() <= 0.25,
            })
        }
    }
}

/// Slow-driving endpoint fidelities `(F₊, F₋)` of the effective-Hamiltonian
/// dynamics of model A with `γ⁺ = 0`, starting in `|+⟩` on a loop whose
/// endpoint dissipation is `γ′`. No conversion is predicted for
/// `κ ≤ γ′/4`, where the square root is imaginary.
pub fn nhh_endpoint_fidelity_a(kappa: f64, gamma_prime: f64) -> (f64, f64) {
    let r = 16.0 * kappa * kappa - gamma_prime * gamma_prime;
    if r <= 0.0 {
        return (0.5, 0.5);
    }
    let sq = r.sqrt();
    let den = 16.0 * kappa * kappa + gamma_prime * gamma_prime + sq * sq;
    let x = 4.0 * kappa * sq / den;
    (0.5 - x, 0.5 + x)
}

/// Outcome of the Bell-fidelity entanglement witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResult {
    pub entangled: bool,
    pub f_plus: f64,
    pub f_minus: f64,
    /// `Some(true)` if `|Ψ⁺⟩` triggered, `Some(false)` for `|Ψ⁻⟩`.
    pub triggered_plus: Option<bool>,
}

/// Sufficient entanglement criterion: a Bell-state fidelity above 1/2.
pub fn entanglement_witness(rho: &DensityState) -> Result<WitnessResult> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            found: rho.dim(),
        });
    }
    let (tp, tm) = target_states(ModelKind::B);
    let f_plus = fidelity(&tp, rho)?;
    let f_minus = fidelity(&tm, rho)?;
    let best = f_plus.max(f_minus);
    let entangled = best > 0.5 + WITNESS_MARGIN;
    Ok(WitnessResult {
        entangled,
        f_plus,
        f_minus,
        triggered_plus: entangled.then_some(f_plus >= f_minus),
    })
}

/// Endpoint fidelities `[F₊, F₋]` for one orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientationFidelities {
    pub full: [f64; 2],
    pub slow_drive: [f64; 2],
    pub formula: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralityReport {
    pub cw: OrientationFidelities,
    pub ccw: OrientationFidelities,
    /// `|F₊(x=+1) − F₋(x=−1)|` of the full dynamics.
    pub antisymmetry_residual: f64,
}

/// Run both orientations with identical settings. The slow-driving column
/// uses the order-1 Drazin series at `q = 1` and the one-step operator
/// otherwise.
pub fn chirality_report(
    driven: &DrivenModel,
    cfg: &DriveConfig,
    q: f64,
    rho0: &DensityState,
) -> Result<ChiralityReport> {
    let (tp, tm) = target_states(driven.kind());
    let targets = [tp, tm];
    let run = |o: Orientation| -> Result<OrientationFidelities> {
        let c = cfg.with_orientation(o);
        let full = propagate_full(driven, &c, q, rho0, &targets)?;
        let sd = if q == 1.0 {
            sd_lindblad(driven, &c, 1, &targets)?
        } else {
            sd_run(driven, &c, q, rho0, 1.0, &targets)?
        };
        let formula = if q == 1.0 {
            FidelityFormulaInputs::from_drive(driven, &c, 1)
                .and_then(|inp| closed_form_fidelity(&inp))
                .ok()
                .map(|p| [p.plus, p.minus])
        } else {
            None
        };
        Ok(OrientationFidelities {
            full: [full.endpoint_fidelity(0), full.endpoint_fidelity(1)],
            slow_drive: [sd.endpoint_fidelity(0), sd.endpoint_fidelity(1)],
            formula,
        })
    };
    let cw = run(Orientation::Cw)?;
    let ccw = run(Orientation::Ccw)?;
    Ok(ChiralityReport {
        cw,
        ccw,
        antisymmetry_residual: (cw.full[0] - ccw.full[1]).abs(),
    })
}
