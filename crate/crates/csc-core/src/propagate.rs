//! Reference dynamics: the time-ordered exponential discretized on the
//! uniform grid, renormalized after every step.

use crate::analysis::fidelity_raw;
use crate::drive::{DriveConfig, DrivenModel};
use crate::error::{Error, Result};
use crate::spectral::{devectorize, DensityState};
use crate::{re, CMat, CVec, I};

/// Endpoint fidelity change below which a doubling counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-4;
pub const MAX_DOUBLINGS: usize = 8;

/// Time series produced by any dynamics method.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub grid: Vec<f64>,
    pub states: Vec<DensityState>,
    /// `fidelities[t][i]`: fidelity with target `t` at grid point `i`.
    pub fidelities: Vec<Vec<f64>>,
    /// Trace (or squared norm) removed at each point.
    pub renorm_log: Vec<f64>,
    pub purity: Vec<f64>,
    pub n_steps: usize,
}

impl RunResult {
    pub fn from_states(
        grid: Vec<f64>,
        states: Vec<DensityState>,
        renorm_log: Vec<f64>,
        targets: &[CVec],
    ) -> Self {
        let fidelities = targets
            .iter()
            .map(|t| {
                states
                    .iter()
                    .map(|r| fidelity_raw(t, &r.matrix).clamp(0.0, 1.0))
                    .collect()
            })
            .collect();
        let purity = states.iter().map(|r| r.purity()).collect();
        let n_steps = grid.len().saturating_sub(1);
        Self {
            grid,
            states,
            fidelities,
            renorm_log,
            purity,
            n_steps,
        }
    }

    pub fn endpoint_fidelity(&self, target: usize) -> f64 {
        *self.fidelities[target].last().expect("empty run")
    }

    pub fn endpoint_state(&self) -> &DensityState {
        self.states.last().expect("empty run")
    }

    /// Grid index closest to `s`.
    pub fn index_of(&self, s: f64) -> usize {
        ((s * self.n_steps as f64).round() as usize).min(self.grid.len() - 1)
    }

    pub fn fidelity_at(&self, target: usize, s: f64) -> f64 {
        self.fidelities[target][self.index_of(s)]
    }
}

fn check_initial(rho0: &DensityState, d: usize) -> Result<()> {
    if rho0.dim() != d {
        return Err(Error::WrongDimension {
            expected: d,
            found: rho0.dim(),
        });
    }
    let t = rho0.trace();
    if (t - re(1.0)).norm() > 1e-10 {
        return Err(Error::UnnormalizedInput(t.re));
    }
    Ok(())
}

/// Full hybrid-Lindblad propagation with trace renormalization.
pub fn propagate_full(
    driven: &DrivenModel,
    cfg: &DriveConfig,
    q: f64,
    rho0: &DensityState,
    targets: &[CVec],
) -> Result<RunResult> {
    cfg.validate()?;
    check_initial(rho0, driven.dim())?;
    let n = cfg.n_steps;
    let dt = cfg.period_t / n as f64;
    let grid = cfg.grid();
    let mut v = rho0.vectorize();
    let d = driven.dim();
    let mut states = Vec::with_capacity(n + 1);
    let mut renorm = Vec::with_capacity(n + 1);
    states.push(rho0.clone());
    renorm.push(1.0);
    for &s in &grid[..n] {
        let l = driven.superop_at(s, cfg, q).map_err(|e| e.at(s))?;
        v = (l * re(dt)).exp() * v;
        let tr: crate::C = (0..d).map(|i| v[i * d + i]).sum();
        if !tr.re.is_finite() || !tr.im.is_finite() || tr.norm() < 1e-300 {
            return Err(Error::NonFiniteState.at(s));
        }
        v /= tr;
        renorm.push(tr.re);
        states.push(DensityState {
            matrix: devectorize(&v)?,
            normalized: true,
        });
    }
    Ok(RunResult::from_states(grid, states, renorm, targets))
}

/// Pure-state propagation under the effective Hamiltonian with 2-norm
/// renormalization. `renorm_log` stores the squared norm removed per step.
pub fn propagate_nhh_pure(
    driven: &DrivenModel,
    cfg: &DriveConfig,
    psi0: &CVec,
    targets: &[CVec],
) -> Result<RunResult> {
    cfg.validate()?;
    let d = driven.dim();
    if psi0.len() != d {
        return Err(Error::WrongDimension {
            expected: d,
            found: psi0.len(),
        });
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::UnnormalizedInput(psi0.norm_squared()));
    }
    let n = cfg.n_steps;
    let dt = cfg.period_t / n as f64;
    let grid = cfg.grid();
    let mut psi = psi0.clone();
    let mut states = Vec::with_capacity(n + 1);
    let mut renorm = Vec::with_capacity(n + 1);
    states.push(DensityState::pure(&psi));
    renorm.push(1.0);
    for &s in &grid[..n] {
        let h: CMat = driven.heff_at(s, cfg).map_err(|e| e.at(s))?;
        psi = (h * (-I * dt)).exp() * psi;
        let nrm = psi.norm();
        if !nrm.is_finite() || nrm < 1e-300 {
            return Err(Error::NonFiniteState.at(s));
        }
        psi /= re(nrm);
        renorm.push(nrm * nrm);
        states.push(DensityState::pure(&psi));
    }
    Ok(RunResult::from_states(grid, states, renorm, targets))
}

/// Double the step count until every endpoint fidelity moves by less than
/// [`CONVERGENCE_TOL`].
pub fn converge<F>(n0: usize, mut run: F) -> Result<RunResult>
where
    F: FnMut(usize) -> Result<RunResult>,
{
    let mut n = n0;
    let mut prev = run(n)?;
    let mut last_change = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        n *= 2;
        let cur = run(n)?;
        last_change = (0..cur.fidelities.len())
            .map(|t| (cur.endpoint_fidelity(t) - prev.endpoint_fidelity(t)).abs())
            .fold(0.0, f64::max);
        if last_change < CONVERGENCE_TOL {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        doublings: MAX_DOUBLINGS,
        last_change,
    })
}
