//! Full-Lindblad slow driving: the steady state dressed by Drazin-inverse
//! corrections, `ρ = ρ_ss + Σ_n T⁻ⁿ y_n` with `y_{n+1} = L⁺ ẏ_n`, and the
//! resulting rank-one Floquet map.

use super::grid_derivative;
use crate::drive::{DriveConfig, DrivenModel};
use crate::error::{Error, Result};
use crate::propagate::RunResult;
use crate::spectral::{
    devectorize, drazin_direct, eig_bi, hermitian_eig, steady_state, trace_functional, vectorize,
    DensityState, HybridGenerator, Jump,
};
use crate::{re, CMat, CVec};

pub const MAX_LINDBLAD_ORDER: usize = 3;

/// Steady state and correction terms along the loop.
#[derive(Debug, Clone)]
pub struct LindbladSeries {
    pub grid: Vec<f64>,
    pub period_t: f64,
    pub rho_ss: Vec<CVec>,
    /// `corrections[n - 1][i] = y_n(s_i)`.
    pub corrections: Vec<Vec<CVec>>,
}

impl LindbladSeries {
    pub fn build(driven: &DrivenModel, cfg: &DriveConfig, max_order: usize) -> Result<Self> {
        if max_order > MAX_LINDBLAD_ORDER {
            return Err(Error::InvalidOrder(max_order));
        }
        cfg.validate()?;
        let grid = cfg.grid();
        let mut rho_ss = Vec::with_capacity(grid.len());
        let mut pinv = Vec::with_capacity(grid.len());
        let mut y1 = Vec::with_capacity(grid.len());
        for &s in &grid {
            let l = driven.superop_at(s, cfg, 1.0).map_err(|e| e.at(s))?;
            let ss = steady_state(&l).map_err(|e| e.at(s))?.vectorize();
            let lp = drazin_direct(&l, &ss).map_err(|e| e.at(s))?;
            let ld = driven.superop_dot_at(s, cfg, 1.0).map_err(|e| e.at(s))?;
            let ss_dot = -(&lp * (ld * &ss));
            y1.push(&lp * ss_dot);
            rho_ss.push(ss);
            pinv.push(lp);
        }
        let mut corrections = Vec::with_capacity(max_order);
        if max_order >= 1 {
            corrections.push(y1);
        }
        while corrections.len() < max_order {
            let prev = corrections.last().unwrap();
            let next = (0..grid.len())
                .map(|i| &pinv[i] * grid_derivative(&grid, prev, i))
                .collect();
            corrections.push(next);
        }
        Ok(Self {
            grid,
            period_t: cfg.period_t,
            rho_ss,
            corrections,
        })
    }

    pub fn max_order(&self) -> usize {
        self.corrections.len()
    }

    /// Vectorized prediction at grid point `i`, truncated at `order`.
    pub fn state_vec(&self, i: usize, order: usize) -> CVec {
        let mut v = self.rho_ss[i].clone();
        for n in 1..=order.min(self.max_order()) {
            v += &self.corrections[n - 1][i] * re(self.period_t.powi(-(n as i32)));
        }
        v
    }

    pub fn states(&self, order: usize) -> Result<Vec<DensityState>> {
        (0..self.grid.len())
            .map(|i| {
                Ok(DensityState {
                    matrix: devectorize(&self.state_vec(i, order))?,
                    normalized: true,
                })
            })
            .collect()
    }

    pub fn run_result(&self, order: usize, targets: &[CVec]) -> Result<RunResult> {
        if order > self.max_order() {
            return Err(Error::InvalidOrder(order));
        }
        let states = self.states(order)?;
        let renorm = vec![1.0; states.len()];
        Ok(RunResult::from_states(
            self.grid.clone(),
            states,
            renorm,
            targets,
        ))
    }
}

/// Slow-driving prediction of the full Lindblad dynamics truncated at
/// `order ∈ 0..=3`.
pub fn sd_lindblad(
    driven: &DrivenModel,
    cfg: &DriveConfig,
    order: usize,
    targets: &[CVec],
) -> Result<RunResult> {
    LindbladSeries::build(driven, cfg, order)?.run_result(order, targets)
}

/// First-order prediction assembled from the eigen-decomposition,
/// `ρ_ss + T⁻¹ Σ_{m≠0} ρ_m ⟨⟨σ_m|ρ̇_ss⟩⟩ / λ_m` with
/// `⟨⟨σ_m|ρ̇_ss⟩⟩ = −⟨⟨σ_m|L̇|ρ_ss⟩⟩ / λ_m`. Independent of the resolvent
/// route used by [`LindbladSeries`].
pub fn first_order_eigensum(driven: &DrivenModel, cfg: &DriveConfig) -> Result<Vec<CVec>> {
    cfg.validate()?;
    let d = driven.dim();
    let one = trace_functional(d);
    cfg.grid()
        .into_iter()
        .map(|s| {
            let l = driven.superop_at(s, cfg, 1.0).map_err(|e| e.at(s))?;
            let ld = driven.superop_dot_at(s, cfg, 1.0).map_err(|e| e.at(s))?;
            let spec = eig_bi(&l, Some(0.0)).map_err(|e| e.at(s))?;
            let k0 = (0..spec.dim())
                .min_by(|&a, &b| {
                    spec.eigvals[a]
                        .norm()
                        .partial_cmp(&spec.eigvals[b].norm())
                        .unwrap()
                })
                .unwrap();
            let r0 = spec.right_vec(k0);
            let ss = &r0 / (one.transpose() * &r0)[(0, 0)];
            let mut v = ss.clone();
            for m in (0..spec.dim()).filter(|&m| m != k0) {
                let lam = spec.eigvals[m];
                let proj = -spec.dual(m, &(&ld * &ss)) / lam;
                v += spec.right_vec(m) * (proj / (lam * cfg.period_t));
            }
            Ok(v)
        })
        .collect()
}

/// Rank-one one-period map `U_F = |ρ_sd(T)⟩⟩⟨⟨𝟙|`.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    pub matrix: CMat,
    pub rho_sd: DensityState,
    /// Eigenvalues of `ρ_sd(T)`, ascending.
    pub populations: Vec<f64>,
    /// Matching eigenvectors as columns.
    pub eigenbasis: CMat,
}

impl FloquetOperator {
    pub fn apply(&self, rho: &DensityState) -> Result<DensityState> {
        let v = &self.matrix * rho.vectorize();
        Ok(DensityState {
            matrix: devectorize(&v)?,
            normalized: rho.normalized,
        })
    }

    /// `(j, k, rate)` for the reset jump `|k⟩⟨j|`, `j ≠ k`, whose rate is
    /// the target population `p_k`.
    pub fn reset_rates(&self) -> Vec<(usize, usize, f64)> {
        let d = self.populations.len();
        let mut out = Vec::with_capacity(d * (d - 1));
        for j in 0..d {
            for k in (0..d).filter(|&k| k != j) {
                out.push((j, k, self.populations[k].max(0.0)));
            }
        }
        out
    }

    /// Time-independent dissipator whose unique steady state is `ρ_sd(T)`.
    pub fn reset_generator(&self) -> Result<HybridGenerator> {
        let d = self.populations.len();
        let basis = &self.eigenbasis;
        let jumps = self
            .reset_rates()
            .into_iter()
            .map(|(j, k, rate)| {
                let op = basis.column(k) * basis.column(j).adjoint();
                Jump::new(op, rate)
            })
            .collect();
        HybridGenerator::new(CMat::zeros(d, d), jumps, 1.0)
    }
}

pub fn floquet_operator(
    driven: &DrivenModel,
    cfg: &DriveConfig,
    order: usize,
) -> Result<FloquetOperator> {
    let series = LindbladSeries::build(driven, cfg, order)?;
    let v = series.state_vec(series.grid.len() - 1, order);
    let d = driven.dim();
    let rho = devectorize(&v)?;
    let (populations, eigenbasis) = hermitian_eig(&rho);
    let matrix = &v * trace_functional(d).transpose();
    debug_assert_eq!(vectorize(&rho), v);
    Ok(FloquetOperator {
        matrix,
        rho_sd: DensityState {
            matrix: rho,
            normalized: true,
        },
        populations,
        eigenbasis,
    })
}
