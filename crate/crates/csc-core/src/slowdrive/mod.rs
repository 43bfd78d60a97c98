//! Slow-driving evolution operator.
//!
//! For a generator with non-degenerate instantaneous eigensystem
//! `{λ_k, ρ_k, σ_k}` the evolution from `s_a` to `s_b` is, to first order in
//! `1/T`,
//!
//! ```text
//! U(s_b, s_a) = Σ_k w_k [ ρ_k(b)σ_k(a) + Σ_{m≠k} W_mk(b) ρ_m(b)σ_k(a)
//!                                     − Σ_{m≠k} W_km(a) ρ_k(b)σ_m(a) ]
//! ```
//!
//! with `w_k = exp(T Δ̃_k(s_b))`, `Δ̃_k` the integral of
//! `λ_k − ⟨⟨σ_k|ρ̇_k⟩⟩/T`, and `W_mk = ⟨⟨σ_m|ρ̇_k⟩⟩ / (T(λ_m − λ_k))`.
//! Off-diagonal derivative overlaps come from
//! `⟨⟨σ_m|ρ̇_k⟩⟩ = ⟨⟨σ_m|L̇|ρ_k⟩⟩ / (λ_k − λ_m)`; the diagonal ones from
//! finite differences of the gauge-fixed eigenvectors.

mod lindblad;
mod validity;

pub use lindblad::{
    first_order_eigensum, floquet_operator, sd_lindblad, FloquetOperator, LindbladSeries,
    MAX_LINDBLAD_ORDER,
};
pub use validity::{validity_coefficients, ValidityReport, VALIDITY_THRESHOLD};

use crate::drive::{DriveConfig, DrivenModel};
use crate::error::{Error, Result};
use crate::propagate::RunResult;
use crate::spectral::{devectorize, BranchedSpectrumSeries, DensityState, DEFAULT_GAP_TOL};
use crate::{re, CMat, CVec, C};

/// Couplings `|⟨⟨σ_m|L̇|ρ_k⟩⟩|` below this fraction of `‖L̇‖` are treated as
/// exact zeros (selection rules, uncoupled blocks).
pub const ZERO_COUPLING_REL: f64 = 1e-10;
/// A nonzero coupling across a gap smaller than this is an error.
pub const COUPLED_GAP_MIN: f64 = 1e-12;

/// Overlaps of eigenvector derivatives with the dual basis.
#[derive(Debug, Clone)]
pub struct EigvecDerivative {
    /// `couplings[i][(m, k)] = ⟨⟨σ_m|L̇|ρ_k⟩⟩` at grid point `i`, with
    /// negligible entries set to zero.
    pub couplings: Vec<CMat>,
    /// `projections[i][(m, k)] = ⟨⟨σ_m|ρ̇_k⟩⟩` at grid point `i`.
    pub projections: Vec<CMat>,
}

/// Derivative of `f` on a uniform grid with fourth-order stencils: centered
/// in the interior, one-sided near the ends. Needs at least five points.
pub(crate) fn grid_derivative<T>(grid: &[f64], f: &[T], i: usize) -> T
where
    T: Clone + std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<C, Output = T>,
{
    let h = grid[1] - grid[0];
    let w = |c: &[(usize, f64)]| -> T {
        let mut acc = f[c[0].0].clone() * re(c[0].1);
        for &(k, a) in &c[1..] {
            acc = acc + f[k].clone() * re(a);
        }
        acc * re(1.0 / (12.0 * h))
    };
    let l = grid.len() - 1;
    match i {
        0 => w(&[(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)]),
        1 => w(&[(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)]),
        _ if i == l => w(&[
            (l, 25.0),
            (l - 1, -48.0),
            (l - 2, 36.0),
            (l - 3, -16.0),
            (l - 4, 3.0),
        ]),
        _ if i == l - 1 => w(&[
            (l, 3.0),
            (l - 1, 10.0),
            (l - 2, -18.0),
            (l - 3, 6.0),
            (l - 4, -1.0),
        ]),
        _ => w(&[(i - 2, 1.0), (i - 1, -8.0), (i + 1, 8.0), (i + 2, -1.0)]),
    }
}

/// Compute `⟨⟨σ_m|ρ̇_k⟩⟩` along a branched series.
pub fn eigvec_derivative<F>(
    series: &BranchedSpectrumSeries,
    mut generator_dot_at: F,
) -> Result<EigvecDerivative>
where
    F: FnMut(f64) -> Result<CMat>,
{
    let n = series.len();
    if n < 5 {
        return Err(Error::InvalidParameter(
            "need at least five grid points".into(),
        ));
    }
    let nb = series.branches();
    let rights: Vec<CMat> = series.spectra.iter().map(|sp| sp.right.clone()).collect();
    let mut couplings = Vec::with_capacity(n);
    let mut projections = Vec::with_capacity(n);
    for (i, (&s, sp)) in series.grid.iter().zip(&series.spectra).enumerate() {
        let ld = generator_dot_at(s).map_err(|e| e.at(s))?;
        let cut = ZERO_COUPLING_REL * ld.norm();
        let mut c = &sp.left * &ld * &sp.right;
        let mut p = CMat::zeros(nb, nb);
        for m in 0..nb {
            for k in 0..nb {
                if m == k {
                    continue;
                }
                if c[(m, k)].norm() <= cut {
                    c[(m, k)] = re(0.0);
                    continue;
                }
                let gap = sp.eigvals[k] - sp.eigvals[m];
                if gap.norm() < COUPLED_GAP_MIN {
                    return Err(Error::DegenerateSpectrum {
                        gap: gap.norm(),
                        tol: COUPLED_GAP_MIN,
                    }
                    .at(s));
                }
                p[(m, k)] = c[(m, k)] / gap;
            }
        }
        let dr = grid_derivative(&series.grid, &rights, i);
        for k in 0..nb {
            p[(k, k)] = (sp.left.row(k) * dr.column(k))[(0, 0)];
        }
        couplings.push(c);
        projections.push(p);
    }
    Ok(EigvecDerivative {
        couplings,
        projections,
    })
}

/// Spectral data needed by the slow-driving operator along a whole loop.
#[derive(Debug, Clone)]
pub struct SlowDriveData {
    pub q: f64,
    pub period_t: f64,
    pub series: BranchedSpectrumSeries,
    pub derivative: EigvecDerivative,
}

impl SlowDriveData {
    /// At `q = 0` the superoperator spectrum is lifted from the tracked
    /// effective-Hamiltonian spectrum, which stays well defined where the
    /// superoperator itself has crossing eigenvalues.
    pub fn build(driven: &DrivenModel, cfg: &DriveConfig, q: f64) -> Result<Self> {
        cfg.validate()?;
        let grid = cfg.grid();
        let series = if q == 0.0 {
            BranchedSpectrumSeries::build(&grid, |s| driven.heff_at(s, cfg), DEFAULT_GAP_TOL)?
                .lift()
        } else {
            BranchedSpectrumSeries::build(&grid, |s| driven.superop_at(s, cfg, q), DEFAULT_GAP_TOL)?
        };
        let derivative = eigvec_derivative(&series, |s| driven.superop_dot_at(s, cfg, q))?;
        Ok(Self {
            q,
            period_t: cfg.period_t,
            series,
            derivative,
        })
    }

    /// Same spectral data evaluated for a different period.
    pub fn with_period(&self, period_t: f64) -> Self {
        Self {
            period_t,
            ..self.clone()
        }
    }

    /// Replace the series by a regauged copy and recompute derivatives.
    pub fn regauged<F, G>(&self, phase: F, generator_dot_at: G) -> Result<Self>
    where
        F: Fn(usize, f64) -> C,
        G: FnMut(f64) -> Result<CMat>,
    {
        let series = self.series.regauge(phase);
        let derivative = eigvec_derivative(&series, generator_dot_at)?;
        Ok(Self {
            q: self.q,
            period_t: self.period_t,
            series,
            derivative,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.series.len() - 1
    }

    pub fn branches(&self) -> usize {
        self.series.branches()
    }

    pub fn index_of(&self, s: f64) -> usize {
        ((s * self.n_steps() as f64).round() as usize).min(self.n_steps())
    }

    /// `W_mk = ⟨⟨σ_m|ρ̇_k⟩⟩ / (T(λ_m − λ_k))` at grid point `i`.
    pub fn coupling_matrix(&self, i: usize) -> CMat {
        let sp = &self.series.spectra[i];
        let p = &self.derivative.projections[i];
        let nb = sp.dim();
        CMat::from_fn(nb, nb, |m, k| {
            if m == k || p[(m, k)] == re(0.0) {
                re(0.0)
            } else {
                p[(m, k)] / ((sp.eigvals[m] - sp.eigvals[k]) * self.period_t)
            }
        })
    }
}

/// Growth parameters `Δ̃_k` on a sub-interval of the grid, split into the
/// eigenvalue integral and the geometric part.
#[derive(Debug, Clone)]
pub struct GrowthParameters {
    pub grid: Vec<f64>,
    /// `∫ (λ_k − shift) ds` from the interval start.
    pub dynamical: Vec<Vec<C>>,
    /// `−(1/T) ∫ ⟨⟨σ_k|ρ̇_k⟩⟩ ds` from the interval start.
    pub geometric: Vec<Vec<C>>,
    /// Integral of the common shift removed from every branch (zero when
    /// the shift is kept).
    pub common_shift: Vec<f64>,
}

impl GrowthParameters {
    pub fn total(&self, i: usize, k: usize) -> C {
        self.dynamical[i][k] + self.geometric[i][k]
    }

    pub fn branches(&self) -> usize {
        self.dynamical.first().map_or(0, |v| v.len())
    }
}

/// Trapezoid-rule growth parameters on grid indices `[ia, ib]`. With
/// `drop_common_shift` the branch-averaged real part of the eigenvalues is
/// removed at every point; it cancels in any normalized prediction.
pub fn growth_parameters(
    data: &SlowDriveData,
    interval: (usize, usize),
    drop_common_shift: bool,
) -> GrowthParameters {
    let (ia, ib) = interval;
    let nb = data.branches();
    let t = data.period_t;
    let shift_at = |i: usize| -> f64 {
        if drop_common_shift {
            data.series.spectra[i]
                .eigvals
                .iter()
                .map(|l| l.re)
                .sum::<f64>()
                / nb as f64
        } else {
            0.0
        }
    };
    let lam = |i: usize, k: usize| data.series.spectra[i].eigvals[k] - shift_at(i);
    let geo = |i: usize, k: usize| -data.derivative.projections[i][(k, k)] / t;
    let mut dynamical = vec![vec![C::new(0.0, 0.0); nb]];
    let mut geometric = vec![vec![C::new(0.0, 0.0); nb]];
    let mut common = vec![0.0];
    for i in ia + 1..=ib {
        let h = data.series.grid[i] - data.series.grid[i - 1];
        let (pd, pg) = (
            dynamical.last().unwrap().clone(),
            geometric.last().unwrap().clone(),
        );
        dynamical.push(
            (0..nb)
                .map(|k| pd[k] + (lam(i - 1, k) + lam(i, k)) * (0.5 * h))
                .collect(),
        );
        geometric.push(
            (0..nb)
                .map(|k| pg[k] + (geo(i - 1, k) + geo(i, k)) * (0.5 * h))
                .collect(),
        );
        common.push(common.last().unwrap() + 0.5 * h * (shift_at(i - 1) + shift_at(i)));
    }
    GrowthParameters {
        grid: data.series.grid[ia..=ib].to_vec(),
        dynamical,
        geometric,
        common_shift: common,
    }
}

/// Exponential weights `exp(TΔ̃_k − max_k Re TΔ̃_k)` and the removed log-scale.
fn weights(gp: &GrowthParameters, j: usize, t: f64) -> Result<(CVec, f64)> {
    let nb = gp.branches();
    let lw: Vec<C> = (0..nb).map(|k| gp.total(j, k) * t).collect();
    let m = lw.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return Err(Error::Overflow);
    }
    Ok((CVec::from_iterator(nb, lw.iter().map(|z| (z - m).exp())), m))
}

/// First-order slow-driving operator on `[s_a, s_b]`.
#[derive(Debug, Clone)]
pub struct SlowDriveOperator {
    pub order: usize,
    pub interval: (f64, f64),
    pub matrix: CMat,
    /// `ln` of the factor removed from every weight, so the physical
    /// operator is `exp(log_scale + common_shift·T) · matrix`.
    pub log_scale: f64,
}

pub fn sd_operator(data: &SlowDriveData, sa: f64, sb: f64) -> Result<SlowDriveOperator> {
    let (ia, ib) = (data.index_of(sa), data.index_of(sb));
    if ib < ia {
        return Err(Error::InvalidParameter(
            "interval end precedes start".into(),
        ));
    }
    let gp = growth_parameters(data, (ia, ib), true);
    let (e, m) = weights(&gp, ib - ia, data.period_t)?;
    let ed = CMat::from_diagonal(&e);
    let k = &ed + data.coupling_matrix(ib) * &ed - &ed * data.coupling_matrix(ia);
    let sa_spec = &data.series.spectra[ia];
    let sb_spec = &data.series.spectra[ib];
    let matrix = &sb_spec.right * k * &sa_spec.left;
    if matrix
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Overflow);
    }
    Ok(SlowDriveOperator {
        order: 1,
        interval: (data.series.grid[ia], data.series.grid[ib]),
        matrix,
        log_scale: m + gp.common_shift.last().unwrap() * data.period_t,
    })
}

fn trace_of(v: &CVec) -> C {
    let d = (v.len() as f64).sqrt().round() as usize;
    (0..d).map(|i| v[i * d + i]).sum()
}

/// Apply the slow-driving operator from grid point `ia` to every point up to
/// `ib`, returning trace-normalized vectorized states.
pub fn evolve_interval(data: &SlowDriveData, ia: usize, ib: usize, v0: &CVec) -> Result<Vec<CVec>> {
    let sa = &data.series.spectra[ia];
    let c = &sa.left * v0;
    let d = data.coupling_matrix(ia) * &c;
    let gp = growth_parameters(data, (ia, ib), true);
    let mut out = Vec::with_capacity(ib - ia + 1);
    for j in 0..=ib - ia {
        let i = ia + j;
        let (e, _) = weights(&gp, j, data.period_t)?;
        let ec = e.component_mul(&c);
        let coef = e.component_mul(&(&c - &d)) + data.coupling_matrix(i) * ec;
        let mut v = &data.series.spectra[i].right * coef;
        let tr = trace_of(&v);
        if !tr.re.is_finite() || !tr.im.is_finite() || tr.norm() < 1e-300 {
            return Err(Error::NonFiniteState.at(data.series.grid[i]));
        }
        v /= tr;
        out.push(v);
    }
    Ok(out)
}

/// Slow-driving prediction with one renormalization at `s_star`;
/// `s_star = 1` applies a single operator over the whole loop.
pub fn apply_two_step(
    data: &SlowDriveData,
    rho0: &DensityState,
    s_star: f64,
    targets: &[CVec],
) -> Result<RunResult> {
    if !(s_star > 0.0 && s_star <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "s_star = {s_star} outside (0, 1]"
        )));
    }
    let n = data.n_steps();
    let istar = data.index_of(s_star).max(1);
    let v0 = rho0.vectorize();
    let mut vs = evolve_interval(data, 0, istar, &v0)?;
    if istar < n {
        let second = evolve_interval(data, istar, n, vs.last().unwrap())?;
        vs.extend(second.into_iter().skip(1));
    }
    let states = vs
        .iter()
        .map(|v| {
            Ok(DensityState {
                matrix: devectorize(v)?,
                normalized: true,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let renorm = vec![1.0; states.len()];
    Ok(RunResult::from_states(
        data.series.grid.clone(),
        states,
        renorm,
        targets,
    ))
}

/// Build the spectral data and apply the two-step procedure.
pub fn sd_run(
    driven: &DrivenModel,
    cfg: &DriveConfig,
    q: f64,
    rho0: &DensityState,
    s_star: f64,
    targets: &[CVec],
) -> Result<RunResult> {
    let data = SlowDriveData::build(driven, cfg, q)?;
    apply_two_step(&data, rho0, s_star, targets)
}
