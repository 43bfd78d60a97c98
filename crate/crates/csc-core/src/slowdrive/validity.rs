//! Breakdown diagnostics for the first-order operator.

use super::{growth_parameters, SlowDriveData};
use crate::error::{Error, Result};

/// Coefficients at or above this value mark a breakdown region.
pub const VALIDITY_THRESHOLD: f64 = 0.1;

/// `M_m(s) = |⟨⟨σ_m|ρ̇_*⟩⟩ / (T(λ_m − λ_*))|` for every branch `m` other
/// than the dominant one.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub grid: Vec<f64>,
    /// Dominant branch at each point.
    pub dominant: Vec<usize>,
    /// `coefficients[i]` lists `M_m` for the non-dominant branches in
    /// branch order.
    pub coefficients: Vec<Vec<f64>>,
    /// Maximal intervals where some coefficient reaches the threshold.
    pub flagged: Vec<(f64, f64)>,
}

impl ValidityReport {
    pub fn max_at(&self, i: usize) -> f64 {
        self.coefficients[i].iter().cloned().fold(0.0, f64::max)
    }

    /// Largest coefficient over grid points with `s ∈ [s0, s1]`.
    pub fn max_over(&self, s0: f64, s1: f64) -> f64 {
        self.grid
            .iter()
            .enumerate()
            .filter(|(_, &s)| s >= s0 - 1e-12 && s <= s1 + 1e-12)
            .map(|(i, _)| self.max_at(i))
            .fold(0.0, f64::max)
    }
}

/// Validity coefficients from `from` to the end of the loop. The dominant
/// branch at each point has the largest real growth parameter integrated
/// from `from`; ties (as at the interval start) go to the largest `Re λ`.
pub fn validity_coefficients(data: &SlowDriveData, from: f64) -> Result<ValidityReport> {
    let ia = data.index_of(from);
    let n = data.n_steps();
    let gp = growth_parameters(data, (ia, n), false);
    let nb = data.branches();
    let t = data.period_t;
    let mut dominant = Vec::new();
    let mut coefficients = Vec::new();
    for j in 0..=n - ia {
        let i = ia + j;
        let sp = &data.series.spectra[i];
        let score = |k: usize| (gp.total(j, k) * t).re;
        let mut best = 0;
        for k in 1..nb {
            let (a, b) = (score(k), score(best));
            let tie = (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
            if (tie && sp.eigvals[k].re > sp.eigvals[best].re) || (!tie && a > b) {
                best = k;
            }
        }
        let p = &data.derivative.projections[i];
        let mut row = Vec::with_capacity(nb - 1);
        for m in (0..nb).filter(|&m| m != best) {
            let gap = sp.eigvals[m] - sp.eigvals[best];
            let v = p[(m, best)].norm() / (t * gap.norm());
            if !v.is_finite() {
                return Err(Error::DegenerateSpectrum {
                    gap: gap.norm(),
                    tol: 0.0,
                }
                .at(data.series.grid[i]));
            }
            row.push(v);
        }
        dominant.push(best);
        coefficients.push(row);
    }
    let grid = data.series.grid[ia..=n].to_vec();
    let mut flagged = Vec::new();
    let mut open: Option<f64> = None;
    for (j, row) in coefficients.iter().enumerate() {
        let bad = row.iter().any(|&m| m >= VALIDITY_THRESHOLD);
        match (bad, open) {
            (true, None) => open = Some(grid[j]),
            (false, Some(s0)) => {
                flagged.push((s0, grid[j - 1]));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(s0) = open {
        flagged.push((s0, *grid.last().unwrap()));
    }
    Ok(ValidityReport {
        grid,
        dominant,
        coefficients,
        flagged,
    })
}
