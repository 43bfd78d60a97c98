//! Vectorization, superoperators and biorthogonal eigensystems.
//!
//! Density matrices are vectorized by row stacking: entry `(r, c)` of a
//! `d × d` matrix lands at index `r·d + c`. With this convention
//! `vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ)`.
//!
//! Left eigenvectors are stored as dual *functionals*: row `k` of
//! [`Spectrum::left`] is the row vector that maps a vectorized state `v`
//! to `⟨⟨σ_k|v⟩⟩`. Biorthonormality then reads `left · right = 𝟙`.

use nalgebra::{Schur, SymmetricEigen};

use crate::error::{Error, Result};
use crate::{re, CMat, CVec, C, I};

/// Eigenvalues closer than this to zero count as zero modes.
pub const ZERO_MODE_TOL: f64 = 1e-9;
/// Relative tolerance used to detect exact block structure.
const BLOCK_TOL: f64 = 1e-15;
/// Two overlaps closer than this make branch matching ambiguous.
pub const BRANCH_TIE_TOL: f64 = 1e-6;
/// Default relative gap tolerance (times the matrix norm).
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

/// A (possibly unnormalized) density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    pub matrix: CMat,
    pub normalized: bool,
}

impl DensityState {
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let normalized = (matrix.trace() - re(1.0)).norm() < 1e-10;
        Ok(Self { matrix, normalized })
    }

    /// `|ψ⟩⟨ψ|` for a state vector, normalized to unit trace.
    pub fn pure(psi: &CVec) -> Self {
        let n = psi.norm_squared();
        let matrix = psi * psi.adjoint() / re(n);
        Self {
            matrix,
            normalized: true,
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: CMat::identity(d, d) / re(d as f64),
            normalized: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Divide by the trace.
    pub fn normalize(&self) -> Result<Self> {
        let t = self.trace();
        if !t.re.is_finite() || !t.im.is_finite() || t.norm() < 1e-300 {
            return Err(Error::NonFiniteState);
        }
        Ok(Self {
            matrix: &self.matrix / t,
            normalized: true,
        })
    }

    pub fn vectorize(&self) -> CVec {
        vectorize(&self.matrix)
    }
}

/// Row-stacking vectorization.
pub fn vectorize(m: &CMat) -> CVec {
    let (r, c) = m.shape();
    CVec::from_fn(r * c, |k, _| m[(k / c, k % c)])
}

/// Inverse of [`vectorize`] for square matrices.
pub fn devectorize(v: &CVec) -> Result<CMat> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d * d != v.len() {
        return Err(Error::NonSquareLength(v.len()));
    }
    Ok(CMat::from_fn(d, d, |r, c| v[r * d + c]))
}

/// Row vector of the trace functional `⟨⟨𝟙|`.
pub fn trace_functional(d: usize) -> CVec {
    vectorize(&CMat::identity(d, d))
}

/// A jump operator with its rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Jump {
    pub op: CMat,
    pub rate: f64,
}

impl Jump {
    pub fn new(op: CMat, rate: f64) -> Self {
        Self { op, rate }
    }
}

/// `H − (i/2) Σ γ L†L`.
pub fn effective_hamiltonian(h: &CMat, jumps: &[Jump]) -> CMat {
    let mut heff = h.clone();
    for j in jumps {
        heff -= (j.op.adjoint() * &j.op) * (I * 0.5 * j.rate);
    }
    heff
}

/// Generator of the hybrid-Lindblad equation with postselection parameter `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridGenerator {
    h: CMat,
    h_eff: CMat,
    jumps: Vec<Jump>,
    q: f64,
}

impl HybridGenerator {
    pub fn new(h: CMat, jumps: Vec<Jump>, q: f64) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch {
                expected: h.nrows(),
                found: h.ncols(),
            });
        }
        let d = h.nrows();
        for j in &jumps {
            if j.op.shape() != (d, d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: j.op.nrows().max(j.op.ncols()),
                });
            }
            if !j.rate.is_finite() || j.rate < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "rate {} must be >= 0",
                    j.rate
                )));
            }
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("q = {q} outside [0, 1]")));
        }
        let h_eff = effective_hamiltonian(&h, &jumps);
        Ok(Self { h, h_eff, jumps, q })
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }
    pub fn h(&self) -> &CMat {
        &self.h
    }
    pub fn h_eff(&self) -> &CMat {
        &self.h_eff
    }
    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Right-hand side of the master equation evaluated directly on a matrix.
    pub fn apply(&self, rho: &CMat) -> CMat {
        let mut out = (&self.h_eff * rho - rho * self.h_eff.adjoint()) * (-I);
        for j in &self.jumps {
            out += &j.op * rho * j.op.adjoint() * re(self.q * j.rate);
        }
        out
    }
}

/// Superoperator matrix of `g` acting on row-stacked vectors.
pub fn assemble_superop(g: &HybridGenerator) -> CMat {
    superop_from_parts(&g.h_eff, &g.jumps, g.q)
}

pub(crate) fn superop_from_parts(h_eff: &CMat, jumps: &[Jump], q: f64) -> CMat {
    let d = h_eff.nrows();
    let id = CMat::identity(d, d);
    let mut s = (h_eff.kronecker(&id) - id.kronecker(&h_eff.conjugate())) * (-I);
    if q != 0.0 {
        for j in jumps {
            s += j.op.kronecker(&j.op.conjugate()) * re(q * j.rate);
        }
    }
    s
}

/// Jump operator, its derivative, and the derivative of its rate.
#[derive(Debug, Clone)]
pub struct JumpDot {
    pub op: CMat,
    pub op_dot: Option<CMat>,
    pub rate: f64,
    pub rate_dot: f64,
}

/// Derivative of `H_eff` given `Ḣ` and the jump data.
pub fn heff_derivative(h_dot: &CMat, jumps: &[JumpDot]) -> CMat {
    let mut out = h_dot.clone();
    for j in jumps {
        let mut ll = (j.op.adjoint() * &j.op) * re(j.rate_dot);
        if let Some(ld) = &j.op_dot {
            ll += (ld.adjoint() * &j.op + j.op.adjoint() * ld) * re(j.rate);
        }
        out -= ll * (I * 0.5);
    }
    out
}

/// Derivative of the superoperator by the product rule.
pub fn superop_derivative(h_dot: &CMat, jumps: &[JumpDot], q: f64) -> CMat {
    let hd = heff_derivative(h_dot, jumps);
    let d = hd.nrows();
    let id = CMat::identity(d, d);
    let mut s = (hd.kronecker(&id) - id.kronecker(&hd.conjugate())) * (-I);
    if q != 0.0 {
        for j in jumps {
            s += j.op.kronecker(&j.op.conjugate()) * re(q * j.rate_dot);
            if let Some(ld) = &j.op_dot {
                s += (ld.kronecker(&j.op.conjugate()) + j.op.kronecker(&ld.conjugate()))
                    * re(q * j.rate);
            }
        }
    }
    s
}

/// Biorthonormal eigensystem of a diagonalizable matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigvals: Vec<C>,
    /// Right eigenvectors as columns, unit 2-norm.
    pub right: CMat,
    /// Dual functionals as rows, `left · right = 𝟙`.
    pub left: CMat,
    /// Smallest pairwise eigenvalue distance.
    pub gap: f64,
    /// Invariant-subspace label of each eigenpair.
    pub block: Vec<usize>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigvals.len()
    }

    pub fn right_vec(&self, k: usize) -> CVec {
        self.right.column(k).into_owned()
    }

    /// `⟨⟨σ_k|v⟩⟩`.
    pub fn dual(&self, k: usize, v: &CVec) -> C {
        (self.left.row(k) * v)[(0, 0)]
    }

    /// `Σ_k λ_k |ρ_k⟩⟩⟨⟨σ_k|`.
    pub fn reconstruct(&self) -> CMat {
        let n = self.dim();
        let lam = CMat::from_diagonal(&CVec::from_vec(self.eigvals.clone()));
        debug_assert_eq!(lam.nrows(), n);
        &self.right * lam * &self.left
    }

    pub fn biorthonormality_error(&self) -> f64 {
        let n = self.dim();
        (&self.left * &self.right - CMat::identity(n, n)).camax()
    }

    /// Smallest distance between eigenvalues that share an invariant block.
    pub fn coupled_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if self.block[i] == self.block[j] {
                    gap = gap.min((self.eigvals[i] - self.eigvals[j]).norm());
                }
            }
        }
        gap
    }

    /// Rephase right vector `k` so that component `refs[k]` is real positive.
    pub fn fix_gauge(&mut self, refs: &[usize]) {
        for (k, &r) in refs.iter().enumerate() {
            let mut idx = r;
            if self.right[(idx, k)].norm() < 1e-12 {
                idx = largest_component(&self.right.column(k).into_owned());
            }
            let c = self.right[(idx, k)];
            let phase = c.conj() / c.norm();
            self.scale_branch(k, phase);
        }
    }

    /// Multiply right vector `k` by `p` and its dual by `1/p`.
    pub fn scale_branch(&mut self, k: usize, p: C) {
        let mut col = self.right.column_mut(k);
        col *= p;
        let mut row = self.left.row_mut(k);
        row /= p;
    }

    /// Reorder eigenpairs so that new branch `k` is old branch `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.dim();
        Self {
            eigvals: perm.iter().map(|&p| self.eigvals[p]).collect(),
            right: CMat::from_fn(n, n, |i, k| self.right[(i, perm[k])]),
            left: CMat::from_fn(n, n, |k, i| self.left[(perm[k], i)]),
            gap: self.gap,
            block: perm.iter().map(|&p| self.block[p]).collect(),
        }
    }
}

fn largest_component(v: &CVec) -> usize {
    v.iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, z)| {
            if z.norm() > acc.1 {
                (i, z.norm())
            } else {
                acc
            }
        })
        .0
}

/// Connected components of the coupling graph of `m`.
fn invariant_blocks(m: &CMat) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let thr = BLOCK_TOL * m.camax().max(f64::MIN_POSITIVE);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)].norm() > thr {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[label[r]].push(i);
    }
    blocks
}

/// Eigenpairs of a dense block via complex Schur form and back substitution.
fn schur_eig(m: &CMat) -> Result<(Vec<C>, CMat)> {
    let n = m.nrows();
    if n == 1 {
        return Ok((vec![m[(0, 0)]], CMat::identity(1, 1)));
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::InvalidParameter("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let small = f64::EPSILON * t.camax().max(f64::MIN_POSITIVE);
    let mut vecs = CMat::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for k in 0..n {
        let lk = t[(k, k)];
        vals.push(lk);
        let mut y = CVec::zeros(n);
        y[k] = re(1.0);
        for i in (0..k).rev() {
            let mut s = C::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * y[j];
            }
            let mut den = t[(i, i)] - lk;
            if den.norm() < small {
                den = re(small);
            }
            y[i] = -s / den;
        }
        let x = &q * y;
        let nx = x.norm();
        vecs.set_column(k, &(x / re(nx)));
    }
    Ok((vals, vecs))
}

/// Eigensystem without the degeneracy check. Exact block structure of `m`
/// is exploited so that eigenvectors of uncoupled subspaces stay separated.
pub fn eig_bi_unchecked(m: &CMat) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let n = m.nrows();
    let mut pairs: Vec<(C, CVec, usize)> = Vec::with_capacity(n);
    for (b, idx) in invariant_blocks(m).into_iter().enumerate() {
        let sub = CMat::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
        let (vals, vecs) = schur_eig(&sub)?;
        for (k, v) in vals.into_iter().enumerate() {
            let mut full = CVec::zeros(n);
            for (i, &gi) in idx.iter().enumerate() {
                full[gi] = vecs[(i, k)];
            }
            pairs.push((v, full, b));
        }
    }
    pairs.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                a.0.im
                    .partial_cmp(&b.0.im)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    let eigvals: Vec<C> = pairs.iter().map(|p| p.0).collect();
    let block: Vec<usize> = pairs.iter().map(|p| p.2).collect();
    let right = CMat::from_fn(n, n, |i, k| pairs[k].1[i]);
    let left = right
        .clone()
        .try_inverse()
        .ok_or(Error::DegenerateSpectrum { gap: 0.0, tol: 0.0 })?;
    let mut gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            gap = gap.min((eigvals[i] - eigvals[j]).norm());
        }
    }
    let mut spec = Spectrum {
        eigvals,
        right,
        left,
        gap,
        block,
    };
    let refs: Vec<usize> = (0..n)
        .map(|k| largest_component(&spec.right_vec(k)))
        .collect();
    spec.fix_gauge(&refs);
    Ok(spec)
}

/// Biorthonormal eigendecomposition. Fails with `DegenerateSpectrum` when
/// two eigenvalues are closer than `gap_tol` (default `1e-8·‖M‖`).
pub fn eig_bi(m: &CMat, gap_tol: Option<f64>) -> Result<Spectrum> {
    let spec = eig_bi_unchecked(m)?;
    let tol = gap_tol.unwrap_or(DEFAULT_GAP_TOL * m.norm());
    if spec.dim() > 1 && spec.gap < tol {
        return Err(Error::DegenerateSpectrum { gap: spec.gap, tol });
    }
    Ok(spec)
}

/// Eigensystems along a grid, matched into continuous branches and gauge fixed.
#[derive(Debug, Clone)]
pub struct BranchedSpectrumSeries {
    pub grid: Vec<f64>,
    pub spectra: Vec<Spectrum>,
    /// Per-branch index of the component held real positive.
    pub gauge_ref: Vec<usize>,
}

impl BranchedSpectrumSeries {
    /// Build the series. The gauge reference component of each branch is the
    /// largest component at the first grid point and stays fixed afterwards,
    /// which keeps the gauge smooth when component magnitudes cross.
    pub fn build<F>(grid: &[f64], mut generator_at: F, gap_tol_rel: f64) -> Result<Self>
    where
        F: FnMut(f64) -> Result<CMat>,
    {
        let mut spectra: Vec<Spectrum> = Vec::with_capacity(grid.len());
        let mut refs: Vec<usize> = Vec::new();
        for &s in grid {
            let m = generator_at(s).map_err(|e| e.at(s))?;
            let mut spec = eig_bi_unchecked(&m).map_err(|e| e.at(s))?;
            let tol = gap_tol_rel * m.norm();
            let cg = spec.coupled_gap();
            if spec.dim() > 1 && cg < tol {
                return Err(Error::DegenerateSpectrum { gap: cg, tol }.at(s));
            }
            if let Some(prev) = spectra.last() {
                let perm = match_branches(prev, &spec, s)?;
                spec = spec.permuted(&perm);
            } else {
                refs = (0..spec.dim())
                    .map(|k| largest_component(&spec.right_vec(k)))
                    .collect();
            }
            spec.fix_gauge(&refs);
            spectra.push(spec);
        }
        Ok(Self {
            grid: grid.to_vec(),
            spectra,
            gauge_ref: refs,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn branches(&self) -> usize {
        self.spectra.first().map_or(0, |s| s.dim())
    }

    /// Superoperator spectrum at `q = 0` from a series of effective
    /// Hamiltonian spectra: branch `l·d + m` carries `|ψ_l⟩⟨ψ_m|` with
    /// eigenvalue `−i(ξ_l − ξ_m*)`.
    pub fn lift(&self) -> Self {
        let d = self.branches();
        let spectra = self
            .spectra
            .iter()
            .map(|sp| {
                let n = d * d;
                let mut eigvals = Vec::with_capacity(n);
                let mut right = CMat::zeros(n, n);
                let mut left = CMat::zeros(n, n);
                let mut block = Vec::with_capacity(n);
                for l in 0..d {
                    for m in 0..d {
                        let k = l * d + m;
                        eigvals.push(-I * (sp.eigvals[l] - sp.eigvals[m].conj()));
                        block.push(sp.block[l] * d + sp.block[m]);
                        for a in 0..d {
                            for b in 0..d {
                                right[(a * d + b, k)] = sp.right[(a, l)] * sp.right[(b, m)].conj();
                                left[(k, a * d + b)] = sp.left[(l, a)] * sp.left[(m, b)].conj();
                            }
                        }
                    }
                }
                let mut gap = f64::INFINITY;
                for i in 0..n {
                    for j in i + 1..n {
                        gap = gap.min((eigvals[i] - eigvals[j]).norm());
                    }
                }
                Spectrum {
                    eigvals,
                    right,
                    left,
                    gap,
                    block,
                }
            })
            .collect();
        let gauge_ref = (0..d * d)
            .map(|k| self.gauge_ref[k / d] * d + self.gauge_ref[k % d])
            .collect();
        Self {
            grid: self.grid.clone(),
            spectra,
            gauge_ref,
        }
    }

    /// Apply a smooth change of gauge `ρ_k(s) → p(k, s) ρ_k(s)`.
    pub fn regauge<F: Fn(usize, f64) -> C>(&self, phase: F) -> Self {
        let mut out = self.clone();
        for (spec, &s) in out.spectra.iter_mut().zip(&self.grid) {
            for k in 0..spec.dim() {
                spec.scale_branch(k, phase(k, s));
            }
        }
        out
    }
}

/// Permutation `perm` with new branch `k` = current eigenpair `perm[k]`.
fn match_branches(prev: &Spectrum, cur: &Spectrum, s: f64) -> Result<Vec<usize>> {
    let n = prev.dim();
    let overlaps = &prev.left * &cur.right;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for k in 0..n {
        let mut best = (0usize, -1.0f64);
        let mut second = -1.0f64;
        for j in 0..n {
            let o = overlaps[(k, j)].norm();
            if o > best.1 {
                second = best.1;
                best = (j, o);
            } else if o > second {
                second = o;
            }
        }
        if n > 1 && best.1 - second < BRANCH_TIE_TOL {
            return Err(Error::BranchAmbiguity { s });
        }
        if used[best.0] {
            return Err(Error::BranchAmbiguity { s });
        }
        used[best.0] = true;
        perm.push(best.0);
    }
    Ok(perm)
}

fn zero_modes(spec: &Spectrum, scale: f64) -> Vec<usize> {
    let tol = ZERO_MODE_TOL * scale.max(1.0);
    (0..spec.dim())
        .filter(|&k| spec.eigvals[k].norm() < tol)
        .collect()
}

/// Drazin inverse as the eigen-sum `Σ_{m≠0} |ρ_m⟩⟩⟨⟨σ_m| / λ_m`.
pub fn drazin_inverse(l: &CMat, spec: &Spectrum) -> Result<CMat> {
    if l.nrows() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.nrows(),
            found: spec.dim(),
        });
    }
    let zeros = zero_modes(spec, 1.0);
    match zeros.len() {
        0 => return Err(Error::NoZeroMode),
        1 => {}
        k => return Err(Error::MultipleZeroModes(k)),
    }
    let n = spec.dim();
    let mut out = CMat::zeros(n, n);
    for m in 0..n {
        if m == zeros[0] {
            continue;
        }
        out += spec.right.column(m) * spec.left.row(m) / spec.eigvals[m];
    }
    Ok(out)
}

/// Drazin inverse of a trace-preserving generator by the resolvent identity
/// `L⁺ = (L + P)⁻¹ − P` with `P = |ρ_ss⟩⟩⟨⟨𝟙|`. Needs no eigendecomposition.
pub fn drazin_direct(l: &CMat, rho_ss: &CVec) -> Result<CMat> {
    let n = l.nrows();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n || rho_ss.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho_ss.len(),
        });
    }
    let p = rho_ss * trace_functional(d).transpose();
    let inv = (l + &p).try_inverse().ok_or(Error::MultipleZeroModes(2))?;
    Ok(inv - p)
}

/// Number of eigenvalues within the zero-mode tolerance.
pub fn zero_mode_count(l: &CMat) -> Result<usize> {
    let spec = eig_bi_unchecked(l)?;
    Ok(zero_modes(&spec, l.norm()).len())
}

/// Unique steady state of a trace-preserving generator.
pub fn steady_state(l: &CMat) -> Result<DensityState> {
    match zero_mode_count(l)? {
        0 => return Err(Error::NoZeroMode),
        1 => {}
        k => return Err(Error::MultipleZeroModes(k)),
    }
    steady_state_solve(l)
}

/// Steady state by the linear solve `(L + |w⟩⟩⟨⟨𝟙|) ρ = w`, without the
/// uniqueness check.
pub fn steady_state_solve(l: &CMat) -> Result<DensityState> {
    let n = l.nrows();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::NonSquareLength(n));
    }
    let one = trace_functional(d);
    let w = &one / re(d as f64);
    let a = l + &w * one.transpose();
    let x = a.lu().solve(&w).ok_or(Error::MultipleZeroModes(2))?;
    let m = devectorize(&x)?;
    let m = (&m + m.adjoint()) * re(0.5);
    DensityState::new(m)?.normalize()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let h = (m + m.adjoint()) * re(0.5);
    let eig = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.nrows();
    let vecs = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}
