//! Acceptance suite: twelve end-to-end criteria with pinned tolerances.
//!
//! Every criterion produces a [`CriterionReport`] with its measured values.
//! Error tolerances can be multiplied by `tolerance_scale` (values below 1
//! tighten them) to see which criteria are tolerance-limited; thresholds
//! that express a physical claim, like `F₋ > 0.9`, are never scaled.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use csc_core::analysis::{closed_form_fidelity, nhh_endpoint_fidelity_a, FidelityFormulaInputs};
use csc_core::drive::{DriveConfig, DrivenModel, Orientation, RateBinding};
use csc_core::models::{
    target_states, ModelAParams, ModelBParams, ModelGParams, ModelKind, ModelParams,
};
use csc_core::propagate::{converge, propagate_full, propagate_nhh_pure, RunResult};
use csc_core::slowdrive::{
    floquet_operator, sd_lindblad, sd_run, validity_coefficients, SlowDriveData,
};
use csc_core::spectral::{
    assemble_superop, drazin_direct, drazin_inverse, eig_bi, steady_state, DensityState,
    HybridGenerator,
};
use csc_core::{CMat, CVec, C};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

/// Criteria whose statement cannot be met by a faithful implementation.
/// They still run and report FAIL; the reason is given in the README.
pub const KNOWN_UNATTAINABLE: [u32; 1] = [6];

pub const TITLES: [&str; 12] = [
    "model A effective-Hamiltonian endpoint",
    "one-step operator misses the conversion",
    "model A steady-state baseline",
    "model A first-order Lindblad formula",
    "non-perturbative regime signature",
    "hybrid monotonicity and validity",
    "model B Lindblad formula",
    "chirality antisymmetry",
    "global model without EP",
    "limiting cases",
    "Floquet structure",
    "property suites",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotRun,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    /// Human-readable requirement, e.g. `<= 0.02`.
    pub requirement: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub status: Status,
    pub known_unattainable: bool,
    pub elapsed_s: f64,
    pub measurements: Vec<Measurement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CriterionReport {
    /// One summary line.
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail if self.known_unattainable => "FAIL (known)",
            Status::Fail => "FAIL",
            Status::NotRun => "NOT RUN",
        };
        let mut s = format!(
            "{tag} criterion {:>2}: {} [{:.1} s]",
            self.id, self.title, self.elapsed_s
        );
        let failed: Vec<String> = self
            .measurements
            .iter()
            .filter(|m| !m.passed)
            .map(|m| format!("{}={:.6e} (need {})", m.label, m.value, m.requirement))
            .collect();
        if !failed.is_empty() {
            s.push_str(" -- ");
            s.push_str(&failed.join("; "));
        }
        if let Some(e) = &self.error {
            s.push_str(" -- ");
            s.push_str(e);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceOptions {
    /// Run only these criteria; the rest are reported as not run.
    pub only: Option<Vec<u32>>,
    pub tolerance_scale: f64,
}

impl Default for AcceptanceOptions {
    fn default() -> Self {
        Self {
            only: None,
            tolerance_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcceptanceReport {
    pub tolerance_scale: f64,
    pub criteria: Vec<CriterionReport>,
    /// Every criterion ran and passed.
    pub all_passed: bool,
    /// Every failure or skipped criterion is a known limitation.
    pub only_known_failures: bool,
}

/// Collects measurements for one criterion.
struct Checks {
    scale: f64,
    items: Vec<Measurement>,
}

impl Checks {
    fn push(&mut self, label: &str, value: f64, requirement: String, passed: bool) {
        self.items.push(Measurement {
            label: label.into(),
            value,
            requirement,
            passed,
        });
    }

    /// Error-type quantity bounded by a scaled tolerance.
    fn err_le(&mut self, label: &str, err: f64, tol: f64) {
        let t = tol * self.scale;
        self.push(label, err, format!("<= {t:.3e}"), err <= t);
    }

    fn lt(&mut self, label: &str, v: f64, bound: f64) {
        self.push(label, v, format!("< {bound}"), v < bound);
    }

    fn gt(&mut self, label: &str, v: f64, bound: f64) {
        self.push(label, v, format!("> {bound}"), v > bound);
    }

    fn ge(&mut self, label: &str, v: f64, bound: f64) {
        self.push(label, v, format!(">= {bound}"), v >= bound);
    }

    /// Runtime budget in seconds; never scaled.
    fn budget(&mut self, start: Instant, secs: f64) {
        let e = start.elapsed().as_secs_f64();
        self.push("runtime_s", e, format!("< {secs}"), e < secs);
    }
}

type CResult = csc_core::Result<()>;

fn model_a(kappa: f64, binding: RateBinding) -> DrivenModel {
    let base = ModelParams::A(ModelAParams {
        delta: 0.0,
        kappa,
        gamma_plus: 0.0,
        gamma_minus: 0.0,
    });
    DrivenModel::new(base, binding).expect("valid binding")
}

fn model_b(g: f64) -> DrivenModel {
    let base = ModelParams::B(ModelBParams {
        epsilon: 0.0,
        delta: 0.0,
        g,
        gamma1_plus: 0.0,
        gamma2_minus: 0.0,
    });
    DrivenModel::new(base, RateBinding::Pair).expect("valid binding")
}

fn model_g(g: f64) -> DrivenModel {
    let base = ModelParams::G(ModelGParams {
        epsilon: 0.0,
        delta: 0.0,
        g,
        gamma1_plus: 0.0,
        gamma2_minus: 0.0,
    });
    DrivenModel::new(base, RateBinding::Pair).expect("valid binding")
}

fn loop_cfg(
    delta0: f64,
    gamma_prime: f64,
    gamma0: f64,
    period_t: f64,
    n_steps: usize,
    o: Orientation,
) -> DriveConfig {
    DriveConfig {
        delta0,
        gamma_prime,
        gamma0,
        orientation: o,
        period_t,
        n_steps,
    }
}

/// Reference loop: `δ₀ = 1`, `γ′ = γ₀ = 0.1`, `T = 2000`.
fn fig2(o: Orientation) -> DriveConfig {
    loop_cfg(1.0, 0.1, 0.1, 2000.0, 4000, o)
}

fn targets(kind: ModelKind) -> [CVec; 2] {
    let (p, m) = target_states(kind);
    [p, m]
}

fn start_state(kind: ModelKind) -> DensityState {
    DensityState::pure(&target_states(kind).0)
}

fn full(driven: &DrivenModel, cfg: &DriveConfig, q: f64) -> csc_core::Result<RunResult> {
    let rho0 = start_state(driven.kind());
    let t = targets(driven.kind());
    converge(cfg.n_steps, |n| {
        propagate_full(driven, &cfg.with_steps(n), q, &rho0, &t)
    })
}

fn sd(driven: &DrivenModel, cfg: &DriveConfig, q: f64, s_star: f64) -> csc_core::Result<RunResult> {
    sd_run(
        driven,
        cfg,
        q,
        &start_state(driven.kind()),
        s_star,
        &targets(driven.kind()),
    )
}

fn formula(driven: &DrivenModel, cfg: &DriveConfig, order: usize) -> csc_core::Result<(f64, f64)> {
    let p = closed_form_fidelity(&FidelityFormulaInputs::from_drive(driven, cfg, order)?)?;
    Ok((p.plus, p.minus))
}

const F_MINUS: usize = 1;
const F_PLUS: usize = 0;

fn criterion_1(c: &mut Checks) -> CResult {
    let start = Instant::now();
    let a = model_a(0.12, RateBinding::GammaMinus);
    let expected = nhh_endpoint_fidelity_a(0.12, 0.1).1;
    let ccw = full(&a, &fig2(Orientation::Ccw), 0.0)?;
    let cw = full(&a, &fig2(Orientation::Cw), 0.0)?;
    c.err_le(
        "full_ccw_F-_vs_0.989",
        (ccw.endpoint_fidelity(F_MINUS) - expected).abs(),
        0.02,
    );
    c.lt("full_cw_F-", cw.endpoint_fidelity(F_MINUS), 0.1);
    for (o, f) in [(Orientation::Ccw, &ccw), (Orientation::Cw, &cw)] {
        let two = sd(&a, &fig2(o), 0.0, 0.5)?;
        let label = format!("two_step_{}_vs_full", o.label());
        c.err_le(
            &label,
            (two.endpoint_fidelity(F_MINUS) - f.endpoint_fidelity(F_MINUS)).abs(),
            0.02,
        );
    }
    c.budget(start, 30.0);
    Ok(())
}

fn criterion_2(c: &mut Checks) -> CResult {
    let a = model_a(0.12, RateBinding::GammaMinus);
    for o in [Orientation::Ccw, Orientation::Cw] {
        let one = sd(&a, &fig2(o), 0.0, 1.0)?;
        let change = (one.endpoint_fidelity(F_MINUS) - one.fidelities[F_MINUS][0]).abs();
        c.err_le(&format!("one_step_{}_change", o.label()), change, 0.05);
    }
    let ccw = sd(&a, &fig2(Orientation::Ccw), 0.0, 0.5)?;
    let cw = sd(&a, &fig2(Orientation::Cw), 0.0, 0.5)?;
    c.gt("two_step_ccw_F-", ccw.endpoint_fidelity(F_MINUS), 0.9);
    c.lt("two_step_cw_F-", cw.endpoint_fidelity(F_MINUS), 0.1);
    Ok(())
}

fn criterion_3(c: &mut Checks) -> CResult {
    for kappa in [0.12, 0.25] {
        let a = model_a(kappa, RateBinding::GammaMinus);
        let r = sd_lindblad(&a, &fig2(Orientation::Ccw), 0, &targets(ModelKind::A))?;
        for (idx, name) in [(F_PLUS, "F+"), (F_MINUS, "F-")] {
            let label = format!("kappa{kappa}_ss_{name}");
            c.err_le(&label, (r.endpoint_fidelity(idx) - 0.5).abs(), 1e-10);
        }
    }
    Ok(())
}

fn criterion_4(c: &mut Checks) -> CResult {
    let start = Instant::now();
    let a = model_a(0.25, RateBinding::GammaMinus);
    let cfg2k = fig2(Orientation::Ccw);
    let cfg4k = loop_cfg(1.0, 0.1, 0.1, 4000.0, 8000, Orientation::Ccw);
    let (r2, r4) = rayon::join(|| full(&a, &cfg2k, 1.0), || full(&a, &cfg4k, 1.0));
    let res2 = (r2?.endpoint_fidelity(F_MINUS) - formula(&a, &cfg2k, 1)?.1).abs();
    let res4 = (r4?.endpoint_fidelity(F_MINUS) - formula(&a, &cfg4k, 1)?.1).abs();
    c.err_le("residual_T2000", res2, 0.02);
    c.ge("residual_ratio_T2000_over_T4000", res2 / res4, 4.0);
    let t = targets(ModelKind::A);
    let s1 = sd_lindblad(&a, &cfg2k, 1, &t)?;
    let s2 = sd_lindblad(&a, &cfg2k, 2, &t)?;
    let d = (0..2)
        .map(|k| (s1.endpoint_fidelity(k) - s2.endpoint_fidelity(k)).abs())
        .fold(0.0, f64::max);
    c.err_le("order2_endpoint_change", d, 1e-8);
    c.budget(start, 120.0);
    Ok(())
}

fn criterion_5(c: &mut Checks) -> CResult {
    let cfg = fig2(Orientation::Ccw);
    let errs = [0.12, 0.25]
        .par_iter()
        .map(|&kappa| {
            let a = model_a(kappa, RateBinding::GammaMinus);
            let f = full(&a, &cfg, 1.0)?.endpoint_fidelity(F_MINUS);
            Ok((
                (formula(&a, &cfg, 1)?.1 - f).abs(),
                (formula(&a, &cfg, 3)?.1 - f).abs(),
            ))
        })
        .collect::<csc_core::Result<Vec<_>>>()?;
    c.gt("kappa0.12_err3_minus_err1", errs[0].1 - errs[0].0, 0.0);
    c.lt("kappa0.25_err3_minus_err1", errs[1].1 - errs[1].0, 0.0);
    Ok(())
}

fn criterion_6(c: &mut Checks) -> CResult {
    let a = model_a(0.15, RateBinding::GammaMinus);
    let cfg = loop_cfg(1.0, 0.1, 0.05, 2000.0, 4000, Orientation::Ccw);
    let qs: Vec<f64> = (1..=19).map(|k| k as f64 * 0.05).collect();
    let rows = qs
        .par_iter()
        .map(|&q| {
            let f = full(&a, &cfg, q)?.endpoint_fidelity(F_MINUS);
            let s = sd(&a, &cfg, q, 1.0)?.fidelity_at(F_MINUS, 0.99);
            Ok((f, s))
        })
        .collect::<csc_core::Result<Vec<_>>>()?;
    let mut rise: f64 = 0.0;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            rise = rise.max(rows[j].0 - rows[i].0);
        }
    }
    c.err_le("full_max_rise_in_q", rise, 0.02);
    let track = rows.iter().map(|(f, s)| (f - s).abs()).fold(0.0, f64::max);
    c.err_le("sd_0.99_tracking", track, 0.1);
    let data = SlowDriveData::build(&a, &cfg, 0.5)?;
    let v = validity_coefficients(&data, 0.0)?;
    c.ge("q0.5_max_M_s0.99_to_1", v.max_over(0.99, 1.0), 1.0);
    c.lt("q0.5_max_M_s0_to_0.9", v.max_over(0.0, 0.9), 0.1);
    Ok(())
}

fn criterion_7(c: &mut Checks) -> CResult {
    let (g, gp) = (0.01, 0.025);
    let b = model_b(g);
    let cfg = loop_cfg(1.0, gp, 0.01, 17000.0, 17000, Orientation::Ccw);
    let f1 = formula(&b, &cfg, 1)?.1;
    c.err_le("formula_order1_vs_0.547", (f1 - 0.547).abs(), 5e-4);
    let fl = full(&b, &cfg, 1.0)?.endpoint_fidelity(F_MINUS);
    c.err_le("full_vs_formula", (fl - f1).abs(), 0.05);
    let f0 = sd_lindblad(&b, &cfg, 0, &targets(ModelKind::B))?.endpoint_fidelity(F_MINUS);
    let exact = 0.5 - g * g / (4.0 * g * g + gp * gp);
    c.err_le("steady_state_F-_vs_closed_form", (f0 - exact).abs(), 1e-10);
    Ok(())
}

fn criterion_8(c: &mut Checks) -> CResult {
    let pairs = [
        (
            model_a(0.12, RateBinding::GammaMinus),
            fig2(Orientation::Cw),
        ),
        (
            model_b(0.01),
            loop_cfg(1.0, 0.025, 0.01, 17000.0, 17000, Orientation::Cw),
        ),
    ];
    for (m, cw) in &pairs {
        let (fp_cw, _) = formula(m, cw, 1)?;
        let (_, fm_ccw) = formula(m, &cw.with_orientation(Orientation::Ccw), 1)?;
        let label = format!("formula_{:?}_antisymmetry", m.kind());
        c.err_le(&label, (fp_cw - fm_ccw).abs(), 1e-12);
    }
    let a = model_a(0.12, RateBinding::GammaMinus);
    let cw = full(&a, &fig2(Orientation::Cw), 0.0)?;
    let ccw = full(&a, &fig2(Orientation::Ccw), 0.0)?;
    c.err_le(
        "full_antisymmetry",
        (cw.endpoint_fidelity(F_PLUS) - ccw.endpoint_fidelity(F_MINUS)).abs(),
        0.02,
    );
    Ok(())
}

fn criterion_9(c: &mut Checks) -> CResult {
    let gm = model_g(0.2);
    let cfg = loop_cfg(10.0, 0.1, 0.05, 2000.0, 8000, Orientation::Ccw);
    let two = sd(&gm, &cfg, 0.0, 0.5)?;
    c.gt("two_step_F-", two.endpoint_fidelity(F_MINUS), 0.9);
    let fl = full(&gm, &cfg, 0.0)?;
    c.gt("full_F-", fl.endpoint_fidelity(F_MINUS), 0.9);
    let mut min_gap = f64::INFINITY;
    for s in cfg.grid() {
        let spec = eig_bi(&gm.heff_at(s, &cfg)?, Some(0.0))?;
        min_gap = min_gap.min(spec.coupled_gap());
    }
    c.gt("min_coupled_gap", min_gap, 0.0);
    let f0 = sd_lindblad(&gm, &cfg, 0, &targets(ModelKind::G))?.endpoint_fidelity(F_MINUS);
    c.err_le("steady_state_F-_vs_quarter", (f0 - 0.25).abs(), 1e-9);
    Ok(())
}

fn max_series_diff(a: &RunResult, b: &RunResult) -> f64 {
    a.fidelities
        .iter()
        .zip(&b.fidelities)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

fn criterion_10(c: &mut Checks) -> CResult {
    let uni = model_a(0.12, RateBinding::Uniform);
    let cfg = fig2(Orientation::Ccw);
    let herm_cfg = DriveConfig {
        gamma_prime: 0.0,
        gamma0: 0.0,
        ..cfg
    };
    let t = targets(ModelKind::A);
    let rho0 = start_state(ModelKind::A);
    let d = propagate_full(&uni, &cfg, 0.0, &rho0, &t)?;
    let h = propagate_full(&uni, &herm_cfg, 0.0, &rho0, &t)?;
    c.err_le(
        "uniform_full_q0_vs_hermitian",
        max_series_diff(&d, &h),
        1e-8,
    );
    let dp = propagate_nhh_pure(&uni, &cfg, &t[0], &t)?;
    let hp = propagate_nhh_pure(&uni, &herm_cfg, &t[0], &t)?;
    c.err_le("uniform_nhh_vs_hermitian", max_series_diff(&dp, &hp), 1e-8);

    let k0 = model_a(0.0, RateBinding::GammaMinus);
    for (idx, name) in [(0usize, "excited"), (1, "ground")] {
        let mut e = CVec::zeros(2);
        e[idx] = C::new(1.0, 0.0);
        let r = propagate_full(
            &k0,
            &cfg,
            0.0,
            &DensityState::pure(&e),
            std::slice::from_ref(&e),
        )?;
        let dev = r.fidelities[0]
            .iter()
            .map(|f| (f - 1.0).abs())
            .fold(0.0, f64::max);
        c.err_le(&format!("kappa0_{name}_fidelity_dev"), dev, 1e-8);
    }
    Ok(())
}

fn random_density(rng: &mut ChaCha8Rng, d: usize) -> DensityState {
    let g = CMat::from_fn(d, d, |_, _| {
        C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityState {
        matrix: m / tr,
        normalized: true,
    }
}

fn criterion_11(c: &mut Checks) -> CResult {
    let a = model_a(0.25, RateBinding::GammaMinus);
    let fo = floquet_operator(&a, &fig2(Orientation::Ccw), 1)?;
    let sv = fo.matrix.clone().singular_values();
    let mut s: Vec<f64> = sv.iter().cloned().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    c.err_le("relative_second_singular_value", s[1] / s[0], 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let outs = (0..5)
        .map(|_| fo.apply(&random_density(&mut rng, 2)))
        .collect::<csc_core::Result<Vec<_>>>()?;
    let spread = outs
        .iter()
        .map(|o| (&o.matrix - &outs[0].matrix).camax())
        .fold(0.0, f64::max);
    c.err_le("output_spread_over_inputs", spread, 1e-9);
    let gen = fo.reset_generator()?;
    let ss = steady_state(&assemble_superop(&gen))?;
    c.err_le(
        "reset_steady_state_vs_rho_sd",
        (&ss.matrix - &fo.rho_sd.matrix).camax(),
        1e-8,
    );
    Ok(())
}

/// Random model for the property suites.
fn random_model(rng: &mut ChaCha8Rng, min_rate: f64) -> ModelParams {
    let r = |rng: &mut ChaCha8Rng, a: f64, b: f64| rng.gen_range(a..b);
    match rng.gen_range(0..3) {
        0 => ModelParams::A(ModelAParams {
            delta: r(rng, -1.0, 1.0),
            kappa: r(rng, 0.05, 0.5),
            gamma_plus: r(rng, min_rate, 0.3),
            gamma_minus: r(rng, min_rate, 0.3),
        }),
        1 => ModelParams::B(ModelBParams {
            epsilon: r(rng, 0.0, 1.0),
            delta: r(rng, -1.0, 1.0),
            g: r(rng, 0.05, 0.5),
            gamma1_plus: r(rng, min_rate, 0.3),
            gamma2_minus: r(rng, min_rate, 0.3),
        }),
        _ => ModelParams::G(ModelGParams {
            epsilon: r(rng, 0.0, 1.0),
            delta: r(rng, -1.0, 1.0),
            g: r(rng, 0.05, 0.5),
            gamma1_plus: r(rng, min_rate, 0.3),
            gamma2_minus: r(rng, min_rate, 0.3),
        }),
    }
}

/// Number of draws per property.
pub const PROPERTY_DRAWS: usize = 100;

fn criterion_12(c: &mut Checks) -> CResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut bi, mut rec, mut draz, mut lam, mut tr, mut pur) =
        (0f64, 0f64, 0f64, 0f64, 0f64, 0f64);
    for _ in 0..PROPERTY_DRAWS {
        let p = random_model(&mut rng, 0.01);
        let q: f64 = rng.gen_range(0.0..1.0);
        let gen: HybridGenerator = p.generator(q)?;
        let l = assemble_superop(&gen);
        let spec = eig_bi(&l, Some(0.0))?;
        bi = bi.max(spec.biorthonormality_error());
        rec = rec.max((spec.reconstruct() - &l).norm() / l.norm());

        // Drazin inverse: resolvent route against the eigen-sum route
        let l1 = assemble_superop(&p.generator(1.0)?);
        let ss = steady_state(&l1)?.vectorize();
        let pd = drazin_direct(&l1, &ss)?;
        let pe = drazin_inverse(&l1, &eig_bi(&l1, Some(0.0))?)?;
        let d = l1.nrows();
        let dim = (d as f64).sqrt().round() as usize;
        let proj =
            CMat::identity(d, d) - &ss * csc_core::spectral::trace_functional(dim).transpose();
        let e1 = (&l1 * &pd - &proj).norm();
        let e2 = (&pd * &l1 - &proj).norm();
        let e3 = (&pd - &pe).norm() / pd.norm().max(1.0);
        draz = draz.max(e1).max(e2).max(e3);

        // q = 0 spectrum from pairs of effective-Hamiltonian eigenvalues
        let l0 = assemble_superop(&p.generator(0.0)?);
        let xi = eig_bi(p.generator(0.0)?.h_eff(), Some(0.0))?.eigvals;
        let mut pool: Vec<C> = eig_bi(&l0, Some(0.0))?.eigvals.to_vec();
        for a in xi.iter() {
            for b in xi.iter() {
                let want = C::new(0.0, -1.0) * (a - b.conj());
                let (k, dist) = pool
                    .iter()
                    .enumerate()
                    .map(|(k, z)| (k, (z - want).norm()))
                    .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                    .unwrap();
                lam = lam.max(dist / l0.norm().max(1.0));
                pool.swap_remove(k);
            }
        }

        let dt: f64 = rng.gen_range(0.1..5.0);
        let rho = random_density(&mut rng, dim);
        let v = (&l1 * C::new(dt, 0.0)).exp() * rho.vectorize();
        let t1: C = (0..dim).map(|i| v[i * dim + i]).sum();
        tr = tr.max((t1 - C::new(1.0, 0.0)).norm());

        let psi = CVec::from_fn(dim, |_, _| {
            C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let psi = &psi / C::new(psi.norm(), 0.0);
        let w = (&l0 * C::new(dt, 0.0)).exp() * DensityState::pure(&psi).vectorize();
        let m = csc_core::spectral::devectorize(&w)?;
        let m = &m / m.trace();
        pur = pur.max(((&m * &m).trace().re - 1.0).abs());
    }
    c.err_le("biorthonormality", bi, 1e-8);
    c.err_le("reconstruction_rel", rec, 1e-10);
    c.err_le("drazin_identities", draz, 1e-8);
    c.err_le("q0_eigenvalue_pairs", lam, 1e-9);
    c.err_le("trace_preservation_q1", tr, 1e-11);
    c.err_le("purity_preservation_q0", pur, 1e-10);
    c.budget(start, 60.0);
    Ok(())
}

type CriterionFn = fn(&mut Checks) -> CResult;

const CRITERIA: [CriterionFn; 12] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
];

pub fn run_criterion(id: u32, tolerance_scale: f64) -> CriterionReport {
    let start = Instant::now();
    let mut checks = Checks {
        scale: tolerance_scale,
        items: Vec::new(),
    };
    let res = CRITERIA[(id - 1) as usize](&mut checks);
    let (status, error) = match res {
        Err(e) => (Status::NotRun, Some(e.to_string())),
        Ok(()) if checks.items.iter().all(|m| m.passed) => (Status::Pass, None),
        Ok(()) => (Status::Fail, None),
    };
    CriterionReport {
        id,
        title: TITLES[(id - 1) as usize].into(),
        status,
        known_unattainable: KNOWN_UNATTAINABLE.contains(&id),
        elapsed_s: start.elapsed().as_secs_f64(),
        measurements: checks.items,
        error,
    }
}

/// Run the selected criteria in order.
pub fn run_acceptance(opts: &AcceptanceOptions) -> AcceptanceReport {
    let criteria: Vec<CriterionReport> = (1..=12u32)
        .map(|id| match &opts.only {
            Some(list) if !list.contains(&id) => CriterionReport {
                id,
                title: TITLES[(id - 1) as usize].into(),
                status: Status::NotRun,
                known_unattainable: KNOWN_UNATTAINABLE.contains(&id),
                elapsed_s: 0.0,
                measurements: Vec::new(),
                error: Some("not selected".into()),
            },
            _ => run_criterion(id, opts.tolerance_scale),
        })
        .collect();
    let all_passed = criteria.iter().all(|c| c.status == Status::Pass);
    let selected = |c: &CriterionReport| opts.only.as_ref().is_none_or(|l| l.contains(&c.id));
    let only_known_failures = criteria
        .iter()
        .filter(|c| selected(c))
        .all(|c| c.status == Status::Pass || (c.status == Status::Fail && c.known_unattainable));
    AcceptanceReport {
        tolerance_scale: opts.tolerance_scale,
        criteria,
        all_passed,
        only_known_failures,
    }
}

/// Write `acceptance.json` and `acceptance.txt` into `dir`.
pub fn write_report(report: &AcceptanceReport, dir: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let json = dir.join("acceptance.json");
    fs::write(
        &json,
        serde_json::to_string_pretty(report).expect("report serializes"),
    )
    .map_err(|e| CliError::io(&json, e))?;
    let txt = dir.join("acceptance.txt");
    let lines: Vec<String> = report.criteria.iter().map(|c| c.line()).collect();
    fs::write(&txt, lines.join("\n") + "\n").map_err(|e| CliError::io(&txt, e))?;
    Ok(json)
}
