//! Dynamics methods behind a common trait, looked up by name.
//!
//! Built-in names: `full`, `nhh-pure`, `sd` (one-step operator), `sd@<s*>`
//! (two-step with renormalization at `s*`) and `sd-lindblad-<n>` for
//! `n = 0..=3`.

use std::collections::BTreeMap;

use crate::drive::{DriveConfig, DrivenModel};
use crate::error::{Error, Result};
use crate::propagate::{propagate_full, propagate_nhh_pure, RunResult};
use crate::slowdrive::{sd_lindblad, sd_run, MAX_LINDBLAD_ORDER};
use crate::spectral::{hermitian_eig, DensityState};
use crate::CVec;

/// Everything a method needs for one run.
#[derive(Debug, Clone, Copy)]
pub struct MethodContext<'a> {
    pub driven: &'a DrivenModel,
    pub cfg: &'a DriveConfig,
    pub q: f64,
    pub rho0: &'a DensityState,
    pub targets: &'a [CVec],
}

pub trait DynamicsMethod: Send + Sync {
    fn name(&self) -> String;
    fn run(&self, ctx: &MethodContext<'_>) -> Result<RunResult>;
}

struct Full;

impl DynamicsMethod for Full {
    fn name(&self) -> String {
        "full".into()
    }
    fn run(&self, ctx: &MethodContext<'_>) -> Result<RunResult> {
        propagate_full(ctx.driven, ctx.cfg, ctx.q, ctx.rho0, ctx.targets)
    }
}

struct NhhPure;

impl DynamicsMethod for NhhPure {
    fn name(&self) -> String {
        "nhh-pure".into()
    }
    fn run(&self, ctx: &MethodContext<'_>) -> Result<RunResult> {
        if (ctx.rho0.purity() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "nhh-pure needs a pure initial state".into(),
            ));
        }
        let (_, vecs) = hermitian_eig(&ctx.rho0.matrix);
        let psi = vecs.column(vecs.ncols() - 1).into_owned();
        propagate_nhh_pure(ctx.driven, ctx.cfg, &psi, ctx.targets)
    }
}

struct SlowDrive {
    s_star: f64,
}

impl DynamicsMethod for SlowDrive {
    fn name(&self) -> String {
        if self.s_star == 1.0 {
            "sd".into()
        } else {
            format!("sd@{}", self.s_star)
        }
    }
    fn run(&self, ctx: &MethodContext<'_>) -> Result<RunResult> {
        sd_run(
            ctx.driven,
            ctx.cfg,
            ctx.q,
            ctx.rho0,
            self.s_star,
            ctx.targets,
        )
    }
}

struct SdLindblad {
    order: usize,
}

impl DynamicsMethod for SdLindblad {
    fn name(&self) -> String {
        format!("sd-lindblad-{}", self.order)
    }
    fn run(&self, ctx: &MethodContext<'_>) -> Result<RunResult> {
        if ctx.q != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "{} applies to q = 1 only, got q = {}",
                self.name(),
                ctx.q
            )));
        }
        sd_lindblad(ctx.driven, ctx.cfg, self.order, ctx.targets)
    }
}

/// Name-keyed collection of methods.
pub struct MethodRegistry {
    methods: BTreeMap<String, Box<dyn DynamicsMethod>>,
}

impl Default for MethodRegistry {
    fn default() -> Self {
        let mut r = Self {
            methods: BTreeMap::new(),
        };
        r.register(Box::new(Full));
        r.register(Box::new(NhhPure));
        r.register(Box::new(SlowDrive { s_star: 1.0 }));
        for order in 0..=MAX_LINDBLAD_ORDER {
            r.register(Box::new(SdLindblad { order }));
        }
        r
    }
}

impl MethodRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add or replace a method under its own name.
    pub fn register(&mut self, m: Box<dyn DynamicsMethod>) {
        self.methods.insert(m.name(), m);
    }

    pub fn names(&self) -> Vec<String> {
        self.methods.keys().cloned().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn DynamicsMethod> {
        self.methods
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method '{name}'")))
    }

    /// Run a registered method. `sd@<s*>` builds a two-step method on demand.
    pub fn run(&self, name: &str, ctx: &MethodContext<'_>) -> Result<RunResult> {
        if let Some(rest) = name.strip_prefix("sd@") {
            let s_star: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad s* in '{name}'")))?;
            return SlowDrive { s_star }.run(ctx);
        }
        self.get(name)?.run(ctx)
    }
}
