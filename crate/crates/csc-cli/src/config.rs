//! TOML run configuration.
//!
//! ```toml
//! name = "example"
//! model = "A"                # A | B | G
//! q = 0.0
//! initial_state = "plus"     # plus | minus | psi_plus | psi_minus | { custom = [[[re, im], ...], ...] }
//! methods = ["full", "sd"]   # full | nhh-pure | sd | sd-lindblad | formula
//! orientations = ["ccw", "cw"]
//! s_star = 0.5               # or "one-step"
//! orders = [1]               # used by sd-lindblad and formula
//!
//! [params]
//! kappa = 0.12
//!
//! [drive]
//! delta0 = 1.0
//! gamma_prime = 0.1
//! gamma0 = 0.1
//! period_t = 2000.0
//! n_steps = 4000
//! ```

use csc_core::drive::{DriveConfig, DrivenModel, Orientation, RateBinding};
use csc_core::models::{
    target_states, ModelAParams, ModelBParams, ModelGParams, ModelKind, ModelParams,
};
use csc_core::slowdrive::MAX_LINDBLAD_ORDER;
use csc_core::spectral::DensityState;
use csc_core::{CMat, C};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelTag {
    A,
    B,
    G,
}

impl ModelTag {
    pub fn kind(self) -> ModelKind {
        match self {
            ModelTag::A => ModelKind::A,
            ModelTag::B => ModelKind::B,
            ModelTag::G => ModelKind::G,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BindingTag {
    GammaMinus,
    Uniform,
    Pair,
}

impl From<BindingTag> for RateBinding {
    fn from(b: BindingTag) -> Self {
        match b {
            BindingTag::GammaMinus => RateBinding::GammaMinus,
            BindingTag::Uniform => RateBinding::Uniform,
            BindingTag::Pair => RateBinding::Pair,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationTag {
    Cw,
    Ccw,
}

impl From<OrientationTag> for Orientation {
    fn from(o: OrientationTag) -> Self {
        match o {
            OrientationTag::Cw => Orientation::Cw,
            OrientationTag::Ccw => Orientation::Ccw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    Plus,
    Minus,
    PsiPlus,
    PsiMinus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomState {
    /// Row-major density matrix, entries as `[re, im]`.
    pub custom: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Named(NamedState),
    Custom(CustomState),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OneStep {
    #[serde(rename = "one-step")]
    OneStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SStar {
    At(f64),
    Named(OneStep),
}

impl Default for SStar {
    fn default() -> Self {
        SStar::Named(OneStep::OneStep)
    }
}

impl SStar {
    pub fn value(self) -> f64 {
        match self {
            SStar::At(s) => s,
            SStar::Named(_) => 1.0,
        }
    }
}

/// Model constants. Which fields are required depends on the model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    pub delta0: f64,
    pub gamma_prime: f64,
    pub gamma0: f64,
    pub period_t: f64,
    pub n_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Q,
    Kappa,
    /// `κ = value · γ′`, applied after any `gamma_prime` axis.
    KappaRatio,
    G,
    GammaPrime,
    Gamma0,
    Delta0,
    PeriodT,
}

impl SweepParam {
    pub fn label(self) -> &'static str {
        match self {
            SweepParam::Q => "q",
            SweepParam::Kappa => "kappa",
            SweepParam::KappaRatio => "kappa_ratio",
            SweepParam::G => "g",
            SweepParam::GammaPrime => "gamma_prime",
            SweepParam::Gamma0 => "gamma0",
            SweepParam::Delta0 => "delta0",
            SweepParam::PeriodT => "period_t",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axes: Vec<SweepAxis>,
    /// Extra evaluation point reported next to the endpoint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_s: Option<f64>,
    /// Also write the time series of every sweep point.
    #[serde(default)]
    pub series: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Subdirectory of the output root; defaults to the run name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

fn default_orientations() -> Vec<OrientationTag> {
    vec![OrientationTag::Ccw]
}

fn default_methods() -> Vec<String> {
    vec!["full".into()]
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub model: ModelTag,
    #[serde(default)]
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_binding: Option<BindingTag>,
    pub initial_state: InitialState,
    #[serde(default = "default_methods")]
    pub methods: Vec<String>,
    #[serde(default = "default_orientations")]
    pub orientations: Vec<OrientationTag>,
    #[serde(default)]
    pub s_star: SStar,
    #[serde(default)]
    pub orders: Vec<usize>,
    /// Emit validity coefficients with slow-driving series.
    #[serde(default)]
    pub validity: bool,
    /// Double `n_steps` of the reference methods until converged.
    #[serde(default = "default_true")]
    pub converge: bool,
    pub params: ParamsSection,
    pub drive: DriveSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

pub const METHOD_NAMES: [&str; 5] = ["full", "nhh-pure", "sd", "sd-lindblad", "formula"];

fn bad(msg: impl Into<String>) -> CliError {
    CliError::ConfigParse(msg.into())
}

fn need(v: Option<f64>, what: &str, model: ModelTag) -> Result<f64, CliError> {
    v.ok_or_else(|| bad(format!("model {model:?} needs params.{what}")))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(bad("name must be a non-empty plain file name"));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(bad(format!("q = {} outside [0, 1]", self.q)));
        }
        if self.methods.is_empty() {
            return Err(bad("methods must not be empty"));
        }
        for m in &self.methods {
            if !METHOD_NAMES.contains(&m.as_str()) {
                return Err(bad(format!("unknown method '{m}'")));
            }
        }
        if self.orientations.is_empty() {
            return Err(bad("orientations must not be empty"));
        }
        let s = self.s_star.value();
        if !(s > 0.0 && s <= 1.0) {
            return Err(bad(format!("s_star = {s} outside (0, 1]")));
        }
        let wants_orders = self
            .methods
            .iter()
            .any(|m| m == "sd-lindblad" || m == "formula");
        if self.methods.iter().any(|m| m == "sd-lindblad") {
            if self.q != 1.0 {
                return Err(bad("sd-lindblad requires q = 1"));
            }
            if self.orders.is_empty() {
                return Err(bad("sd-lindblad needs at least one entry in orders"));
            }
            if let Some(o) = self.orders.iter().find(|&&o| o > MAX_LINDBLAD_ORDER) {
                return Err(bad(format!("order {o} exceeds {MAX_LINDBLAD_ORDER}")));
            }
        }
        if !wants_orders && !self.orders.is_empty() {
            return Err(bad("orders given but no method uses them"));
        }
        if let Some(sw) = &self.sweep {
            if sw.axes.is_empty() || sw.axes.iter().any(|a| a.values.is_empty()) {
                return Err(bad("sweep axes need at least one value each"));
            }
            if let Some(r) = sw.report_s {
                if !(0.0..=1.0).contains(&r) {
                    return Err(bad("sweep.report_s outside [0, 1]"));
                }
            }
        }
        // every point of the sweep must describe a valid model
        for p in self.points()? {
            p.driven()?;
            p.drive_config(Orientation::Ccw)
                .validate()
                .map_err(|e| bad(e.to_string()))?;
            if !(0.0..=1.0).contains(&p.q) {
                return Err(bad(format!("swept q = {} outside [0, 1]", p.q)));
            }
        }
        self.initial_density()?;
        Ok(())
    }

    /// Resolved parameter points, one per sweep combination.
    pub fn points(&self) -> Result<Vec<Point>, CliError> {
        let base = Point {
            model: self.model,
            q: self.q,
            binding: self.rate_binding,
            params: self.params.clone(),
            drive: self.drive.clone(),
            coords: Vec::new(),
        };
        let Some(sw) = &self.sweep else {
            return Ok(vec![base]);
        };
        let mut pts = vec![base];
        for axis in &sw.axes {
            let mut next = Vec::with_capacity(pts.len() * axis.values.len());
            for p in &pts {
                for &v in &axis.values {
                    let mut np = p.clone();
                    np.set(axis.parameter, v)?;
                    next.push(np);
                }
            }
            pts = next;
        }
        Ok(pts)
    }

    pub fn initial_density(&self) -> Result<DensityState, CliError> {
        let kind = self.model.kind();
        let (tp, tm) = target_states(kind);
        let d = kind.dim();
        match &self.initial_state {
            InitialState::Named(n) => {
                let psi = match (n, kind) {
                    (NamedState::Plus, ModelKind::A) => tp,
                    (NamedState::Minus, ModelKind::A) => tm,
                    (NamedState::PsiPlus, ModelKind::B | ModelKind::G) => tp,
                    (NamedState::PsiMinus, ModelKind::B | ModelKind::G) => tm,
                    _ => {
                        return Err(bad(format!(
                            "initial state {n:?} does not fit model {:?}",
                            self.model
                        )))
                    }
                };
                Ok(DensityState::pure(&psi))
            }
            InitialState::Custom(c) => {
                if c.custom.len() != d || c.custom.iter().any(|r| r.len() != d) {
                    return Err(bad(format!("custom initial state must be {d}x{d}")));
                }
                let m = CMat::from_fn(d, d, |i, j| C::new(c.custom[i][j][0], c.custom[i][j][1]));
                let rho = DensityState::new(m).map_err(|e| bad(e.to_string()))?;
                let tr = rho.trace();
                if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
                    return Err(bad("custom initial state must have unit trace"));
                }
                Ok(rho)
            }
        }
    }
}

/// One fully resolved parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub model: ModelTag,
    pub q: f64,
    pub binding: Option<BindingTag>,
    pub params: ParamsSection,
    pub drive: DriveSection,
    /// `(parameter, value)` for every sweep axis.
    pub coords: Vec<(SweepParam, f64)>,
}

impl Point {
    fn set(&mut self, p: SweepParam, v: f64) -> Result<(), CliError> {
        match p {
            SweepParam::Q => self.q = v,
            SweepParam::Kappa => self.params.kappa = Some(v),
            SweepParam::KappaRatio => self.params.kappa = Some(v * self.drive.gamma_prime),
            SweepParam::G => self.params.g = Some(v),
            SweepParam::GammaPrime => self.drive.gamma_prime = v,
            SweepParam::Gamma0 => self.drive.gamma0 = v,
            SweepParam::Delta0 => self.drive.delta0 = v,
            SweepParam::PeriodT => self.drive.period_t = v,
        }
        if matches!(p, SweepParam::Kappa | SweepParam::KappaRatio) && self.model != ModelTag::A {
            return Err(bad("kappa sweeps apply to model A only"));
        }
        if p == SweepParam::G && self.model == ModelTag::A {
            return Err(bad("g sweeps apply to models B and G only"));
        }
        self.coords.push((p, v));
        Ok(())
    }

    pub fn driven(&self) -> Result<DrivenModel, CliError> {
        let pr = &self.params;
        let base = match self.model {
            ModelTag::A => ModelParams::A(ModelAParams {
                delta: 0.0,
                kappa: need(pr.kappa, "kappa", self.model)?,
                gamma_plus: pr.gamma_plus.unwrap_or(0.0),
                gamma_minus: 0.0,
            }),
            ModelTag::B => ModelParams::B(ModelBParams {
                epsilon: pr.epsilon.unwrap_or(0.0),
                delta: 0.0,
                g: need(pr.g, "g", self.model)?,
                gamma1_plus: 0.0,
                gamma2_minus: 0.0,
            }),
            ModelTag::G => ModelParams::G(ModelGParams {
                epsilon: pr.epsilon.unwrap_or(0.0),
                delta: 0.0,
                g: need(pr.g, "g", self.model)?,
                gamma1_plus: 0.0,
                gamma2_minus: 0.0,
            }),
        };
        if self.model == ModelTag::A && pr.g.is_some() {
            return Err(bad("params.g does not apply to model A"));
        }
        if self.model != ModelTag::A && (pr.kappa.is_some() || pr.gamma_plus.is_some()) {
            return Err(bad(
                "params.kappa and params.gamma_plus apply to model A only",
            ));
        }
        let binding = self
            .binding
            .map(RateBinding::from)
            .unwrap_or_else(|| RateBinding::default_for(self.model.kind()));
        DrivenModel::new(base, binding).map_err(|e| bad(e.to_string()))
    }

    pub fn drive_config(&self, o: Orientation) -> DriveConfig {
        DriveConfig {
            delta0: self.drive.delta0,
            gamma_prime: self.drive.gamma_prime,
            gamma0: self.drive.gamma0,
            orientation: o,
            period_t: self.drive.period_t,
            n_steps: self.drive.n_steps,
        }
    }
}
