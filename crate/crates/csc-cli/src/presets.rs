//! Built-in run configurations for the standard parameter sets.

use crate::config::{
    DriveSection, InitialState, ModelTag, NamedState, OneStep, OrientationTag, OutputSection,
    ParamsSection, RunConfig, SStar, SweepAxis, SweepParam, SweepSection,
};
use crate::CliError;

pub const PRESET_NAMES: [&str; 11] = [
    "fig2",
    "fig3a",
    "fig3b",
    "fig4a",
    "fig4b",
    "fig4c",
    "fig5",
    "appB-eprole",
    "appB-modelB",
    "appC-validity",
    "appD-modelB",
];

/// A preset and the comment lines written above it.
#[derive(Debug, Clone)]
pub struct Preset {
    pub config: RunConfig,
    pub notes: Vec<&'static str>,
}

impl Preset {
    /// TOML text with the notes as leading comments.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        for n in &self.notes {
            s.push_str("# ");
            s.push_str(n);
            s.push('\n');
        }
        s.push('\n');
        s.push_str(&self.config.to_toml());
        s
    }
}

fn kappa(k: f64) -> ParamsSection {
    ParamsSection {
        kappa: Some(k),
        gamma_plus: Some(0.0),
        ..Default::default()
    }
}

fn coupling(g: f64, epsilon: f64) -> ParamsSection {
    ParamsSection {
        g: Some(g),
        epsilon: Some(epsilon),
        ..Default::default()
    }
}

fn drive(
    delta0: f64,
    gamma_prime: f64,
    gamma0: f64,
    period_t: f64,
    n_steps: usize,
) -> DriveSection {
    DriveSection {
        delta0,
        gamma_prime,
        gamma0,
        period_t,
        n_steps,
    }
}

fn base(
    name: &str,
    model: ModelTag,
    q: f64,
    params: ParamsSection,
    drive: DriveSection,
) -> RunConfig {
    RunConfig {
        name: name.into(),
        model,
        q,
        rate_binding: None,
        initial_state: InitialState::Named(if model == ModelTag::A {
            NamedState::Plus
        } else {
            NamedState::PsiPlus
        }),
        methods: vec!["full".into()],
        orientations: vec![OrientationTag::Ccw],
        s_star: SStar::Named(OneStep::OneStep),
        orders: Vec::new(),
        validity: false,
        converge: true,
        params,
        drive,
        sweep: None,
        output: OutputSection::default(),
    }
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn sweep(
    axes: Vec<(SweepParam, Vec<f64>)>,
    report_s: Option<f64>,
    series: bool,
) -> Option<SweepSection> {
    Some(SweepSection {
        axes: axes
            .into_iter()
            .map(|(parameter, values)| SweepAxis { parameter, values })
            .collect(),
        report_s,
        series,
    })
}

pub fn preset(name: &str) -> Result<Preset, CliError> {
    let p = match name {
        "fig2" => {
            let mut c = base(
                "fig2",
                ModelTag::A,
                0.0,
                kappa(0.12),
                drive(1.0, 0.1, 0.1, 2000.0, 4000),
            );
            c.methods = strs(&["full", "sd"]);
            c.orientations = vec![OrientationTag::Ccw, OrientationTag::Cw];
            c.s_star = SStar::At(0.5);
            Preset {
                config: c,
                notes: vec![
                    "Single qubit, effective-Hamiltonian limit, both orientations.",
                    "Slow driving uses two steps with renormalization at s* = 1/2.",
                ],
            }
        }
        "fig3a" => {
            let mut c = base(
                "fig3a",
                ModelTag::A,
                0.5,
                kappa(0.15),
                drive(1.0, 0.1, 0.05, 2000.0, 4000),
            );
            c.methods = strs(&["full", "sd"]);
            c.orientations = vec![OrientationTag::Ccw, OrientationTag::Cw];
            Preset {
                config: c,
                notes: vec![
                    "Single qubit at q = 0.5, both orientations.",
                    "One-step slow driving; its prediction is meaningful up to s = 0.99.",
                ],
            }
        }
        "fig3b" => {
            let mut c = base(
                "fig3b",
                ModelTag::A,
                0.5,
                kappa(0.15),
                drive(1.0, 0.1, 0.05, 2000.0, 4000),
            );
            c.methods = strs(&["full", "sd"]);
            let qs: Vec<f64> = (1..=19).map(|k| k as f64 * 0.05).collect();
            c.sweep = sweep(vec![(SweepParam::Q, qs)], Some(0.99), false);
            Preset {
                config: c,
                notes: vec![
                    "Endpoint fidelity against q on 19 uniform points 0.05, 0.10, ..., 0.95.",
                    "The full solution is read at s = 1, slow driving at s = 0.99 (F_*_at columns).",
                ],
            }
        }
        "fig4a" | "fig4b" => {
            let k = if name == "fig4a" { 0.12 } else { 0.25 };
            let mut c = base(
                name,
                ModelTag::A,
                1.0,
                kappa(k),
                drive(1.0, 0.1, 0.1, 2000.0, 4000),
            );
            c.methods = strs(&["full", "sd-lindblad", "formula"]);
            c.orders = vec![1, 3];
            Preset {
                config: c,
                notes: vec![
                    "Single qubit under the full master equation, counterclockwise loop.",
                    "Drazin-series predictions truncated after the first and third order.",
                ],
            }
        }
        "fig4c" => {
            let mut c = base(
                "fig4c",
                ModelTag::A,
                1.0,
                kappa(0.12),
                drive(1.0, 0.1, 0.1, 2000.0, 4000),
            );
            c.methods = strs(&["full", "formula"]);
            c.orders = vec![1, 3];
            c.sweep = sweep(
                vec![
                    (SweepParam::GammaPrime, vec![0.1, 0.06]),
                    (SweepParam::KappaRatio, linspace(0.5, 4.0, 15)),
                ],
                None,
                false,
            );
            Preset {
                config: c,
                notes: vec![
                    "Endpoint fidelity against kappa / gamma' for two values of gamma'.",
                    "The ratio axis is applied after gamma' so kappa = ratio * gamma'.",
                ],
            }
        }
        "fig5" => {
            let mut c = base(
                "fig5",
                ModelTag::G,
                0.0,
                coupling(0.2, 0.0),
                drive(10.0, 0.1, 0.05, 2000.0, 8000),
            );
            c.methods = strs(&["full", "sd"]);
            c.s_star = SStar::At(0.5);
            Preset {
                config: c,
                notes: vec![
                    "Two qubits with global jump operators, effective-Hamiltonian limit.",
                    "The qubit energy epsilon is set to zero.",
                ],
            }
        }
        "appB-eprole" => {
            let mut c = base(
                "appB-eprole",
                ModelTag::A,
                0.0,
                kappa(0.1),
                drive(1.0, 0.1, 0.1, 20000.0, 20000),
            );
            c.methods = strs(&["full", "sd", "formula"]);
            c.s_star = SStar::At(0.5);
            let ks: Vec<f64> = (0..19).map(|k| 0.015 + 0.01 * k as f64).collect();
            c.sweep = sweep(vec![(SweepParam::Kappa, ks)], None, false);
            Preset {
                config: c,
                notes: vec![
                    "Endpoint fidelity against kappa with the EP left of, inside and right of the loop.",
                    "kappa values avoid the two loop crossings of the EP at kappa = 0.025 and 0.05.",
                ],
            }
        }
        "appB-modelB" => {
            let d0 = 0.04;
            let mut c = base(
                "appB-modelB",
                ModelTag::B,
                0.0,
                coupling(0.35 * d0, 1.0),
                drive(d0, 0.025 * d0, 0.25 * d0, 5.0 / (0.025 * d0), 10000),
            );
            c.methods = strs(&["full", "sd"]);
            c.s_star = SStar::At(0.5);
            Preset {
                config: c,
                notes: vec!["Locally coupled qubits, effective-Hamiltonian limit, equal pump and decay rates."],
            }
        }
        "appC-validity" => {
            let mut c = base(
                "appC-validity",
                ModelTag::A,
                0.5,
                kappa(0.15),
                drive(1.0, 0.1, 0.05, 2000.0, 4000),
            );
            c.methods = strs(&["full", "sd"]);
            c.validity = true;
            Preset {
                config: c,
                notes: vec!["Validity coefficients of the one-step operator at q = 0.5."],
            }
        }
        "appD-modelB" => {
            let mut c = base(
                "appD-modelB",
                ModelTag::B,
                1.0,
                coupling(0.01, 0.0),
                drive(1.0, 0.025, 0.01, 17000.0, 17000),
            );
            c.methods = strs(&["full", "sd-lindblad", "formula"]);
            c.orders = vec![1, 2];
            c.sweep = sweep(
                vec![(SweepParam::GammaPrime, vec![0.025, 0.001])],
                None,
                true,
            );
            Preset {
                config: c,
                notes: vec!["Locally coupled qubits under the full master equation for two values of gamma'."],
            }
        }
        other => return Err(CliError::UnknownPreset(other.to_string())),
    };
    p.config.validate()?;
    Ok(p)
}
