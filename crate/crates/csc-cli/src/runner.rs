//! Execute a [`RunConfig`] and write its artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use csc_core::analysis::{closed_form_fidelity, nhh_endpoint_fidelity_a, FidelityFormulaInputs};
use csc_core::drive::{drive_at, DriveConfig, Orientation};
use csc_core::methods::{MethodContext, MethodRegistry};
use csc_core::models::{target_states, ModelParams};
use csc_core::propagate::{converge, RunResult};
use csc_core::slowdrive::{validity_coefficients, SlowDriveData};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{ModelTag, OrientationTag, Point, RunConfig};
use crate::CliError;

/// One dynamics run scheduled by a config.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub point: usize,
    pub orientation: OrientationTag,
    /// Registry name, e.g. `sd@0.5` or `sd-lindblad-1`.
    pub method: String,
    /// Whether the step count is doubled until converged.
    pub converge: bool,
}

impl Job {
    /// File-name friendly method label.
    pub fn label(&self) -> String {
        self.method.replace('@', "-s")
    }
}

#[derive(Debug, Clone)]
pub struct JobOutput {
    pub job: Job,
    pub run: RunResult,
    /// Validity coefficients per grid point, when requested.
    pub validity: Option<Vec<Vec<f64>>>,
}

/// Closed-form endpoint values for one point and orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaRow {
    pub point: usize,
    pub orientation: OrientationTag,
    pub method: String,
    pub f_plus: f64,
    pub f_minus: f64,
    pub valid: bool,
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub outputs: Vec<JobOutput>,
    pub formulas: Vec<FormulaRow>,
}

pub fn plan_jobs(cfg: &RunConfig, n_points: usize) -> Vec<Job> {
    let mut methods = Vec::new();
    for m in &cfg.methods {
        match m.as_str() {
            "full" | "nhh-pure" => methods.push((m.clone(), cfg.converge)),
            "sd" => {
                let s = cfg.s_star.value();
                let name = if s == 1.0 {
                    "sd".to_string()
                } else {
                    format!("sd@{s}")
                };
                methods.push((name, false));
            }
            "sd-lindblad" => {
                for o in &cfg.orders {
                    methods.push((format!("sd-lindblad-{o}"), false));
                }
            }
            _ => {}
        }
    }
    let mut jobs = Vec::new();
    for point in 0..n_points {
        for &orientation in &cfg.orientations {
            for (method, conv) in &methods {
                jobs.push(Job {
                    point,
                    orientation,
                    method: method.clone(),
                    converge: *conv,
                });
            }
        }
    }
    jobs
}

fn run_job(
    cfg: &RunConfig,
    points: &[Point],
    job: &Job,
    registry: &MethodRegistry,
) -> Result<JobOutput, CliError> {
    let p = &points[job.point];
    let driven = p.driven()?;
    let dcfg = p.drive_config(job.orientation.into());
    let rho0 = cfg.initial_density()?;
    let (tp, tm) = target_states(driven.kind());
    let targets = [tp, tm];
    let exec = |c: &DriveConfig| {
        let ctx = MethodContext {
            driven: &driven,
            cfg: c,
            q: p.q,
            rho0: &rho0,
            targets: &targets,
        };
        registry.run(&job.method, &ctx)
    };
    let run = if job.converge {
        converge(dcfg.n_steps, |n| exec(&dcfg.with_steps(n)))?
    } else {
        exec(&dcfg)?
    };
    let validity = if cfg.validity && (job.method == "sd" || job.method.starts_with("sd@")) {
        let data = SlowDriveData::build(&driven, &dcfg, p.q)?;
        let s_star = cfg.s_star.value();
        let first = validity_coefficients(&data, 0.0)?;
        let mut rows = first.coefficients.clone();
        if s_star < 1.0 {
            let istar = data.index_of(s_star);
            let second = validity_coefficients(&data, s_star)?;
            rows.truncate(istar);
            rows.extend(second.coefficients);
        }
        Some(rows)
    } else {
        None
    };
    Ok(JobOutput {
        job: job.clone(),
        run,
        validity,
    })
}

/// Closed-form rows requested through the `formula` method.
pub fn formula_rows(cfg: &RunConfig, points: &[Point]) -> Result<Vec<FormulaRow>, CliError> {
    let mut out = Vec::new();
    if !cfg.methods.iter().any(|m| m == "formula") {
        return Ok(out);
    }
    for (i, p) in points.iter().enumerate() {
        let driven = p.driven()?;
        for &o in &cfg.orientations {
            let dcfg = p.drive_config(o.into());
            if p.q == 1.0 {
                for &order in &cfg.orders {
                    let inp = FidelityFormulaInputs::from_drive(&driven, &dcfg, order)
                        .map_err(|e| CliError::ConfigParse(format!("formula: {e}")))?;
                    let f = closed_form_fidelity(&inp)
                        .map_err(|e| CliError::ConfigParse(format!("formula: {e}")))?;
                    out.push(FormulaRow {
                        point: i,
                        orientation: o,
                        method: format!("formula-{order}"),
                        f_plus: f.plus,
                        f_minus: f.minus,
                        valid: f.valid,
                    });
                }
            } else if p.q == 0.0 && p.model == ModelTag::A && o == OrientationTag::Ccw {
                let ModelParams::A(a) = driven.base else {
                    unreachable!()
                };
                if a.gamma_plus != 0.0 {
                    return Err(CliError::ConfigParse(
                        "formula at q = 0 needs gamma_plus = 0".into(),
                    ));
                }
                let (f_plus, f_minus) = nhh_endpoint_fidelity_a(a.kappa, p.drive.gamma_prime);
                out.push(FormulaRow {
                    point: i,
                    orientation: o,
                    method: "formula-nhh".into(),
                    f_plus,
                    f_minus,
                    valid: true,
                });
            } else if p.q != 0.0 {
                return Err(CliError::ConfigParse(
                    "formula is available at q = 1, or at q = 0 for model A".into(),
                ));
            }
        }
    }
    Ok(out)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_series(path: &Path, out: &JobOutput, dcfg: &DriveConfig) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    let n_m = out
        .validity
        .as_ref()
        .and_then(|v| v.first())
        .map_or(0, |r| r.len());
    let mut header = vec![
        "s".to_string(),
        "F_plus".into(),
        "F_minus".into(),
        "purity".into(),
        "trace_factor".into(),
    ];
    header.extend((1..=n_m).map(|m| format!("M_{m}")));
    header.extend(["delta_s".to_string(), "gamma_s".into()]);
    w.write_record(&header)?;
    let r = &out.run;
    for (i, &s) in r.grid.iter().enumerate() {
        let (d, g) = drive_at(s, dcfg);
        let mut rec = vec![
            num(s),
            num(r.fidelities[0][i]),
            num(r.fidelities[1][i]),
            num(r.purity[i]),
            num(r.renorm_log[i]),
        ];
        if let Some(v) = &out.validity {
            rec.extend(v[i].iter().map(|&m| num(m)));
        }
        rec.extend([num(d), num(g)]);
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

fn orientation_label(o: OrientationTag) -> &'static str {
    Orientation::from(o).label()
}

/// Run every job of `cfg` and write CSV series, the endpoint table and
/// `run.json` below `out_root`.
pub fn execute(cfg: &RunConfig, out_root: &Path) -> Result<RunArtifacts, CliError> {
    cfg.validate()?;
    let points = cfg.points()?;
    let jobs = plan_jobs(cfg, points.len());
    let registry = MethodRegistry::new();
    let formulas = formula_rows(cfg, &points)?;
    let results: Vec<Result<JobOutput, CliError>> = jobs
        .par_iter()
        .map(|j| run_job(cfg, &points, j, &registry))
        .collect();
    let outputs = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let dir = out_root.join(cfg.output.dir.as_deref().unwrap_or(&cfg.name));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut files = Vec::new();
    let sweep = cfg.sweep.as_ref();
    let write_all_series = sweep.is_none_or(|s| s.series);
    let mut series_meta = Vec::new();
    for out in &outputs {
        let j = &out.job;
        let dcfg = points[j.point].drive_config(j.orientation.into());
        if write_all_series {
            let stem = format!("{}_{}", orientation_label(j.orientation), j.label());
            let name = if sweep.is_some() {
                format!("p{:03}_{stem}.csv", j.point)
            } else {
                format!("{stem}.csv")
            };
            let path = dir.join(&name);
            write_series(&path, out, &dcfg)?;
            files.push(path);
            series_meta.push(json!({
                "file": name,
                "point": j.point,
                "orientation": orientation_label(j.orientation),
                "method": j.method,
                "n_steps": out.run.n_steps,
            }));
        }
    }

    // endpoint table
    let report_s = sweep.and_then(|s| s.report_s);
    let axes: Vec<_> = sweep
        .map(|s| s.axes.iter().map(|a| a.parameter).collect())
        .unwrap_or_default();
    let path = dir.join("endpoints.csv");
    let mut w = csv::Writer::from_path(&path)?;
    let mut header = vec!["point".to_string()];
    header.extend(axes.iter().map(|a| a.label().to_string()));
    header.extend(
        [
            "orientation",
            "method",
            "n_steps",
            "F_plus_end",
            "F_minus_end",
        ]
        .map(String::from),
    );
    if report_s.is_some() {
        header.extend(["F_plus_at", "F_minus_at"].map(String::from));
    }
    header.push("valid".into());
    w.write_record(&header)?;
    let coords =
        |i: usize| -> Vec<String> { points[i].coords.iter().map(|(_, v)| num(*v)).collect() };
    for out in &outputs {
        let j = &out.job;
        let mut rec = vec![j.point.to_string()];
        rec.extend(coords(j.point));
        rec.extend([
            orientation_label(j.orientation).to_string(),
            j.method.clone(),
            out.run.n_steps.to_string(),
            num(out.run.endpoint_fidelity(0)),
            num(out.run.endpoint_fidelity(1)),
        ]);
        if let Some(s) = report_s {
            rec.extend([
                num(out.run.fidelity_at(0, s)),
                num(out.run.fidelity_at(1, s)),
            ]);
        }
        rec.push("1".into());
        w.write_record(&rec)?;
    }
    for f in &formulas {
        let mut rec = vec![f.point.to_string()];
        rec.extend(coords(f.point));
        rec.extend([
            orientation_label(f.orientation).to_string(),
            f.method.clone(),
            "0".into(),
            num(f.f_plus),
            num(f.f_minus),
        ]);
        if report_s.is_some() {
            rec.extend([num(f64::NAN), num(f64::NAN)]);
        }
        rec.push(if f.valid { "1" } else { "0" }.into());
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    files.push(path);

    let meta = json!({
        "config": cfg,
        "versions": {
            "csc-core": csc_core::VERSION,
            "csc-cli": env!("CARGO_PKG_VERSION"),
        },
        "series": series_meta,
        "endpoints": "endpoints.csv",
        "converged_n_steps": outputs.iter().map(|o| json!({
            "point": o.job.point,
            "orientation": orientation_label(o.job.orientation),
            "method": o.job.method,
            "n_steps": o.run.n_steps,
        })).collect::<Vec<_>>(),
    });
    let path = dir.join("run.json");
    fs::write(
        &path,
        serde_json::to_string_pretty(&meta).expect("metadata serializes"),
    )
    .map_err(|e| CliError::io(&path, e))?;
    files.push(path);

    Ok(RunArtifacts {
        dir,
        files,
        outputs,
        formulas,
    })
}
