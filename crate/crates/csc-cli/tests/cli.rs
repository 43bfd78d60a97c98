use std::fs;
use std::path::Path;
use std::process::Command;

use csc_cli::config::{InitialState, ModelTag, NamedState, RunConfig, SStar};
use csc_cli::presets::{preset, PRESET_NAMES};
use csc_cli::runner::execute;
use csc_cli::CliError;

const SMALL: &str = r#"
name = "small"
model = "A"
initial_state = "plus"
methods = ["full", "sd", "formula"]
orientations = ["ccw", "cw"]
s_star = 0.5
converge = false

[params]
kappa = 0.12

[drive]
delta0 = 1.0
gamma_prime = 0.1
gamma0 = 0.1
period_t = 200.0
n_steps = 200
"#;

const SWEEP: &str = r#"
name = "sweep"
model = "A"
q = 0.5
initial_state = "plus"
methods = ["full", "sd"]
converge = false

[params]
kappa = 0.15

[drive]
delta0 = 1.0
gamma_prime = 0.1
gamma0 = 0.05
period_t = 200.0
n_steps = 100

[sweep]
axes = [{ parameter = "q", values = [0.1, 0.3, 0.5, 0.7, 0.9] }, { parameter = "kappa_ratio", values = [1.0, 2.0] }]
report_s = 0.9
"#;

fn csc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_csc"))
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn parses_a_minimal_config() {
    let cfg = RunConfig::from_toml(SMALL).unwrap();
    assert_eq!(cfg.model, ModelTag::A);
    assert_eq!(cfg.initial_state, InitialState::Named(NamedState::Plus));
    assert_eq!(cfg.s_star, SStar::At(0.5));
    assert_eq!(cfg.q, 0.0);
    assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
}

#[test]
fn rejects_unknown_keys_and_bad_values() {
    let cases = [
        SMALL.replace("converge = false", "converge = false\ncolour = \"red\""),
        SMALL.replace("kappa = 0.12", "kappa = 0.12\nkapa = 0.1"),
        SMALL.replace("n_steps = 200", "n_steps = 200\nsteps = 3"),
        SMALL.replace("initial_state = \"plus\"", "initial_state = \"psi_minus\""),
        SMALL.replace(
            "methods = [\"full\", \"sd\", \"formula\"]",
            "methods = [\"rk4\"]",
        ),
        SMALL.replace("s_star = 0.5", "s_star = 1.5"),
        SMALL.replace("delta0 = 1.0", "delta0 = 0.0"),
        SMALL.replace("model = \"A\"", "model = \"B\""),
        SMALL.replace("converge = false", "q = 1.2"),
    ];
    for text in cases {
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(matches!(err, CliError::ConfigParse(_)), "{err}");
        assert_eq!(err.exit_code(), 2);
    }
}

#[test]
fn custom_initial_state() {
    let text = SMALL.replace(
        "initial_state = \"plus\"",
        "initial_state = { custom = [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]] }",
    );
    let cfg = RunConfig::from_toml(&text).unwrap();
    let rho = cfg.initial_density().unwrap();
    assert!((rho.purity() - 0.5).abs() < 1e-15);
    let bad = text.replace("[0.5, 0.0]]]", "[0.7, 0.0]]]");
    assert!(RunConfig::from_toml(&bad).is_err());
}

#[test]
fn presets_round_trip_through_toml() {
    for name in PRESET_NAMES {
        let p = preset(name).unwrap();
        p.config.validate().unwrap();
        let emitted = p.emit();
        assert!(emitted.starts_with("# "), "{name} has no notes");
        assert_eq!(RunConfig::from_toml(&emitted).unwrap(), p.config, "{name}");
    }
    let err = preset("fig9").unwrap_err();
    assert!(matches!(err, CliError::UnknownPreset(_)));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn preset_parameters() {
    let f5 = preset("fig5").unwrap().config;
    assert_eq!(f5.model, ModelTag::G);
    assert_eq!(f5.drive.delta0, 10.0);
    assert!((f5.drive.gamma_prime - 0.1).abs() < 1e-15);
    assert!((f5.drive.gamma_prime * f5.drive.period_t - 200.0).abs() < 1e-9);
    assert_eq!(f5.s_star, SStar::At(0.5));
    let f3b = preset("fig3b").unwrap().config;
    assert_eq!(f3b.sweep.unwrap().axes[0].values.len(), 19);
    let d = preset("appD-modelB").unwrap().config;
    assert_eq!(d.drive.period_t, 17000.0);
}

#[test]
fn end_to_end_run_writes_series_and_endpoints() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = RunConfig::from_toml(SMALL).unwrap();
    let art = execute(&cfg, tmp.path()).unwrap();
    assert_eq!(art.dir, tmp.path().join("small"));
    for name in [
        "ccw_full.csv",
        "cw_full.csv",
        "ccw_sd-s0.5.csv",
        "cw_sd-s0.5.csv",
        "endpoints.csv",
        "run.json",
    ] {
        assert!(art.dir.join(name).exists(), "missing {name}");
    }
    let series = read(&art.dir.join("ccw_full.csv"));
    let mut lines = series.lines();
    assert_eq!(
        lines.next().unwrap(),
        "s,F_plus,F_minus,purity,trace_factor,delta_s,gamma_s"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0.0000000000000000e0");
    assert_eq!(first[1], "1.0000000000000000e0");
    for field in series.lines().skip(1).flat_map(|l| l.split(',')) {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{field}");
        let v: f64 = field.parse().unwrap();
        assert_eq!(format!("{v:.16e}"), field);
    }
    assert_eq!(series.lines().count(), 202);

    let ep = read(&art.dir.join("endpoints.csv"));
    assert!(ep.starts_with("point,orientation,method,n_steps,F_plus_end,F_minus_end,valid\n"));
    assert!(ep.contains(",formula-nhh,"));
    let meta: serde_json::Value = serde_json::from_str(&read(&art.dir.join("run.json"))).unwrap();
    assert_eq!(meta["config"]["name"], "small");
    assert_eq!(meta["converged_n_steps"].as_array().unwrap().len(), 4);
    assert!(meta["versions"]["csc-core"].is_string());
}

#[test]
fn validity_columns_when_requested() {
    let tmp = tempfile::tempdir().unwrap();
    let text = SMALL
        .replace(
            "methods = [\"full\", \"sd\", \"formula\"]",
            "methods = [\"sd\"]\nvalidity = true",
        )
        .replace("converge = false", "converge = false\nq = 0.5");
    let art = execute(&RunConfig::from_toml(&text).unwrap(), tmp.path()).unwrap();
    let header = read(&art.dir.join("ccw_sd-s0.5.csv"))
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(
        header,
        "s,F_plus,F_minus,purity,trace_factor,M_1,M_2,M_3,delta_s,gamma_s"
    );
}

#[test]
fn output_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = RunConfig::from_toml(SWEEP).unwrap();
    let ra = execute(&cfg, a.path()).unwrap();
    let rb = execute(&cfg, b.path()).unwrap();
    assert_eq!(ra.files.len(), rb.files.len());
    for (fa, fb) in ra.files.iter().zip(&rb.files) {
        assert_eq!(
            fs::read(fa).unwrap(),
            fs::read(fb).unwrap(),
            "{}",
            fa.display()
        );
    }
}

#[test]
fn sweep_results_do_not_depend_on_thread_count() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_path = tmp.path().join("sweep.toml");
    fs::write(&cfg_path, SWEEP).unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = tmp.path().join(format!("t{threads}"));
        let status = csc()
            .args(["--threads", threads, "--out"])
            .arg(&out)
            .arg("run")
            .arg(&cfg_path)
            .env_remove(csc_cli::OUT_DIR_ENV)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(read(&out.join("sweep").join("endpoints.csv")));
    }
    assert_eq!(outputs[0], outputs[1]);
    let rows: Vec<&str> = outputs[0].lines().collect();
    assert_eq!(rows[0], "point,q,kappa_ratio,orientation,method,n_steps,F_plus_end,F_minus_end,F_plus_at,F_minus_at,valid");
    assert_eq!(rows.len(), 1 + 10 * 2);
    // rows follow the sweep index
    let points: Vec<usize> = rows[1..]
        .iter()
        .map(|r| r.split(',').next().unwrap().parse().unwrap())
        .collect();
    let mut sorted = points.clone();
    sorted.sort();
    assert_eq!(points, sorted);
}

#[test]
fn binary_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = tmp.path().join(name);
        fs::write(&p, text).unwrap();
        p
    };
    let run = |cfg: &Path| {
        csc()
            .arg("--out")
            .arg(tmp.path().join("out"))
            .arg("run")
            .arg(cfg)
            .env_remove(csc_cli::OUT_DIR_ENV)
            .output()
            .unwrap()
    };
    let ok = write("ok.toml", SMALL);
    assert_eq!(run(&ok).status.code(), Some(0));

    let bad = write("bad.toml", &SMALL.replace("[params]", "[params]\nfoo = 1"));
    assert_eq!(run(&bad).status.code(), Some(2));

    // κ = γ′/4 puts the loop start on the exceptional point
    let ep = write(
        "ep.toml",
        &SMALL.replace("kappa = 0.12", "kappa = 0.025").replace(
            "methods = [\"full\", \"sd\", \"formula\"]",
            "methods = [\"sd\"]",
        ),
    );
    let out = run(&ep);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failing s = 0"));

    assert_eq!(run(&tmp.path().join("missing.toml")).status.code(), Some(1));

    let p = csc().args(["preset", "fig9"]).output().unwrap();
    assert_eq!(p.status.code(), Some(2));
    let listed = csc().arg("presets").output().unwrap();
    assert_eq!(
        String::from_utf8_lossy(&listed.stdout).lines().count(),
        PRESET_NAMES.len()
    );
}

#[test]
fn environment_overrides_output_root() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.toml");
    fs::write(&cfg, SMALL).unwrap();
    let status = csc()
        .arg("--out")
        .arg(tmp.path().join("ignored"))
        .arg("run")
        .arg(&cfg)
        .env(csc_cli::OUT_DIR_ENV, tmp.path().join("env"))
        .status()
        .unwrap();
    assert!(status.success());
    assert!(tmp.path().join("env/small/endpoints.csv").exists());
    assert!(!tmp.path().join("ignored").exists());
}

#[test]
fn acceptance_subset_and_tightened_tolerances() {
    let tmp = tempfile::tempdir().unwrap();
    let out = csc()
        .arg("acceptance")
        .arg(tmp.path().join("rep"))
        .args(["--only", "3"])
        .output()
        .unwrap();
    // unselected criteria count as not run, so the summary is nonzero
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS criterion  3"));
    assert!(text.contains("NOT RUN criterion  1"));
    let report: serde_json::Value =
        serde_json::from_str(&read(&tmp.path().join("rep/acceptance.json"))).unwrap();
    assert_eq!(report["criteria"][2]["status"], "pass");
    assert_eq!(report["criteria"][0]["status"], "not-run");

    let tight = csc()
        .arg("acceptance")
        .arg(tmp.path().join("tight"))
        .args(["--only", "3", "--tolerance-scale", "1e-6"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&tight.stdout).contains("FAIL criterion  3"));
}
