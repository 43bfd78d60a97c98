use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use csc_cli::acceptance::{run_acceptance, write_report, AcceptanceOptions};
use csc_cli::config::RunConfig;
use csc_cli::presets::{preset, PRESET_NAMES};
use csc_cli::runner::execute;
use csc_cli::{resolve_out_root, CliError};

#[derive(Parser)]
#[command(
    name = "csc",
    version,
    about = "Chiral state conversion runs and acceptance checks"
)]
struct Cli {
    /// Output root directory (overridden by CSC_OUT_DIR).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a TOML run configuration.
    Run { config: PathBuf },
    /// Run a built-in preset, or print its configuration.
    Preset {
        name: String,
        /// Print the configuration instead of running it.
        #[arg(long)]
        emit_config: bool,
    },
    /// List built-in presets.
    Presets,
    /// Run the acceptance suite and write a report into `dir`.
    Acceptance {
        dir: PathBuf,
        /// Comma-separated criterion numbers to run.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
        /// Multiply every error tolerance by this factor.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::ConfigParse(format!("--threads: {e}")))?;
    }
    let out_root = resolve_out_root(cli.out);
    match cli.command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config).map_err(|e| CliError::io(&config, e))?;
            let cfg = RunConfig::from_toml(&text)?;
            let art = execute(&cfg, &out_root)?;
            println!("wrote {} files to {}", art.files.len(), art.dir.display());
        }
        Command::Preset { name, emit_config } => {
            let p = preset(&name)?;
            if emit_config {
                print!("{}", p.emit());
            } else {
                let art = execute(&p.config, &out_root)?;
                println!("wrote {} files to {}", art.files.len(), art.dir.display());
            }
        }
        Command::Presets => {
            for n in PRESET_NAMES {
                println!("{n}");
            }
        }
        Command::Acceptance {
            dir,
            only,
            tolerance_scale,
        } => {
            let report = run_acceptance(&AcceptanceOptions {
                only,
                tolerance_scale,
            });
            for c in &report.criteria {
                println!("{}", c.line());
            }
            let path = write_report(&report, &dir)?;
            println!("report: {}", path.display());
            return Ok(if report.all_passed { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(s) = e.failing_s() {
                eprintln!("failing s = {s}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
