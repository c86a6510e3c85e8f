use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nagd_cli::commands::check::{run_checks, CheckStatus, DEFAULT_CHECK_DT};
use nagd_cli::commands::classify::{classify_config, render_text};
use nagd_cli::commands::reproduce::reproduce;
use nagd_cli::commands::simulate::simulate;
use nagd_cli::commands::sweep::{sweep, write_sweep, GridSpec};
use nagd_cli::figures::FigureId;
use nagd_cli::output::{write_json, DEFAULT_OUT_DIR};
use nagd_cli::{CliError, ExperimentConfig, Status};

/// Stability analysis and simulation of accelerated gradient play in quadratic games.
#[derive(Parser)]
#[command(name = "nagd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output root directory
    #[arg(long, global = true, env = "NAGD_OUT_DIR")]
    out: Option<PathBuf>,
    /// Worker threads for parallel runs (default: one per core)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral verdict for NAGD and first-order play
    Classify {
        #[arg(long)]
        config: PathBuf,
        /// Print the JSON report instead of text
        #[arg(long)]
        json: bool,
    },
    /// Simulate one configuration and write CSV plus a JSON sidecar
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Record every k-th step (overrides integrator.record_stride)
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Rerun the built-in reference experiments
    Reproduce {
        /// fig1..fig5 or all
        #[arg(long, default_value = "all")]
        figure: String,
    },
    /// Stability map over lambda = a + ib
    Sweep {
        /// a0:a1:na,b0:b1:nb
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Also fit the rate of a modal simulation at every point
        #[arg(long)]
        measure: bool,
    },
    /// Run the invariant suite
    Check {
        /// Step for the integrator-accuracy checks
        #[arg(long, default_value_t = DEFAULT_CHECK_DT)]
        dt: f64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn out_root(out: &Option<PathBuf>) -> &Path {
    out.as_deref().unwrap_or(Path::new(DEFAULT_OUT_DIR))
}

fn run(cli: Cli) -> Result<Status, CliError> {
    match &cli.command {
        Command::Classify { config, json } => {
            let cfg = ExperimentConfig::from_path(config)?;
            let report = classify_config(&cfg)?;
            if *json {
                println!("{}", serde_json::to_string_pretty(&report).map_err(|e| CliError::Numeric(e.to_string()))?);
            } else {
                print!("{}", render_text(&report));
            }
            if let Some(dir) = &cli.out {
                write_json(&dir.join(format!("{}_classify.json", cfg.stem())), &report)?;
            }
            Ok(Status::Ok)
        }
        Command::Simulate { config, stride } => {
            let cfg = ExperimentConfig::from_path(config)?;
            let r = simulate(&cfg, out_root(&cli.out), *stride)?;
            for f in &r.files {
                println!("wrote {}", f.display());
            }
            if r.status == Status::Truncated {
                eprintln!("warning: run truncated at t = {} by the overflow guard", r.output.report.last_time);
            }
            Ok(r.status)
        }
        Command::Reproduce { figure } => {
            let figs: Vec<FigureId> =
                if figure == "all" { FigureId::ALL.to_vec() } else { vec![figure.parse().map_err(CliError::Config)?] };
            let root = out_root(&cli.out);
            let (summaries, status) = reproduce(&figs, root)?;
            for s in &summaries {
                println!("{} {}", if s.pass { "PASS" } else { "FAIL" }, s.figure);
                for c in s.checks.iter().filter(|c| !c.pass) {
                    println!("  failed {}: {} (target {})", c.name, c.value, c.target);
                }
            }
            if figs.len() > 1 {
                write_json(&root.join("summary.json"), &summaries)?;
            }
            Ok(status)
        }
        Command::Sweep { grid, measure } => {
            let spec: GridSpec = grid.parse()?;
            let rows = sweep(&spec, *measure);
            let path = write_sweep(&rows, out_root(&cli.out))?;
            println!("wrote {} ({} points)", path.display(), rows.len());
            Ok(Status::Ok)
        }
        Command::Check { dt } => {
            let report = run_checks(*dt)?;
            for c in &report.checks {
                let tag = match c.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::NotApplicable => "N/A ",
                };
                println!("{tag} {:<34} {:.3e}  {}", c.name, c.value, c.detail);
            }
            let path = out_root(&cli.out).join("check.json");
            write_json(&path, &report)?;
            println!("wrote {}", path.display());
            Ok(report.status())
        }
    }
}
