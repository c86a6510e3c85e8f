use std::path::{Path, PathBuf};

use serde_json::json;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::{CliError, Status};
use crate::output::{trajectory_csv, write_atomic, write_json};
use crate::run::{run_experiment, RunOutput};

#[derive(Debug, Clone)]
pub struct SimulateResult {
    pub files: Vec<PathBuf>,
    pub output: RunOutput,
    pub status: Status,
}

/// Data file for `cfg` under `out_dir`.
pub fn output_path(cfg: &ExperimentConfig, out_dir: &Path) -> PathBuf {
    match &cfg.output.path {
        Some(p) => out_dir.join(p),
        None => out_dir.join(format!("{}.{}", cfg.stem(), cfg.output.format.extension())),
    }
}

pub fn simulate(cfg: &ExperimentConfig, out_dir: &Path, stride: Option<usize>) -> Result<SimulateResult, CliError> {
    let mut cfg = cfg.clone();
    if let Some(k) = stride {
        cfg.integrator.record_stride = k;
    }
    let output = run_experiment(&cfg)?;
    let files = write_run(&output, &output_path(&cfg, out_dir), cfg.output.format)?;
    let status = if output.report.saturated { Status::Truncated } else { Status::Ok };
    Ok(SimulateResult { files, output, status })
}

/// CSV plus JSON sidecar, or a single JSON document.
pub fn write_run(out: &RunOutput, path: &Path, format: OutputFormat) -> Result<Vec<PathBuf>, CliError> {
    match format {
        OutputFormat::Csv => {
            write_atomic(path, trajectory_csv(&out.traj, &out.columns).as_bytes())?;
            let sidecar = path.with_extension("json");
            write_json(&sidecar, &out.report)?;
            Ok(vec![path.to_path_buf(), sidecar])
        }
        OutputFormat::Json => {
            let mut data = serde_json::Map::new();
            data.insert("t".into(), json!(out.traj.times));
            data.insert("q".into(), json!(out.traj.q));
            data.insert("v".into(), json!(out.traj.v));
            data.insert("norm_q".into(), json!(out.traj.norm_q()));
            for (name, col) in &out.columns {
                data.insert(name.clone(), json!(col));
            }
            write_json(path, &json!({ "report": out.report, "data": data }))?;
            Ok(vec![path.to_path_buf()])
        }
    }
}
