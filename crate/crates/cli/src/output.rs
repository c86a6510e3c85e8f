use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nagd_core::TrajectoryRecord64;
use serde::Serialize;

use crate::error::CliError;

/// Output root when neither `--out` nor `NAGD_OUT_DIR` is given.
pub const DEFAULT_OUT_DIR: &str = "nagd-out";

/// Extra per-sample columns appended after `norm_q`.
pub type Columns = Vec<(String, Vec<f64>)>;

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// 17 significant digits in scientific notation.
pub fn fmt_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// `t, q_1..q_N, v_1..v_N, norm_q` followed by `extra`.
pub fn trajectory_csv(traj: &TrajectoryRecord64, extra: &Columns) -> String {
    let n = traj.dim();
    let mut out = String::with_capacity(traj.len() * (2 * n + 2 + extra.len()) * 25);
    out.push('t');
    for i in 1..=n {
        let _ = write!(out, ",q_{i}");
    }
    for i in 1..=n {
        let _ = write!(out, ",v_{i}");
    }
    out.push_str(",norm_q");
    for (name, _) in extra {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    let norms = traj.norm_q();
    for k in 0..traj.len() {
        out.push_str(&fmt_value(traj.times[k]));
        for x in traj.q[k].iter().chain(&traj.v[k]) {
            out.push(',');
            out.push_str(&fmt_value(*x));
        }
        out.push(',');
        out.push_str(&fmt_value(norms[k]));
        for (_, col) in extra {
            out.push(',');
            out.push_str(&fmt_value(col[k]));
        }
        out.push('\n');
    }
    out
}

/// Header and rows of a CSV written by [`trajectory_csv`] or the sweep.
pub fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().map(|h| h.split(',').map(str::to_string).collect()).unwrap_or_default();
    let rows = lines.filter(|l| !l.is_empty()).map(|l| l.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect()).collect();
    (header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nagd_core::dynamics::{simulate_nagd, IntegratorConfig};
    use nagd_core::Matrix64;

    #[test]
    fn values_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(fmt_value(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_value(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let g = Matrix64::identity(2);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.5, 0.3], &[0.0, 0.0], &IntegratorConfig::new(1.0, 1.1)).unwrap();
        let extra = vec![("V".to_string(), vec![1.0; tr.len()])];
        let text = trajectory_csv(&tr, &extra);
        let (h, rows) = read_csv(&text);
        assert_eq!(h, ["t", "q_1", "q_2", "v_1", "v_2", "norm_q", "V"]);
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0][1], 0.5);
        assert_eq!(rows[10][0], tr.times[10]);
    }

    #[test]
    fn atomic_write_creates_dirs() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b/c.txt");
        write_atomic(&p, b"x").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"x");
        assert!(!dir.path().join("a/b/c.txt.tmp").exists());
    }
}
