use std::path::Path;
use std::process::{Command, Output};

use nagd_cli::figures::{panels, FigureId};
use nagd_cli::output::read_csv;
use nagd_cli::ExperimentConfig;

fn nagd(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nagd")).args(args).env("NAGD_OUT_DIR", out).env_remove("RUST_LOG").output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const SYMMETRIC: &str =
    "name = \"sym\"\ndiagnostics = [\"lyapunov\"]\n[source.matrix]\ng = [[0.4, 0.2], [0.2, 0.8]]\n[initial]\nq0 = [0.5, 0.3]\n";
const COMPLEX: &str = "name = \"cplx\"\n[source.matrix]\ng = [[6.0, 1.5], [-1.5, 6.0]]\n[initial]\nq0 = [1.0, 0.0]\n";

#[test]
fn simulate_rows_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sym.toml", SYMMETRIC);
    let o = nagd(&["simulate", "--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&std::fs::read_to_string(dir.path().join("sym.csv")).unwrap());
    assert_eq!(header, ["t", "q_1", "q_2", "v_1", "v_2", "norm_q", "V", "Vdot"]);
    assert_eq!(rows.len(), 9901);
    let o = nagd(&["simulate", "--config", &cfg, "--stride", "10", "--out", dir.path().join("s10").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = read_csv(&std::fs::read_to_string(dir.path().join("s10/sym.csv")).unwrap());
    assert_eq!(rows.len(), 991);
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sym.toml", SYMMETRIC);
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let o = nagd(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()], dir.path());
        assert_eq!(o.status.code(), Some(0));
        outputs.push((std::fs::read(out.join("sym.csv")).unwrap(), std::fs::read(out.join("sym.json")).unwrap()));
    }
    assert!(outputs[0] == outputs[1]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let long = write(dir.path(), "long.toml", &format!("{COMPLEX}[integrator]\nt_end = 2000.0\nrecord_stride = 100\n"));
    let o = nagd(&["simulate", "--config", &long], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let side: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("cplx.json")).unwrap()).unwrap();
    assert_eq!(side["saturated"], serde_json::json!(true));

    let bad = write(dir.path(), "bad.toml", "[source.matrix]\ng = [[1.0, 0.0], [0.0, 1.0]]\n[integrator]\ndt = \"fast\"\n");
    let o = nagd(&["simulate", "--config", &bad], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("dt") && err.contains("line"), "{err}");

    let o = nagd(&["simulate", "--config", dir.path().join("missing.toml").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = nagd(&["sweep", "--grid", "0:1:2000,0:1:2000"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = nagd(&["reproduce", "--figure", "fig9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = nagd(&["check", "--dt", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("check.json")).unwrap()).unwrap();
    let failed: Vec<&str> = report["failed"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(failed.contains(&"rk4_order") && failed.contains(&"modal_agreement"), "{failed:?}");
}

#[test]
fn check_passes_with_default_step() {
    let dir = tempfile::tempdir().unwrap();
    let o = nagd(&["check"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().any(|l| l.starts_with("N/A") && l.contains("lyapunov_skew")));
}

#[test]
fn classify_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", COMPLEX);
    let o = nagd(&["classify", "--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("NAGD: UNSTABLE (complex eigenvalues), rate 0.3039; first-order: STABLE, rate 6.0000"), "{text}");
    let o = nagd(&["classify", "--config", &cfg, "--json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nagd_verdict"], "UnstableComplex");
    let jordan = write(dir.path(), "j.toml", "[source.matrix]\ng = [[0.0, 0.0], [1.0, 0.0]]\n");
    let o = nagd(&["classify", "--config", &jordan], dir.path());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("IndeterminateJordan") && text.contains("warning:"), "{text}");
}

#[test]
fn reproduce_and_sweep_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let o = nagd(&["reproduce", "--figure", "fig2", "--jobs", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let s: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("fig2/summary.json")).unwrap()).unwrap();
    assert_eq!(s["pass"], serde_json::json!(true));
    assert!((s["nagd_rate"].as_f64().unwrap() - 0.304).abs() < 0.03);
    assert!((s["first_order_rate"].as_f64().unwrap() + 6.0).abs() < 0.06);
    assert!(dir.path().join("fig2/nagd.csv").exists() && dir.path().join("fig2/first_order.csv").exists());

    let o = nagd(&["sweep", "--grid", "-0.5:1:4,0:1:2", "--measure"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,b,class,predicted,measured");
    assert_eq!(lines.len(), 9);
    let neg: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(neg[2], "NegativeReal");
    let imag: Vec<&str> = lines[4].split(',').collect();
    assert_eq!((imag[0].parse::<f64>().unwrap(), imag[1].parse::<f64>().unwrap()), (0.0, 1.0));
    let (p, m): (f64, f64) = (imag[3].parse().unwrap(), imag[4].parse().unwrap());
    assert!((m - p).abs() / p < 0.1);
}

#[test]
fn builtin_configs_reparse_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    for fig in FigureId::ALL {
        for panel in panels(fig) {
            let path = dir.path().join(format!("{fig}_{}.toml", panel.name));
            std::fs::write(&path, panel.config.to_toml_string().unwrap()).unwrap();
            assert_eq!(ExperimentConfig::from_path(&path).unwrap(), panel.config);
        }
    }
}
