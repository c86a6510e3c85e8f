//! One experiment: simulation plus the diagnostics enabled in its config.

use std::collections::BTreeMap;

use nagd_core::analysis::{
    chetaev_complex, chetaev_negative, distance_to_nullspace, energy_identity_residual, fit_growth_rate, fit_rate, lyapunov_series,
    max_relative_increase, modal_project, nullspace_basis, nullspace_limit, relative_rms, skew_product, AnalysisError, FitKind, RateFit,
    ALGEBRAIC_WINDOW, EXPONENTIAL_WINDOW,
};
use nagd_core::dynamics::{simulate_first_order, simulate_nagd, TrajectoryRecord};
use nagd_core::scalar::dot;
use nagd_core::spectral::{classify_matrix, eigendecompose_default, EigenTag, Spectrum, StabilityVerdict};
use nagd_core::{Complex64, Matrix64, TrajectoryRecord64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Diagnostic, DynamicsKind, ExperimentConfig, Prepared};
use crate::error::CliError;
use crate::metrics::{clip_window, closed_form_error, dominant_index, real_left_vector};
use crate::output::Columns;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub dynamics: DynamicsKind,
    pub dimension: usize,
    pub samples: usize,
    pub expected_samples: usize,
    pub saturated: bool,
    pub last_time: f64,
    pub fingerprint: String,
    pub eigenvalues: Vec<[f64; 2]>,
    pub nagd_verdict: &'static str,
    pub equilibrium: Option<Vec<f64>>,
    pub columns: Vec<String>,
    pub diagnostics: BTreeMap<&'static str, Value>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub traj: TrajectoryRecord64,
    pub columns: Columns,
    pub report: RunReport,
    pub g: Matrix64,
    pub spectrum: Spectrum<f64>,
    pub verdict: StabilityVerdict<f64>,
}

impl RunOutput {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_slice())
    }

    pub fn diagnostic(&self, d: Diagnostic) -> Option<&Value> {
        self.report.diagnostics.get(d.name())
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let prepared = cfg.prepare()?;
    let Prepared { mut system, q0, v0, integrator } = prepared;
    let g = system.g.clone();
    let spectrum = eigendecompose_default(&g)?;
    let verdict = classify_matrix(&spectrum, integrator.t0);

    if cfg.dynamics == DynamicsKind::FirstOrder {
        if let Some(d) = cfg.diagnostics.iter().find(|d| !matches!(d, Diagnostic::Nullspace | Diagnostic::Rates)) {
            return Err(CliError::config(format!("diagnostic `{}` needs dynamics = \"nagd\"", d.name())));
        }
    }

    let traj = match cfg.dynamics {
        DynamicsKind::Nagd => simulate_nagd(&g, &system.b, &q0, &v0, &integrator)?,
        DynamicsKind::FirstOrder => simulate_first_order(&g, &system.b, &q0, &integrator)?,
    };
    if traj.saturated {
        log::warn!("run truncated at t = {} by the overflow guard", traj.last_time());
    }

    let equilibrium = if system.b.iter().all(|x| *x == 0.0) {
        None
    } else if cfg.diagnostics.is_empty() {
        system.solve_equilibrium().ok()
    } else {
        Some(system.solve_equilibrium().map_err(|e| CliError::config(format!("diagnostics need an equilibrium: {e}")))?)
    };
    let h = match &equilibrium {
        Some(x) => shifted(&traj, x),
        None => traj.clone(),
    };

    let mut columns: Columns = Vec::new();
    let mut diagnostics = BTreeMap::new();
    for d in &cfg.diagnostics {
        let value = match d {
            Diagnostic::Lyapunov => lyapunov(&h, &g, &mut columns)?,
            Diagnostic::Chetaev => chetaev(&h, &spectrum, &verdict, &mut columns)?,
            Diagnostic::Nullspace => nullspace(&h, &g, &mut columns)?,
            Diagnostic::Modal => modal(&h, &spectrum)?,
            Diagnostic::Energy => energy(&h, &spectrum, &verdict)?,
            Diagnostic::Rates => rates(&h, &verdict, cfg.dynamics),
        };
        diagnostics.insert(d.name(), value);
    }
    order_columns(&mut columns);

    let report = RunReport {
        name: cfg.stem().to_string(),
        dynamics: cfg.dynamics,
        dimension: traj.dim(),
        samples: traj.len(),
        expected_samples: integrator.expected_samples()?,
        saturated: traj.saturated,
        last_time: traj.last_time(),
        fingerprint: format!("{:016x}", traj.meta.fingerprint),
        eigenvalues: spectrum.eigenvalues.iter().map(|l| [l.re, l.im]).collect(),
        nagd_verdict: verdict.nagd_verdict.name(),
        equilibrium,
        columns: columns.iter().map(|(n, _)| n.clone()).collect(),
        diagnostics,
    };
    Ok(RunOutput { traj, columns, report, g, spectrum, verdict })
}

fn order_columns(columns: &mut Columns) {
    const ORDER: [&str; 5] = ["V", "Vdot", "W", "rho", "dist_null"];
    columns.sort_by_key(|(n, _)| ORDER.iter().position(|o| o == n).unwrap_or(ORDER.len()));
}

fn shifted(traj: &TrajectoryRecord64, x: &[f64]) -> TrajectoryRecord64 {
    let mut out = traj.clone();
    for q in &mut out.q {
        for (qi, xi) in q.iter_mut().zip(x) {
            *qi -= xi;
        }
    }
    out
}

fn fit_json(fit: Result<RateFit<f64>, AnalysisError>) -> Value {
    match fit {
        Ok(f) => json!({
            "slope": f.slope,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "window": [f.window.0, f.window.1],
            "points": f.points,
            "envelope": f.used_envelope,
            "prefactor_exponent": f.prefactor_exponent,
        }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn lyapunov(h: &TrajectoryRecord64, g: &Matrix64, columns: &mut Columns) -> Result<Value, CliError> {
    let l = lyapunov_series(h, g)?;
    let max_inc = max_relative_increase(&l.v);
    let rms = relative_rms(&l.vdot_numeric, &l.vdot_analytic, 2);
    let skew_max = l.skew_residual.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    columns.push(("V".into(), l.v));
    columns.push(("Vdot".into(), l.vdot_analytic));
    Ok(json!({
        "applicable": l.applicable,
        "max_relative_increase": max_inc,
        "vdot_relative_rms": rms,
        "skew_residual_max": skew_max,
    }))
}

fn chetaev(h: &TrajectoryRecord64, s: &Spectrum<f64>, verdict: &StabilityVerdict<f64>, columns: &mut Columns) -> Result<Value, CliError> {
    let mut out = serde_json::Map::new();
    if let Some(k) = dominant_index(verdict, EigenTag::NegativeReal) {
        let mu = (-s.eigenvalues[k].re).sqrt();
        match real_left_vector(s, k, &h.q[0]) {
            Some(w) => {
                let c = chetaev_negative(h, &w, mu)?;
                out.insert(
                    "negative".into(),
                    json!({
                        "lambda": s.eigenvalues[k].re,
                        "mu": mu,
                        "all_in_omega": c.all_in_omega(),
                        "min_growth_ratio": c.min_growth_ratio(),
                        "threshold": mu / 6.0,
                    }),
                );
                columns.push(("W".into(), c.w));
            }
            None => {
                out.insert("negative".into(), json!({ "error": "no left eigenvector" }));
            }
        }
    }
    if let Some(k) = dominant_index(verdict, EigenTag::StrictlyComplex) {
        match s.left_vectors.get(k) {
            Some(w) => {
                let window = clip_window(EXPONENTIAL_WINDOW, h.times[0], h.last_time());
                let rho: Vec<f64> = h.q.iter().map(|q| w.iter().zip(q).map(|(wi, qi)| wi.conj() * *qi).sum::<Complex64>().norm()).collect();
                let fit = chetaev_complex(h, w, window).map(|(_, f)| f);
                out.insert(
                    "complex".into(),
                    json!({
                        "lambda": [s.eigenvalues[k].re, s.eigenvalues[k].im],
                        "predicted_rate": verdict.per_eigenvalue[k].rate,
                        "fit": fit_json(fit),
                    }),
                );
                columns.push(("rho".into(), rho));
            }
            None => {
                out.insert("complex".into(), json!({ "error": "no left eigenvector" }));
            }
        }
    }
    if out.is_empty() {
        out.insert("applicable".into(), json!(false));
    }
    Ok(Value::Object(out))
}

fn nullspace(h: &TrajectoryRecord64, g: &Matrix64, columns: &mut Columns) -> Result<Value, CliError> {
    let dist = match distance_to_nullspace(h, g) {
        Ok(d) => d,
        Err(AnalysisError::TrivialNullspace) => return Ok(json!({ "applicable": false })),
        Err(e) => return Err(e.into()),
    };
    let window = clip_window(ALGEBRAIC_WINDOW, h.times[0], h.last_time());
    let fit = fit_rate(&h.times, &dist, window, FitKind::AlgebraicLogLog, true);
    let t0 = h.times[0];
    let limits: Vec<Value> = nullspace_basis(g)?
        .iter()
        .map(|b| {
            let y1 = dot(b, &h.q[0]);
            let y2 = dot(b, &h.v[0]);
            let predicted = nullspace_limit(t0, y1, y2);
            let last = dot(b, h.q.last().expect("non-empty trajectory"));
            json!({ "basis": b, "predicted_limit": predicted, "final": last, "error": (last - predicted).abs() })
        })
        .collect();
    columns.push(("dist_null".into(), dist));
    Ok(json!({ "applicable": true, "slope": fit_json(fit), "limits": limits }))
}

fn modal(h: &TrajectoryRecord64, s: &Spectrum<f64>) -> Result<Value, CliError> {
    if s.left_vectors.is_empty() {
        return Ok(json!({ "applicable": false }));
    }
    let mut modes = Vec::new();
    for (k, lam) in s.eigenvalues.iter().enumerate() {
        let (y, yd) = modal_project(h, &s.left_vectors[k])?;
        let entry = if y[0].norm() == 0.0 && yd[0].norm() == 0.0 {
            json!({ "lambda": [lam.re, lam.im], "skipped": "zero projection" })
        } else {
            let err = closed_form_error(*lam, &h.times, &y, yd[0])?;
            json!({ "lambda": [lam.re, lam.im], "closed_form_error": err })
        };
        modes.push(entry);
    }
    Ok(json!({ "applicable": true, "modes": modes }))
}

fn energy(h: &TrajectoryRecord64, s: &Spectrum<f64>, verdict: &StabilityVerdict<f64>) -> Result<Value, CliError> {
    let mut modes = Vec::new();
    for (k, e) in verdict.per_eigenvalue.iter().enumerate() {
        if e.tag != EigenTag::StrictlyComplex || e.lambda.im < 0.0 {
            continue;
        }
        let Some(w) = s.left_vectors.get(k) else { continue };
        let (y, yd) = modal_project(h, w)?;
        let residual = energy_identity_residual(&h.times, &y, &yd, e.lambda)?;
        let q0 = skew_product(y[0], yd[0]);
        modes.push(json!({ "lambda": [e.lambda.re, e.lambda.im], "residual": residual, "q_t0": [q0.re, q0.im] }));
    }
    Ok(json!({ "applicable": !modes.is_empty(), "modes": modes }))
}

fn rates(h: &TrajectoryRecord<f64>, verdict: &StabilityVerdict<f64>, dynamics: DynamicsKind) -> Value {
    let norms = h.norm_q();
    let (t0, t_end) = (h.times[0], h.last_time());
    match dynamics {
        DynamicsKind::FirstOrder => {
            let window = clip_window((t0, t0 + 4.0), t0, t_end);
            json!({
                "kind": "exponential",
                "predicted": -verdict.first_order_rate,
                "fit": fit_json(fit_rate(&h.times, &norms, window, FitKind::ExponentialSemilog, false)),
            })
        }
        DynamicsKind::Nagd if verdict.nagd_verdict.is_unstable() => {
            let window = clip_window(EXPONENTIAL_WINDOW, t0, t_end);
            json!({
                "kind": "exponential",
                "predicted": verdict.dominant_growth_rate,
                "fit": fit_json(fit_growth_rate(&h.times, &norms, window, false)),
            })
        }
        DynamicsKind::Nagd => {
            let window = clip_window(ALGEBRAIC_WINDOW, t0, t_end);
            json!({
                "kind": "algebraic",
                "predicted": -1.5,
                "fit": fit_json(fit_rate(&h.times, &norms, window, FitKind::AlgebraicLogLog, true)),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(text).unwrap()
    }

    #[test]
    fn columns_follow_schema_order() {
        let c = config(
            "diagnostics = [\"nullspace\", \"chetaev\", \"lyapunov\", \"rates\", \"modal\"]\n[source.matrix]\ng = [[0.25, 0.25], [0.25, 0.25]]\n[initial]\nq0 = [0.5, -0.3]\nv0 = [0.1, 0.1]\n[integrator]\nt_end = 20.0\n",
        );
        let out = run_experiment(&c).unwrap();
        let names: Vec<&str> = out.columns.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["V", "Vdot", "dist_null"]);
        assert_eq!(out.report.diagnostics["chetaev"]["applicable"], json!(false));
        assert_eq!(out.report.samples, 1901);
    }

    #[test]
    fn affine_system_is_shifted() {
        let c = config("diagnostics = [\"lyapunov\"]\n[source.matrix]\ng = [[1.0, 0.0], [0.0, 2.0]]\noffset = [-1.0, -4.0]\n[initial]\nq0 = [1.0, 2.0]\n[integrator]\nt_end = 5.0\n");
        let out = run_experiment(&c).unwrap();
        assert_eq!(out.report.equilibrium, Some(vec![1.0, 2.0]));
        assert!(out.column("V").unwrap().iter().all(|v| v.abs() < 1e-20));
    }

    #[test]
    fn first_order_rejects_second_order_diagnostics() {
        let c = config("dynamics = \"first_order\"\ndiagnostics = [\"lyapunov\"]\n[source.matrix]\ng = [[1.0]]\n");
        assert!(matches!(run_experiment(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn unsolvable_offset_with_diagnostics() {
        let c = config(
            "diagnostics = [\"rates\"]\n[source.matrix]\ng = [[1.0, 0.0], [0.0, 0.0]]\noffset = [0.0, 1.0]\n[integrator]\nt_end = 2.0\n",
        );
        assert!(matches!(run_experiment(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn complex_case_diagnostics() {
        let c = config(
            "diagnostics = [\"chetaev\", \"energy\", \"rates\", \"modal\"]\n[source.matrix]\ng = [[6.0, 1.5], [-1.5, 6.0]]\n[initial]\nq0 = [1.0, 0.0]\n[integrator]\nt_end = 60.0\n",
        );
        let out = run_experiment(&c).unwrap();
        let d = &out.report.diagnostics;
        let beta = d["chetaev"]["complex"]["predicted_rate"].as_f64().unwrap();
        let fit = d["chetaev"]["complex"]["fit"]["slope"].as_f64().unwrap();
        assert!((fit - beta).abs() / beta < 0.1);
        assert!(d["energy"]["modes"][0]["residual"].as_f64().unwrap() <= 1e-5);
        for m in d["modal"]["modes"].as_array().unwrap() {
            assert!(m["closed_form_error"].as_f64().unwrap() <= 1e-5, "{m}");
        }
        assert!(out.column("rho").is_some());
    }
}
