use std::fmt::Write as _;

use nagd_core::spectral::{classify_matrix, eigendecompose_default, FirstOrderVerdict, NagdVerdict, Spectrum, StabilityVerdict};
use nagd_core::Matrix64;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub const JORDAN_WARNING: &str =
    "G is not diagonalizable: Jordan blocks may cause polynomial growth, so the eigenvalue test alone does not decide stability";

#[derive(Debug, Clone, Serialize)]
pub struct EigenRow {
    pub re: f64,
    pub im: f64,
    pub class: &'static str,
    /// `-1.5` (algebraic exponent), `0` or the exponential growth rate.
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub summary: String,
    pub nagd_verdict: &'static str,
    pub first_order_verdict: &'static str,
    pub nagd_growth_rate: f64,
    pub first_order_rate: f64,
    pub eigenvalues: Vec<EigenRow>,
    pub t0: f64,
    pub bound_constant_c: Option<f64>,
    pub kappa_p: f64,
    pub symmetric: bool,
    pub normal: bool,
    pub diagonalizable: bool,
    pub warnings: Vec<String>,
}

pub fn classify_config(cfg: &ExperimentConfig) -> Result<ClassifyReport, CliError> {
    let system = cfg.system()?;
    classify_g(&system.g, cfg.integrator.t0)
}

pub fn classify_g(g: &Matrix64, t0: f64) -> Result<ClassifyReport, CliError> {
    let s = eigendecompose_default(g)?;
    let v = classify_matrix(&s, t0);
    Ok(build(&s, &v, t0))
}

fn build(s: &Spectrum<f64>, v: &StabilityVerdict<f64>, t0: f64) -> ClassifyReport {
    let mut warnings = Vec::new();
    if v.nagd_verdict == NagdVerdict::IndeterminateJordan {
        warnings.push(JORDAN_WARNING.to_string());
    }
    ClassifyReport {
        summary: summary_line(v),
        nagd_verdict: v.nagd_verdict.name(),
        first_order_verdict: v.first_order_verdict.name(),
        nagd_growth_rate: v.dominant_growth_rate,
        first_order_rate: v.first_order_rate,
        eigenvalues: v
            .per_eigenvalue
            .iter()
            .map(|e| EigenRow { re: e.lambda.re, im: e.lambda.im, class: e.tag.name(), rate: e.rate })
            .collect(),
        t0,
        bound_constant_c: v.bound_constant_c,
        kappa_p: s.kappa_p,
        symmetric: s.is_symmetric,
        normal: s.is_normal,
        diagonalizable: s.is_diagonalizable,
        warnings,
    }
}

/// One-line NAGD versus first-order comparison.
pub fn summary_line(v: &StabilityVerdict<f64>) -> String {
    let nagd = match v.nagd_verdict {
        NagdVerdict::StableConvergent => "STABLE (convergent)".to_string(),
        NagdVerdict::StableToNullSpace => "STABLE (converges to null space)".to_string(),
        NagdVerdict::UnstableComplex => format!("UNSTABLE (complex eigenvalues), rate {:.4}", v.dominant_growth_rate),
        NagdVerdict::UnstableNegativeReal => format!("UNSTABLE (negative real eigenvalue), rate {:.4}", v.dominant_growth_rate),
        NagdVerdict::IndeterminateJordan => "INDETERMINATE (IndeterminateJordan)".to_string(),
    };
    let first = match v.first_order_verdict {
        FirstOrderVerdict::ExponentiallyStable => format!("STABLE, rate {:.4}", v.first_order_rate),
        FirstOrderVerdict::MarginallyStable => "MARGINALLY STABLE".to_string(),
        FirstOrderVerdict::Unstable => format!("UNSTABLE, rate {:.4}", -v.first_order_rate),
    };
    format!("NAGD: {nagd}; first-order: {first}")
}

pub fn render_text(r: &ClassifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", r.summary);
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out, "eigenvalues:");
    for e in &r.eigenvalues {
        let _ = writeln!(out, "  {:>12.6} {:+.6}i  {:<16} rate {:.4}", e.re, e.im, e.class, e.rate);
    }
    match r.bound_constant_c {
        Some(c) => {
            let _ = writeln!(out, "C(t0 = {}) = {:.6}", r.t0, c);
        }
        None => {
            let _ = writeln!(out, "C(t0 = {}) = n/a", r.t0);
        }
    }
    let _ = writeln!(out, "kappa(P) = {:.6e}", r.kappa_p);
    let _ = writeln!(out, "symmetric: {}, normal: {}, diagonalizable: {}", r.symmetric, r.normal, r.diagonalizable);
    out
}
