//! TOML experiment configuration.
//!
//! ```toml
//! name = "symmetric"
//! dynamics = "nagd"                  # or "first_order"
//! diagnostics = ["lyapunov", "rates"]
//!
//! [source.matrix]                    # or [source.game] with q, d
//! g = [[0.4, 0.2], [0.2, 0.8]]
//! offset = [0.0, 0.0]
//!
//! [initial]
//! q0 = [0.5, 0.3]
//! v0 = [0.0, 0.0]
//!
//! [integrator]
//! t0 = 1.0
//! t_end = 100.0
//! dt = 0.01
//! r = 3.0
//! record_stride = 1
//!
//! [output]
//! path = "symmetric.csv"
//! format = "csv"
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use nagd_core::dynamics::IntegratorConfig;
use nagd_core::game::{PseudoGradientSystem, QuadraticGame};
use nagd_core::Matrix64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub dynamics: DynamicsKind,
    #[serde(default)]
    pub diagnostics: BTreeSet<Diagnostic>,
    pub source: Source,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicsKind {
    #[default]
    Nagd,
    FirstOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    Modal,
    Lyapunov,
    Chetaev,
    Energy,
    Nullspace,
    Rates,
}

impl Diagnostic {
    pub fn name(self) -> &'static str {
        match self {
            Diagnostic::Modal => "modal",
            Diagnostic::Lyapunov => "lyapunov",
            Diagnostic::Chetaev => "chetaev",
            Diagnostic::Energy => "energy",
            Diagnostic::Nullspace => "nullspace",
            Diagnostic::Rates => "rates",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Per-player cost matrices `Q_i` and linear terms `d_i`.
    Game { q: Vec<Vec<Vec<f64>>>, d: Vec<Vec<f64>> },
    /// Pseudo-gradient `F(x) = G x + offset` given directly.
    Matrix {
        g: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<Vec<f64>>,
    },
}

/// Empty vectors mean zeros of the system dimension.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    #[serde(default)]
    pub q0: Vec<f64>,
    #[serde(default)]
    pub v0: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub t0: f64,
    pub t_end: f64,
    pub dt: f64,
    pub r: f64,
    pub record_stride: usize,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self { t0: 1.0, t_end: 100.0, dt: 0.01, r: 3.0, record_stride: 1 }
    }
}

impl IntegratorSection {
    pub fn to_core(&self) -> IntegratorConfig<f64> {
        IntegratorConfig::new(self.t0, self.t_end).with_dt(self.dt).with_r(self.r).with_stride(self.record_stride)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Validated system and initial data.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub system: PseudoGradientSystem<f64>,
    pub q0: Vec<f64>,
    pub v0: Vec<f64>,
    pub integrator: IntegratorConfig<f64>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string().trim_end().to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::config(e.to_string()))
    }

    /// File stem used for outputs when `output.path` is not set.
    pub fn stem(&self) -> &str {
        self.name.as_deref().unwrap_or("trajectory")
    }

    pub fn system(&self) -> Result<PseudoGradientSystem<f64>, CliError> {
        match &self.source {
            Source::Matrix { g, offset } => {
                let n = g.len();
                let g = matrix("source.matrix.g", g)?;
                if !g.is_square() {
                    return Err(CliError::config(format!("source.matrix.g must be square, got {}x{}", g.rows(), g.cols())));
                }
                let b = offset.clone().unwrap_or_else(|| vec![0.0; n]);
                if b.len() != n {
                    return Err(CliError::config(format!("source.matrix.offset has length {}, expected {n}", b.len())));
                }
                Ok(PseudoGradientSystem::from_matrix(g, b)?)
            }
            Source::Game { q, d } => {
                let qs =
                    q.iter().enumerate().map(|(i, rows)| matrix(&format!("source.game.q[{i}]"), rows)).collect::<Result<Vec<_>, _>>()?;
                let game = QuadraticGame::new(qs, d.clone()).map_err(|e| CliError::config(format!("source.game: {e}")))?;
                Ok(game.pseudo_gradient())
            }
        }
    }

    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let system = self.system()?;
        let n = system.dim();
        let fill = |key: &str, v: &[f64]| -> Result<Vec<f64>, CliError> {
            match v.len() {
                0 => Ok(vec![0.0; n]),
                k if k == n => {
                    if v.iter().all(|x| x.is_finite()) {
                        Ok(v.to_vec())
                    } else {
                        Err(CliError::config(format!("{key} has non-finite entries")))
                    }
                }
                k => Err(CliError::config(format!("{key} has length {k}, expected {n}"))),
            }
        };
        let q0 = fill("initial.q0", &self.initial.q0)?;
        let v0 = fill("initial.v0", &self.initial.v0)?;
        let integrator = self.integrator.to_core();
        integrator.validate().map_err(|e| CliError::config(format!("integrator: {e}")))?;
        Ok(Prepared { system, q0, v0, integrator })
    }
}

fn matrix(key: &str, rows: &[Vec<f64>]) -> Result<Matrix64, CliError> {
    if rows.is_empty() {
        return Err(CliError::config(format!("{key} is empty")));
    }
    let m = Matrix64::from_rows(rows).map_err(|e| CliError::config(format!("{key}: {e}")))?;
    if !m.is_finite() {
        return Err(CliError::config(format!("{key} has non-finite entries")));
    }
    Ok(m)
}
