//! Built-in configurations of the five reference experiments.
//!
//! All runs use `t0 = 1`, `dt = 0.01`, `r = 3`. Horizons are 100 for the
//! stable cases and 60 for the unstable ones.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::config::{Diagnostic, DynamicsKind, ExperimentConfig, Initial, IntegratorSection, OutputSection, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}`; expected one of fig1, fig2, fig3, fig4, fig5"))
    }
}

pub const G_SYMMETRIC: [[f64; 2]; 2] = [[0.4, 0.2], [0.2, 0.8]];
pub const G_COMPLEX: [[f64; 2]; 2] = [[6.0, 1.5], [-1.5, 6.0]];
pub const G_NEGATIVE: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, -0.5]];
pub const G_SEMIDEFINITE: [[f64; 2]; 2] = [[0.25, 0.25], [0.25, 0.25]];
pub const G_THREE: [[f64; 3]; 3] = [[1.0, 0.3, 0.2], [0.3, 0.8, 0.25], [0.2, 0.25, 0.6]];
pub const G_FOUR: [[f64; 4]; 4] = [[1.2, 0.2, 0.15, 0.1], [0.2, 0.9, 0.2, 0.15], [0.15, 0.2, 0.7, 0.1], [0.1, 0.15, 0.1, 0.5]];

pub const EIGS_THREE: [f64; 3] = [0.43, 0.62, 1.35];
pub const EIGS_FOUR: [f64; 4] = [0.44, 0.58, 0.87, 1.41];

/// Start time of the Chetaev panel: `6/mu + 1` for `mu = sqrt(0.5)`.
pub fn chetaev_t0() -> f64 {
    6.0 / 0.5f64.sqrt() + 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub name: &'static str,
    pub config: ExperimentConfig,
}

fn rows<const N: usize>(g: &[[f64; N]; N]) -> Vec<Vec<f64>> {
    g.iter().map(|r| r.to_vec()).collect()
}

fn matrix_config<const N: usize>(
    name: &str,
    g: &[[f64; N]; N],
    q0: &[f64],
    v0: &[f64],
    t_end: f64,
    dynamics: DynamicsKind,
    diagnostics: &[Diagnostic],
) -> ExperimentConfig {
    ExperimentConfig {
        name: Some(name.to_string()),
        dynamics,
        diagnostics: diagnostics.iter().copied().collect::<BTreeSet<_>>(),
        source: Source::Matrix { g: rows(g), offset: None },
        initial: Initial { q0: q0.to_vec(), v0: v0.to_vec() },
        integrator: IntegratorSection { t_end, ..IntegratorSection::default() },
        output: OutputSection::default(),
    }
}

/// Potential game whose players all share the cost matrix `G/2`.
fn potential_game_config<const N: usize>(name: &str, g: &[[f64; N]; N], q0: &[f64], diagnostics: &[Diagnostic]) -> ExperimentConfig {
    let half: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x| x / 2.0).collect()).collect();
    let mut cfg = matrix_config(name, g, q0, &[], 100.0, DynamicsKind::Nagd, diagnostics);
    cfg.source = Source::Game { q: vec![half; N], d: vec![vec![0.0; N]; N] };
    cfg
}

pub fn panels(fig: FigureId) -> Vec<Panel> {
    use Diagnostic::*;
    use DynamicsKind::*;
    let p = |name: &'static str, config: ExperimentConfig| Panel { name, config };
    match fig {
        FigureId::Fig1 => vec![
            p("nagd", matrix_config("fig1_nagd", &G_SYMMETRIC, &[0.5, 0.3], &[0.0, 0.0], 100.0, Nagd, &[Lyapunov, Modal, Rates])),
            p("first_order", matrix_config("fig1_first_order", &G_SYMMETRIC, &[0.5, 0.3], &[], 100.0, FirstOrder, &[Rates])),
        ],
        FigureId::Fig2 => vec![
            p("nagd", matrix_config("fig2_nagd", &G_COMPLEX, &[1.0, 0.0], &[0.0, 0.0], 60.0, Nagd, &[Chetaev, Energy, Modal, Rates])),
            p("first_order", matrix_config("fig2_first_order", &G_COMPLEX, &[1.0, 0.0], &[], 60.0, FirstOrder, &[Rates])),
        ],
        FigureId::Fig3 => {
            let mut chetaev = matrix_config("fig3_chetaev", &G_NEGATIVE, &[0.0, 1.0], &[0.0, 1.0], 0.0, Nagd, &[Chetaev]);
            chetaev.integrator.t0 = chetaev_t0();
            chetaev.integrator.t_end = chetaev_t0() + 30.0;
            vec![
                p("nagd", matrix_config("fig3_nagd", &G_NEGATIVE, &[0.5, 0.3], &[0.0, 0.0], 60.0, Nagd, &[Chetaev, Rates])),
                p("chetaev", chetaev),
            ]
        }
        FigureId::Fig4 => {
            vec![p("nagd", matrix_config("fig4_nagd", &G_SEMIDEFINITE, &[0.5, -0.3], &[0.1, 0.1], 100.0, Nagd, &[Lyapunov, Nullspace]))]
        }
        FigureId::Fig5 => vec![
            p("three_player", potential_game_config("fig5_three_player", &G_THREE, &[0.5, 0.3, -0.2], &[Lyapunov, Rates])),
            p("four_player", potential_game_config("fig5_four_player", &G_FOUR, &[0.5, 0.3, -0.2, 0.4], &[Lyapunov, Rates])),
        ],
    }
}
