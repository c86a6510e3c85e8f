use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use nagd_core::analysis::{
    chetaev_negative, distance_to_nullspace, energy_identity_residual, fit_growth_rate, fit_rate, lyapunov_series, max_relative_increase,
    modal_project, nullspace_basis, nullspace_limit, relative_rms, FitKind, ALGEBRAIC_WINDOW, EXPONENTIAL_WINDOW,
};
use nagd_core::scalar::{dot, norm2};
use nagd_core::spectral::{boundedness_bound, EigenTag};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::simulate::write_run;
use crate::error::{CliError, Status};
use crate::figures::{panels, FigureId, EIGS_FOUR, EIGS_THREE};
use crate::metrics::{clip_window, dominant_index, real_left_vector};
use crate::output::write_json;
use crate::run::{run_experiment, RunOutput};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PanelFile {
    pub panel: String,
    pub csv: String,
    pub saturated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureSummary {
    pub figure: String,
    pub pass: bool,
    #[serde(flatten)]
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub panels: Vec<PanelFile>,
}

#[derive(Default)]
struct Eval {
    metrics: BTreeMap<String, f64>,
    checks: Vec<Check>,
}

impl Eval {
    fn metric(&mut self, name: &str, value: f64) -> f64 {
        self.metrics.insert(name.to_string(), value);
        value
    }

    fn within(&mut self, name: &str, value: f64, target: f64, tol: f64) {
        self.checks.push(Check { name: name.into(), value, target: format!("{target} +/- {tol}"), pass: (value - target).abs() <= tol });
    }

    fn range(&mut self, name: &str, value: f64, lo: f64, hi: f64) {
        self.checks.push(Check { name: name.into(), value, target: format!("[{lo}, {hi}]"), pass: value >= lo && value <= hi });
    }

    fn at_most(&mut self, name: &str, value: f64, bound: f64) {
        self.checks.push(Check { name: name.into(), value, target: format!("<= {bound:e}"), pass: value <= bound });
    }

    fn at_least(&mut self, name: &str, value: f64, bound: f64) {
        self.checks.push(Check { name: name.into(), value, target: format!(">= {bound}"), pass: value >= bound });
    }

    fn truth(&mut self, name: &str, ok: bool) {
        self.checks.push(Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, target: "true".into(), pass: ok });
    }

    fn fail(&mut self, name: &str, why: &str) {
        log::warn!("{name}: {why}");
        self.checks.push(Check { name: name.into(), value: f64::NAN, target: why.into(), pass: false });
    }
}

/// Runs the figures (panels in parallel), writes `<out>/<fig>/<panel>.csv`
/// with sidecars and `<out>/<fig>/summary.json`.
pub fn reproduce(figs: &[FigureId], out_dir: &Path) -> Result<(Vec<FigureSummary>, Status), CliError> {
    let jobs: Vec<(FigureId, usize, &'static str, crate::config::ExperimentConfig)> =
        figs.iter().flat_map(|f| panels(*f).into_iter().enumerate().map(move |(i, p)| (*f, i, p.name, p.config))).collect();
    let runs: Vec<(FigureId, &'static str, RunOutput, PathBuf)> = jobs
        .into_par_iter()
        .map(|(fig, _, name, cfg)| {
            let out = run_experiment(&cfg)?;
            let path = out_dir.join(fig.name()).join(format!("{name}.csv"));
            write_run(&out, &path, cfg.output.format)?;
            Ok((fig, name, out, path))
        })
        .collect::<Result<_, CliError>>()?;

    let mut summaries = Vec::new();
    let mut status = Status::Ok;
    for fig in figs {
        let mine: Vec<&(FigureId, &'static str, RunOutput, PathBuf)> = runs.iter().filter(|r| r.0 == *fig).collect();
        let by_name: BTreeMap<&str, &RunOutput> = mine.iter().map(|r| (r.1, &r.2)).collect();
        let eval = evaluate(*fig, &by_name);
        let pass = eval.checks.iter().all(|c| c.pass);
        let files = mine
            .iter()
            .map(|r| PanelFile { panel: r.1.to_string(), csv: r.3.display().to_string(), saturated: r.2.report.saturated })
            .collect::<Vec<_>>();
        if files.iter().any(|f| f.saturated) {
            status = status.merge(Status::Truncated);
        }
        if !pass {
            status = status.merge(Status::Failed);
        }
        let summary = FigureSummary { figure: fig.name().into(), pass, metrics: eval.metrics, checks: eval.checks, panels: files };
        write_json(&out_dir.join(fig.name()).join("summary.json"), &summary)?;
        summaries.push(summary);
    }
    Ok((summaries, status))
}

fn evaluate(fig: FigureId, runs: &BTreeMap<&str, &RunOutput>) -> Eval {
    let mut e = Eval::default();
    match fig {
        FigureId::Fig1 => fig1(&mut e, runs["nagd"], runs["first_order"]),
        FigureId::Fig2 => fig2(&mut e, runs["nagd"], runs["first_order"]),
        FigureId::Fig3 => fig3(&mut e, runs["nagd"], runs["chetaev"]),
        FigureId::Fig4 => fig4(&mut e, runs["nagd"]),
        FigureId::Fig5 => fig5(&mut e, runs["three_player"], runs["four_player"]),
    }
    e
}

fn sorted_real(run: &RunOutput) -> Vec<f64> {
    let mut v: Vec<f64> = run.spectrum.eigenvalues.iter().map(|l| l.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn envelope_slope(e: &mut Eval, name: &str, run: &RunOutput, series: &[f64], lo: f64, hi: f64) {
    let tr = &run.traj;
    let window = clip_window(ALGEBRAIC_WINDOW, tr.times[0], tr.last_time());
    match fit_rate(&tr.times, series, window, FitKind::AlgebraicLogLog, true) {
        Ok(f) => {
            let s = e.metric(name, f.slope);
            e.range(name, s, lo, hi);
        }
        Err(err) => e.fail(name, &err.to_string()),
    }
}

fn lyapunov_checks(e: &mut Eval, prefix: &str, run: &RunOutput) {
    match lyapunov_series(&run.traj, &run.g) {
        Ok(l) => {
            let inc = e.metric(&format!("{prefix}lyapunov_max_relative_increase"), max_relative_increase(&l.v));
            e.at_most(&format!("{prefix}lyapunov_nonincreasing"), inc, 1e-8);
            let rms = e.metric(&format!("{prefix}vdot_relative_rms"), relative_rms(&l.vdot_numeric, &l.vdot_analytic, 2));
            e.at_most(&format!("{prefix}vdot_agreement"), rms, 1e-4);
        }
        Err(err) => e.fail(&format!("{prefix}lyapunov"), &err.to_string()),
    }
}

fn fig1(e: &mut Eval, nagd: &RunOutput, first: &RunOutput) {
    let eig = sorted_real(nagd);
    e.within("lambda_1", eig[0], 0.317, 0.005);
    e.within("lambda_2", eig[1], 0.883, 0.005);
    e.metric("lambda_1", eig[0]);
    e.metric("lambda_2", eig[1]);
    envelope_slope(e, "nagd_envelope_slope", nagd, &nagd.traj.norm_q(), -1.7, -1.3);
    lyapunov_checks(e, "", nagd);
    let tr = &nagd.traj;
    match boundedness_bound(&nagd.spectrum, tr.times[0], norm2(&tr.q[0]), norm2(&tr.v[0])) {
        Ok(bound) => {
            let sup = tr.norm_q().into_iter().fold(0.0, f64::max);
            e.metric("sup_norm_q", sup);
            e.metric("boundedness_bound", bound);
            e.at_most("boundedness", sup, bound * (1.0 + 1e-6));
        }
        Err(err) => e.fail("boundedness", &err.to_string()),
    }
    let ft = &first.traj;
    if let Ok(f) =
        fit_rate(&ft.times, &ft.norm_q(), clip_window((30.0, 100.0), ft.times[0], ft.last_time()), FitKind::ExponentialSemilog, false)
    {
        e.metric("first_order_rate", f.slope);
        e.within("first_order_rate", f.slope, -eig[0], 0.01 * eig[0]);
    }
}

fn fig2(e: &mut Eval, nagd: &RunOutput, first: &RunOutput) {
    let tr = &nagd.traj;
    let predicted = e.metric("predicted_rate", nagd.verdict.dominant_growth_rate);
    let window = clip_window(EXPONENTIAL_WINDOW, tr.times[0], tr.last_time());
    match fit_growth_rate(&tr.times, &tr.norm_q(), window, false) {
        Ok(f) => {
            let r = e.metric("nagd_rate", f.slope);
            e.within("nagd_rate", r, predicted, 0.1 * predicted);
        }
        Err(err) => e.fail("nagd_rate", &err.to_string()),
    }
    if let Some(k) = dominant_index(&nagd.verdict, EigenTag::StrictlyComplex) {
        let w = &nagd.spectrum.left_vectors[k];
        if let Ok((y, yd)) = modal_project(tr, w) {
            match energy_identity_residual(&tr.times, &y, &yd, nagd.spectrum.eigenvalues[k]) {
                Ok(r) => {
                    e.metric("energy_identity_residual", r);
                    e.at_most("energy_identity", r, 1e-5);
                }
                Err(err) => e.fail("energy_identity", &err.to_string()),
            }
        }
    }
    let ft = &first.traj;
    let k5 = ft.times.iter().position(|t| (t - 5.0).abs() < 1e-9);
    match k5 {
        Some(k) => {
            let ratio = e.metric("first_order_norm_ratio_t5", norm2(&ft.q[k]) / norm2(&ft.q[0]));
            e.at_most("first_order_decay_t5", ratio, (-24.0f64).exp() * (1.0 + 1e-3));
        }
        None => e.fail("first_order_decay_t5", "t = 5 not sampled"),
    }
    match fit_rate(&ft.times, &ft.norm_q(), (1.0, 5.0), FitKind::ExponentialSemilog, false) {
        Ok(f) => {
            let r = e.metric("first_order_rate", f.slope);
            e.within("first_order_rate", r, -6.0, 0.06);
        }
        Err(err) => e.fail("first_order_rate", &err.to_string()),
    }
}

fn fig3(e: &mut Eval, nagd: &RunOutput, chet: &RunOutput) {
    let tr = &nagd.traj;
    let x1: Vec<f64> = tr.component(0).iter().map(|x| x.abs()).collect();
    let x2: Vec<f64> = tr.component(1).iter().map(|x| x.abs()).collect();
    let mu = 0.5f64.sqrt();
    match fit_growth_rate(&tr.times, &x2, clip_window(EXPONENTIAL_WINDOW, tr.times[0], tr.last_time()), false) {
        Ok(f) => {
            let r = e.metric("x2_rate", f.slope);
            e.within("x2_rate", r, mu, 0.05 * mu);
        }
        Err(err) => e.fail("x2_rate", &err.to_string()),
    }
    envelope_slope(e, "x1_envelope_slope", nagd, &x1, -1.7, -1.3);
    let ct = &chet.traj;
    let k = dominant_index(&chet.verdict, EigenTag::NegativeReal);
    match k.and_then(|k| real_left_vector(&chet.spectrum, k, &ct.q[0])) {
        Some(w) => match chetaev_negative(ct, &w, mu) {
            Ok(c) => {
                e.truth("chetaev_in_omega", c.all_in_omega());
                let g = e.metric("chetaev_min_growth_ratio", c.min_growth_ratio());
                e.at_least("chetaev_growth_ratio", g, mu / 6.0 - 1e-3);
                e.metric("chetaev_t0", ct.times[0]);
            }
            Err(err) => e.fail("chetaev", &err.to_string()),
        },
        None => e.fail("chetaev", "no negative eigen-direction"),
    }
}

fn fig4(e: &mut Eval, nagd: &RunOutput) {
    let tr = &nagd.traj;
    let g = nagd.g.clone();
    match distance_to_nullspace(tr, &g) {
        Ok(d) => envelope_slope(e, "dist_null_envelope_slope", nagd, &d, -1.7, -1.3),
        Err(err) => e.fail("dist_null_envelope_slope", &err.to_string()),
    }
    match nullspace_basis(&g) {
        Ok(basis) if basis.len() == 1 => {
            let b = &basis[0];
            let predicted = e.metric("predicted_limit", nullspace_limit(tr.times[0], dot(b, &tr.q[0]), dot(b, &tr.v[0])));
            let last = e.metric("final_null_coordinate", dot(b, tr.q.last().expect("non-empty trajectory")));
            e.at_most("null_limit_error", (last - predicted).abs(), 1e-3);
        }
        Ok(basis) => e.fail("null_limit_error", &format!("expected a one-dimensional null space, got {}", basis.len())),
        Err(err) => e.fail("null_limit_error", &err.to_string()),
    }
    lyapunov_checks(e, "", nagd);
}

fn fig5(e: &mut Eval, three: &RunOutput, four: &RunOutput) {
    for (prefix, run, quoted) in [("three_player_", three, &EIGS_THREE[..]), ("four_player_", four, &EIGS_FOUR[..])] {
        let eig = sorted_real(run);
        let worst = eig.iter().zip(quoted).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        for (i, l) in eig.iter().enumerate() {
            e.metric(&format!("{prefix}lambda_{}", i + 1), *l);
        }
        e.truth(&format!("{prefix}spectrum"), eig.len() == quoted.len() && worst < 0.005);
        envelope_slope(e, &format!("{prefix}envelope_slope"), run, &run.traj.norm_q(), -1.7, -1.3);
        lyapunov_checks(e, prefix, run);
    }
}
