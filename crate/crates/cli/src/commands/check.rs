use std::f64::consts::PI;

use nagd_core::analysis::{
    chetaev_negative, distance_to_nullspace, energy_identity_residual, lyapunov_series, max_relative_increase, nullspace_basis,
    nullspace_limit, relative_rms, skew_product,
};
use nagd_core::dynamics::{
    finite_difference_jacobian, simulate_first_order, simulate_modal, simulate_nagd, simulate_smooth_nagd, IntegratorConfig,
};
use nagd_core::game::{PseudoGradientSystem, QuadraticGame};
use nagd_core::scalar::{dot, norm2};
use nagd_core::special::{
    bessel_i0, bessel_i1, bessel_j0, bessel_j1, bessel_k0, bessel_k1, bessel_y0, bessel_y1, eval_modal, internals, make_modal_solution,
};
use nagd_core::spectral::{boundedness_bound, classify_matrix, eigendecompose_default, NagdVerdict};
use nagd_core::{Complex64, Matrix64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Status};
use crate::figures::{chetaev_t0, G_COMPLEX, G_FOUR, G_NEGATIVE, G_SEMIDEFINITE, G_SYMMETRIC, G_THREE};
use crate::metrics::modal_agreement;

/// Step used by the integrator-accuracy checks unless overridden.
pub const DEFAULT_CHECK_DT: f64 = 0.01;
/// Seed of the randomized checks.
pub const CHECK_SEED: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub pass: bool,
    pub dt: f64,
    pub failed: Vec<&'static str>,
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn status(&self) -> Status {
        if self.pass {
            Status::Ok
        } else {
            Status::Failed
        }
    }
}

type CheckFn = fn(f64) -> Result<CheckResult, CliError>;

pub const CHECKS: [(&str, CheckFn); 18] = [
    ("bessel_wronskian_jy", wronskian_jy),
    ("bessel_wronskian_ik", wronskian_ik),
    ("bessel_series_asymptotic_overlap", series_asymptotic_overlap),
    ("eigen_reconstruction", eigen_reconstruction),
    ("classification_examples", classification_examples),
    ("rk4_order", rk4_order),
    ("modal_agreement", modal_agreement_check),
    ("modal_commutation", modal_commutation),
    ("lyapunov_symmetric", lyapunov_symmetric),
    ("lyapunov_skew", lyapunov_skew),
    ("chetaev_negative", chetaev_check),
    ("energy_identity", energy_identity),
    ("translation_invariance", translation_invariance),
    ("boundedness_bound", boundedness),
    ("nullspace_limit", nullspace_limit_check),
    ("first_order_rotation", first_order_rotation),
    ("smooth_game_instability", smooth_instability),
    ("pseudo_gradient_formula", pseudo_gradient_formula),
];

/// Runs every check in parallel; `dt` drives `rk4_order` and `modal_agreement`.
pub fn run_checks(dt: f64) -> Result<CheckReport, CliError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(CliError::config(format!("--dt must be positive, got {dt}")));
    }
    let checks: Vec<CheckResult> = CHECKS
        .par_iter()
        .map(|(name, f)| {
            f(dt).unwrap_or_else(|e| CheckResult {
                name,
                status: CheckStatus::Fail,
                value: f64::NAN,
                threshold: f64::NAN,
                detail: e.to_string(),
            })
        })
        .collect();
    let failed: Vec<&'static str> = checks.iter().filter(|c| c.status == CheckStatus::Fail).map(|c| c.name).collect();
    Ok(CheckReport { pass: failed.is_empty(), dt, failed, checks })
}

fn at_most(name: &'static str, value: f64, threshold: f64, detail: impl Into<String>) -> Result<CheckResult, CliError> {
    let status = if value <= threshold { CheckStatus::Pass } else { CheckStatus::Fail };
    Ok(CheckResult { name, status, value, threshold, detail: detail.into() })
}

fn matrix<const N: usize>(g: &[[f64; N]; N]) -> Matrix64 {
    Matrix64::from_rows(g).expect("constant matrix")
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn wronskian_jy(_: f64) -> Result<CheckResult, CliError> {
    let mut zs: Vec<Complex64> = (1..=500).map(|k| cx(0.1 * k as f64, 0.0)).collect();
    for re in (1..=50).step_by(7) {
        for im in -5..=5 {
            zs.push(cx(re as f64, im as f64));
        }
    }
    let mut worst = 0.0f64;
    for z in zs {
        let (j0, j1, y0, y1) = (bessel_j0(z)?, bessel_j1(z)?, bessel_y0(z)?, bessel_y1(z)?);
        let target = 2.0 / (PI * z);
        let scale = target.norm().max((j1 * y0).norm() + (j0 * y1).norm());
        worst = worst.max((j1 * y0 - j0 * y1 - target).norm() / scale);
    }
    at_most("bessel_wronskian_jy", worst, 1e-10, "J1 Y0 - J0 Y1 = 2/(pi z) on real [0.1, 50] and a complex grid")
}

fn wronskian_ik(_: f64) -> Result<CheckResult, CliError> {
    let mut worst = 0.0f64;
    for k in 1..=300 {
        let x = 0.1 * k as f64;
        let lhs = bessel_i0(x)? * bessel_k1(x)? + bessel_i1(x)? * bessel_k0(x)?;
        worst = worst.max((lhs * x - 1.0).abs());
    }
    at_most("bessel_wronskian_ik", worst, 1e-10, "I0 K1 + I1 K0 = 1/x on [0.1, 30]")
}

fn series_asymptotic_overlap(_: f64) -> Result<CheckResult, CliError> {
    let mut worst = 0.0f64;
    for k in 0..=100 {
        let z = cx(15.0 + 0.1 * k as f64, 0.0);
        let a = internals::jy_series(z);
        let b = internals::jy_asymptotic(z);
        for i in 0..4 {
            worst = worst.max((a[i] - b[i]).norm() / b[i].norm().max(1e-3));
        }
    }
    at_most("bessel_series_asymptotic_overlap", worst, 1e-8, "ascending series versus Hankel expansion on [15, 25]")
}

fn reference_matrices() -> Vec<Matrix64> {
    vec![
        matrix(&G_SYMMETRIC),
        matrix(&G_COMPLEX),
        matrix(&G_NEGATIVE),
        matrix(&G_SEMIDEFINITE),
        matrix(&G_THREE),
        matrix(&G_FOUR),
        matrix(&[[0.0, 1.0], [-1.0, 0.0]]),
        matrix(&[[2.0, 1.0, 0.0], [0.0, 1.0, 3.0], [0.5, 0.0, 1.0]]),
    ]
}

fn eigen_reconstruction(_: f64) -> Result<CheckResult, CliError> {
    let mut worst = 0.0f64;
    for g in reference_matrices() {
        let s = eigendecompose_default(&g)?;
        worst = worst.max(s.reconstruction_residual(&g) / g.frobenius_norm().max(1.0));
    }
    at_most("eigen_reconstruction", worst, 1e-10, "|G - P diag(lambda) P^-1| / max(1, |G|_F) on the reference matrices")
}

fn classification_examples(_: f64) -> Result<CheckResult, CliError> {
    let cases = [
        (matrix(&G_SYMMETRIC), NagdVerdict::StableConvergent),
        (matrix(&G_COMPLEX), NagdVerdict::UnstableComplex),
        (matrix(&G_NEGATIVE), NagdVerdict::UnstableNegativeReal),
        (matrix(&G_SEMIDEFINITE), NagdVerdict::StableToNullSpace),
        (matrix(&G_FOUR), NagdVerdict::StableConvergent),
        (matrix(&[[0.0, 0.0], [1.0, 0.0]]), NagdVerdict::IndeterminateJordan),
        (Matrix64::identity(3), NagdVerdict::StableConvergent),
    ];
    let mut wrong = Vec::new();
    for (g, expected) in &cases {
        let got = classify_matrix(&eigendecompose_default(g)?, 1.0).nagd_verdict;
        if got != *expected {
            wrong.push(format!("{} instead of {}", got.name(), expected.name()));
        }
    }
    let detail = if wrong.is_empty() { "all verdicts as expected".to_string() } else { wrong.join("; ") };
    at_most("classification_examples", wrong.len() as f64, 0.0, detail)
}

/// Error ratios `e(h)/e(h/2)` for `h = dt, dt/2` against the closed form;
/// fourth order means every ratio lies in `[12, 20]`. The modes reach
/// `|sqrt(lambda)| = 5`, so a step that is coarse for the fastest one fails.
fn rk4_order(dt: f64) -> Result<CheckResult, CliError> {
    let (y0, v0) = (cx(1.0, 0.0), cx(0.0, 0.0));
    let mut ratios = Vec::new();
    for lam in [cx(6.0, 1.5), cx(25.0, 0.0)] {
        let sol = make_modal_solution(lam, 1.0, y0, v0)?;
        let err = |h: f64| -> Result<f64, CliError> {
            let run = simulate_modal(lam, y0, v0, &IntegratorConfig::new(1.0, 10.0).with_dt(h))?;
            let t = *run.times.last().expect("non-empty run");
            let exact = eval_modal(&sol, t)?.y;
            Ok((run.y.last().expect("non-empty run") - exact).norm() / exact.norm())
        };
        let (e1, e2, e3) = (err(dt)?, err(dt / 2.0)?, err(dt / 4.0)?);
        ratios.extend([e1 / e2, e2 / e3]);
    }
    let pass = ratios.iter().all(|r| (12.0..=20.0).contains(r));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    let detail = format!("lambda in {{6+1.5i, 25}}, dt = {dt}: error ratios {} (expected in [12, 20])", shown.join(", "));
    let worst = ratios.iter().copied().max_by(|a, b| (a - 16.0).abs().total_cmp(&(b - 16.0).abs())).unwrap_or(f64::NAN);
    Ok(CheckResult {
        name: "rk4_order",
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        value: worst,
        threshold: 16.0,
        detail,
    })
}

fn modal_agreement_check(dt: f64) -> Result<CheckResult, CliError> {
    let cfg = IntegratorConfig::new(1.0, 50.0).with_dt(dt);
    let mut worst = 0.0f64;
    for lam in [cx(0.317, 0.0), cx(0.883, 0.0), cx(1.0, 0.0), cx(-0.5, 0.0), cx(6.0, 1.5)] {
        for (y0, v0) in [(cx(1.0, 0.0), cx(0.0, 0.0)), (cx(0.3, 0.0), cx(-0.7, 0.0))] {
            worst = worst.max(modal_agreement(lam, y0, v0, &cfg)?);
        }
    }
    at_most("modal_agreement", worst, 1e-5, format!("RK4 (dt = {dt}) versus closed form on [1, 50], envelope-relative"))
}

fn modal_commutation(_: f64) -> Result<CheckResult, CliError> {
    let cfg = IntegratorConfig::new(1.0, 20.0);
    let mut worst = 0.0f64;
    for g in reference_matrices() {
        let n = g.rows();
        let q0: Vec<f64> = (0..n).map(|i| 0.5 - 0.3 * i as f64).collect();
        let v0: Vec<f64> = (0..n).map(|i| 0.1 * i as f64).collect();
        let tr = simulate_nagd(&g, &vec![0.0; n], &q0, &v0, &cfg)?;
        let s = eigendecompose_default(&g)?;
        let project = |w: &[Complex64], x: &[f64]| -> Complex64 { w.iter().zip(x).map(|(wi, xi)| wi.conj() * *xi).sum() };
        for (k, lam) in s.eigenvalues.iter().enumerate() {
            let w = &s.left_vectors[k];
            let m = simulate_modal(*lam, project(w, &q0), project(w, &v0), &cfg)?;
            let floor = 1e-3 * m.y[0].norm().max(1.0);
            for (i, q) in tr.q.iter().enumerate() {
                worst = worst.max((project(w, q) - m.y[i]).norm() / m.y[i].norm().max(floor));
            }
        }
    }
    at_most("modal_commutation", worst, 1e-8, "w* q(t) from the full run equals the modal run from w* q0, w* v0")
}

fn lyapunov_symmetric(_: f64) -> Result<CheckResult, CliError> {
    let mut worst_inc = f64::NEG_INFINITY;
    let mut worst_rms = 0.0f64;
    for (g, q0) in
        [(matrix(&G_SYMMETRIC), vec![0.5, 0.3]), (matrix(&G_THREE), vec![0.5, 0.3, -0.2]), (matrix(&G_FOUR), vec![0.5, 0.3, -0.2, 0.4])]
    {
        let n = g.rows();
        let tr = simulate_nagd(&g, &vec![0.0; n], &q0, &vec![0.0; n], &IntegratorConfig::new(1.0, 100.0))?;
        let l = lyapunov_series(&tr, &g)?;
        worst_inc = worst_inc.max(max_relative_increase(&l.v));
        worst_rms = worst_rms.max(relative_rms(&l.vdot_numeric, &l.vdot_analytic, 2));
    }
    let pass = worst_inc <= 1e-8 && worst_rms <= 1e-4;
    Ok(CheckResult {
        name: "lyapunov_symmetric",
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        value: worst_inc,
        threshold: 1e-8,
        detail: format!("max relative step increase {worst_inc:.3e} (<= 1e-8), Vdot relative RMS {worst_rms:.3e} (<= 1e-4)"),
    })
}

fn lyapunov_skew(_: f64) -> Result<CheckResult, CliError> {
    let g = matrix(&[[0.0, 1.0], [-1.0, 0.0]]);
    let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.5, 0.3], &[0.0, 0.0], &IntegratorConfig::new(1.0, 20.0))?;
    let l = lyapunov_series(&tr, &g)?;
    if l.applicable {
        return Ok(CheckResult {
            name: "lyapunov_skew",
            status: CheckStatus::Fail,
            value: 0.0,
            threshold: 0.0,
            detail: "skew G was treated as symmetric".into(),
        });
    }
    let skew = l.skew_residual.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    Ok(CheckResult {
        name: "lyapunov_skew",
        status: CheckStatus::NotApplicable,
        value: skew,
        threshold: f64::NAN,
        detail: "G is not symmetric; V is not a Lyapunov function (max skew residual reported)".into(),
    })
}

fn chetaev_check(_: f64) -> Result<CheckResult, CliError> {
    let mu = 0.5f64.sqrt();
    let t0 = chetaev_t0();
    let g = matrix(&G_NEGATIVE);
    let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], &IntegratorConfig::new(t0, t0 + 30.0))?;
    let c = chetaev_negative(&tr, &[0.0, 1.0], mu)?;
    let g_min = c.min_growth_ratio();
    let pass = c.all_in_omega() && g_min >= mu / 6.0 - 1e-3;
    Ok(CheckResult {
        name: "chetaev_negative",
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        value: g_min,
        threshold: mu / 6.0 - 1e-3,
        detail: format!("t0 = {t0:.4}, in Omega at every sample: {}", c.all_in_omega()),
    })
}

fn energy_identity(_: f64) -> Result<CheckResult, CliError> {
    let cfg = IntegratorConfig::new(1.0, 50.0);
    let mut worst = 0.0f64;
    let mut q0_max = 0.0f64;
    for lam in [cx(0.0, 1.0), cx(6.0, 1.5)] {
        let (y0, v0) = (cx(1.0, 0.0), cx(-0.4, 0.0));
        let run = simulate_modal(lam, y0, v0, &cfg)?;
        worst = worst.max(energy_identity_residual(&run.times, &run.y, &run.ydot, lam)?);
        q0_max = q0_max.max(skew_product(run.y[0], run.ydot[0]).norm());
    }
    let pass = worst <= 1e-5 && q0_max == 0.0;
    Ok(CheckResult {
        name: "energy_identity",
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        value: worst,
        threshold: 1e-5,
        detail: format!("lambda in {{i, 6+1.5i}}; |Q(t0)| = {q0_max:e} for real initial data"),
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix64 {
    Matrix64::from_row_major(n, n, (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("square data")
}

fn translation_invariance(_: f64) -> Result<CheckResult, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let mut worst = 0.0f64;
    let cfg = IntegratorConfig::new(1.0, 20.0);
    for _ in 0..5 {
        let n = rng.gen_range(2..=4);
        let mut g = random_matrix(&mut rng, n);
        for i in 0..n {
            g[(i, i)] += 2.0;
        }
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut sys = PseudoGradientSystem::from_matrix(g.clone(), b.clone())?;
        let (gh, qh, vh) = sys.translate_to_homogeneous(&q0, &v0)?;
        let x = sys.equilibrium.clone().expect("equilibrium solved");
        let affine = simulate_nagd(&g, &b, &q0, &v0, &cfg)?;
        let homog = simulate_nagd(&gh, &vec![0.0; n], &qh, &vh, &cfg)?;
        for (qa, qb) in affine.q.iter().zip(&homog.q) {
            let scale = 1.0f64.max(norm2(qa));
            for i in 0..n {
                worst = worst.max((qa[i] - x[i] - qb[i]).abs() / scale);
            }
        }
    }
    at_most("translation_invariance", worst, 1e-10, "q(t) - x* from the affine run equals the homogeneous run")
}

fn boundedness(_: f64) -> Result<CheckResult, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED + 1);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 20 {
        let n = rng.gen_range(2..=4);
        let p = random_matrix(&mut rng, n);
        let Some(p_inv) = invert(&p) else { continue };
        let d: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.05..2.0) }).collect();
        let g = p.matmul(&Matrix64::from_diagonal(&d)).matmul(&p_inv);
        let s = eigendecompose_default(&g)?;
        if s.kappa_p.is_nan() || s.kappa_p > 100.0 || !s.is_diagonalizable {
            continue;
        }
        let v = classify_matrix(&s, 1.0);
        if !v.nagd_verdict.is_stable() {
            continue;
        }
        let q0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bound = boundedness_bound(&s, 1.0, norm2(&q0), norm2(&v0))?;
        let tr = simulate_nagd(&g, &vec![0.0; n], &q0, &v0, &IntegratorConfig::new(1.0, 30.0))?;
        let sup = tr.norm_q().into_iter().fold(0.0, f64::max);
        worst = worst.max(sup / bound);
        done += 1;
    }
    at_most("boundedness_bound", worst, 1.0 + 1e-6, "sup |q| / (kappa(P) (|q0| + C |v0|)) over 20 random diagonalizable G, kappa <= 100")
}

fn invert(m: &Matrix64) -> Option<Matrix64> {
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix64::identity(n);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))?;
        if a[(piv, col)].abs() < 1e-3 {
            return None;
        }
        for j in 0..n {
            let (x, y) = (a[(col, j)], a[(piv, j)]);
            a[(col, j)] = y;
            a[(piv, j)] = x;
            let (x, y) = (inv[(col, j)], inv[(piv, j)]);
            inv[(col, j)] = y;
            inv[(piv, j)] = x;
        }
        let d = a[(col, col)];
        for j in 0..n {
            a[(col, j)] /= d;
            inv[(col, j)] /= d;
        }
        for i in (0..n).filter(|&i| i != col) {
            let f = a[(i, col)];
            for j in 0..n {
                a[(i, j)] -= f * a[(col, j)];
                inv[(i, j)] -= f * inv[(col, j)];
            }
        }
    }
    Some(inv)
}

fn nullspace_limit_check(_: f64) -> Result<CheckResult, CliError> {
    let g = matrix(&G_SEMIDEFINITE);
    let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.5, -0.3], &[0.1, 0.1], &IntegratorConfig::new(1.0, 100.0))?;
    let basis = nullspace_basis(&g)?;
    let b = basis.first().ok_or_else(|| CliError::Numeric("empty null space".into()))?;
    let predicted = nullspace_limit(1.0, dot(b, &tr.q[0]), dot(b, &tr.v[0]));
    let last = dot(b, tr.q.last().expect("non-empty run"));
    let dist = distance_to_nullspace(&tr, &g)?;
    at_most(
        "nullspace_limit",
        (last - predicted).abs(),
        1e-3,
        format!("final null coordinate {last:.6} versus predicted {predicted:.6}; final distance {:.3e}", dist.last().unwrap_or(&f64::NAN)),
    )
}

fn first_order_rotation(_: f64) -> Result<CheckResult, CliError> {
    let g = matrix(&[[0.0, 1.0], [-1.0, 0.0]]);
    let tr = simulate_first_order(&g, &[0.0, 0.0], &[0.6, -0.8], &IntegratorConfig::new(1.0, 50.0))?;
    let n0 = norm2(&tr.q[0]);
    let worst = tr.norm_q().iter().map(|n| (n - n0).abs() / n0).fold(0.0, f64::max);
    at_most("first_order_rotation", worst, 1e-6, "first-order play on a skew G keeps |x| constant")
}

fn smooth_instability(_: f64) -> Result<CheckResult, CliError> {
    let g = matrix(&G_COMPLEX);
    let field = |x: &[f64], out: &mut [f64]| {
        g.matvec_into(x, out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o += 0.1 * xi * xi * xi;
        }
    };
    let jac = finite_difference_jacobian(field, &[0.0, 0.0], 1e-5)?;
    let jac_err = jac.sub(&g).max_abs();
    let x0 = [1e-3, 0.0];
    let tr = simulate_smooth_nagd(field, &x0, &[0.0, 0.0], &IntegratorConfig::new(1.0, 60.0))?;
    let peak = tr.norm_q().into_iter().fold(0.0, f64::max) / norm2(&x0);
    let pass = jac_err <= 1e-8 && peak > 10.0;
    Ok(CheckResult {
        name: "smooth_game_instability",
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        value: peak,
        threshold: 10.0,
        detail: format!("F = G x + 0.1 x^3 from |x0| = 1e-3: max |x|/|x0| = {peak:.3e}; Jacobian error {jac_err:.3e} (<= 1e-8)"),
    })
}

fn pseudo_gradient_formula(_: f64) -> Result<CheckResult, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED + 2);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let n = rng.gen_range(1..=4);
        let qs: Vec<Matrix64> = (0..n)
            .map(|_| {
                let a = random_matrix(&mut rng, n);
                let t = a.transpose();
                let mut s = Matrix64::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        s[(i, j)] = 0.5 * (a[(i, j)] + t[(i, j)]);
                    }
                }
                s
            })
            .collect();
        let ds: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let game = QuadraticGame::new(qs.clone(), ds.clone())?;
        let sys = game.pseudo_gradient();
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = sys.evaluate(&x);
        for i in 0..n {
            // d/dx_i of x^T Q_i x + d_i^T x
            let direct = 2.0 * dot(qs[i].row(i), &x) + ds[i][i];
            worst = worst.max((f[i] - direct).abs());
        }
    }
    at_most("pseudo_gradient_formula", worst, 1e-14, "F_i(x) = 2 (Q_i x)_i + (d_i)_i on random games")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_build_passes() {
        let r = run_checks(DEFAULT_CHECK_DT).unwrap();
        for c in &r.checks {
            assert_ne!(c.status, CheckStatus::Fail, "{}: {} ({})", c.name, c.value, c.detail);
        }
        assert!(r.pass);
        let skew = r.checks.iter().find(|c| c.name == "lyapunov_skew").unwrap();
        assert_eq!(skew.status, CheckStatus::NotApplicable);
    }

    #[test]
    fn coarse_dt_fails_integrator_checks() {
        let r = run_checks(0.5).unwrap();
        assert!(!r.pass);
        assert!(r.failed.contains(&"rk4_order"), "{:?}", r.failed);
        assert!(r.failed.contains(&"modal_agreement"), "{:?}", r.failed);
        assert!(!r.failed.contains(&"bessel_wronskian_jy"));
        assert_eq!(r.status().exit_code(), 4);
        assert!(run_checks(0.0).is_err());
    }
}
