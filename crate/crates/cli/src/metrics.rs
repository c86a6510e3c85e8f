//! Scalar measurements shared by `simulate`, `reproduce` and `check`.

use nagd_core::dynamics::{simulate_modal, IntegratorConfig};
use nagd_core::special::{eval_modal, make_modal_solution};
use nagd_core::spectral::{EigenTag, Spectrum, StabilityVerdict};
use nagd_core::Complex64;

use crate::error::CliError;

/// `window` intersected with `[t0, t_end]`.
pub fn clip_window(window: (f64, f64), t0: f64, t_end: f64) -> (f64, f64) {
    (window.0.max(t0), window.1.min(t_end))
}

/// Local envelope of `|y|`: max over samples within `half_width` of each sample.
pub fn local_envelope(times: &[f64], abs_y: &[f64], half_width: f64) -> Vec<f64> {
    let n = times.len();
    let mut out = Vec::with_capacity(n);
    let (mut lo, mut hi) = (0usize, 0usize);
    for k in 0..n {
        while times[lo] < times[k] - half_width {
            lo += 1;
        }
        while hi + 1 < n && times[hi + 1] <= times[k] + half_width {
            hi += 1;
        }
        out.push(abs_y[lo..=hi].iter().fold(0.0f64, |a, b| a.max(*b)));
    }
    out
}

/// Half width used for [`local_envelope`]: half an oscillation period of
/// `y ~ Z_1(sqrt(lambda) t)/t`, capped to `[0, 5]`.
pub fn envelope_half_width(lambda: Complex64) -> f64 {
    let re = lambda.sqrt().re.abs();
    if re > 0.0 {
        (std::f64::consts::PI / re).min(5.0)
    } else {
        0.0
    }
}

/// Max over samples of `|y - y_exact| / envelope(y_exact)` where `y_exact`
/// is the closed form through `(y[0], ydot0)` at `times[0]`.
pub fn closed_form_error(lambda: Complex64, times: &[f64], y: &[Complex64], ydot0: Complex64) -> Result<f64, CliError> {
    let sol = make_modal_solution(lambda, times[0], y[0], ydot0)?;
    let exact = times.iter().map(|t| eval_modal(&sol, *t).map(|e| e.y)).collect::<Result<Vec<_>, _>>()?;
    let abs: Vec<f64> = exact.iter().map(|z| z.norm()).collect();
    let env = local_envelope(times, &abs, envelope_half_width(lambda));
    let floor = f64::MIN_POSITIVE.max(1e-12 * abs.iter().fold(0.0f64, |a, b| a.max(*b)));
    Ok(y.iter().zip(&exact).zip(&env).map(|((a, b), e)| (a - b).norm() / e.max(floor)).fold(0.0, f64::max))
}

/// [`closed_form_error`] of an RK4 modal run on the grid of `cfg`.
pub fn modal_agreement(lambda: Complex64, y0: Complex64, ydot0: Complex64, cfg: &IntegratorConfig<f64>) -> Result<f64, CliError> {
    let num = simulate_modal(lambda, y0, ydot0, cfg)?;
    closed_form_error(lambda, &num.times, &num.y, ydot0)
}

/// Index of the unstable eigenvalue of class `tag` with the largest rate
/// (positive imaginary part for complex pairs).
pub fn dominant_index(verdict: &StabilityVerdict<f64>, tag: EigenTag) -> Option<usize> {
    verdict
        .per_eigenvalue
        .iter()
        .enumerate()
        .filter(|(_, e)| e.tag == tag && (tag != EigenTag::StrictlyComplex || e.lambda.im > 0.0))
        .max_by(|a, b| a.1.rate.total_cmp(&b.1.rate))
        .map(|(k, _)| k)
}

/// Real left eigenvector for a real eigenvalue: phase removed, unit length,
/// sign chosen so that `w . x >= 0`.
pub fn real_left_vector(spectrum: &Spectrum<f64>, k: usize, x: &[f64]) -> Option<Vec<f64>> {
    let w = spectrum.left_vectors.get(k)?;
    let pivot = w.iter().max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    if pivot.norm() == 0.0 {
        return None;
    }
    let phase = pivot.conj() / pivot.norm();
    let mut r: Vec<f64> = w.iter().map(|z| (z * phase).re).collect();
    let nrm = r.iter().map(|a| a * a).sum::<f64>().sqrt();
    r.iter_mut().for_each(|a| *a /= nrm);
    if r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
        r.iter_mut().for_each(|a| *a = -*a);
    }
    Some(r)
}
