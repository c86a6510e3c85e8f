//! Least-squares rate fits on log scales.

use super::AnalysisError;
use crate::scalar::Real;

pub const MIN_FIT_POINTS: usize = 5;
/// Default window for algebraic (log-log) fits.
pub const ALGEBRAIC_WINDOW: (f64, f64) = (30.0, 100.0);
/// Default window for exponential (semilog) fits.
pub const EXPONENTIAL_WINDOW: (f64, f64) = (20.0, 60.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitKind {
    /// slope of `ln s` against `ln t`
    AlgebraicLogLog,
    /// slope of `ln s` against `t`
    ExponentialSemilog,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit<T> {
    pub kind: FitKind,
    pub window: (T, T),
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    pub used_envelope: bool,
    pub points: usize,
    /// Power `p` divided out before fitting, i.e. the model is
    /// `s ~ t^p e^{slope t}`; zero for plain fits.
    pub prefactor_exponent: T,
}

/// Indices of strict 3-point local maxima of `|series|`.
pub fn local_maxima<T: Real>(series: &[T]) -> Vec<usize> {
    (1..series.len().saturating_sub(1))
        .filter(|&i| {
            let (a, b, c) = (series[i - 1].abs(), series[i].abs(), series[i + 1].abs());
            b > a && b > c
        })
        .collect()
}

/// Least-squares fit of `ln(series)` against `ln t` or `t` on `window`.
/// With `envelope`, only strict local maxima inside the window are used.
pub fn fit_rate<T: Real>(times: &[T], series: &[T], window: (T, T), kind: FitKind, envelope: bool) -> Result<RateFit<T>, AnalysisError> {
    fit_with_prefactor(times, series, window, kind, envelope, T::zero())
}

/// Exponential rate `beta` of `s(t) ~ C e^{beta t} t^{-3/2}`: fits
/// `ln s + 1.5 ln t` against `t`.
pub fn fit_growth_rate<T: Real>(times: &[T], series: &[T], window: (T, T), envelope: bool) -> Result<RateFit<T>, AnalysisError> {
    fit_with_prefactor(times, series, window, FitKind::ExponentialSemilog, envelope, T::lit(-1.5))
}

fn fit_with_prefactor<T: Real>(
    times: &[T],
    series: &[T],
    window: (T, T),
    kind: FitKind,
    envelope: bool,
    prefactor: T,
) -> Result<RateFit<T>, AnalysisError> {
    if times.len() != series.len() {
        return Err(AnalysisError::DimensionMismatch(format!("{} times but {} values", times.len(), series.len())));
    }
    let (ta, tb) = window;
    let in_window = |i: usize| times[i] >= ta && times[i] <= tb;
    let idx: Vec<usize> = if envelope {
        local_maxima(series).into_iter().filter(|&i| in_window(i)).collect()
    } else {
        (0..times.len()).filter(|&i| in_window(i)).collect()
    };
    if idx.len() < MIN_FIT_POINTS {
        return Err(AnalysisError::InsufficientPoints { needed: MIN_FIT_POINTS, found: idx.len() });
    }
    let mut xs = Vec::with_capacity(idx.len());
    let mut ys = Vec::with_capacity(idx.len());
    for &i in &idx {
        let s = if envelope { series[i].abs() } else { series[i] };
        if !(s > T::zero()) || !s.is_finite() {
            return Err(AnalysisError::NonPositive { t: times[i].as_f64() });
        }
        let t = times[i];
        xs.push(match kind {
            FitKind::AlgebraicLogLog => t.ln(),
            FitKind::ExponentialSemilog => t,
        });
        ys.push(s.ln() - prefactor * t.ln());
    }
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    Ok(RateFit { kind, window, slope, intercept, r_squared, used_envelope: envelope, points: idx.len(), prefactor_exponent: prefactor })
}

fn least_squares<T: Real>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let n = T::from_usize_lossy(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (*x - mx, *y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = if sxx > T::zero() { sxy / sxx } else { T::zero() };
    let intercept = my - slope * mx;
    let ss_res = (syy - slope * sxy).max(T::zero());
    let r2 = if syy > T::zero() { (T::one() - ss_res / syy).max(T::zero()).min(T::one()) } else { T::one() };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn synthetic_power_law() {
        let t = grid(1.0, 100.0, 9901);
        let s: Vec<f64> = t.iter().map(|x| x.powf(-1.5)).collect();
        let f = fit_rate(&t, &s, (30.0, 100.0), FitKind::AlgebraicLogLog, false).unwrap();
        assert!((f.slope + 1.5).abs() < 1e-6);
        assert!(f.r_squared > 0.9999);
    }

    #[test]
    fn synthetic_exponential() {
        let t = grid(1.0, 60.0, 5901);
        let s: Vec<f64> = t.iter().map(|x| (0.707 * x).exp()).collect();
        let f = fit_rate(&t, &s, (20.0, 60.0), FitKind::ExponentialSemilog, false).unwrap();
        assert!((f.slope - 0.707).abs() < 1e-6);
    }

    #[test]
    fn growth_fit_removes_prefactor() {
        let t = grid(1.0, 60.0, 5901);
        let s: Vec<f64> = t.iter().map(|x| 3.0 * (0.3 * x).exp() * x.powf(-1.5)).collect();
        let raw = fit_rate(&t, &s, (20.0, 60.0), FitKind::ExponentialSemilog, false).unwrap();
        let corrected = fit_growth_rate(&t, &s, (20.0, 60.0), false).unwrap();
        assert!((corrected.slope - 0.3).abs() < 1e-9);
        assert!(raw.slope < 0.27);
    }

    #[test]
    fn envelope_of_oscillating_decay() {
        let t = grid(1.0, 100.0, 9901);
        let s: Vec<f64> = t.iter().map(|x| (x.powf(-1.5) * (2.0 * x).cos()).abs()).collect();
        let raw = fit_rate(&t, &s, (30.0, 100.0), FitKind::AlgebraicLogLog, false);
        assert!(matches!(raw, Err(AnalysisError::NonPositive { .. })) || raw.unwrap().r_squared < 0.9);
        let f = fit_rate(&t, &s, (30.0, 100.0), FitKind::AlgebraicLogLog, true).unwrap();
        assert!((f.slope + 1.5).abs() < 0.01, "{}", f.slope);
        assert!(f.used_envelope);
    }

    #[test]
    fn errors() {
        let t = grid(1.0, 10.0, 10);
        let s = vec![1.0; 10];
        assert!(matches!(fit_rate(&t, &s, (1.0, 3.0), FitKind::ExponentialSemilog, false), Err(AnalysisError::InsufficientPoints { .. })));
        assert!(matches!(
            fit_rate(&t, &s, (1.0, 10.0), FitKind::ExponentialSemilog, true),
            Err(AnalysisError::InsufficientPoints { found: 0, .. })
        ));
        let mut z = s.clone();
        z[5] = 0.0;
        assert!(matches!(fit_rate(&t, &z, (1.0, 10.0), FitKind::ExponentialSemilog, false), Err(AnalysisError::NonPositive { .. })));
    }

    proptest! {
        #[test]
        fn recovers_power_laws(p in -4.0f64..4.0, c in 0.1f64..10.0) {
            let t = grid(1.0, 100.0, 991);
            let s: Vec<f64> = t.iter().map(|x| c * x.powf(p)).collect();
            let f = fit_rate(&t, &s, (30.0, 100.0), FitKind::AlgebraicLogLog, false).unwrap();
            prop_assert!((f.slope - p).abs() <= 1e-6);
        }

        #[test]
        fn recovers_exponentials(k in -2.0f64..2.0, c in 0.1f64..10.0) {
            let t = grid(1.0, 60.0, 591);
            let s: Vec<f64> = t.iter().map(|x| c * (k * x).exp()).collect();
            let f = fit_rate(&t, &s, (20.0, 60.0), FitKind::ExponentialSemilog, false).unwrap();
            prop_assert!((f.slope - k).abs() <= 1e-6);
        }
    }
}
