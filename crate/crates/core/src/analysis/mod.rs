//! Trajectory diagnostics: modal projections, rate fits, Lyapunov and
//! Chetaev functions, the skew-Hermitian energy identity and the distance
//! to the null space of `G`.

mod chetaev;
mod fit;
mod lyapunov;
mod projection;

use std::ops::{Add, Mul, Sub};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::scalar::Real;

pub use chetaev::{chetaev_complex, chetaev_negative, ChetaevState};
pub use fit::{fit_growth_rate, fit_rate, local_maxima, FitKind, RateFit, ALGEBRAIC_WINDOW, EXPONENTIAL_WINDOW, MIN_FIT_POINTS};
pub use lyapunov::{energy_identity_residual, lyapunov_series, max_relative_increase, relative_rms, skew_product, LyapunovSeries};
pub use projection::{distance_to_nullspace, modal_project, nullspace_basis, nullspace_limit, NULLSPACE_RCOND};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("need at least {needed} usable points, found {found}")]
    InsufficientPoints { needed: usize, found: usize },
    #[error("series is not positive at t = {t}")]
    NonPositive { t: f64 },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("G has a trivial null space")]
    TrivialNullspace,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Time derivative of samples on a (nearly) uniform grid: fourth-order
/// centered differences in the interior, second-order one-sided at the ends.
pub fn derivative<T, V>(times: &[T], values: &[V]) -> Vec<V>
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
{
    let n = values.len();
    assert_eq!(times.len(), n, "times and values must have equal length");
    if n < 3 {
        return match n {
            2 => {
                let d = (values[1] - values[0]) * (T::one() / (times[1] - times[0]));
                vec![d, d]
            }
            _ => values.iter().map(|v| *v * T::zero()).collect(),
        };
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = if i >= 2 && i + 2 < n {
            let h = (times[i + 2] - times[i - 2]) / T::lit(4.0);
            (values[i - 2] - values[i + 2] + (values[i + 1] - values[i - 1]) * T::lit(8.0)) * (T::one() / (T::lit(12.0) * h))
        } else if i == 0 {
            let h = (times[2] - times[0]) / T::lit(2.0);
            (values[1] * T::lit(4.0) - values[0] * T::lit(3.0) - values[2]) * (T::one() / (T::lit(2.0) * h))
        } else if i == n - 1 {
            let h = (times[n - 1] - times[n - 3]) / T::lit(2.0);
            (values[n - 1] * T::lit(3.0) - values[n - 2] * T::lit(4.0) + values[n - 3]) * (T::one() / (T::lit(2.0) * h))
        } else {
            (values[i + 1] - values[i - 1]) * (T::one() / (times[i + 1] - times[i - 1]))
        };
        out.push(d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_polynomial_is_exact() {
        let t: Vec<f64> = (0..40).map(|k| 1.0 + 0.1 * f64::from(k)).collect();
        let y: Vec<f64> = t.iter().map(|x| x * x * x - 2.0 * x).collect();
        let d = derivative(&t, &y);
        for (i, (x, di)) in t.iter().zip(&d).enumerate() {
            let exact = 3.0 * x * x - 2.0;
            let tol = if (2..38).contains(&i) { 1e-10 } else { 0.1 };
            assert!((di - exact).abs() < tol, "i={i}");
        }
    }
}
