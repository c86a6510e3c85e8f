use super::fit::{fit_growth_rate, RateFit};
use super::AnalysisError;
use crate::dynamics::TrajectoryRecord;
use crate::scalar::{dot, Real, C};

/// Chetaev function `W = xi zeta + (mu/3) xi^2 - xi^2/(2t)` along a trajectory
/// projected on a real eigenvector of a negative eigenvalue `-mu^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChetaevState<T> {
    pub mu: T,
    pub xi: Vec<T>,
    pub zeta: Vec<T>,
    pub w: Vec<T>,
    /// `xi > 0` and `zeta > mu xi / 3`
    pub in_omega: Vec<bool>,
    /// `W'/W` from centered differences of `ln W`; NaN where `W <= 0`.
    pub growth_ratio: Vec<T>,
}

impl<T: Real> ChetaevState<T> {
    pub fn all_in_omega(&self) -> bool {
        self.in_omega.iter().all(|b| *b)
    }

    /// Smallest growth ratio; NaN if any sample has `W <= 0`.
    pub fn min_growth_ratio(&self) -> T {
        self.growth_ratio.iter().fold(T::infinity(), |a, b| if b.is_nan() || a.is_nan() { T::nan() } else { a.min(*b) })
    }
}

/// `w` must be a real left eigenvector of `G` for the eigenvalue `-mu^2`.
pub fn chetaev_negative<T: Real>(traj: &TrajectoryRecord<T>, w: &[T], mu: T) -> Result<ChetaevState<T>, AnalysisError> {
    if w.len() != traj.dim() {
        return Err(AnalysisError::DimensionMismatch(format!("eigenvector has length {}, trajectory dimension {}", w.len(), traj.dim())));
    }
    if !(mu > T::zero()) {
        return Err(AnalysisError::NotApplicable("mu must be positive"));
    }
    let three = T::lit(3.0);
    let xi: Vec<T> = traj.q.iter().map(|q| dot(w, q)).collect();
    let zeta: Vec<T> = traj.v.iter().map(|v| dot(w, v)).collect();
    let wv: Vec<T> = traj
        .times
        .iter()
        .zip(xi.iter().zip(&zeta))
        .map(|(t, (x, z))| *x * *z + mu / three * *x * *x - *x * *x / (T::lit(2.0) * *t))
        .collect();
    let in_omega = xi.iter().zip(&zeta).map(|(x, z)| *x > T::zero() && *z > mu * *x / three).collect();
    let logw: Vec<T> = wv.iter().map(|v| if *v > T::zero() { v.ln() } else { T::nan() }).collect();
    let n = logw.len();
    let growth_ratio = (0..n)
        .map(|i| {
            if n < 2 {
                return T::nan();
            }
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            (logw[b] - logw[a]) / (traj.times[b] - traj.times[a])
        })
        .collect();
    Ok(ChetaevState { mu, xi, zeta, w: wv, in_omega, growth_ratio })
}

/// `rho = |w* q|` for a complex left eigenvector `w = u + i v`, and its
/// exponential rate over `window` with the `t^{-3/2}` prefactor removed.
pub fn chetaev_complex<T: Real>(traj: &TrajectoryRecord<T>, w: &[C<T>], window: (T, T)) -> Result<(Vec<T>, RateFit<T>), AnalysisError> {
    if w.len() != traj.dim() {
        return Err(AnalysisError::DimensionMismatch(format!("eigenvector has length {}, trajectory dimension {}", w.len(), traj.dim())));
    }
    let rho: Vec<T> = traj
        .q
        .iter()
        .map(|q| {
            let xi = w.iter().zip(q).fold(T::zero(), |a, (wi, qi)| a + wi.re * *qi);
            let eta = w.iter().zip(q).fold(T::zero(), |a, (wi, qi)| a + wi.im * *qi);
            xi.hypot(eta)
        })
        .collect();
    let fit = fit_growth_rate(&traj.times, &rho, window, false)?;
    Ok((rho, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate_nagd, IntegratorConfig};
    use crate::linalg::Matrix;
    use crate::spectral::{eigendecompose_default, predicted_rate};

    #[test]
    fn outside_omega_is_flagged() {
        let g = Matrix::from_diagonal(&[1.0, -0.5]);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.5, -0.3], &[0.0, -0.1], &IntegratorConfig::new(1.0, 2.0)).unwrap();
        let s = chetaev_negative(&tr, &[0.0, 1.0], 0.5f64.sqrt()).unwrap();
        assert!(s.in_omega.iter().all(|b| !b));
    }

    #[test]
    fn growth_inside_omega() {
        let mu = 0.5f64.sqrt();
        let t0 = 6.0 / mu + 1.0;
        let g = Matrix::from_diagonal(&[1.0, -0.5]);
        let cfg = IntegratorConfig::new(t0, t0 + 30.0);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], &cfg).unwrap();
        let s = chetaev_negative(&tr, &[0.0, 1.0], mu).unwrap();
        assert!(s.all_in_omega());
        assert!(s.min_growth_ratio() >= mu / 6.0 - 1e-3);
        let total = (s.w.last().unwrap() / s.w[0]).ln();
        assert!(total >= mu / 6.0 * (tr.last_time() - t0));
    }

    #[test]
    fn complex_rates() {
        for (g, beta) in [
            (Matrix::from_f64_rows(&[[6.0, 1.5], [-1.5, 6.0]]).unwrap(), predicted_rate(C::new(6.0, 1.5))),
            (Matrix::from_f64_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap(), 0.5f64.sqrt()),
        ] {
            let s = eigendecompose_default(&g).unwrap();
            let k = s.eigenvalues.iter().position(|l| l.im > 0.0).unwrap();
            let tr = simulate_nagd(&g, &[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0], &IntegratorConfig::new(1.0, 60.0)).unwrap();
            let (_, fit) = chetaev_complex(&tr, &s.left_vectors[k], (20.0, 60.0)).unwrap();
            assert!((fit.slope - beta).abs() / beta < 0.1, "{} vs {beta}", fit.slope);
        }
    }

    #[test]
    fn zero_projection_stays_small() {
        let g = Matrix::from_f64_rows(&[[6.0, 1.5], [-1.5, 6.0]]).unwrap();
        let s = eigendecompose_default(&g).unwrap();
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0], &IntegratorConfig::new(1.0, 30.0)).unwrap();
        let w = &s.left_vectors[0];
        let rho: Vec<f64> = tr.q.iter().map(|q| (w[0].conj() * q[0] + w[1].conj() * q[1]).norm()).collect();
        assert!(rho.iter().all(|r| *r <= 1e-6));
        assert!(chetaev_complex(&tr, w, (20.0, 30.0)).is_err());
    }
}
