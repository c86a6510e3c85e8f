use super::{derivative, AnalysisError};
use crate::dynamics::TrajectoryRecord;
use crate::linalg::Matrix;
use crate::scalar::{dot, Real, C};

/// `V = (t^2/2) q^T G q + |t v + 2 q|^2 / 2` along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovSeries<T> {
    pub v: Vec<T>,
    /// `-t q^T G q`
    pub vdot_analytic: Vec<T>,
    pub vdot_numeric: Vec<T>,
    /// False unless `G` is symmetric; `V` is then not a Lyapunov function.
    pub applicable: bool,
    /// Indefinite term `-(t^2/2) v^T (G - G^T) q` that the dissipation
    /// identity picks up for nonsymmetric `G`.
    pub skew_residual: Vec<T>,
}

pub fn lyapunov_series<T: Real>(traj: &TrajectoryRecord<T>, g: &Matrix<T>) -> Result<LyapunovSeries<T>, AnalysisError> {
    let n = traj.dim();
    if g.rows() != n || !g.is_square() {
        return Err(AnalysisError::DimensionMismatch("G does not match the trajectory".into()));
    }
    let skew = g.sub(&g.transpose());
    let applicable = skew.max_abs() <= T::lit(1e-12) * T::one().max(g.max_abs());
    let half = T::lit(0.5);
    let mut v = Vec::with_capacity(traj.len());
    let mut vdot = Vec::with_capacity(traj.len());
    let mut resid = Vec::with_capacity(traj.len());
    let mut w = vec![T::zero(); n];
    for ((t, q), p) in traj.times.iter().zip(&traj.q).zip(&traj.v) {
        let t = *t;
        let qgq = dot(q, &g.matvec(q));
        for i in 0..n {
            w[i] = t * p[i] + T::lit(2.0) * q[i];
        }
        v.push(half * t * t * qgq + half * dot(&w, &w));
        vdot.push(-t * qgq);
        resid.push(-half * t * t * dot(p, &skew.matvec(q)));
    }
    let vdot_numeric = derivative(&traj.times, &v);
    Ok(LyapunovSeries { v, vdot_analytic: vdot, vdot_numeric, applicable, skew_residual: resid })
}

/// Largest one-step relative increase `max (V[k+1] - V[k]) / V[k]`.
pub fn max_relative_increase<T: Real>(series: &[T]) -> T {
    series
        .windows(2)
        .map(|w| {
            let scale = w[0].abs().max(T::min_positive_value());
            (w[1] - w[0]) / scale
        })
        .fold(T::neg_infinity(), |a, b| a.max(b))
}

/// `rms(a - b) / rms(b)` over samples `skip..len-skip`.
pub fn relative_rms<T: Real>(a: &[T], b: &[T], skip: usize) -> T {
    let n = a.len().min(b.len());
    if n <= 2 * skip {
        return T::zero();
    }
    let (mut num, mut den) = (T::zero(), T::zero());
    for i in skip..n - skip {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    if den == T::zero() {
        return num.sqrt();
    }
    (num / den).sqrt()
}

/// `Q = y conj(y') - y' conj(y)`.
pub fn skew_product<T: Real>(y: C<T>, ydot: C<T>) -> C<T> {
    y * ydot.conj() - ydot * y.conj()
}

/// RMS over interior samples of
/// `|d/dt (t^3 Q) - 2 i Im(lambda) t^3 |y|^2| / max(1, |2 Im(lambda) t^3 |y|^2|)`.
pub fn energy_identity_residual<T: Real>(times: &[T], y: &[C<T>], ydot: &[C<T>], lambda: C<T>) -> Result<T, AnalysisError> {
    if lambda.im == T::zero() {
        return Err(AnalysisError::NotApplicable("energy identity needs a non-real eigenvalue"));
    }
    if times.len() != y.len() || y.len() != ydot.len() {
        return Err(AnalysisError::DimensionMismatch("series lengths differ".into()));
    }
    if times.len() < 5 {
        return Err(AnalysisError::InsufficientPoints { needed: 5, found: times.len() });
    }
    let p: Vec<C<T>> = times.iter().zip(y.iter().zip(ydot)).map(|(t, (a, b))| skew_product(*a, *b) * (*t * *t * *t)).collect();
    let dp = derivative(times, &p);
    let two = T::lit(2.0);
    let mut acc = T::zero();
    let mut count = 0usize;
    for i in 2..times.len() - 2 {
        let t3 = times[i] * times[i] * times[i];
        let target_im = two * lambda.im * t3 * y[i].norm_sqr();
        let target = C::new(T::zero(), target_im);
        let err = (dp[i] - target).norm() / T::one().max(target_im.abs());
        acc += err * err;
        count += 1;
    }
    Ok((acc / T::from_usize_lossy(count)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate_modal, simulate_nagd, IntegratorConfig};
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_f64_rows(rows).unwrap()
    }

    #[test]
    fn zero_state_gives_zero_v() {
        let g = m(&[&[0.4, 0.2], &[0.2, 0.8]]);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0], &IntegratorConfig::new(1.0, 5.0)).unwrap();
        let l = lyapunov_series(&tr, &g).unwrap();
        assert!(l.v.iter().all(|v| *v == 0.0));
        assert!(l.applicable);
    }

    #[test]
    fn dissipation_on_symmetric_run() {
        let g = m(&[&[0.4, 0.2], &[0.2, 0.8]]);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.5, 0.3], &[0.0, 0.0], &IntegratorConfig::new(1.0, 100.0)).unwrap();
        let l = lyapunov_series(&tr, &g).unwrap();
        assert!(max_relative_increase(&l.v) <= 1e-8);
        assert!(relative_rms(&l.vdot_numeric, &l.vdot_analytic, 2) <= 1e-4);
        assert!(l.skew_residual.iter().all(|r| *r == 0.0));
    }

    #[test]
    fn skew_matrix_is_flagged() {
        let g = m(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.5, 0.3], &[0.0, 0.0], &IntegratorConfig::new(1.0, 20.0)).unwrap();
        let l = lyapunov_series(&tr, &g).unwrap();
        assert!(!l.applicable);
        assert!(l.skew_residual.iter().any(|r| r.abs() > 1e-3));
        // with the indefinite term the derivative identity still holds
        let total: Vec<f64> = l.vdot_analytic.iter().zip(&l.skew_residual).map(|(a, b)| a + b).collect();
        assert!(relative_rms(&l.vdot_numeric, &total, 2) <= 1e-4);
    }

    #[test]
    fn energy_identity_examples() {
        let q = skew_product(C::new(0.7, 0.0), C::new(-0.2, 0.0));
        assert_eq!(q, C::new(0.0, 0.0));
        let cfg = IntegratorConfig::new(1.0, 50.0);
        let lam = C::new(6.0, 1.5);
        let tr = simulate_modal(lam, C::new(1.0, 0.0), C::new(0.0, 0.0), &cfg).unwrap();
        assert!(energy_identity_residual(&tr.times, &tr.y, &tr.ydot, lam).unwrap() <= 1e-5);
        let zero = vec![C::new(0.0, 0.0); tr.times.len()];
        assert_eq!(energy_identity_residual(&tr.times, &zero, &zero, C::new(0.0, 1.0)).unwrap(), 0.0);
        assert!(matches!(energy_identity_residual(&tr.times, &tr.y, &tr.ydot, C::new(2.0, 0.0)), Err(AnalysisError::NotApplicable(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn dissipation_for_random_psd(n in 1usize..=5, seed in proptest::collection::vec(-1.0f64..1.0, 25), q0 in proptest::collection::vec(-1.0f64..1.0, 5), v0 in proptest::collection::vec(-1.0f64..1.0, 5)) {
            let b = Matrix::from_row_major(n, n, seed[..n * n].to_vec()).unwrap();
            let g = b.transpose().matmul(&b);
            let cfg = IntegratorConfig::new(1.0, 30.0);
            let tr = simulate_nagd(&g, &vec![0.0; n], &q0[..n], &v0[..n], &cfg).unwrap();
            let l = lyapunov_series(&tr, &g).unwrap();
            for w in l.v.windows(2) {
                prop_assert!(w[1] - w[0] <= 1e-8 * w[0].abs().max(1e-300));
            }
            // trapezoid integral of t q^T G q
            let mut integral = 0.0;
            for k in 1..tr.len() {
                let h = tr.times[k] - tr.times[k - 1];
                integral += 0.5 * h * (-l.vdot_analytic[k] - l.vdot_analytic[k - 1]);
            }
            prop_assert!(integral <= l.v[0] + 1e-6);
        }
    }
}
