//! Fixed-step classical RK4 for the NAGD system
//! `q' = v, v' = -(r/t) v - (G q + b)`, first-order play `x' = -(G x + b)`,
//! the scalar modal equation and smooth (nonlinear) NAGD.
//!
//! The damping coefficient is evaluated at the stage times `t`, `t + dt/2`
//! and `t + dt`. Sample times are `t0 + k dt`, never accumulated sums.

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{norm2, Real, C};

/// Upper limit on the number of steps in one run.
pub const MAX_STEPS: f64 = 1e8;
/// Position norm beyond which a run is truncated.
pub const OVERFLOW_NORM: f64 = 1e150;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vector field returned a non-finite value at t = {t}")]
    NonFiniteField { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub t0: T,
    pub t_end: T,
    pub dt: T,
    pub r: T,
    pub record_stride: usize,
}

impl<T: Real> IntegratorConfig<T> {
    /// `dt = 0.01`, `r = 3`, every step recorded.
    pub fn new(t0: T, t_end: T) -> Self {
        Self { t0, t_end, dt: T::lit(0.01), r: T::lit(3.0), record_stride: 1 }
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn with_r(mut self, r: T) -> Self {
        self.r = r;
        self
    }

    /// Number of RK4 steps, `round((t_end - t0)/dt)`.
    pub fn steps(&self) -> Result<usize, DynamicsError> {
        let bad = |m: &str| Err(DynamicsError::InvalidConfig(m.to_string()));
        if !(self.t0 > T::zero()) || !self.t0.is_finite() {
            return bad("t0 must be positive and finite");
        }
        if !(self.t_end > self.t0) || !self.t_end.is_finite() {
            return bad("t_end must exceed t0");
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return bad("dt must be positive");
        }
        if !self.r.is_finite() {
            return bad("r must be finite");
        }
        if self.record_stride == 0 {
            return bad("record_stride must be at least 1");
        }
        let n = ((self.t_end - self.t0) / self.dt).round();
        if n.as_f64() > MAX_STEPS {
            return bad("step count exceeds 1e8");
        }
        if self.r <= T::one() {
            log::warn!("damping r = {} <= 1; convergence guarantees need r > 1", self.r);
        }
        Ok(n.to_usize().unwrap_or(0).max(1))
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        self.steps().map(|_| ())
    }

    /// Number of recorded samples of a run that is not truncated.
    pub fn expected_samples(&self) -> Result<usize, DynamicsError> {
        Ok(self.steps()? / self.record_stride + 1)
    }

    pub fn time_at(&self, step: usize) -> T {
        self.t0 + T::from_usize_lossy(step) * self.dt
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta<T> {
    pub config: IntegratorConfig<T>,
    /// FNV-1a hash of the system data.
    pub fingerprint: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    pub times: Vec<T>,
    pub q: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
    pub saturated: bool,
    pub meta: TrajectoryMeta<T>,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.q.first().map_or(0, Vec::len)
    }

    pub fn norm_q(&self) -> Vec<T> {
        self.q.iter().map(|x| norm2(x)).collect()
    }

    pub fn component(&self, i: usize) -> Vec<T> {
        self.q.iter().map(|x| x[i]).collect()
    }

    pub fn last_time(&self) -> T {
        *self.times.last().expect("trajectory has at least one sample")
    }
}

/// Complex scalar trajectory of the modal equation.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalTrajectory<T> {
    pub times: Vec<T>,
    pub y: Vec<C<T>>,
    pub ydot: Vec<C<T>>,
    pub saturated: bool,
}

/// FNV-1a over the `f64` bit patterns of `values`.
pub fn fingerprint<T: Real>(values: impl IntoIterator<Item = T>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in values {
        for byte in x.as_f64().to_bits().to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

fn overflow_limit<T: Real>() -> T {
    T::lit(OVERFLOW_NORM).min(T::max_value().sqrt())
}

/// RK4 on `x' = f(t, x)`. `record` sees every `stride`-th state; a state whose
/// leading `guarded` components have non-finite or huge norm ends the run.
/// Returns whether the run was truncated.
fn rk4_run<T, F, R>(x0: &[T], guarded: usize, cfg: &IntegratorConfig<T>, mut f: F, mut record: R) -> Result<bool, DynamicsError>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]) -> bool,
    R: FnMut(T, &[T]),
{
    let steps = cfg.steps()?;
    let n = x0.len();
    let h = cfg.dt;
    let half = h * T::lit(0.5);
    let sixth = h / T::lit(6.0);
    let limit = overflow_limit::<T>();
    let mut x = x0.to_vec();
    let mut k1 = vec![T::zero(); n];
    let mut k2 = vec![T::zero(); n];
    let mut k3 = vec![T::zero(); n];
    let mut k4 = vec![T::zero(); n];
    let mut tmp = vec![T::zero(); n];
    let fail = |t: T| DynamicsError::NonFiniteField { t: t.as_f64() };
    record(cfg.t0, &x);
    for step in 0..steps {
        let t = cfg.time_at(step);
        if !f(t, &x, &mut k1) {
            return Err(fail(t));
        }
        for i in 0..n {
            tmp[i] = x[i] + half * k1[i];
        }
        if !f(t + half, &tmp, &mut k2) {
            return Err(fail(t + half));
        }
        for i in 0..n {
            tmp[i] = x[i] + half * k2[i];
        }
        if !f(t + half, &tmp, &mut k3) {
            return Err(fail(t + half));
        }
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        if !f(t + h, &tmp, &mut k4) {
            return Err(fail(t + h));
        }
        for i in 0..n {
            x[i] += sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]);
        }
        let size = norm2(&x[..guarded]);
        if !size.is_finite() || size > limit || x.iter().any(|v| !v.is_finite()) {
            return Ok(true);
        }
        if (step + 1) % cfg.record_stride == 0 {
            record(cfg.time_at(step + 1), &x);
        }
    }
    Ok(false)
}

fn check_dims<T: Real>(g: &Matrix<T>, b: &[T], q0: &[T], v0: Option<&[T]>) -> Result<(), DynamicsError> {
    let n = g.rows();
    if !g.is_square() || n == 0 {
        return Err(DynamicsError::DimensionMismatch(format!("G must be square, got {}x{}", g.rows(), g.cols())));
    }
    if b.len() != n || q0.len() != n || v0.is_some_and(|v| v.len() != n) {
        return Err(DynamicsError::DimensionMismatch(format!("G is {n}x{n} but vector lengths differ")));
    }
    if !g.is_finite() || b.iter().chain(q0).chain(v0.unwrap_or(&[])).any(|x| !x.is_finite()) {
        return Err(DynamicsError::DimensionMismatch("system data must be finite".into()));
    }
    Ok(())
}

fn second_order_run<T, F>(
    q0: &[T],
    v0: &[T],
    cfg: &IntegratorConfig<T>,
    fingerprint: u64,
    mut field: F,
) -> Result<TrajectoryRecord<T>, DynamicsError>
where
    T: Real,
    F: FnMut(&[T], &mut [T]) -> bool,
{
    let n = q0.len();
    if v0.len() != n {
        return Err(DynamicsError::DimensionMismatch("q0 and v0 lengths differ".into()));
    }
    let mut x0 = q0.to_vec();
    x0.extend_from_slice(v0);
    let r = cfg.r;
    let mut fx = vec![T::zero(); n];
    let cap = cfg.expected_samples()?;
    let (mut times, mut qs, mut vs) = (Vec::with_capacity(cap), Vec::with_capacity(cap), Vec::with_capacity(cap));
    let saturated = rk4_run(
        &x0,
        n,
        cfg,
        |t, x, dx| {
            let (q, v) = x.split_at(n);
            if !field(q, &mut fx) || fx.iter().any(|y| !y.is_finite()) {
                return false;
            }
            let damp = r / t;
            for i in 0..n {
                dx[i] = v[i];
                dx[n + i] = -damp * v[i] - fx[i];
            }
            true
        },
        |t, x| {
            times.push(t);
            qs.push(x[..n].to_vec());
            vs.push(x[n..].to_vec());
        },
    )?;
    Ok(TrajectoryRecord { times, q: qs, v: vs, saturated, meta: TrajectoryMeta { config: *cfg, fingerprint } })
}

fn system_fingerprint<T: Real>(g: &Matrix<T>, b: &[T]) -> u64 {
    fingerprint(g.as_slice().iter().chain(b).copied())
}

/// NAGD on `F(q) = G q + b`.
pub fn simulate_nagd<T: Real>(
    g: &Matrix<T>,
    b: &[T],
    q0: &[T],
    v0: &[T],
    cfg: &IntegratorConfig<T>,
) -> Result<TrajectoryRecord<T>, DynamicsError> {
    check_dims(g, b, q0, Some(v0))?;
    second_order_run(q0, v0, cfg, system_fingerprint(g, b), |q, out| {
        g.matvec_into(q, out);
        for (o, bi) in out.iter_mut().zip(b) {
            *o += *bi;
        }
        true
    })
}

/// NAGD on an arbitrary pseudo-gradient `F`, written into its second argument.
pub fn simulate_smooth_nagd<T, F>(f: F, x0: &[T], v0: &[T], cfg: &IntegratorConfig<T>) -> Result<TrajectoryRecord<T>, DynamicsError>
where
    T: Real,
    F: Fn(&[T], &mut [T]),
{
    second_order_run(x0, v0, cfg, 0, |x, out| {
        f(x, out);
        true
    })
}

/// Gradient play `x' = -(G x + b)`; the velocity channel records `x'`.
pub fn simulate_first_order<T: Real>(
    g: &Matrix<T>,
    b: &[T],
    x0: &[T],
    cfg: &IntegratorConfig<T>,
) -> Result<TrajectoryRecord<T>, DynamicsError> {
    check_dims(g, b, x0, None)?;
    let n = x0.len();
    let field = |x: &[T], dx: &mut [T]| {
        g.matvec_into(x, dx);
        for i in 0..n {
            dx[i] = -(dx[i] + b[i]);
        }
    };
    let cap = cfg.expected_samples()?;
    let (mut times, mut qs, mut vs) = (Vec::with_capacity(cap), Vec::with_capacity(cap), Vec::with_capacity(cap));
    let mut rate = vec![T::zero(); n];
    let saturated = rk4_run(
        x0,
        n,
        cfg,
        |_, x, dx| {
            field(x, dx);
            true
        },
        |t, x| {
            field(x, &mut rate);
            times.push(t);
            qs.push(x.to_vec());
            vs.push(rate.clone());
        },
    )?;
    Ok(TrajectoryRecord { times, q: qs, v: vs, saturated, meta: TrajectoryMeta { config: *cfg, fingerprint: system_fingerprint(g, b) } })
}

/// RK4 on `y'' + (r/t) y' + lambda y = 0` for complex `y`.
pub fn simulate_modal<T: Real>(
    lambda: C<T>,
    y0: C<T>,
    ydot0: C<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<ModalTrajectory<T>, DynamicsError> {
    let finite = |z: C<T>| z.re.is_finite() && z.im.is_finite();
    if !finite(lambda) || !finite(y0) || !finite(ydot0) {
        return Err(DynamicsError::DimensionMismatch("modal data must be finite".into()));
    }
    let r = cfg.r;
    let cap = cfg.expected_samples()?;
    let (mut times, mut ys, mut yds) = (Vec::with_capacity(cap), Vec::with_capacity(cap), Vec::with_capacity(cap));
    let saturated = rk4_run(
        &[y0.re, y0.im, ydot0.re, ydot0.im],
        2,
        cfg,
        |t, x, dx| {
            let damp = r / t;
            dx[0] = x[2];
            dx[1] = x[3];
            dx[2] = -damp * x[2] - (lambda.re * x[0] - lambda.im * x[1]);
            dx[3] = -damp * x[3] - (lambda.re * x[1] + lambda.im * x[0]);
            true
        },
        |t, x| {
            times.push(t);
            ys.push(C::new(x[0], x[1]));
            yds.push(C::new(x[2], x[3]));
        },
    )?;
    Ok(ModalTrajectory { times, y: ys, ydot: yds, saturated })
}

/// Central-difference Jacobian; column `j` is `(F(x + h e_j) - F(x - h e_j)) / 2h`.
pub fn finite_difference_jacobian<T, F>(f: F, x_star: &[T], h: T) -> Result<Matrix<T>, DynamicsError>
where
    T: Real,
    F: Fn(&[T], &mut [T]),
{
    if !(h > T::zero()) {
        return Err(DynamicsError::InvalidConfig("step h must be positive".into()));
    }
    let n = x_star.len();
    let mut jac = Matrix::zeros(n, n);
    let mut xp = x_star.to_vec();
    let mut fp = vec![T::zero(); n];
    let mut fm = vec![T::zero(); n];
    for j in 0..n {
        xp[j] = x_star[j] + h;
        f(&xp, &mut fp);
        xp[j] = x_star[j] - h;
        f(&xp, &mut fm);
        xp[j] = x_star[j];
        for i in 0..n {
            let d = (fp[i] - fm[i]) / (T::lit(2.0) * h);
            if !d.is_finite() {
                return Err(DynamicsError::NonFiniteField { t: f64::NAN });
            }
            jac[(i, j)] = d;
        }
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{eval_modal, make_modal_solution};
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_f64_rows(rows).unwrap()
    }

    #[test]
    fn config_arithmetic() {
        let cfg = IntegratorConfig::new(1.0, 100.0);
        assert_eq!(cfg.steps().unwrap(), 9900);
        assert_eq!(cfg.expected_samples().unwrap(), 9901);
        assert_eq!(cfg.with_stride(10).expected_samples().unwrap(), 991);
        assert!(IntegratorConfig::new(0.0, 1.0).validate().is_err());
        assert!(IntegratorConfig::new(2.0, 1.0).validate().is_err());
        assert!(IntegratorConfig::new(1.0, 2.0).with_stride(0).validate().is_err());
        assert!(IntegratorConfig::new(1.0, 1e7).with_dt(1e-2).validate().is_err());
    }

    #[test]
    fn stationary_without_field() {
        let g = Matrix::zeros(2, 2);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.3, -0.7], &[0.0, 0.0], &IntegratorConfig::new(1.0, 20.0)).unwrap();
        assert!(tr.q.iter().all(|q| q == &vec![0.3, -0.7]));
        assert_eq!(tr.times[0], 1.0);
        assert_eq!(tr.len(), 1901);
    }

    #[test]
    fn free_particle_velocity_decay() {
        let g = Matrix::zeros(2, 2);
        for &r in &[2.0f64, 3.0, 4.0] {
            let cfg = IntegratorConfig::new(1.0, 50.0).with_r(r);
            let tr = simulate_nagd(&g, &[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0], &cfg).unwrap();
            for (t, v) in tr.times.iter().zip(&tr.v) {
                let exact = t.powf(-r);
                assert!((v[0] - exact).abs() <= 1e-7 * exact, "r={r} t={t}: {}", (v[0] - exact) / exact);
            }
            if r == 3.0 {
                let q_end = tr.q.last().unwrap()[0];
                assert!((q_end - 0.5 * (1.0 - 50f64.powi(-2))).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn first_order_examples() {
        let cfg = IntegratorConfig::new(1.0, 5.0);
        let g = m(&[&[6.0, 1.5], &[-1.5, 6.0]]);
        let tr = simulate_first_order(&g, &[0.0, 0.0], &[1.0, 0.0], &cfg.with_dt(1e-3)).unwrap();
        for (t, q) in tr.times.iter().zip(&tr.q) {
            let exact = (-6.0 * (t - 1.0)).exp();
            assert!((norm2(q) - exact).abs() <= 1e-6 * exact);
        }
        let skew = m(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let tr = simulate_first_order(&skew, &[0.0, 0.0], &[0.6, 0.8], &IntegratorConfig::new(1.0, 50.0)).unwrap();
        assert!(tr.norm_q().iter().all(|n| (n - 1.0).abs() < 1e-6));
        let tr = simulate_first_order(&Matrix::identity(2), &[0.0, 0.0], &[1.0, 1.0], &cfg).unwrap();
        for (t, q) in tr.times.iter().zip(&tr.q) {
            assert!((q[0] - (-(t - 1.0)).exp()).abs() < 1e-9);
        }
        // velocity channel is x'
        assert!((tr.v[0][0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn modal_matches_closed_form_and_order_four() {
        let lam = C::new(0.88f64, 0.0);
        let sol = make_modal_solution(lam, 1.0, C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap();
        let tr = simulate_modal(lam, C::new(1.0, 0.0), C::new(0.0, 0.0), &IntegratorConfig::new(1.0, 50.0)).unwrap();
        for (t, y) in tr.times.iter().zip(&tr.y) {
            let e = eval_modal(&sol, *t).unwrap();
            let env = (e.y.norm_sqr() + e.ydot.norm_sqr() / 0.88).sqrt();
            assert!((e.y - y).norm() <= 1e-6 * env, "t={t}");
        }

        let lam = C::new(0.5, 0.0);
        let sol = make_modal_solution(lam, 1.0, C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap();
        let exact = eval_modal(&sol, 10.0).unwrap().y;
        let err = |dt: f64| {
            let tr = simulate_modal(lam, C::new(1.0, 0.0), C::new(0.0, 0.0), &IntegratorConfig::new(1.0, 10.0).with_dt(dt)).unwrap();
            (tr.y.last().unwrap() - exact).norm()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn restart_reproduces_tail() {
        let g = m(&[&[0.4, 0.2], &[0.2, 0.8]]);
        let full = simulate_nagd(&g, &[0.0, 0.0], &[0.5, 0.3], &[0.0, 0.0], &IntegratorConfig::new(1.0, 10.0)).unwrap();
        let k = 100;
        assert!((full.times[k] - 2.0).abs() < 1e-12);
        let tail = simulate_nagd(&g, &[0.0, 0.0], &full.q[k], &full.v[k], &IntegratorConfig::new(2.0, 10.0)).unwrap();
        assert_eq!(tail.len(), full.len() - k);
        for (j, q) in tail.q.iter().enumerate() {
            let d = (q[0] - full.q[k + j][0]).abs() + (q[1] - full.q[k + j][1]).abs();
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn overflow_truncates() {
        let g = m(&[&[-4.0, 0.0], &[0.0, 1.0]]);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[1.0, 1.0], &[0.0, 0.0], &IntegratorConfig::new(1.0, 400.0)).unwrap();
        assert!(tr.saturated);
        assert!(tr.len() < 39901);
        assert!(tr.norm_q().iter().all(|n| n.is_finite() && *n <= 1e150));
    }

    #[test]
    fn smooth_linear_matches_affine() {
        let g = m(&[&[6.0, 1.5], &[-1.5, 6.0]]);
        let cfg = IntegratorConfig::new(1.0, 20.0);
        let a = simulate_nagd(&g, &[0.0, 0.0], &[0.1, 0.2], &[0.0, 0.0], &cfg).unwrap();
        let b = simulate_smooth_nagd(|x: &[f64], out: &mut [f64]| g.matvec_into(x, out), &[0.1, 0.2], &[0.0, 0.0], &cfg).unwrap();
        for (p, q) in a.q.iter().zip(&b.q) {
            assert!((p[0] - q[0]).abs() + (p[1] - q[1]).abs() <= 1e-12 * (1.0 + norm2(p)));
        }
    }

    #[test]
    fn smooth_non_finite_field_errors() {
        let r = simulate_smooth_nagd(|_: &[f64], out: &mut [f64]| out.fill(f64::NAN), &[0.1], &[0.0], &IntegratorConfig::new(1.0, 2.0));
        assert!(matches!(r, Err(DynamicsError::NonFiniteField { .. })));
    }

    #[test]
    fn convex_quartic_decreases() {
        // F = grad of sum(x_i^2/2 + x_i^4/4)
        let f = |x: &[f64], out: &mut [f64]| {
            for i in 0..x.len() {
                out[i] = x[i] + x[i].powi(3);
            }
        };
        let tr = simulate_smooth_nagd(f, &[0.05, -0.03], &[0.0, 0.0], &IntegratorConfig::new(1.0, 100.0)).unwrap();
        let n = tr.norm_q();
        assert!(n.last().unwrap() < &(0.01 * n[0]));
        // energy t^2 (f(x)) + |t v + 2 x|^2 / 2 with f convex is nonincreasing
        let energy: Vec<f64> = tr
            .times
            .iter()
            .zip(tr.q.iter().zip(&tr.v))
            .map(|(t, (q, v))| {
                let pot: f64 = q.iter().map(|x| x * x / 2.0 + x.powi(4) / 4.0).sum();
                let w: f64 = q.iter().zip(v).map(|(x, y)| (t * y + 2.0 * x).powi(2)).sum();
                t * t * pot + 0.5 * w
            })
            .collect();
        assert!(energy.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)));
    }

    #[test]
    fn jacobian_examples() {
        let g = m(&[&[6.0, 1.5], &[-1.5, 6.0]]);
        let lin = |x: &[f64], out: &mut [f64]| {
            g.matvec_into(x, out);
            out[0] += 0.3;
            out[1] -= 0.1;
        };
        let j = finite_difference_jacobian(lin, &[0.2, 0.4], 1e-3).unwrap();
        assert!(j.sub(&g).max_abs() < 1e-12);
        let cubic = |x: &[f64], out: &mut [f64]| {
            g.matvec_into(x, out);
            for i in 0..2 {
                out[i] += 0.1 * x[i].powi(3);
            }
        };
        let j = finite_difference_jacobian(cubic, &[0.0, 0.0], 1e-5).unwrap();
        assert!(j.sub(&g).max_abs() < 1e-10);
        // quartic sum x_i^4/4 + x^T A x/2 with minimizer 0 has Hessian A
        let a = m(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let grad = |x: &[f64], out: &mut [f64]| {
            a.matvec_into(x, out);
            for i in 0..2 {
                out[i] += x[i].powi(3);
            }
        };
        let j = finite_difference_jacobian(grad, &[0.0, 0.0], 1e-4).unwrap();
        assert!(j.sub(&a).max_abs() < 1e-6);
    }

    #[test]
    fn fingerprint_is_stable() {
        let a = fingerprint([1.0f64, 2.0]);
        assert_eq!(a, fingerprint([1.0f64, 2.0]));
        assert_ne!(a, fingerprint([2.0f64, 1.0]));
        assert_eq!(fingerprint(std::iter::empty::<f64>()), 0xcbf2_9ce4_8422_2325);
    }

    #[test]
    fn single_precision_runs() {
        let g = Matrix::<f32>::identity(2);
        let tr = simulate_nagd(&g, &[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0], &IntegratorConfig::new(1.0f32, 20.0)).unwrap();
        assert!(!tr.saturated);
        assert!(tr.norm_q().last().unwrap() < &0.1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn linear_in_initial_data(a in -1.0f64..1.0, b in -1.0f64..1.0, s in -3.0f64..3.0) {
            let g = m(&[&[0.4, 0.2], &[0.2, 0.8]]);
            let cfg = IntegratorConfig::new(1.0, 5.0);
            let x = simulate_nagd(&g, &[0.0, 0.0], &[a, b], &[0.0, 0.0], &cfg).unwrap();
            let y = simulate_nagd(&g, &[0.0, 0.0], &[s * a, s * b], &[0.0, 0.0], &cfg).unwrap();
            for (p, q) in x.q.iter().zip(&y.q) {
                prop_assert!((s * p[0] - q[0]).abs() <= 1e-12 * (1.0 + q[0].abs()));
            }
        }
    }
}
