//! Closed-form solutions of `y'' + (3/t) y' + lambda y = 0`.

use super::bessel::{hankel_scaled, i_scaled, jy_all, k_scaled, EXPONENT_CAP, SERIES_RADIUS};
use super::SpecialError;
use crate::scalar::{c, re, Real, C};
use crate::spectral::{classify_eigenvalue, EigenTag};

/// Which basis the solution is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModalBranch {
    /// `{1, t^-2}`
    Zero,
    /// `{J1(s t)/t, Y1(s t)/t}` with `s = sqrt(lambda) > 0`
    PositiveReal,
    /// `{I1(mu t)/t, K1(mu t)/t}` with `mu = sqrt(-lambda)`
    NegativeReal,
    /// `{J1(s t)/t, Y1(s t)/t}` with complex principal `s`
    Complex,
}

impl ModalBranch {
    pub fn name(self) -> &'static str {
        match self {
            ModalBranch::Zero => "ZeroBranch",
            ModalBranch::PositiveReal => "PositiveRealBranch",
            ModalBranch::NegativeReal => "NegativeRealBranch",
            ModalBranch::Complex => "ComplexBranch",
        }
    }
}

/// Scalar modal solution `y(t) = c1 phi1(t) + c2 phi2(t)` in the branch basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalSolution<T> {
    pub lambda: C<T>,
    pub branch: ModalBranch,
    pub c1: C<T>,
    pub c2: C<T>,
    pub t0: T,
    pub y0: C<T>,
    pub ydot0: C<T>,
    /// Principal `sqrt(lambda)` for the Bessel branches, `mu` for
    /// `NegativeReal`, zero for `Zero`.
    pub root: C<T>,
    /// Coefficients of `{H1(s t)/t, H2(s t)/t}` for the Bessel branches.
    /// They carry the solution when the two Hankel components differ by
    /// more than the working precision, where `(c1, c2)` cannot.
    pub hankel: Option<[C<T>; 2]>,
}

/// Value and derivative at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalEval<T> {
    pub y: C<T>,
    pub ydot: C<T>,
    /// Natural log of the true `|y|`, finite even when saturated.
    pub log_abs_y: T,
    pub saturated: bool,
}

/// Classification tolerance used to choose the branch.
pub fn modal_tolerance<T: Real>(lambda: C<T>) -> T {
    T::lit(1e-9) * T::one().max(lambda.norm())
}

/// A basis function at time `t` as `e^scale * (phi, dphi)`.
#[derive(Debug, Clone, Copy)]
struct Scaled<T> {
    phi: C<T>,
    dphi: C<T>,
    scale: T,
}

impl<T: Real> Scaled<T> {
    fn plain(phi: C<T>, dphi: C<T>) -> Self {
        Self { phi, dphi, scale: T::zero() }
    }
}

/// `phi(t) = u(s t)/t` and `phi'(t) = s u'(s t)/t - u(s t)/t^2`.
fn chain<T: Real>(u: C<T>, du: C<T>, s: C<T>, t: T, scale: T) -> Scaled<T> {
    Scaled { phi: u / t, dphi: s * du / t - u / (t * t), scale }
}

/// Representation in use at time `t`: which basis functions and how to map
/// `(c1, c2)` onto their coefficients.
enum Basis<T> {
    Direct([Scaled<T>; 2]),
    /// Hankel pair `(H1, H2)`; coefficients `((c1 - i c2)/2, (c1 + i c2)/2)`.
    Hankel([Scaled<T>; 2]),
}

fn basis_at<T: Real>(branch: ModalBranch, root: C<T>, t: T) -> Basis<T> {
    match branch {
        ModalBranch::Zero => {
            let t2 = t * t;
            Basis::Direct([Scaled::plain(re(T::one()), re(T::zero())), Scaled::plain(re(T::one() / t2), re(-T::lit(2.0) / (t2 * t)))])
        }
        ModalBranch::PositiveReal | ModalBranch::Complex => {
            let z = root * t;
            if z.norm() <= T::lit(SERIES_RADIUS) {
                let v = jy_all(z);
                let dj = v.j0 - v.j1 / z;
                let dy = v.y0 - v.y1 / z;
                Basis::Direct([chain(v.j1, dj, root, t, T::zero()), chain(v.y1, dy, root, t, T::zero())])
            } else {
                let (h1_0, h2_0) = hankel_scaled(0, z);
                let (h1_1, h2_1) = hankel_scaled(1, z);
                let p1 = C::from_polar(T::one(), z.re);
                let p2 = C::from_polar(T::one(), -z.re);
                let b1 = chain(p1 * h1_1, p1 * (h1_0 - h1_1 / z), root, t, -z.im);
                let b2 = chain(p2 * h2_1, p2 * (h2_0 - h2_1 / z), root, t, z.im);
                Basis::Hankel([b1, b2])
            }
        }
        ModalBranch::NegativeReal => {
            let mu = root.re;
            let x = mu * t;
            let i0 = i_scaled(0, x);
            let i1 = i_scaled(1, x);
            let (k0, k1) = k_scaled(x);
            let b1 = chain(re(i1), re(i0 - i1 / x), root, t, x);
            let b2 = chain(re(k1), re(-k0 - k1 / x), root, t, -x);
            Basis::Direct([b1, b2])
        }
    }
}

fn ln_abs<T: Real>(z: C<T>) -> T {
    let n = z.norm();
    if n > T::zero() {
        n.ln()
    } else {
        T::neg_infinity()
    }
}

/// Build the solution matching `(y0, ydot0)` at `t0`.
pub fn make_modal_solution<T: Real>(lambda: C<T>, t0: T, y0: C<T>, ydot0: C<T>) -> Result<ModalSolution<T>, SpecialError> {
    if !(t0 > T::zero()) || !t0.is_finite() {
        return Err(SpecialError::DomainError(format!("t0 = {t0} must be positive")));
    }
    let finite = |z: C<T>| z.re.is_finite() && z.im.is_finite();
    if !finite(lambda) || !finite(y0) || !finite(ydot0) {
        return Err(SpecialError::DomainError("non-finite modal data".into()));
    }
    let tag = classify_eigenvalue(lambda, modal_tolerance(lambda)).tag;
    let (branch, root) = match tag {
        EigenTag::Zero => (ModalBranch::Zero, re(T::zero())),
        EigenTag::PositiveReal => (ModalBranch::PositiveReal, re(lambda.re.sqrt())),
        EigenTag::NegativeReal => (ModalBranch::NegativeReal, re((-lambda.re).sqrt())),
        EigenTag::StrictlyComplex => (ModalBranch::Complex, lambda.sqrt()),
    };
    let (hankel, [b1, b2]) = match basis_at(branch, root, t0) {
        Basis::Direct(b) => (false, b),
        Basis::Hankel(b) => (true, b),
    };
    let det = b1.phi * b2.dphi - b2.phi * b1.dphi;
    let size = (b1.phi * b2.dphi).norm() + (b2.phi * b1.dphi).norm();
    if !(det.norm() > T::lit(64.0) * T::epsilon() * size) {
        return Err(SpecialError::SingularBasis);
    }
    let a1 = (y0 * b2.dphi - ydot0 * b2.phi) / det;
    let a2 = (b1.phi * ydot0 - b1.dphi * y0) / det;
    // undo the per-function scaling
    if b1.scale > T::lit(EXPONENT_CAP)
        || b2.scale > T::lit(EXPONENT_CAP)
        || -b1.scale > T::lit(EXPONENT_CAP)
        || -b2.scale > T::lit(EXPONENT_CAP)
    {
        return Err(SpecialError::OverflowSaturation);
    }
    let a1 = a1 * (-b1.scale).exp();
    let a2 = a2 * (-b2.scale).exp();
    let i = c(T::zero(), T::one());
    let two = T::lit(2.0);
    let (c1, c2, hankel_coef) = match (branch, hankel) {
        (_, true) => (a1 + a2, (a1 - a2) * i, Some([a1, a2])),
        (ModalBranch::PositiveReal | ModalBranch::Complex, false) => (a1, a2, Some([(a1 - i * a2) / two, (a1 + i * a2) / two])),
        _ => (a1, a2, None),
    };
    Ok(ModalSolution { lambda, branch, c1, c2, t0, y0, ydot0, root, hankel: hankel_coef })
}

/// Evaluate `(y, y')` at `t > 0`; growth past the exponent cap saturates.
pub fn eval_modal<T: Real>(sol: &ModalSolution<T>, t: T) -> Result<ModalEval<T>, SpecialError> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(SpecialError::DomainError(format!("t = {t} must be positive")));
    }
    let (coef, basis) = match basis_at(sol.branch, sol.root, t) {
        Basis::Direct(b) => ([sol.c1, sol.c2], b),
        Basis::Hankel(b) => {
            let i = c(T::zero(), T::one());
            let two = T::lit(2.0);
            (sol.hankel.unwrap_or([(sol.c1 - i * sol.c2) / two, (sol.c1 + i * sol.c2) / two]), b)
        }
    };
    // common exponent across both terms and both outputs
    let mut m = T::neg_infinity();
    for (k, b) in basis.iter().enumerate() {
        let lc = ln_abs(coef[k]);
        m = m.max(b.scale + lc + ln_abs(b.phi).max(ln_abs(b.dphi)));
    }
    if m == T::neg_infinity() {
        return Ok(ModalEval { y: re(T::zero()), ydot: re(T::zero()), log_abs_y: T::neg_infinity(), saturated: false });
    }
    let mut y = re(T::zero());
    let mut ydot = re(T::zero());
    for (k, b) in basis.iter().enumerate() {
        if coef[k].norm() == T::zero() {
            continue;
        }
        let w = coef[k] * (b.scale - m).exp();
        y = y + w * b.phi;
        ydot = ydot + w * b.dphi;
    }
    let log_abs_y = m + ln_abs(y);
    let cap = T::lit(EXPONENT_CAP);
    if m > cap {
        Ok(ModalEval { y: y * cap.exp(), ydot: ydot * cap.exp(), log_abs_y, saturated: true })
    } else {
        let f = m.exp();
        Ok(ModalEval { y: y * f, ydot: ydot * f, log_abs_y, saturated: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Cx = C<f64>;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    /// Independent RK4 on the complex scalar equation.
    fn rk4_oracle(lambda: Cx, t0: f64, y0: Cx, v0: Cx, t_end: f64, dt: f64) -> (Cx, Cx) {
        let f = |t: f64, y: Cx, v: Cx| (v, -v * (3.0 / t) - lambda * y);
        let steps = ((t_end - t0) / dt).round() as usize;
        let (mut y, mut v) = (y0, v0);
        for k in 0..steps {
            let t = t0 + k as f64 * dt;
            let (a1, b1) = f(t, y, v);
            let (a2, b2) = f(t + dt / 2.0, y + a1 * (dt / 2.0), v + b1 * (dt / 2.0));
            let (a3, b3) = f(t + dt / 2.0, y + a2 * (dt / 2.0), v + b2 * (dt / 2.0));
            let (a4, b4) = f(t + dt, y + a3 * dt, v + b3 * dt);
            y += (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (dt / 6.0);
            v += (b1 + b2 * 2.0 + b3 * 2.0 + b4) * (dt / 6.0);
        }
        (y, v)
    }

    #[test]
    fn zero_branch_examples() {
        let s = make_modal_solution(cx(0.0, 0.0), 1.0, cx(3.0, 0.0), cx(0.0, 0.0)).unwrap();
        assert_eq!(s.branch, ModalBranch::Zero);
        assert!((s.c1 - cx(3.0, 0.0)).norm() < 1e-15 && s.c2.norm() < 1e-15);
        assert!((eval_modal(&s, 7.0).unwrap().y - cx(3.0, 0.0)).norm() < 1e-14);

        let s = make_modal_solution(cx(0.0, 0.0), 1.0, cx(0.0, 0.0), cx(-2.0, 0.0)).unwrap();
        let e = eval_modal(&s, 2.0).unwrap();
        assert!((e.y.re - (-0.75)).abs() < 1e-15);
        let far = eval_modal(&s, 1e6).unwrap();
        assert!((far.y.re - (-1.0)).abs() < 1e-9);
    }

    #[test]
    fn reproduces_initial_data() {
        for &(lam, t0) in &[
            (cx(0.32, 0.0), 1.0),
            (cx(0.88, 0.0), 1.0),
            (cx(-0.5, 0.0), 1.0),
            (cx(-0.5, 0.0), 9.485),
            (cx(6.0, 1.5), 1.0),
            (cx(6.0, 1.5), 12.0),
            (cx(0.0, 1.0), 3.0),
            (cx(2.0, -3.0), 30.0),
            (cx(400.0, 0.0), 2.0),
        ] {
            let y0 = cx(0.7, -0.2);
            let v0 = cx(-0.3, 0.5);
            let s = make_modal_solution(lam, t0, y0, v0).unwrap();
            let e = eval_modal(&s, t0).unwrap();
            assert!((e.y - y0).norm() <= 1e-9 * y0.norm(), "{lam} t0={t0}: {}", e.y);
            assert!((e.ydot - v0).norm() <= 1e-9 * v0.norm(), "{lam} t0={t0}: {}", e.ydot);
        }
    }

    #[test]
    fn matches_rk4_oracle_at_ten() {
        let s = make_modal_solution(cx(0.32, 0.0), 1.0, cx(1.0, 0.0), cx(0.0, 0.0)).unwrap();
        assert_eq!(s.branch, ModalBranch::PositiveReal);
        let e = eval_modal(&s, 10.0).unwrap();
        let (y, _) = rk4_oracle(cx(0.32, 0.0), 1.0, cx(1.0, 0.0), cx(0.0, 0.0), 10.0, 1e-3);
        assert!((e.y - y).norm() / y.norm() < 1e-6);
        assert!(e.y.im.abs() < 1e-15);
    }

    #[test]
    fn complex_branch_real_data_gives_real_trajectory() {
        let s = make_modal_solution(cx(6.0, 1.5), 1.0, cx(1.0, 0.0), cx(0.0, 0.0)).unwrap();
        assert_eq!(s.branch, ModalBranch::Complex);
        let (y, _) = rk4_oracle(cx(6.0, 1.5), 1.0, cx(1.0, 0.0), cx(0.0, 0.0), 30.0, 1e-3);
        let e = eval_modal(&s, 30.0).unwrap();
        assert!((e.y - y).norm() / y.norm() < 1e-6, "{} vs {}", e.y, y);
    }

    #[test]
    fn negative_branch_growth_rate() {
        let mu = 0.5f64.sqrt();
        let s = make_modal_solution(cx(-0.5, 0.0), 1.0, cx(0.4, 0.0), cx(0.1, 0.0)).unwrap();
        assert_eq!(s.branch, ModalBranch::NegativeReal);
        let t = 80.0;
        let a = eval_modal(&s, t).unwrap().log_abs_y;
        let b = eval_modal(&s, t / 2.0).unwrap().log_abs_y;
        // algebraic prefactor t^{-3/2} contributes 1.5 ln 2 on top of mu t / 2
        let expected = mu * t / 2.0 - 1.5 * 2f64.ln();
        assert!((a - b - expected).abs() < 0.02, "{}", a - b);
        assert!(((a - b) / (mu * t / 2.0) - 1.0).abs() < 0.05);
    }

    #[test]
    fn complex_branch_growth_rate() {
        let s = make_modal_solution(cx(6.0, 1.5), 1.0, cx(1.0, 0.0), cx(0.3, 0.0)).unwrap();
        let beta = crate::spectral::predicted_rate(cx(6.0, 1.5));
        let a = eval_modal(&s, 200.0).unwrap().log_abs_y;
        let b = eval_modal(&s, 100.0).unwrap().log_abs_y;
        // the envelope is |y| ~ e^{beta t} t^{-3/2} with bounded oscillation
        let slope = (a - b + 1.5 * 2f64.ln()) / 100.0;
        assert!((slope - beta).abs() / beta < 0.02, "{slope}");
    }

    #[test]
    fn saturates_instead_of_overflowing() {
        let s = make_modal_solution(cx(-4.0, 0.0), 1.0, cx(1.0, 0.0), cx(0.0, 0.0)).unwrap();
        let e = eval_modal(&s, 500.0).unwrap();
        assert!(e.saturated);
        assert!(e.y.re.is_finite() && e.ydot.re.is_finite());
        assert!((e.log_abs_y - (2.0 * 500.0 - 1.5 * 500f64.ln())).abs() < 2.0);
        let e = eval_modal(&s, 10.0).unwrap();
        assert!(!e.saturated);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(make_modal_solution(cx(1.0, 0.0), 0.0, cx(1.0, 0.0), cx(0.0, 0.0)), Err(SpecialError::DomainError(_))));
        assert!(matches!(make_modal_solution(cx(f64::NAN, 0.0), 1.0, cx(1.0, 0.0), cx(0.0, 0.0)), Err(SpecialError::DomainError(_))));
    }

    fn residual(s: &ModalSolution<f64>, t: f64) -> (f64, f64) {
        let h = 1e-4;
        let e = eval_modal(s, t).unwrap();
        let p = eval_modal(s, t + h).unwrap();
        let m = eval_modal(s, t - h).unwrap();
        let ydd = (p.ydot - m.ydot) / (2.0 * h);
        let r = ydd + e.ydot * (3.0 / t) + s.lambda * e.y;
        (r.norm(), e.y.norm())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn satisfies_modal_ode(a in -3.0f64..8.0, b in -2.0f64..2.0, t0 in 0.5f64..3.0, y0 in -1.0f64..1.0, v0 in -1.0f64..1.0) {
            let s = make_modal_solution(cx(a, b), t0, cx(y0, 0.2), cx(v0, -0.1)).unwrap();
            for k in 0..=20 {
                let t = t0 + 0.01 + f64::from(k);
                let (r, y) = residual(&s, t);
                prop_assert!(r <= 1e-6 * y.max(1.0), "residual {r} at t={t}");
            }
        }

        #[test]
        fn branch_matches_classification(a in -3.0f64..3.0, b in prop_oneof![Just(0.0), -2.0f64..2.0]) {
            let lam = cx(a, b);
            let s = make_modal_solution(lam, 1.0, cx(1.0, 0.0), cx(0.0, 0.0)).unwrap();
            let tag = classify_eigenvalue(lam, modal_tolerance(lam)).tag;
            let expected = match tag {
                EigenTag::Zero => ModalBranch::Zero,
                EigenTag::PositiveReal => ModalBranch::PositiveReal,
                EigenTag::NegativeReal => ModalBranch::NegativeReal,
                EigenTag::StrictlyComplex => ModalBranch::Complex,
            };
            prop_assert_eq!(s.branch, expected);
        }
    }
}
