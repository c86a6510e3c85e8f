//! Order 0 and 1 Bessel functions.
//!
//! Complex `J` and `Y` use the ascending series (summed in double-word
//! arithmetic) for `|z| <= 20` and the Hankel asymptotic expansion beyond.
//! Modified `I` uses its series up to 20 and the asymptotic expansion beyond;
//! modified `K` uses the logarithmic series up to 2 and Steed's continued
//! fraction beyond.

use super::dd::{Dd, DdC};
use super::SpecialError;
use crate::scalar::{c, re, Real, C};

/// `|z|` above which the Hankel expansion replaces the ascending series.
pub const SERIES_RADIUS: f64 = 20.0;
/// Natural-log exponent cap beyond which values saturate.
pub const EXPONENT_CAP: f64 = 700.0;
/// Switch from the logarithmic series to the continued fraction for `K`.
const K_SERIES_LIMIT: f64 = 2.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Values of `J0, J1, Y0, Y1` at one point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct JyValues<T> {
    pub j0: C<T>,
    pub j1: C<T>,
    pub y0: C<T>,
    pub y1: C<T>,
}

fn check_complex_arg<T: Real>(z: C<T>) -> Result<(), SpecialError> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(SpecialError::DomainError(format!("non-finite argument {z}")));
    }
    if z.im == T::zero() && z.re < T::zero() {
        return Err(SpecialError::DomainError(format!("argument {z} lies on the branch cut")));
    }
    Ok(())
}

fn check_exponent<T: Real>(z: C<T>) -> Result<(), SpecialError> {
    if z.im.abs() > T::lit(EXPONENT_CAP) {
        return Err(SpecialError::OverflowSaturation);
    }
    Ok(())
}

/// Bessel function of the first kind, order 1.
pub fn bessel_j1<T: Real>(z: C<T>) -> Result<C<T>, SpecialError> {
    check_complex_arg(z)?;
    check_exponent(z)?;
    Ok(j_pair(z).1)
}

/// Bessel function of the first kind, order 0.
pub fn bessel_j0<T: Real>(z: C<T>) -> Result<C<T>, SpecialError> {
    check_complex_arg(z)?;
    check_exponent(z)?;
    Ok(j_pair(z).0)
}

/// Bessel function of the second kind, order 1, principal branch.
pub fn bessel_y1<T: Real>(z: C<T>) -> Result<C<T>, SpecialError> {
    check_complex_arg(z)?;
    if z.norm() == T::zero() {
        return Err(SpecialError::DomainError("Y1 is singular at 0".into()));
    }
    check_exponent(z)?;
    Ok(jy_all(z).y1)
}

/// Bessel function of the second kind, order 0, principal branch.
pub fn bessel_y0<T: Real>(z: C<T>) -> Result<C<T>, SpecialError> {
    check_complex_arg(z)?;
    if z.norm() == T::zero() {
        return Err(SpecialError::DomainError("Y0 is singular at 0".into()));
    }
    check_exponent(z)?;
    Ok(jy_all(z).y0)
}

/// `(J0, J1)`; J is entire so the reflection `J_n(-z) = (-1)^n J_n(z)` keeps
/// the asymptotic branch in the right half-plane.
fn j_pair<T: Real>(z: C<T>) -> (C<T>, C<T>) {
    if z.norm() <= T::lit(SERIES_RADIUS) {
        let (j0, _) = series_nu0(z, false);
        let (j1, _) = series_nu1(z, false);
        (j0, j1)
    } else if z.re < T::zero() {
        let (j0, j1) = j_pair(-z);
        (j0, -j1)
    } else {
        let v = jy_asymptotic(z);
        (v.j0, v.j1)
    }
}

/// All four functions; `z` must be nonzero and off the negative real axis.
pub(crate) fn jy_all<T: Real>(z: C<T>) -> JyValues<T> {
    if z.norm() <= T::lit(SERIES_RADIUS) {
        jy_series(z)
    } else {
        jy_asymptotic(z)
    }
}

pub(crate) fn jy_series<T: Real>(z: C<T>) -> JyValues<T> {
    let pi = T::PI();
    let two = T::lit(2.0);
    let (j0, h0) = series_nu0(z, true);
    let (j1, h1) = series_nu1(z, true);
    let log_term = (z / two).ln() + re(T::lit(EULER_GAMMA));
    let y0 = (log_term * j0 - h0) * (two / pi);
    let y1 = -re(two / pi) / z + log_term * j1 * (two / pi) - h1 / pi;
    JyValues { j0, j1, y0, y1 }
}

/// `w = -z^2/4` exactly in double-word form.
fn minus_quarter_square<T: Real>(z: C<T>) -> DdC<T> {
    let x = Dd::from(z.re);
    let y = Dd::from(z.im);
    let re = x.mul(x).sub(y.mul(y));
    let im = x.mul(y).add(x.mul(y));
    let q = Dd::from(T::lit(-0.25));
    DdC { re: re.mul(q), im: im.mul(q) }
}

fn converged<T: Real>(term: DdC<T>, max_term: T, k: usize, z_abs: T) -> bool {
    let eps = T::epsilon();
    T::from_usize_lossy(k) > z_abs && term.magnitude() <= eps * eps * max_term.max(T::min_positive_value())
}

/// `J0(z)` and, when requested, `sum_{k>=1} H_k (-z^2/4)^k / (k!)^2`.
fn series_nu0<T: Real>(z: C<T>, with_harmonic: bool) -> (C<T>, C<T>) {
    let w = minus_quarter_square(z);
    let z_abs = z.norm();
    let mut term = DdC::from_c(c(T::one(), T::zero()));
    let mut sum = term;
    let mut hsum = DdC::zero();
    let mut harmonic = Dd::zero();
    let mut max_term = T::one();
    for k in 1..2000 {
        let kt = T::from_usize_lossy(k);
        term = term.mul(w).div_scalar(kt * kt);
        sum = sum.add(term);
        if with_harmonic {
            harmonic = harmonic.add(Dd::from(T::one()).div_scalar(kt));
            hsum = hsum.add(term.mul_dd(harmonic));
        }
        max_term = max_term.max(term.magnitude());
        if converged(term, max_term, k, z_abs) {
            break;
        }
    }
    (sum.to_c(), hsum.to_c())
}

/// `J1(z)` and, when requested, `(z/2) sum_{k>=0} (H_k + H_{k+1}) (-z^2/4)^k / (k!(k+1)!)`.
fn series_nu1<T: Real>(z: C<T>, with_harmonic: bool) -> (C<T>, C<T>) {
    let w = minus_quarter_square(z);
    let z_abs = z.norm();
    let mut term = DdC::from_c(c(T::one(), T::zero()));
    let mut sum = term;
    // H_0 + H_1 = 1
    let mut h_k = Dd::zero();
    let mut h_k1 = Dd::from(T::one());
    let mut hsum = term.mul_dd(h_k.add(h_k1));
    let mut max_term = T::one();
    for k in 1..2000 {
        let kt = T::from_usize_lossy(k);
        term = term.mul(w).div_scalar(kt * (kt + T::one()));
        sum = sum.add(term);
        if with_harmonic {
            h_k = h_k1;
            h_k1 = h_k1.add(Dd::from(T::one()).div_scalar(kt + T::one()));
            hsum = hsum.add(term.mul_dd(h_k.add(h_k1)));
        }
        max_term = max_term.max(term.magnitude());
        if converged(term, max_term, k, z_abs) {
            break;
        }
    }
    let half_z = DdC::from_c(z).div_scalar(T::lit(2.0));
    (half_z.mul(sum).to_c(), half_z.mul(hsum).to_c())
}

/// Exponentially scaled Hankel functions `h1 = H^(1)_nu(z) e^{-iz}` and
/// `h2 = H^(2)_nu(z) e^{iz}` from the large-argument expansion.
pub(crate) fn hankel_scaled<T: Real>(nu: u32, z: C<T>) -> (C<T>, C<T>) {
    let mu = T::lit(f64::from(4 * nu * nu));
    let eps = T::epsilon();
    let i = c(T::zero(), T::one());
    let inv_z = re(T::one()) / z;
    let mut a_k = T::one();
    let mut pow = re(T::one());
    let mut ik = re(T::one());
    let mut sum1 = re(T::one());
    let mut sum2 = re(T::one());
    let mut last = T::infinity();
    for k in 1..80usize {
        let kt = T::from_usize_lossy(k);
        let odd = T::lit(2.0) * kt - T::one();
        a_k = a_k * (mu - odd * odd) / (kt * T::lit(8.0));
        pow = pow * inv_z;
        ik = ik * i;
        let t = pow * a_k;
        let mag = t.norm();
        if mag > last {
            break;
        }
        sum1 = sum1 + ik * t;
        sum2 = sum2 + ik.conj() * t;
        last = mag;
        if mag <= eps * sum1.norm().min(sum2.norm()) * T::lit(0.5) {
            break;
        }
    }
    let amp = (re(T::lit(2.0) / T::PI()) / z).sqrt();
    let phase = T::lit(f64::from(nu)) * T::FRAC_PI_2() + T::FRAC_PI_4();
    let e_minus = C::from_polar(T::one(), -phase);
    let e_plus = C::from_polar(T::one(), phase);
    (amp * e_minus * sum1, amp * e_plus * sum2)
}

/// `e^{i z - s}` with `s = |Im z|`, never overflowing.
pub(crate) fn exp_iz_scaled<T: Real>(z: C<T>, sign: T) -> C<T> {
    let s = z.im.abs();
    // e^{sign * i z} = e^{sign * i Re z} e^{-sign Im z}
    C::from_polar((-sign * z.im - s).exp(), sign * z.re)
}

pub(crate) fn jy_asymptotic<T: Real>(z: C<T>) -> JyValues<T> {
    let (h1_0, h2_0) = hankel_scaled(0, z);
    let (h1_1, h2_1) = hankel_scaled(1, z);
    let e1 = exp_iz_scaled(z, T::one());
    let e2 = exp_iz_scaled(z, -T::one());
    let scale = z.im.abs().exp();
    let i2 = c(T::zero(), T::lit(2.0));
    let two = re(T::lit(2.0));
    let (a0, b0) = (e1 * h1_0 * scale, e2 * h2_0 * scale);
    let (a1, b1) = (e1 * h1_1 * scale, e2 * h2_1 * scale);
    JyValues { j0: (a0 + b0) / two, j1: (a1 + b1) / two, y0: (a0 - b0) / i2, y1: (a1 - b1) / i2 }
}

fn check_positive<T: Real>(x: T) -> Result<(), SpecialError> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(SpecialError::DomainError(format!("argument {x} must be positive and finite")));
    }
    Ok(())
}

/// Modified Bessel function of the first kind, order 1.
pub fn bessel_i1<T: Real>(x: T) -> Result<T, SpecialError> {
    check_positive(x)?;
    if x > T::lit(EXPONENT_CAP) {
        return Err(SpecialError::OverflowSaturation);
    }
    Ok(i_scaled(1, x) * x.exp())
}

/// Modified Bessel function of the first kind, order 0.
pub fn bessel_i0<T: Real>(x: T) -> Result<T, SpecialError> {
    check_positive(x)?;
    if x > T::lit(EXPONENT_CAP) {
        return Err(SpecialError::OverflowSaturation);
    }
    Ok(i_scaled(0, x) * x.exp())
}

/// Modified Bessel function of the second kind, order 1.
pub fn bessel_k1<T: Real>(x: T) -> Result<T, SpecialError> {
    check_positive(x)?;
    if x > T::lit(EXPONENT_CAP) {
        return Err(SpecialError::OverflowSaturation);
    }
    Ok(k_scaled(x).1 * (-x).exp())
}

/// Modified Bessel function of the second kind, order 0.
pub fn bessel_k0<T: Real>(x: T) -> Result<T, SpecialError> {
    check_positive(x)?;
    if x > T::lit(EXPONENT_CAP) {
        return Err(SpecialError::OverflowSaturation);
    }
    Ok(k_scaled(x).0 * (-x).exp())
}

/// `e^{-x} I_nu(x)` for `nu` in {0, 1}.
pub(crate) fn i_scaled<T: Real>(nu: u32, x: T) -> T {
    if x <= T::lit(SERIES_RADIUS) {
        let q = x * x / T::lit(4.0);
        let mut term = if nu == 0 { T::one() } else { x / T::lit(2.0) };
        let mut sum = term;
        let nu_t = T::lit(f64::from(nu));
        for k in 1..500usize {
            let kt = T::from_usize_lossy(k);
            term = term * q / (kt * (kt + nu_t));
            sum += term;
            if term <= T::epsilon() * sum * T::lit(0.25) {
                break;
            }
        }
        sum * (-x).exp()
    } else {
        let mu = T::lit(f64::from(4 * nu * nu));
        let mut a_k = T::one();
        let mut sum = T::one();
        let mut last = T::infinity();
        for k in 1..80usize {
            let kt = T::from_usize_lossy(k);
            let odd = T::lit(2.0) * kt - T::one();
            a_k = -a_k * (mu - odd * odd) / (kt * T::lit(8.0) * x);
            if a_k.abs() > last {
                break;
            }
            sum += a_k;
            last = a_k.abs();
            if last <= T::epsilon() * sum.abs() * T::lit(0.5) {
                break;
            }
        }
        sum / (T::lit(2.0) * T::PI() * x).sqrt()
    }
}

/// `(e^x K0(x), e^x K1(x))`.
pub(crate) fn k_scaled<T: Real>(x: T) -> (T, T) {
    let gamma = T::lit(EULER_GAMMA);
    if x <= T::lit(K_SERIES_LIMIT) {
        let q = x * x / T::lit(4.0);
        let log_term = (x / T::lit(2.0)).ln() + gamma;
        let i0 = i_scaled(0, x) * x.exp();
        let i1 = i_scaled(1, x) * x.exp();
        // K0 = -(ln(x/2)+gamma) I0 + sum_{k>=1} H_k q^k/(k!)^2
        // K1 = 1/x + (ln(x/2)+gamma) I1 - (x/4) sum_{k>=0} (H_k + H_{k+1}) q^k/(k!(k+1)!)
        let mut t0 = T::one();
        let mut t1 = T::one();
        let mut h = T::zero();
        let mut s0 = T::zero();
        let mut s1 = T::one();
        for k in 1..200usize {
            let kt = T::from_usize_lossy(k);
            t0 = t0 * q / (kt * kt);
            t1 = t1 * q / (kt * (kt + T::one()));
            let h_next = h + T::one() / kt;
            let h_next2 = h_next + T::one() / (kt + T::one());
            s0 += h_next * t0;
            s1 += (h_next + h_next2) * t1;
            h = h_next;
            if t0 * h_next <= T::epsilon() * s0.abs() * T::lit(0.1) && t1 <= T::epsilon() * T::lit(0.1) * s1 {
                break;
            }
        }
        let k0 = -log_term * i0 + s0;
        let k1 = T::one() / x + log_term * i1 - x / T::lit(4.0) * s1;
        let ex = x.exp();
        (k0 * ex, k1 * ex)
    } else {
        // Steed's continued fraction (CF2) with Temme's normalization sum
        let a1 = T::lit(0.25);
        let mut b = T::lit(2.0) * (T::one() + x);
        let mut d = T::one() / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = T::zero();
        let mut q2 = T::one();
        let mut q = a1;
        let mut cc = a1;
        let mut a = -a1;
        let mut s = T::one() + q * delh;
        for i in 1..10_000usize {
            let it = T::from_usize_lossy(i);
            a -= T::lit(2.0) * it;
            cc = -a * cc / (it + T::one());
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            b += T::lit(2.0);
            d = T::one() / (b + a * d);
            delh = (b * d - T::one()) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < T::epsilon() * T::lit(0.5) {
                break;
            }
        }
        h = a1 * h;
        let k0 = (T::PI() / (T::lit(2.0) * x)).sqrt() / s;
        let k1 = k0 * (x + T::lit(0.5) - h) / x;
        (k0, k1)
    }
}
