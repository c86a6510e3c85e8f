//! Double-word ("double-double") arithmetic used to sum ascending Bessel
//! series whose terms are far larger than the result.

use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl<T: Real> Dd<T> {
    pub fn zero() -> Self {
        Self { hi: T::zero(), lo: T::zero() }
    }

    pub fn from(x: T) -> Self {
        Self { hi: x, lo: T::zero() }
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div_scalar(self, d: T) -> Self {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = (self.hi - p - e + self.lo) / d;
        let (hi, lo) = quick_two_sum(q1, r);
        Self { hi, lo }
    }

    pub fn abs_hi(self) -> T {
        self.hi.abs()
    }

    pub fn to_real(self) -> T {
        self.hi + self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DdC<T> {
    pub re: Dd<T>,
    pub im: Dd<T>,
}

impl<T: Real> DdC<T> {
    pub fn zero() -> Self {
        Self { re: Dd::zero(), im: Dd::zero() }
    }

    pub fn from_c(z: C<T>) -> Self {
        Self { re: Dd::from(z.re), im: Dd::from(z.im) }
    }

    pub fn add(self, o: Self) -> Self {
        Self { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn mul(self, o: Self) -> Self {
        Self { re: self.re.mul(o.re).sub(self.im.mul(o.im)), im: self.re.mul(o.im).add(self.im.mul(o.re)) }
    }

    pub fn mul_dd(self, s: Dd<T>) -> Self {
        Self { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn div_scalar(self, d: T) -> Self {
        Self { re: self.re.div_scalar(d), im: self.im.div_scalar(d) }
    }

    pub fn magnitude(self) -> T {
        self.re.abs_hi().max(self.im.abs_hi())
    }

    pub fn to_c(self) -> C<T> {
        C::new(self.re.to_real(), self.im.to_real())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_bits() {
        let big = Dd::from(1e17f64);
        let one = Dd::from(1.0f64);
        let r = big.add(one).sub(big);
        assert_eq!(r.to_real(), 1.0);
        let third = Dd::from(1.0f64).div_scalar(3.0);
        let back = third.mul(Dd::from(3.0)).sub(Dd::from(1.0));
        assert!(back.to_real().abs() < 1e-31);
    }
}
