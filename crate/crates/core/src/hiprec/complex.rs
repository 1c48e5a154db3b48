use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::scalar::{PrecisionContext, Real};

/// Complex number over any [`Real`]; every value carries the precision of its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Complex<R> {
    pub fn new(re: R, im: R) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: R) -> Self {
        let im = re.like(0.0);
        Self { re, im }
    }

    pub fn from_f64(re: f64, im: f64, ctx: &PrecisionContext) -> Self {
        Self::new(R::from_f64(re, ctx), R::from_f64(im, ctx))
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::from_f64(0.0, 0.0, ctx)
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self::from_f64(1.0, 0.0, ctx)
    }

    pub fn i(ctx: &PrecisionContext) -> Self {
        Self::from_f64(0.0, 1.0, ctx)
    }

    /// e^{2πi p/q}
    pub fn root_of_unity(p: i64, q: i64, ctx: &PrecisionContext) -> Self {
        let theta = R::pi(ctx) * R::from_ratio(2 * p, q, ctx);
        Self::cis(&theta)
    }

    pub fn cis(theta: &R) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn like(&self, re: f64, im: f64) -> Self {
        Self::new(self.re.like(re), self.re.like(im))
    }

    pub fn to_ctx(&self, ctx: &PrecisionContext) -> Self {
        Self::new(self.re.to_ctx(ctx), self.im.to_ctx(ctx))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> R {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> R {
        let a = self.re.abs();
        let b = self.im.abs();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        let r = small / &big;
        big * (r.square() + 1.0).sqrt()
    }

    /// Principal argument in (−π, π].
    pub fn arg(&self) -> R {
        if self.im.is_zero() {
            // signed zeros must not put the negative axis at −π
            return if self.re.is_negative() {
                self.re.like(1.0) * R::pi_like(&self.re)
            } else {
                self.re.like(0.0)
            };
        }
        self.im.atan2(&self.re)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(&self, k: &R) -> Self {
        Self::new(self.re.clone() * k, self.im.clone() * k)
    }

    pub fn div_real(&self, k: &R) -> Self {
        Self::new(self.re.clone() / k, self.im.clone() / k)
    }

    pub fn add_real(&self, k: &R) -> Self {
        Self::new(self.re.clone() + k, self.im.clone())
    }

    pub fn mul_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }

    pub fn recip(&self) -> Self {
        self.like(1.0, 0.0) / self.clone()
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Self::new(c * &m, s * m)
    }

    /// Principal logarithm, Im ∈ (−π, π].
    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        let t = ((r + self.re.abs()) / 2.0).sqrt();
        if !self.re.is_negative() {
            let im = self.im.clone() / (t.clone() * 2.0);
            Self::new(t, im)
        } else {
            let re = self.im.abs() / (t.clone() * 2.0);
            let im = if self.im.is_negative() { -t } else { t };
            Self::new(re, im)
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        if k < 0 {
            return self.powi(-k).recip();
        }
        let mut base = self.clone();
        let mut acc = self.like(1.0, 0.0);
        let mut e = k as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.re.sin_cos();
        let (sh, ch) = self.im.sinh_cosh();
        (
            Self::new(s.clone() * &ch, c.clone() * &sh),
            Self::new(c * ch, -(s * sh)),
        )
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $tra:ident, $ma:ident) => {
        impl<R: Real> $tr for Complex<R> {
            type Output = Complex<R>;
            fn $m(mut self, rhs: Complex<R>) -> Complex<R> {
                $tra::$ma(&mut self, &rhs);
                self
            }
        }
        impl<'a, R: Real> $tr<&'a Complex<R>> for Complex<R> {
            type Output = Complex<R>;
            fn $m(mut self, rhs: &'a Complex<R>) -> Complex<R> {
                $tra::$ma(&mut self, rhs);
                self
            }
        }
        impl<R: Real> $tra for Complex<R> {
            fn $ma(&mut self, rhs: Complex<R>) {
                $tra::$ma(self, &rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl<'a, R: Real> AddAssign<&'a Complex<R>> for Complex<R> {
    fn add_assign(&mut self, rhs: &'a Complex<R>) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a, R: Real> SubAssign<&'a Complex<R>> for Complex<R> {
    fn sub_assign(&mut self, rhs: &'a Complex<R>) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a, R: Real> MulAssign<&'a Complex<R>> for Complex<R> {
    fn mul_assign(&mut self, rhs: &'a Complex<R>) {
        let re = self.re.clone() * &rhs.re - self.im.clone() * &rhs.im;
        let im = self.re.clone() * &rhs.im + self.im.clone() * &rhs.re;
        self.re = re;
        self.im = im;
    }
}

impl<'a, R: Real> DivAssign<&'a Complex<R>> for Complex<R> {
    fn div_assign(&mut self, rhs: &'a Complex<R>) {
        // Smith's algorithm keeps the intermediate scale bounded.
        if rhs.re.abs() >= rhs.im.abs() {
            let r = rhs.im.clone() / &rhs.re;
            let d = rhs.re.clone() + r.clone() * &rhs.im;
            let re = (self.re.clone() + self.im.clone() * &r) / &d;
            let im = (self.im.clone() - self.re.clone() * &r) / &d;
            self.re = re;
            self.im = im;
        } else {
            let r = rhs.re.clone() / &rhs.im;
            let d = rhs.im.clone() + r.clone() * &rhs.re;
            let re = (self.re.clone() * &r + &self.im) / &d;
            let im = (self.im.clone() * &r - &self.re) / &d;
            self.re = re;
            self.im = im;
        }
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Complex<R>;
    fn neg(self) -> Complex<R> {
        Complex::new(-self.re, -self.im)
    }
}

impl<R: Real> Add<f64> for Complex<R> {
    type Output = Complex<R>;
    fn add(mut self, rhs: f64) -> Complex<R> {
        self.re = self.re + rhs;
        self
    }
}

impl<R: Real> Sub<f64> for Complex<R> {
    type Output = Complex<R>;
    fn sub(mut self, rhs: f64) -> Complex<R> {
        self.re = self.re - rhs;
        self
    }
}

impl<R: Real> Mul<f64> for Complex<R> {
    type Output = Complex<R>;
    fn mul(self, rhs: f64) -> Complex<R> {
        Complex::new(self.re * rhs, self.im * rhs)
    }
}

impl<R: Real> Div<f64> for Complex<R> {
    type Output = Complex<R>;
    fn div(self, rhs: f64) -> Complex<R> {
        Complex::new(self.re / rhs, self.im / rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn arithmetic() {
        let z = c(1.0, 2.0) * c(3.0, -1.0);
        assert_eq!(z, c(5.0, 5.0));
        let q = z / c(3.0, -1.0);
        assert!((q.re - 1.0).abs() < 1e-15 && (q.im - 2.0).abs() < 1e-15);
    }

    #[test]
    fn principal_sqrt_and_log() {
        let s = c(-4.0, 0.0).sqrt();
        assert!((s.re).abs() < 1e-15 && (s.im - 2.0).abs() < 1e-15);
        let s = c(-4.0, -0.0).sqrt();
        assert!((s.im - 2.0).abs() < 1e-15);
        let l = c(-1.0, 0.0).ln();
        assert!((l.im - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let z = c(0.3, -0.7);
        let p = z.powi(5);
        let q = z.clone() * &z * &z * &z * &z;
        assert!((p.re - q.re).abs() < 1e-15 && (p.im - q.im).abs() < 1e-15);
        let r = z.powi(-2) * z.powi(2);
        assert!((r.re - 1.0).abs() < 1e-14 && r.im.abs() < 1e-14);
    }
}
