//! Scalar abstraction shared by the f64 fast path and the MPFR path.
//!
//! MPFR numbers carry their own precision, so constructors take a
//! [`PrecisionContext`] instead of the precision-free `Zero`/`One` of num-traits.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision plus the decimal guard digits carried beyond the requested output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    pub prec_bits: u32,
    pub guard_digits: u32,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 10;

    pub fn new(prec_bits: u32) -> Self {
        Self {
            prec_bits: prec_bits.max(64),
            guard_digits: Self::DEFAULT_GUARD,
        }
    }

    /// Context for `digits` requested output digits plus the default guard.
    pub fn for_digits(digits: u32) -> Self {
        Self::for_digits_with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn for_digits_with_guard(digits: u32, guard_digits: u32) -> Self {
        let bits = ((digits + guard_digits) as f64 * LOG2_10).ceil() as u32 + 4;
        Self {
            prec_bits: bits.max(64),
            guard_digits,
        }
    }

    pub fn with_extra_bits(&self, extra: u32) -> Self {
        Self {
            prec_bits: self.prec_bits + extra,
            guard_digits: self.guard_digits,
        }
    }

    /// Output digits this context was sized for.
    pub fn output_digits(&self) -> u32 {
        let total = ((self.prec_bits - 4) as f64 / LOG2_10).floor() as u32;
        total.saturating_sub(self.guard_digits)
    }
}

pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    /// Mantissa bits actually carried under `ctx`.
    fn bits(ctx: &PrecisionContext) -> u32;
    fn from_f64(x: f64, ctx: &PrecisionContext) -> Self;
    fn from_bigint(x: &BigInt, ctx: &PrecisionContext) -> Self;
    fn parse(s: &str, ctx: &PrecisionContext) -> Result<Self>;
    fn pi(ctx: &PrecisionContext) -> Self;
    fn euler_gamma(ctx: &PrecisionContext) -> Self;
    /// π at the precision of `x`.
    fn pi_like(x: &Self) -> Self;

    /// Same value, rounded to the precision of `ctx`.
    fn to_ctx(&self, ctx: &PrecisionContext) -> Self;
    /// `x` at the precision of `self`.
    fn like(&self, x: f64) -> Self;

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn exp_m1(&self) -> Self;
    fn ln(&self) -> Self;
    fn ln_1p(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn sinh_cosh(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;
    fn powi(&self, k: i32) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn mul_pow2(self, k: i32) -> Self;

    fn to_f64(&self) -> f64;
    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;

    /// Decimal scientific string with `digits` significant digits.
    fn to_sci(&self, digits: usize) -> String;

    fn zero(ctx: &PrecisionContext) -> Self {
        Self::from_f64(0.0, ctx)
    }
    fn one(ctx: &PrecisionContext) -> Self {
        Self::from_f64(1.0, ctx)
    }
    fn from_i64(x: i64, ctx: &PrecisionContext) -> Self {
        Self::from_bigint(&BigInt::from(x), ctx)
    }
    fn from_ratio(p: i64, q: i64, ctx: &PrecisionContext) -> Self {
        Self::from_i64(p, ctx) / Self::from_i64(q, ctx)
    }
    fn from_rational(x: &BigRational, ctx: &PrecisionContext) -> Self {
        Self::from_bigint(x.numer(), ctx) / Self::from_bigint(x.denom(), ctx)
    }
    /// 2^(1-bits): unit roundoff scale.
    fn eps(ctx: &PrecisionContext) -> Self {
        Self::one(ctx).mul_pow2(1 - Self::bits(ctx) as i32)
    }
    /// The quadrature / iteration tolerance 2^(-bits+16).
    fn tol(ctx: &PrecisionContext) -> Self {
        Self::one(ctx).mul_pow2(16 - Self::bits(ctx) as i32)
    }
    fn sin(&self) -> Self {
        self.sin_cos().0
    }
    fn cos(&self) -> Self {
        self.sin_cos().1
    }
    fn is_negative(&self) -> bool {
        *self < self.like(0.0)
    }
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
    fn square(&self) -> Self {
        self.clone() * self
    }
}

impl Real for f64 {
    fn bits(_: &PrecisionContext) -> u32 {
        53
    }
    fn from_f64(x: f64, _: &PrecisionContext) -> Self {
        x
    }
    fn from_bigint(x: &BigInt, _: &PrecisionContext) -> Self {
        num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
    }
    fn parse(s: &str, _: &PrecisionContext) -> Result<Self> {
        s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}")))
    }
    fn pi(_: &PrecisionContext) -> Self {
        std::f64::consts::PI
    }
    fn euler_gamma(_: &PrecisionContext) -> Self {
        0.577_215_664_901_532_9
    }
    fn pi_like(_: &Self) -> Self {
        std::f64::consts::PI
    }
    fn to_ctx(&self, _: &PrecisionContext) -> Self {
        *self
    }
    fn like(&self, x: f64) -> Self {
        x
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn exp_m1(&self) -> Self {
        f64::exp_m1(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn ln_1p(&self) -> Self {
        f64::ln_1p(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn sinh_cosh(&self) -> (Self, Self) {
        (f64::sinh(*self), f64::cosh(*self))
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn powi(&self, k: i32) -> Self {
        f64::powi(*self, k)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn mul_pow2(self, k: i32) -> Self {
        self * 2f64.powi(k)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_sci(&self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self)
    }
}

impl Real for Float {
    fn bits(ctx: &PrecisionContext) -> u32 {
        ctx.prec_bits
    }
    fn from_f64(x: f64, ctx: &PrecisionContext) -> Self {
        Float::with_val(ctx.prec_bits, x)
    }
    fn from_bigint(x: &BigInt, ctx: &PrecisionContext) -> Self {
        if let Some(v) = num_traits::ToPrimitive::to_i64(x) {
            return Float::with_val(ctx.prec_bits, v);
        }
        let parsed = Float::parse(x.to_string()).expect("integer literal");
        Float::with_val(ctx.prec_bits, parsed)
    }
    fn parse(s: &str, ctx: &PrecisionContext) -> Result<Self> {
        let p = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        Ok(Float::with_val(ctx.prec_bits, p))
    }
    fn pi(ctx: &PrecisionContext) -> Self {
        Float::with_val(ctx.prec_bits, Constant::Pi)
    }
    fn euler_gamma(ctx: &PrecisionContext) -> Self {
        Float::with_val(ctx.prec_bits, Constant::Euler)
    }
    fn pi_like(x: &Self) -> Self {
        Float::with_val(x.prec(), Constant::Pi)
    }
    fn to_ctx(&self, ctx: &PrecisionContext) -> Self {
        Float::with_val(ctx.prec_bits, self)
    }
    fn like(&self, x: f64) -> Self {
        Float::with_val(self.prec(), x)
    }
    fn sqrt(&self) -> Self {
        self.clone().sqrt()
    }
    fn exp(&self) -> Self {
        self.clone().exp()
    }
    fn exp_m1(&self) -> Self {
        self.clone().exp_m1()
    }
    fn ln(&self) -> Self {
        self.clone().ln()
    }
    fn ln_1p(&self) -> Self {
        self.clone().ln_1p()
    }
    fn sin_cos(&self) -> (Self, Self) {
        let c = Float::new(self.prec());
        self.clone().sin_cos(c)
    }
    fn sinh_cosh(&self) -> (Self, Self) {
        let c = Float::new(self.prec());
        self.clone().sinh_cosh(c)
    }
    fn atan2(&self, x: &Self) -> Self {
        self.clone().atan2(x)
    }
    fn abs(&self) -> Self {
        self.clone().abs()
    }
    fn floor(&self) -> Self {
        self.clone().floor()
    }
    fn powi(&self, k: i32) -> Self {
        self.clone().pow(k)
    }
    fn powf(&self, e: &Self) -> Self {
        self.clone().pow(e)
    }
    fn mul_pow2(self, k: i32) -> Self {
        self << k
    }
    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(self)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return format!("0.{}e0", "0".repeat(digits.saturating_sub(1)));
        }
        let raw = self.to_string_radix_round(10, Some(digits), Round::Nearest);
        normalize_sci(&raw)
    }
}

/// rug switches between positional and exponent output; always emit `d.ddd…eN`.
fn normalize_sci(raw: &str) -> String {
    let (neg, rest) = match raw.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, raw),
    };
    let (mant, exp) = rest.split_once('e').unwrap_or((rest, "0"));
    let exp: i64 = exp.parse().unwrap_or(0);
    let int_len = mant.find('.').unwrap_or(mant.len()) as i64;
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let lead = digits.chars().take_while(|&c| c == '0').count();
    let sig = &digits[lead..];
    if sig.is_empty() {
        return "0e0".into();
    }
    let e10 = exp + int_len - 1 - lead as i64;
    let sign = if neg { "-" } else { "" };
    if sig.len() == 1 {
        format!("{sign}{sig}e{e10}")
    } else {
        format!("{sign}{}.{}e{e10}", &sig[..1], &sig[1..])
    }
}

/// Plain decimal rendering (no exponent) with `digits` significant digits.
pub fn to_plain_decimal<R: Real>(x: &R, digits: usize) -> String {
    let sci = x.to_sci(digits);
    let (mant, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i64 = exp.parse().unwrap_or(0);
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let ds: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if neg { "-" } else { "" };
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), ds)
    } else if point as usize >= ds.len() {
        format!("{}{}", ds, "0".repeat(point as usize - ds.len()))
    } else {
        format!("{}.{}", &ds[..point as usize], &ds[point as usize..])
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_decimal_rendering() {
        let ctx = PrecisionContext::for_digits(20);
        assert_eq!(to_plain_decimal(&Float::from_f64(-0.0471, &ctx), 3), "-0.0471");
        assert_eq!(to_plain_decimal(&Float::from_f64(1234.5, &ctx), 6), "1234.50");
        assert_eq!(to_plain_decimal(&Float::from_f64(12.0, &ctx), 2), "12");
    }

    #[test]
    fn context_sizing() {
        let ctx = PrecisionContext::for_digits(25);
        assert!(ctx.prec_bits >= 117);
        assert_eq!(ctx.output_digits(), 25);
        assert_eq!(PrecisionContext::new(10).prec_bits, 64);
    }

    #[test]
    fn pi_matches_at_both_precisions() {
        let ctx = PrecisionContext::for_digits(40);
        let p: Float = Real::pi(&ctx);
        assert!(p.to_sci(30).starts_with("3.14159265358979323846264338"));
        assert_eq!(<f64 as Real>::pi(&ctx), std::f64::consts::PI);
    }
}
