//! Gamma and Beta via the argument-shifted Stirling series.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::complex::Complex;
use crate::error::{Error, Result};
use crate::scalar::{PrecisionContext, Real};

const BERNOULLI_TABLE: usize = 160;

/// B_0, B_1, ..., B_{BERNOULLI_TABLE} as exact rationals (B_1 = -1/2).
fn bernoulli() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Akiyama–Tanigawa gives B_n with B_1 = +1/2; fix the sign afterwards.
        let m = BERNOULLI_TABLE;
        let mut a: Vec<BigRational> = Vec::with_capacity(m + 1);
        let mut out = Vec::with_capacity(m + 1);
        for k in 0..=m {
            a.push(BigRational::new(BigInt::one(), BigInt::from(k as u64 + 1)));
            for j in (1..=k).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigRational::from_integer(BigInt::from(j as u64));
            }
            out.push(a[0].clone());
        }
        out[1] = -out[1].clone();
        out
    })
}

fn is_nonpositive_integer<R: Real>(z: &Complex<R>) -> bool {
    if !z.im.is_zero() || z.re > z.re.like(0.5) {
        return false;
    }
    z.re.floor() == z.re
}

/// log Γ(z) for Re z large, no branch bookkeeping (the caller exponentiates).
fn stirling<R: Real>(z: &Complex<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let bits = R::bits(ctx) as i32;
    let half_ln_2pi = (R::pi(ctx) * 2.0).ln() / 2.0;
    let mut acc = ((z.clone() - 0.5) * z.ln() - z.clone()).add_real(&half_ln_2pi);
    let zinv = z.recip();
    let zinv2 = zinv.clone() * &zinv;
    let mut zpow = zinv;
    let table = bernoulli();
    let tiny = R::one(ctx).mul_pow2(-bits - 4);
    for k in 1..table.len() / 2 {
        let b = R::from_rational(&table[2 * k], ctx);
        let term = zpow.scale(&(b / ((2 * k * (2 * k - 1)) as f64)));
        let small = term.abs() <= tiny.clone() * acc.abs();
        acc += &term;
        if small {
            return Ok(acc);
        }
        zpow *= &zinv2;
    }
    Err(Error::NoConvergence("Stirling series for gamma".into()))
}

/// Γ(z) with relative error around 2^(-prec_bits + 8).
pub fn gamma<R: Real>(z: &Complex<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("{}", z.re.to_f64())));
    }
    let inner = ctx.with_extra_bits(24);
    let zw = z.to_ctx(&inner);
    let shift_to = (R::bits(ctx) as f64 / 4.0).max(10.0);
    let mut w = zw.clone();
    let mut prod = Complex::one(&inner);
    while w.re.to_f64() < shift_to {
        prod *= &w;
        w = w + 1.0;
    }
    let lg = stirling(&w, &inner)?;
    Ok((lg.exp() / prod).to_ctx(ctx))
}

pub fn gamma_real<R: Real>(x: &R, ctx: &PrecisionContext) -> Result<R> {
    Ok(gamma(&Complex::from_real(x.clone()), ctx)?.re)
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta<R: Real>(a: &Complex<R>, b: &Complex<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let ab = a.clone() + b;
    Ok(gamma(a, ctx)? * gamma(b, ctx)? / gamma(&ab, ctx)?)
}

pub fn beta_real<R: Real>(a: &R, b: &R, ctx: &PrecisionContext) -> Result<R> {
    Ok(beta(&Complex::from_real(a.clone()), &Complex::from_real(b.clone()), ctx)?.re)
}

/// Exact B_{2k} for the tests and the Stirling table.
pub fn bernoulli_number(n: usize) -> Option<BigRational> {
    let t = bernoulli();
    if n < t.len() {
        Some(t[n].clone())
    } else if n % 2 == 1 {
        Some(BigRational::zero())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    #[test]
    fn bernoulli_values() {
        let b = |n| bernoulli_number(n).unwrap();
        assert_eq!(b(1), BigRational::new((-1).into(), 2.into()));
        assert_eq!(b(2), BigRational::new(1.into(), 6.into()));
        assert_eq!(b(12), BigRational::new((-691).into(), 2730.into()));
        assert!(b(13).is_zero());
    }

    #[test]
    fn gamma_half_squared_is_pi() {
        let ctx = PrecisionContext::for_digits(40);
        let g = gamma(&Complex::<Float>::from_f64(0.5, 0.0, &ctx), &ctx).unwrap();
        let diff = (g.clone() * &g).re - Float::pi(&ctx);
        assert!(diff.abs() < Float::eps(&ctx) * 256.0);
        assert!(g.im.is_zero() || g.im.abs() < Float::eps(&ctx));
    }

    #[test]
    fn gamma_one_and_recurrence() {
        let ctx = PrecisionContext::for_digits(30);
        let one = gamma(&Complex::<Float>::one(&ctx), &ctx).unwrap();
        assert!(Real::abs(&(one.re - Float::one(&ctx))) < Float::eps(&ctx) * 256.0);
        let third = Float::from_ratio(1, 3, &ctx);
        let g13 = gamma_real(&third, &ctx).unwrap();
        let g73 = gamma_real(&Float::from_ratio(7, 3, &ctx), &ctx).unwrap();
        let rhs = g13 * Float::from_ratio(4, 9, &ctx);
        assert!(((g73 - &rhs) / rhs).abs() < Float::eps(&ctx) * 256.0);
    }

    #[test]
    fn poles_are_errors() {
        let ctx = PrecisionContext::for_digits(20);
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(
                gamma(&Complex::<f64>::from_f64(x, 0.0, &ctx), &ctx),
                Err(Error::Pole(_))
            ));
        }
        assert!(gamma(&Complex::<f64>::from_f64(-1.5, 0.0, &ctx), &ctx).is_ok());
    }

    #[test]
    fn f64_path() {
        let ctx = PrecisionContext::for_digits(10);
        let g = gamma_real(&5.0f64, &ctx).unwrap();
        assert!((g - 24.0).abs() < 1e-12);
        let b = beta_real(&0.5f64, &0.5, &ctx).unwrap();
        assert!((b - std::f64::consts::PI).abs() < 1e-13);
    }
}
