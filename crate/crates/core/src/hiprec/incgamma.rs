use super::complex::Complex;
use super::gamma::gamma;
use crate::error::{Error, Result};
use crate::scalar::{PrecisionContext, Real};

const MAX_TERMS: usize = 1_000_000;

/// Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt for complex s and real x > 0.
///
/// Legendre's continued fraction for x ≥ 1, otherwise Γ(s) minus the lower
/// series evaluated with extra bits to absorb the cancellation near poles of Γ(s).
pub fn upper_incomplete_gamma<R: Real>(s: &Complex<R>, x: &R, ctx: &PrecisionContext) -> Result<Complex<R>> {
    if !(x.to_f64() > 0.0) {
        return Err(Error::Domain("incomplete gamma needs x > 0".into()));
    }
    let r = if x.to_f64() >= 1.0 {
        continued_fraction(s, x, ctx)?
    } else {
        let inner = ctx.with_extra_bits(64);
        let si = s.to_ctx(&inner);
        let xi = x.to_ctx(&inner);
        let lower = lower_series(&si, &xi, &inner)?;
        (gamma(&si, &inner)? - lower).to_ctx(ctx)
    };
    if !r.is_finite() {
        return Err(Error::Overflow("incomplete gamma".into()));
    }
    Ok(r)
}

/// x^s e^{-x} (the common prefactor), principal branch of x^s.
fn prefactor<R: Real>(s: &Complex<R>, x: &R) -> Complex<R> {
    let lx = x.ln();
    (s.scale(&lx) - Complex::from_real(x.clone())).exp()
}

fn lower_series<R: Real>(s: &Complex<R>, x: &R, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let eps = R::eps(ctx);
    let mut denom = s.clone();
    if denom.is_zero() {
        return Err(Error::Pole("0".into()));
    }
    let mut term = denom.recip();
    let mut sum = term.clone();
    for k in 1..MAX_TERMS {
        denom = denom + 1.0;
        if denom.is_zero() {
            return Err(Error::Pole(format!("{}", -(k as i64))));
        }
        term = term.scale(x) / &denom;
        sum += &term;
        if term.abs() <= eps.clone() * sum.abs() {
            return Ok(prefactor(s, x) * sum);
        }
    }
    Err(Error::NoConvergence("lower incomplete gamma series".into()))
}

fn continued_fraction<R: Real>(s: &Complex<R>, x: &R, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let inner = ctx.with_extra_bits(16);
    let s = s.to_ctx(&inner);
    let x = x.to_ctx(&inner);
    let eps = R::eps(&inner);
    let tiny = R::one(&inner).mul_pow2(-(4 * R::bits(&inner) as i32));
    let tiny_c = Complex::from_real(tiny.clone());
    let fix = |z: Complex<R>| if z.abs() < tiny { tiny_c.clone() } else { z };

    let b0 = (-s.clone()).add_real(&(x.clone() + 1.0));
    let mut f = fix(b0);
    let mut c = f.clone();
    let mut d = Complex::zero(&inner);
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        let a = (s.clone() - kf) * kf;
        let b = (-s.clone()).add_real(&(x.clone() + (2.0 * kf + 1.0)));
        d = fix(b.clone() + a.clone() * &d).recip();
        c = fix(b + a / &c);
        let delta = c.clone() * &d;
        f *= &delta;
        if (delta - 1.0).abs() <= eps {
            return Ok((prefactor(&s, &x) / f).to_ctx(ctx));
        }
    }
    Err(Error::NoConvergence("incomplete gamma continued fraction".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hiprec::quad::{tanh_sinh_quadrature, Abscissa};
    use rug::Float;

    #[test]
    fn exponential_case() {
        let ctx = PrecisionContext::for_digits(30);
        let s = Complex::<Float>::one(&ctx);
        let x = Float::from_f64(2.0, &ctx);
        let g = upper_incomplete_gamma(&s, &x, &ctx).unwrap();
        let e = (-x).exp();
        assert!(((g.re - &e) / e).abs() < Float::tol(&ctx));
        assert!(g.im.abs() < Float::tol(&ctx));
    }

    #[test]
    fn small_x_limit() {
        let ctx = PrecisionContext::for_digits(30);
        let s = Complex::<Float>::from_f64(1.5, 0.0, &ctx);
        let x = Float::from_f64(1e-40, &ctx);
        let g = upper_incomplete_gamma(&s, &x, &ctx).unwrap();
        let full = gamma(&s, &ctx).unwrap();
        assert!((g.re - full.re).abs() < Float::tol(&ctx));
    }

    #[test]
    fn half_at_one_against_quadrature() {
        let ctx = PrecisionContext::for_digits(30);
        let s = Complex::<Float>::from_f64(0.5, 0.0, &ctx);
        let x = Float::from_f64(1.0, &ctx);
        let g = upper_incomplete_gamma(&s, &x, &ctx).unwrap();
        // t = 1 + v/(1-v), dt = dv/(1-v)^2
        let q = tanh_sinh_quadrature(
            |u: &Abscissa<Float>| {
                let w = u.from_right.clone();
                let t: Float = u.from_left.clone() / &w + Float::one(&ctx);
                let v = Real::exp(&-t.clone()) / Real::sqrt(&t) / w.square();
                Ok(Complex::from_real(v))
            },
            &ctx,
        )
        .unwrap();
        assert!((g.re - q.re).abs() < Float::tol(&ctx) * 16.0);
    }

    #[test]
    fn branches_agree_near_switch() {
        let ctx = PrecisionContext::for_digits(25);
        let s = Complex::<Float>::from_f64(0.0003, -0.0002, &ctx);
        let x = Float::from_f64(1.0, &ctx);
        let cf = continued_fraction(&s, &x, &ctx).unwrap();
        let inner = ctx.with_extra_bits(64);
        let series = gamma(&s.to_ctx(&inner), &inner).unwrap()
            - lower_series(&s.to_ctx(&inner), &x.to_ctx(&inner), &inner).unwrap();
        assert!((cf - series.to_ctx(&ctx)).abs() < Float::tol(&ctx));
    }
}
