use super::complex::Complex;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// z^a = exp(a·Log z) on the principal branch, Arg z ∈ (−π, π].
pub fn pow_principal<R: Real>(z: &Complex<R>, a: &Complex<R>) -> Result<Complex<R>> {
    if z.is_zero() {
        if a.re > a.re.like(0.0) {
            return Ok(z.like(0.0, 0.0));
        }
        return Err(Error::Domain("0 raised to a power with Re <= 0".into()));
    }
    Ok((a.clone() * z.ln()).exp())
}

/// Real exponent convenience wrapper.
pub fn pow_principal_real<R: Real>(z: &Complex<R>, a: &R) -> Result<Complex<R>> {
    pow_principal(z, &Complex::from_real(a.clone()))
}

/// Logarithm of `value` on the branch continuous with `prev`.
pub fn log_tracked<R: Real>(prev: &Complex<R>, value: &Complex<R>) -> Result<Complex<R>> {
    if value.is_zero() {
        return Err(Error::Domain("log of zero while tracking a branch".into()));
    }
    let ratio = value.clone() / prev.exp();
    let step = (ratio - 1.0).abs();
    if step >= step.like(1.0) {
        return Err(Error::StepTooLarge(step.to_f64()));
    }
    let w0 = value.ln();
    let two_pi = R::pi_like(&w0.im) * 2.0;
    let turns = ((prev.im.clone() - &w0.im) / &two_pi + 0.5).floor();
    let w = Complex::new(w0.re, w0.im + turns * two_pi);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PrecisionContext;
    use rug::Float;

    #[test]
    fn principal_powers() {
        let ctx = PrecisionContext::for_digits(30);
        let half = Complex::<Float>::from_f64(0.5, 0.0, &ctx);
        let r = pow_principal(&Complex::from_f64(4.0, 0.0, &ctx), &half).unwrap();
        assert!(Real::abs(&(r.re - Float::from_f64(2.0, &ctx))) < Float::tol(&ctx));
        let r = pow_principal(&Complex::from_f64(-1.0, 0.0, &ctx), &half).unwrap();
        let one = Float::one(&ctx);
        assert!(Real::abs(&r.re) < Float::tol(&ctx) && Real::abs(&(r.im - &one)) < Float::tol(&ctx));
        let r = pow_principal(&Complex::from_f64(-1.0, -0.0, &ctx), &half).unwrap();
        assert!(Real::abs(&(r.im - &one)) < Float::tol(&ctx));
        let third = Complex::from_real(Float::from_ratio(1, 3, &ctx));
        let r = pow_principal(&Complex::from_f64(-8.0, 0.0, &ctx), &third).unwrap();
        let expect = Complex::<Float>::root_of_unity(1, 6, &ctx) * 2.0;
        assert!((r - expect).abs() < Float::tol(&ctx));
    }

    #[test]
    fn zero_base() {
        let z = Complex::new(0.0f64, 0.0);
        assert!(pow_principal(&z, &Complex::new(0.5, 0.0)).unwrap().is_zero());
        assert!(pow_principal(&z, &Complex::new(-0.5, 0.0)).is_err());
    }

    #[test]
    fn tracked_log_winds() {
        let mut w = Complex::new(0.0f64, 0.0);
        for k in 1..=16 {
            let th = std::f64::consts::PI * k as f64 / 8.0;
            w = log_tracked(&w, &Complex::new(th.cos(), th.sin())).unwrap();
        }
        assert!(w.re.abs() < 1e-14);
        assert!((w.im - 2.0 * std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn tracked_log_stays_above_the_cut() {
        let pi = std::f64::consts::PI;
        let prev = Complex::new(0.0f64, pi - 0.01);
        let v = Complex::new(-1.0, -0.005);
        let w = log_tracked(&prev, &v).unwrap();
        assert!(w.im > 3.0 && w.im < pi + 0.01);
        let w = log_tracked(&Complex::new(0.0, 0.0), &Complex::new(1.01, 0.0)).unwrap();
        assert!((w.re - 1.01f64.ln()).abs() < 1e-15 && w.im == 0.0);
    }

    #[test]
    fn big_steps_are_rejected() {
        let r = log_tracked(&Complex::new(0.0f64, 0.0), &Complex::new(-1.0, 0.1));
        assert!(matches!(r, Err(Error::StepTooLarge(_))));
    }
}
