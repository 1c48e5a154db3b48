use crate::error::{Error, Result};
use crate::scalar::{PrecisionContext, Real};

/// Modified Bessel function K₀(x) for x > 0.
///
/// Power series for x ≤ 2, the asymptotic expansion once its smallest term is
/// below working precision, and the trapezoid rule on ∫₀^∞ e^{-x cosh t} dt
/// in between (exponentially convergent for this analytic integrand).
pub fn bessel_k0<R: Real>(x: &R, ctx: &PrecisionContext) -> Result<R> {
    let xf = x.to_f64();
    if !(xf > 0.0) {
        return Err(Error::Domain("K0 needs x > 0".into()));
    }
    if xf <= 2.0 {
        return Ok(series(x, ctx));
    }
    if let Some(v) = asymptotic(x, ctx) {
        return Ok(v);
    }
    Ok(trapezoid(x, ctx))
}

fn series<R: Real>(x: &R, ctx: &PrecisionContext) -> R {
    let inner = ctx.with_extra_bits(16);
    let x = x.to_ctx(&inner);
    let eps = R::eps(&inner);
    let q = x.square() / 4.0;
    let mut term = R::one(&inner);
    let mut i0 = R::one(&inner);
    let mut harm = R::zero(&inner);
    let mut tail = R::zero(&inner);
    let mut k = 1u64;
    loop {
        let kf = k as f64;
        term = term * &q / (kf * kf);
        harm += R::one(&inner) / kf;
        i0 += &term;
        let t = term.clone() * &harm;
        tail += &t;
        if t < eps.clone() * &tail && term < eps.clone() * &i0 {
            break;
        }
        k += 1;
    }
    let lead = (x / 2.0).ln() + R::euler_gamma(&inner);
    (tail - lead * i0).to_ctx(ctx)
}

/// √(π/2x) e^{-x} Σ (−1)^k ((2k−1)!!)² / (k! (8x)^k); None when the series
/// cannot reach working precision before its terms start growing.
fn asymptotic<R: Real>(x: &R, ctx: &PrecisionContext) -> Option<R> {
    let eps = R::eps(ctx);
    let mut term = R::one(ctx);
    let mut sum = R::one(ctx);
    let eight_x = x.clone() * 8.0;
    let mut k = 1u64;
    loop {
        let odd = (2 * k - 1) as f64;
        let next = -(term.clone() * (odd * odd)) / (eight_x.clone() * (k as f64));
        if next.abs() > term.abs() {
            return None;
        }
        term = next;
        sum += &term;
        if term.abs() < eps.clone() * sum.abs() {
            break;
        }
        k += 1;
    }
    let pref = (R::pi(ctx) / (x.clone() * 2.0)).sqrt() * (-x.clone()).exp();
    Some(pref * sum)
}

fn trapezoid<R: Real>(x: &R, ctx: &PrecisionContext) -> R {
    let inner = ctx.with_extra_bits(8);
    let x = x.to_ctx(&inner);
    let nats = R::bits(&inner) as f64 * std::f64::consts::LN_2 + 20.0;
    let pi = R::pi(&inner);
    // the strip of analyticity is |Im t| < π/2, where the integrand grows by e^x
    let h = pi.square() / (x.clone() + nats);
    let ex = x.exp();
    // terms are e^{-x(cosh t - 1)} relative to the t = 0 value
    let mut sum = R::from_f64(0.5, &inner);
    let mut j = 1u64;
    loop {
        let t = h.clone() * (j as f64);
        let (_, ch) = t.sinh_cosh();
        let arg = x.clone() * (ch - 1.0);
        if arg.to_f64() > nats {
            break;
        }
        sum += (-arg).exp();
        j += 1;
    }
    (sum * h / ex).to_ctx(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hiprec::complex::Complex;
    use crate::hiprec::quad::{tanh_sinh_quadrature, Abscissa};
    use rug::Float;

    fn quad_k0(x: &Float, ctx: &PrecisionContext) -> Float {
        // t = v/(1-v) maps (0,1) onto (0,∞)
        tanh_sinh_quadrature(
            |u: &Abscissa<Float>| {
                let w = u.from_right.clone();
                let t = u.from_left.clone() / &w;
                let (_, ch) = Real::sinh_cosh(&t);
                Ok(Complex::from_real((-(ch * x)).exp() / w.square()))
            },
            ctx,
        )
        .unwrap()
        .re
    }

    #[test]
    fn k0_at_one_matches_quadrature() {
        let ctx = PrecisionContext::for_digits(30);
        let x = Float::from_f64(1.0, &ctx);
        let k = bessel_k0(&x, &ctx).unwrap();
        assert!((k.clone() - quad_k0(&x, &ctx)).abs() < Float::tol(&ctx) * 16.0);
        assert!(k.to_sci(16).starts_with("4.210244382407083"));
    }

    #[test]
    fn regimes_agree() {
        let ctx = PrecisionContext::for_digits(25);
        for xf in [2.5, 7.0, 19.0] {
            let x = Float::from_f64(xf, &ctx);
            let a = trapezoid(&x, &ctx);
            let b = quad_k0(&x, &ctx);
            assert!(((a.clone() - b) / &a).abs() < Float::tol(&ctx) * 16.0, "x={xf}");
        }
        let x = Float::from_f64(2.0, &ctx);
        let a = trapezoid(&x, &ctx);
        let b = series(&x, &ctx);
        assert!(((a.clone() - b) / &a).abs() < Float::tol(&ctx));
        let x = Float::from_f64(60.0, &ctx);
        let a = trapezoid(&x, &ctx);
        let b = asymptotic(&x, &ctx).expect("asymptotic regime");
        assert!(
            ((a.clone() - &b) / &a).abs() < Float::tol(&ctx),
            "{} {}",
            a.to_sci(30),
            b.to_sci(30)
        );
    }

    #[test]
    fn leading_asymptotic_and_monotone() {
        let ctx = PrecisionContext::for_digits(15);
        let k50 = bessel_k0(&50.0f64, &ctx).unwrap();
        let lead = (std::f64::consts::PI / 100.0).sqrt() * (-50.0f64).exp();
        assert!(((k50 - lead) / lead).abs() < 0.1);
        let k: Vec<f64> = [1.0, 2.0, 3.0].iter().map(|x| bessel_k0(x, &ctx).unwrap()).collect();
        assert!(k[0] > k[1] && k[1] > k[2]);
    }
}
