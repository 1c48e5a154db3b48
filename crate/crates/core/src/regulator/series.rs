//! The hypergeometric series for r_D({1−Y,X})(δ), its per-term integral
//! oracle and the β_K sign certificate.

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::curvespec::{sup_abs_on, CurveSpec};
use crate::error::{Error, Result};
use crate::hiprec::{beta_real, tanh_sinh, Abscissa, Complex, QuadOptions};
use crate::lauricella::{fd_integral, fd_series, FDParams};
use crate::scalar::{PrecisionContext, Real};

/// Everything the series evaluation learned along the way.
#[derive(Debug, Clone)]
pub struct SeriesResult<R> {
    pub value: R,
    /// J_k for k = 1..=terms, the positive integrals ∫₀^{λ_n} |f(t)|^{k/N} dt/t.
    pub j: Vec<R>,
    pub terms: usize,
    /// Bound on the omitted terms k > terms.
    pub tail_bound: f64,
    /// sup |f| on [0, λ_n].
    pub sup_f: f64,
    /// Largest |Im| met in any J_k (should vanish).
    pub max_imag: f64,
    /// Number of k for which the F_D factor came from the integral.
    pub integral_fallbacks: usize,
}

struct Setup<R> {
    big_n: u32,
    lambda_n: R,
    /// (−1)^{n−1}λ₁⋯λ_n, which equals minus the coefficient of T in f.
    prod: R,
    x: Vec<Complex<R>>,
    radius: f64,
}

fn setup<R: Real>(curve: &CurveSpec<R>, ctx: &PrecisionContext) -> Result<Setup<R>> {
    curve.require_certificate()?;
    let lambda_n = curve.lambda_n()?.to_ctx(ctx);
    let prod = -R::from_bigint(&curve.f.coeff(1), ctx);
    if !(prod.to_f64() > 0.0) {
        return Err(Error::Hypothesis(
            "(v) fails: product of roots has the wrong sign".into(),
        ));
    }
    let ln = Complex::from_real(lambda_n.clone());
    let x: Vec<Complex<R>> = curve.lambdas[..curve.n() - 1]
        .iter()
        .map(|l| ln.clone() / &l.to_ctx(ctx))
        .collect();
    let radius = x.iter().map(|z| z.abs().to_f64()).fold(0.0, f64::max);
    Ok(Setup {
        big_n: curve.big_n,
        lambda_n,
        prod,
        x,
        radius,
    })
}

/// Absolute tolerance used for truncations at this context.
pub fn series_tol<R: Real>(ctx: &PrecisionContext) -> f64 {
    2f64.powi(8 - R::bits(ctx) as i32)
}

/// J_k = (λ_n P)^{k/N}·B(k/N, k/N+1)·F_D(k/N; −k/N,…; 2k/N+1 | λ_n/λ_i).
fn j_term<R: Real>(s: &Setup<R>, k: usize, tol: f64, ctx: &PrecisionContext) -> Result<(Complex<R>, bool)> {
    let a = R::from_ratio(k as i64, s.big_n as i64, ctx);
    let pref = (s.lambda_n.clone() * &s.prod).powf(&a) * beta_real(&a, &(a.clone() + 1.0), ctx)?;
    let p = FDParams::real(
        a.clone(),
        vec![-a.clone(); s.x.len()],
        a.clone() * 2.0 + 1.0,
        s.x.clone(),
    )?;
    let fd_tol = (tol / pref.to_f64().max(f64::MIN_POSITIVE)).min(1e-3);
    let (fd, fallback) = if s.radius < 1.0 {
        (fd_series(&p, fd_tol, ctx)?, false)
    } else {
        (fd_integral(&p, ctx)?, true)
    };
    Ok((fd.scale(&pref), fallback))
}

/// r_D({1−Y,X})(δ) from the series; requires a passing certificate.
pub fn reg_series<R: Real>(curve: &CurveSpec<R>, ctx: &PrecisionContext) -> Result<R> {
    Ok(reg_series_detailed(curve, ctx)?.value)
}

pub fn reg_series_detailed<R: Real>(curve: &CurveSpec<R>, ctx: &PrecisionContext) -> Result<SeriesResult<R>> {
    let s = setup(curve, ctx)?;
    let tol = series_tol::<R>(ctx);
    let upper = BigRational::from_f64(s.lambda_n.to_f64() + 1e-12).unwrap_or_else(BigRational::one);
    let sup_f = sup_abs_on(&curve.f, &BigRational::zero(), &upper);
    if !(sup_f < 1.0) {
        return Err(Error::Hypothesis(format!(
            "sup |f| on [0, lambda_n] is {sup_f}, not below 1"
        )));
    }
    let q = sup_f.powf(1.0 / s.big_n as f64);
    let pi_f = std::f64::consts::PI;

    let (j1, _) = j_term(&s, 1, tol, ctx)?;
    let j1 = j1.re.to_f64();
    // J_k ≤ q^{k−1} J_1, so the tail after K is at most J_1 q^K / ((1−q)πK)
    let mut k_max = 1usize;
    while j1 * q.powi(k_max as i32) / ((1.0 - q) * pi_f * k_max as f64) >= tol {
        k_max += 1;
        if k_max > 1_000_000 {
            return Err(Error::SlowConvergence("regulator series needs over 10^6 terms".into()));
        }
    }
    let k_max = k_max.max(2 * s.big_n as usize);

    let raw: Vec<Result<(Complex<R>, bool)>> = (1..=k_max).into_par_iter().map(|k| j_term(&s, k, tol, ctx)).collect();
    let mut j = Vec::with_capacity(k_max);
    let mut max_imag = 0.0f64;
    let mut integral_fallbacks = 0;
    for r in raw {
        let (z, fb) = r?;
        max_imag = max_imag.max(z.im.abs().to_f64());
        integral_fallbacks += fb as usize;
        j.push(z.re);
    }
    let pi = R::pi(ctx);
    let mut sum = R::zero(ctx);
    for (i, jk) in j.iter().enumerate() {
        let k = i + 1;
        let sn = sin_pi_ratio::<R>(k as i64, s.big_n as i64, ctx);
        if !sn.is_zero() {
            sum += sn * jk / (k as f64);
        }
    }
    let value = -(sum / pi);
    let jk_last = j[k_max - 1].to_f64();
    let tail_bound = jk_last * q / ((1.0 - q) * pi_f * k_max as f64);
    Ok(SeriesResult {
        value,
        j,
        terms: k_max,
        tail_bound,
        sup_f,
        max_imag,
        integral_fallbacks,
    })
}

/// sin(πp/q), exactly zero when q | p.
pub fn sin_pi_ratio<R: Real>(p: i64, q: i64, ctx: &PrecisionContext) -> R {
    if p % q == 0 {
        return R::zero(ctx);
    }
    (R::pi(ctx) * R::from_ratio(p, q, ctx)).sin()
}

/// The k-th summand −sin(πk/N)/(πk)·J_k with J_k from direct quadrature of
/// λ_n^{k/N}P^{k/N}∫₀¹ s^{k/N−1}(1−s)^{k/N}∏_{i<n}(1 − (λ_n/λ_i)s)^{k/N} ds.
pub fn reg_term_integral<R: Real>(curve: &CurveSpec<R>, k: usize, ctx: &PrecisionContext) -> Result<R> {
    if k == 0 {
        return Err(Error::Param("series terms start at k = 1".into()));
    }
    let s = setup(curve, ctx)?;
    let sn = sin_pi_ratio::<R>(k as i64, s.big_n as i64, ctx);
    if sn.is_zero() {
        return Ok(R::zero(ctx));
    }
    let inner = ctx.with_extra_bits(16);
    let a = R::from_ratio(k as i64, s.big_n as i64, &inner);
    let am1 = a.clone() - 1.0;
    let x: Vec<Complex<R>> = s.x.iter().map(|z| z.to_ctx(&inner)).collect();
    let integrand = |u: &Abscissa<R>| -> Result<Complex<R>> {
        let mut v = Complex::from_real((am1.clone() * u.from_left.ln() + a.clone() * u.from_right.ln()).exp());
        for xi in &x {
            let base = Complex::one(&inner) - xi.scale(&u.x);
            v *= (base.ln().scale(&a)).exp();
        }
        Ok(v)
    };
    let integral = tanh_sinh(integrand, &QuadOptions::default(), &inner)?.value;
    let pref = (s.lambda_n.to_ctx(&inner) * s.prod.to_ctx(&inner)).powf(&a);
    let jk = integral.re * pref;
    let term = -(sn.to_ctx(&inner) * jk) / (R::pi(&inner) * (k as f64));
    Ok(term.to_ctx(ctx))
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaCertificate {
    /// β_1..β_{2N} as decimal strings.
    pub betas: Vec<String>,
    pub strictly_decreasing: bool,
    pub positive: bool,
    /// −(1/π)Σ_{K<N} sin(πK/N)(β_K − β_{N+K}).
    pub resummed: String,
    /// |resummed| minus the truncation bound; positive means r_D ≠ 0 is certified.
    pub lower_bound: f64,
    pub negative: bool,
}

/// β_K = Σ_{k ≡ K mod 2N} J_k/k for K = 1..2N, and the sign argument built on them.
pub fn beta_k_certificate<R: Real>(curve: &CurveSpec<R>, ctx: &PrecisionContext) -> Result<(BetaCertificate, R)> {
    let sr = reg_series_detailed(curve, ctx)?;
    beta_from_series(curve.big_n, &sr, ctx)
}

pub fn beta_from_series<R: Real>(
    big_n: u32,
    sr: &SeriesResult<R>,
    ctx: &PrecisionContext,
) -> Result<(BetaCertificate, R)> {
    let two_n = 2 * big_n as usize;
    let mut betas = vec![R::zero(ctx); two_n];
    for (i, jk) in sr.j.iter().enumerate() {
        let k = i + 1;
        betas[(k - 1) % two_n] += jk.clone() / (k as f64);
    }
    let positive = betas.iter().all(|b| b.to_f64() > 0.0);
    let strictly_decreasing = betas.windows(2).all(|w| w[0] > w[1]);
    if !(positive && strictly_decreasing) {
        return Err(Error::OrderingViolation(format!(
            "beta_K not strictly decreasing and positive: {:?}",
            betas.iter().map(|b| b.to_f64()).collect::<Vec<_>>()
        )));
    }
    let n = big_n as usize;
    let mut acc = R::zero(ctx);
    for kk in 1..n {
        let sn = sin_pi_ratio::<R>(kk as i64, big_n as i64, ctx);
        acc += sn * (betas[kk - 1].clone() - &betas[n + kk - 1]);
    }
    let resummed = -(acc / R::pi(ctx));
    let lower_bound = resummed.abs().to_f64() - sr.tail_bound;
    let digits = ctx.output_digits() as usize + 5;
    Ok((
        BetaCertificate {
            betas: betas.iter().map(|b| b.to_sci(digits)).collect(),
            strictly_decreasing,
            positive,
            resummed: resummed.to_sci(digits),
            lower_bound,
            negative: resummed.is_negative(),
        },
        resummed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvespec::{build_curve, preset, Family};
    use crate::poly::IntPoly;
    use rug::Float;

    const E23: &str = "-0.47095904334493274691418567400102924042656389674994";
    const E23P: &str = "-0.66881964039649037504127102520475989774413452667566";

    fn curve(big_n: u32, f: &IntPoly, ctx: &PrecisionContext) -> CurveSpec<Float> {
        build_curve::<Float>(big_n, f, ctx).unwrap().certify()
    }

    fn close(a: &Float, b: &str, digits: i32, ctx: &PrecisionContext) -> bool {
        let b = <Float as Real>::parse(b, ctx).unwrap();
        let d: Float = Real::abs(&(a.clone() - &b));
        d.to_f64() < 10f64.powi(-digits)
    }

    #[test]
    fn e23_series() {
        let ctx = PrecisionContext::for_digits(30);
        let c = curve(2, &preset(Family::Ex1, 3, 0).unwrap(), &ctx);
        let r = reg_series_detailed(&c, &ctx).unwrap();
        assert!(close(&r.value, E23, 28, &ctx), "{}", r.value.to_sci(30));
        assert!(r.max_imag < 1e-25);
        assert!(r.tail_bound < 1e-28);
    }

    #[test]
    fn e23p_series() {
        // f = T^4 + 2T^3 - 2T
        let ctx = PrecisionContext::for_digits(30);
        let c = curve(2, &preset(Family::Ex2, 3, 1).unwrap(), &ctx);
        let v = reg_series(&c, &ctx).unwrap();
        assert!(close(&v, E23P, 28, &ctx), "{}", v.to_sci(30));
    }

    #[test]
    fn series_matches_termwise_quadrature() {
        let ctx = PrecisionContext::for_digits(20);
        let c = curve(3, &preset(Family::Ex1, 2, 0).unwrap(), &ctx);
        let sr = reg_series_detailed(&c, &ctx).unwrap();
        for k in [1usize, 2, 4, 5] {
            let sn = sin_pi_ratio::<Float>(k as i64, 3, &ctx);
            let from_series = -(sn * &sr.j[k - 1]) / (<Float as Real>::pi(&ctx) * (k as f64));
            let quad = reg_term_integral(&c, k, &ctx).unwrap();
            let d: Float = Real::abs(&(from_series - &quad));
            assert!(d.to_f64() < 1e-18, "k={k}");
        }
        assert!(reg_term_integral(&c, 3, &ctx).unwrap().is_zero());
    }

    #[test]
    fn beta_ordering_and_resummation() {
        let ctx = PrecisionContext::for_digits(25);
        let c = curve(2, &preset(Family::Ex1, 3, 0).unwrap(), &ctx);
        let sr = reg_series_detailed(&c, &ctx).unwrap();
        let (cert, resummed) = beta_from_series(2, &sr, &ctx).unwrap();
        assert!(cert.positive && cert.strictly_decreasing && cert.negative);
        assert!(cert.lower_bound > 0.0);
        let d: Float = Real::abs(&(resummed - &sr.value));
        assert!(d.to_f64() < 1e-22);
    }

    #[test]
    fn uncertified_curve_is_rejected() {
        let ctx = PrecisionContext::new(64);
        let c = build_curve::<f64>(2, &preset(Family::Ex1, 2, 0).unwrap(), &ctx).unwrap();
        assert!(matches!(reg_series(&c, &ctx), Err(Error::Hypothesis(_))));
    }
}
