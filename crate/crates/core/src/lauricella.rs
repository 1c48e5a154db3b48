//! Pochhammer symbols and the Lauricella function F_D by series and by its
//! Euler integral.

use crate::error::{Error, Result};
use crate::hiprec::{beta, tanh_sinh, Abscissa, Complex, QuadOptions};
use crate::scalar::{PrecisionContext, Real};

/// Parameters of F_D^{(n)}(a; b_1..b_n; c | x_1..x_n).
#[derive(Debug, Clone)]
pub struct FDParams<R> {
    pub a: Complex<R>,
    pub b: Vec<Complex<R>>,
    pub c: Complex<R>,
    pub x: Vec<Complex<R>>,
}

impl<R: Real> FDParams<R> {
    pub fn new(a: Complex<R>, b: Vec<Complex<R>>, c: Complex<R>, x: Vec<Complex<R>>) -> Result<Self> {
        if b.len() != x.len() {
            return Err(Error::Param(format!(
                "F_D needs as many b's as x's ({} vs {})",
                b.len(),
                x.len()
            )));
        }
        Ok(Self { a, b, c, x })
    }

    /// Real-parameter convenience constructor.
    pub fn real(a: R, b: Vec<R>, c: R, x: Vec<Complex<R>>) -> Result<Self> {
        Self::new(
            Complex::from_real(a),
            b.into_iter().map(Complex::from_real).collect(),
            Complex::from_real(c),
            x,
        )
    }

    fn to_ctx(&self, ctx: &PrecisionContext) -> Self {
        Self {
            a: self.a.to_ctx(ctx),
            b: self.b.iter().map(|z| z.to_ctx(ctx)).collect(),
            c: self.c.to_ctx(ctx),
            x: self.x.iter().map(|z| z.to_ctx(ctx)).collect(),
        }
    }

    /// max |x_i| (0 for no variables).
    pub fn radius(&self) -> f64 {
        self.x.iter().map(|z| z.abs().to_f64()).fold(0.0, f64::max)
    }
}

/// (a)_m = a(a+1)⋯(a+m−1).
pub fn pochhammer<R: Real>(a: &Complex<R>, m: u32, ctx: &PrecisionContext) -> Complex<R> {
    let mut acc = Complex::one(ctx);
    let mut t = a.to_ctx(ctx);
    for _ in 0..m {
        acc *= &t;
        t = t + 1.0;
    }
    acc
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SeriesOptions {
    /// Shell cap override; None uses 20·digits/(−log10 ρ).
    pub max_shells: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SeriesValue<R> {
    pub value: Complex<R>,
    pub shells: usize,
    /// The geometric tail majorant at termination.
    pub tail_bound: f64,
}

/// F_D by total-degree shells.
///
/// Shell d is (a)_d/(c)_d·h_d, where h_d is the T^d coefficient of
/// ∏(1 − x_i T)^{−b_i}; h obeys (d+1)h_{d+1} = Σ_{j=0}^{d} p_{j+1} h_{d−j}
/// with power sums p_j = Σ b_i x_i^j. The sum stops once C·ρ^{d+1}/(1−ρ) < tol,
/// C being the largest of |shell_j|/ρ^j over the last three shells.
pub fn fd_series<R: Real>(p: &FDParams<R>, tol: f64, ctx: &PrecisionContext) -> Result<Complex<R>> {
    Ok(fd_series_with(p, tol, &SeriesOptions::default(), ctx)?.value)
}

pub fn fd_series_with<R: Real>(
    p: &FDParams<R>,
    tol: f64,
    opts: &SeriesOptions,
    ctx: &PrecisionContext,
) -> Result<SeriesValue<R>> {
    let rho = p.radius();
    if rho >= 1.0 {
        return Err(Error::Domain(format!("F_D series needs max|x_i| < 1, got {rho}")));
    }
    let mut extra = 32u32;
    loop {
        let inner = ctx.with_extra_bits(extra);
        let (v, growth) = shells(&p.to_ctx(&inner), rho, tol, opts, &inner)?;
        // cancellation between shells costs log2(growth) bits
        let lost = growth.log2().max(0.0).ceil() as u32;
        if lost + 16 <= extra {
            return Ok(SeriesValue {
                value: v.value.to_ctx(ctx),
                ..v
            });
        }
        extra = lost + 48;
    }
}

fn shells<R: Real>(
    p: &FDParams<R>,
    rho: f64,
    tol: f64,
    opts: &SeriesOptions,
    ctx: &PrecisionContext,
) -> Result<(SeriesValue<R>, f64)> {
    let digits = ctx.output_digits().max(1) as f64;
    let cap = opts.max_shells.unwrap_or_else(|| {
        if rho == 0.0 {
            4
        } else {
            (20.0 * digits / (-rho.log10())).ceil().max(50.0) as usize
        }
    });
    let one = Complex::one(ctx);
    let mut sum = one.clone();
    let mut h: Vec<Complex<R>> = vec![one.clone()];
    // power sums p_j, j ≥ 1
    let mut pw: Vec<Complex<R>> = Vec::new();
    let mut xpow: Vec<Complex<R>> = p.x.iter().map(|_| one.clone()).collect();
    let mut ratio = one.clone();
    // ln(|shell_j| / ρ^j) for the last three shells
    let mut recent = [f64::NEG_INFINITY; 3];
    let ln_rho = rho.ln();
    let mut biggest = 1.0f64;
    let mut d = 0usize;
    loop {
        // p_{d+1}
        let mut pj = Complex::zero(ctx);
        for ((xp, x), b) in xpow.iter_mut().zip(&p.x).zip(&p.b) {
            *xp = xp.clone() * x;
            pj += b.clone() * &*xp;
        }
        pw.push(pj);
        let mut next = Complex::zero(ctx);
        for j in 0..=d {
            next += pw[j].clone() * &h[d - j];
        }
        let next = next.div_real(&R::from_f64((d + 1) as f64, ctx));
        h.push(next);
        ratio = ratio * (p.a.clone() + d as f64) / (p.c.clone() + d as f64);
        d += 1;
        let shell = ratio.clone() * &h[d];
        let mag = shell.abs().to_f64();
        sum += &shell;
        biggest = biggest.max(mag);
        recent = [recent[1], recent[2], mag.ln() - d as f64 * ln_rho];
        let ln_c = recent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tail = if rho == 0.0 {
            0.0
        } else {
            (ln_c + (d + 1) as f64 * ln_rho).exp() / (1.0 - rho)
        };
        if d >= 3 && tail < tol {
            let growth = biggest / sum.abs().to_f64().max(f64::MIN_POSITIVE);
            return Ok((
                SeriesValue {
                    value: sum,
                    shells: d,
                    tail_bound: tail,
                },
                growth,
            ));
        }
        if d >= cap {
            return Err(Error::SlowConvergence(format!(
                "F_D series reached {cap} shells with tail bound {tail:e}"
            )));
        }
    }
}

/// F_D from B(a, c−a)·F_D = ∫₀¹ u^{a−1}(1−u)^{c−a−1}∏(1 − x_i u)^{−b_i} du.
pub fn fd_integral<R: Real>(p: &FDParams<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let a_re = p.a.re.to_f64();
    let ca_re = (p.c.re.clone() - &p.a.re).to_f64();
    if !(a_re > 0.0 && ca_re > 0.0) {
        return Err(Error::Domain("F_D integral needs 0 < Re a < Re c".into()));
    }
    for x in &p.x {
        if x.im.is_zero() && x.re.to_f64() >= 1.0 {
            return Err(Error::Domain("F_D integral: some x_i lies on [1, inf)".into()));
        }
    }
    let inner = ctx.with_extra_bits(16);
    let q = p.to_ctx(&inner);
    if q.a.im.is_zero() && q.c.im.is_zero() {
        return fd_integral_real(&q, &inner).map(|v| v.to_ctx(ctx));
    }
    let am1 = q.a.clone() - 1.0;
    let cam1 = q.c.clone() - &q.a - 1.0;
    let integrand = |u: &Abscissa<R>| -> Result<Complex<R>> {
        let mut v = (am1.scale(&u.from_left.ln()) + cam1.scale(&u.from_right.ln())).exp();
        for (x, b) in q.x.iter().zip(&q.b) {
            let base = Complex::one(&inner) - x.scale(&u.x);
            if base.is_zero() {
                return Err(Error::Domain("F_D integral: 1 - x_i u vanished".into()));
            }
            v *= (-(b.clone()) * base.ln()).exp();
        }
        Ok(v)
    };
    let opts = QuadOptions::default();
    let r = tanh_sinh(integrand, &opts, &inner)?.value;
    let b = beta(&q.a, &(q.c.clone() - &q.a), &inner)?;
    Ok((r / b).to_ctx(ctx))
}

/// Real a and c: split at 1/2 and substitute u = v^(1/a)/2, 1 − u = v^(1/(c−a))/2, so both
/// endpoint singularities turn into constant weights.
fn fd_integral_real<R: Real>(q: &FDParams<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let a = q.a.re.clone();
    let beta_ = q.c.re.clone() - &a;
    let prod = |u: &R| -> Result<Complex<R>> {
        let mut v = Complex::one(ctx);
        for (x, b) in q.x.iter().zip(&q.b) {
            let base = Complex::one(ctx) - x.scale(u);
            if base.is_zero() {
                return Err(Error::Domain("F_D integral: 1 - x_i u vanished".into()));
            }
            v *= (-(b.clone()) * base.ln()).exp();
        }
        Ok(v)
    };
    let half = |v: &R, e: &R| (v.ln() / e).exp().mul_pow2(-1);
    let opts = QuadOptions::default();
    let left = tanh_sinh(
        |w: &Abscissa<R>| {
            let u = half(&w.from_left, &a);
            let w1 = ((R::one(ctx) - &u).ln() * (beta_.clone() - 1.0)).exp();
            Ok(prod(&u)?.scale(&w1))
        },
        &opts,
        ctx,
    )?
    .value;
    let right = tanh_sinh(
        |w: &Abscissa<R>| {
            let t = half(&w.from_left, &beta_);
            let u = R::one(ctx) - &t;
            let w1 = (u.ln() * (a.clone() - 1.0)).exp();
            Ok(prod(&u)?.scale(&w1))
        },
        &opts,
        ctx,
    )?
    .value;
    let two = R::from_f64(2.0, ctx);
    let cl = (two.ln() * -a.clone()).exp() / &a;
    let cr = (two.ln() * -beta_.clone()).exp() / &beta_;
    let b = beta(&q.a, &(q.c.clone() - &q.a), ctx)?;
    Ok((left.scale(&cl) + right.scale(&cr)) / b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn cf(re: f64, im: f64, ctx: &PrecisionContext) -> Complex<Float> {
        Complex::from_f64(re, im, ctx)
    }

    #[test]
    fn pochhammer_values() {
        let ctx = PrecisionContext::for_digits(20);
        let p = pochhammer(&cf(2.0 / 3.0, 0.0, &ctx), 0, &ctx);
        assert!((p - 1.0).abs() < Float::tol(&ctx));
        let p = pochhammer(&cf(1.0, 0.0, &ctx), 5, &ctx);
        assert!((p - 120.0).abs() < Float::tol(&ctx));
        let p = pochhammer(&cf(0.5, 0.0, &ctx), 2, &ctx);
        assert!((p - 0.75).abs() < Float::tol(&ctx));
    }

    #[test]
    fn gauss_log_case() {
        let ctx = PrecisionContext::for_digits(30);
        let one = cf(1.0, 0.0, &ctx);
        let p = FDParams::new(
            one.clone(),
            vec![one.clone()],
            cf(2.0, 0.0, &ctx),
            vec![cf(0.5, 0.0, &ctx)],
        )
        .unwrap();
        let v = fd_series(&p, 1e-40, &ctx).unwrap();
        let two_ln2 = Real::ln(&Float::from_f64(2.0, &ctx)) * 2.0f64;
        assert!(Real::abs(&(v.re.clone() - &two_ln2)) < Float::tol(&ctx));
        let w = fd_integral(&p, &ctx).unwrap();
        let dd = Real::abs(&(w.re - two_ln2));
        assert!(dd < Float::tol(&ctx) * 16.0f64, "{}", dd.to_f64());
    }

    #[test]
    fn strong_endpoint_singularities() {
        // x = 0 reduces F_D to 1 whatever the exponents
        let ctx = PrecisionContext::for_digits(20);
        let p = FDParams::real(
            Float::from_f64(0.1, &ctx),
            vec![Float::from_f64(0.5, &ctx)],
            Float::from_f64(0.4, &ctx),
            vec![cf(0.0, 0.0, &ctx)],
        )
        .unwrap();
        let w = fd_integral(&p, &ctx).unwrap();
        assert!((w - 1.0).abs().to_f64() < 1e-18);
    }

    #[test]
    fn trivial_arguments() {
        let ctx = PrecisionContext::for_digits(20);
        let zero = cf(0.0, 0.0, &ctx);
        let p = FDParams::new(
            cf(0.3, 0.0, &ctx),
            vec![cf(0.7, 0.0, &ctx); 3],
            cf(1.9, 0.0, &ctx),
            vec![zero.clone(); 3],
        )
        .unwrap();
        assert!((fd_series(&p, 1e-25, &ctx).unwrap() - 1.0).abs() < Float::tol(&ctx));
        assert!((fd_integral(&p, &ctx).unwrap() - 1.0).abs() < Float::tol(&ctx) * 16.0);
        let p = FDParams::new(
            cf(1.0, 0.0, &ctx),
            vec![zero],
            cf(2.0, 0.0, &ctx),
            vec![cf(0.4, 0.3, &ctx)],
        )
        .unwrap();
        assert!((fd_integral(&p, &ctx).unwrap() - 1.0).abs() < Float::tol(&ctx) * 16.0);
    }

    #[test]
    fn appell_at_curve_arguments() {
        // x_i = λ_3/λ_i for the two complex roots of T^3 + T^2 − 1
        let ctx = PrecisionContext::for_digits(25);
        let f = crate::poly::IntPoly::from_i64(&[-1, 0, 1, 1]);
        let z: Vec<Complex<Float>> = crate::curvespec::roots::roots(&f, &ctx).unwrap();
        let (real, cplx): (Vec<_>, Vec<_>) = z.into_iter().partition(|w| Real::abs(&w.im).to_f64() < 1e-20);
        let ln = real[0].clone();
        let x: Vec<Complex<Float>> = cplx.iter().map(|l| ln.clone() / l).collect();
        let half = Float::from_f64(0.5, &ctx);
        let p = FDParams::real(half.clone(), vec![-half.clone(), -half], Float::from_f64(2.0, &ctx), x).unwrap();
        let s = fd_series(&p, 1e-30, &ctx).unwrap();
        let i = fd_integral(&p, &ctx).unwrap();
        assert!((s.clone() - i).abs() < Float::tol(&ctx) * 64.0);
        assert!(Real::abs(&s.im) < Float::tol(&ctx) * 16.0);
    }

    #[test]
    fn radius_one_is_rejected() {
        let ctx = PrecisionContext::new(64);
        let p = FDParams::new(
            Complex::new(0.5, 0.0),
            vec![Complex::new(1.0, 0.0)],
            Complex::new(1.5, 0.0),
            vec![Complex::new(1.0, 0.0)],
        )
        .unwrap();
        assert!(fd_series(&p, 1e-10, &ctx).is_err());
        assert!(fd_integral(&p, &ctx).is_err());
    }
}
