//! Polynomial roots: Aberth–Ehrlich in double precision, then Newton polishing.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::hiprec::Complex;
use crate::poly::IntPoly;
use crate::scalar::{PrecisionContext, Real};

const MAX_SWEEPS: usize = 800;

/// All complex roots of p (degree ≥ 1) by simultaneous Aberth iteration.
pub fn aberth(p: &IntPoly) -> Result<Vec<Complex<f64>>> {
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect();
    let n = c
        .len()
        .checked_sub(1)
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Param("root finding needs a polynomial of degree at least 1".into()))?;
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::Overflow("coefficient beyond double range".into()));
    }
    let lead = c[n];
    let centre = -c[n - 1] / (n as f64 * lead);
    let radius = (0..n)
        .map(|k| (c[k] / lead).abs().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex::new(centre + radius * th.cos(), radius * th.sin())
        })
        .collect();

    let eval = |x: &Complex<f64>| {
        let mut v = Complex::new(0.0, 0.0);
        let mut d = Complex::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * x + &v;
            v = v * x + *a;
        }
        (v, d)
    };

    for _ in 0..MAX_SWEEPS {
        let mut worst = 0.0f64;
        for k in 0..n {
            let (v, d) = eval(&z[k]);
            if v.abs() == 0.0 {
                continue;
            }
            let ratio = v / &d;
            let mut s = Complex::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += (z[k].clone() - &z[j]).recip();
                }
            }
            let w = ratio.clone() / (Complex::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                continue;
            }
            worst = worst.max(w.abs() / z[k].abs().max(1.0));
            z[k] = z[k].clone() - w;
        }
        if worst < 1e-15 {
            return Ok(z);
        }
    }
    // clustered or multiple roots converge only linearly; accept what is there
    Ok(z)
}

/// Newton refinement of a simple root to the precision of `ctx`.
pub fn polish<R: Real>(p: &IntPoly, start: &Complex<f64>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let inner = ctx.with_extra_bits(32);
    let coeffs: Vec<R> = p.coeffs().iter().map(|c| R::from_bigint(c, &inner)).collect();
    let mut z = Complex::new(R::from_f64(start.re, &inner), R::from_f64(start.im, &inner));
    let eps = R::eps(ctx);
    let max_iter = 2 * (R::bits(ctx) as f64).log2().ceil() as usize + 20;
    for _ in 0..max_iter {
        let mut v = Complex::zero(&inner);
        let mut d = Complex::zero(&inner);
        for a in coeffs.iter().rev() {
            d = d * &z + &v;
            v = (v * &z).add_real(a);
        }
        if v.is_zero() {
            return Ok(z.to_ctx(ctx));
        }
        if d.is_zero() {
            return Err(Error::RepeatedRoot);
        }
        let step = v / &d;
        z -= &step;
        if step.abs() <= eps.clone() * z.abs() {
            return Ok(z.to_ctx(ctx));
        }
    }
    Err(Error::NoConvergence("Newton polishing of a polynomial root".into()))
}

/// Roots of p at the precision of `ctx`; p must be square-free.
pub fn roots<R: Real>(p: &IntPoly, ctx: &PrecisionContext) -> Result<Vec<Complex<R>>> {
    aberth(p)?.iter().map(|z| polish(p, z, ctx)).collect()
}
