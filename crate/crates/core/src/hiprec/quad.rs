//! Tanh-sinh quadrature on (0,1) with accurate endpoint offsets.
//!
//! Every abscissa carries its distance to both endpoints computed without
//! cancellation, so integrands with algebraic or logarithmic endpoint behaviour
//! can factor those distances in exactly.

use rayon::prelude::*;

use super::complex::Complex;
use crate::error::{Error, Result};
use crate::scalar::{PrecisionContext, Real};

/// A node on (0,1): `x`, `x - 0` and `1 - x`, the latter two accurate even when tiny.
#[derive(Debug, Clone)]
pub struct Abscissa<R> {
    pub x: R,
    pub from_left: R,
    pub from_right: R,
}

/// Values a quadrature rule can accumulate.
pub trait Accumulate<R: Real>: Clone + Send + Sync {
    fn zeroed(&self) -> Self;
    fn add_scaled(&mut self, w: &R, v: &Self);
    fn scale(&mut self, w: &R);
    /// Sum of component magnitudes (used as the convergence scale).
    fn l1(&self) -> R;
    fn dist(&self, other: &Self) -> R;
}

impl<R: Real> Accumulate<R> for Complex<R> {
    fn zeroed(&self) -> Self {
        self.like(0.0, 0.0)
    }
    fn add_scaled(&mut self, w: &R, v: &Self) {
        self.re += v.re.clone() * w;
        self.im += v.im.clone() * w;
    }
    fn scale(&mut self, w: &R) {
        self.re *= w;
        self.im *= w;
    }
    fn l1(&self) -> R {
        self.re.abs() + self.im.abs()
    }
    fn dist(&self, other: &Self) -> R {
        (self.clone() - other).abs()
    }
}

impl<R: Real, V: Accumulate<R>> Accumulate<R> for Vec<V> {
    fn zeroed(&self) -> Self {
        self.iter().map(|v| v.zeroed()).collect()
    }
    fn add_scaled(&mut self, w: &R, v: &Self) {
        for (a, b) in self.iter_mut().zip(v) {
            a.add_scaled(w, b);
        }
    }
    fn scale(&mut self, w: &R) {
        for a in self.iter_mut() {
            a.scale(w);
        }
    }
    fn l1(&self) -> R {
        let mut it = self.iter();
        let mut acc = it.next().map(|v| v.l1()).expect("non-empty vector integrand");
        for v in it {
            acc += v.l1();
        }
        acc
    }
    fn dist(&self, other: &Self) -> R {
        let mut it = self.iter().zip(other);
        let (a, b) = it.next().expect("non-empty vector integrand");
        let mut m = a.dist(b);
        for (a, b) in it {
            m = m.max_of(a.dist(b));
        }
        m
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub max_level: u32,
    pub min_level: u32,
    /// Nodes are kept while the endpoint distance exceeds 2^(-decay_factor * bits).
    pub decay_factor: u32,
    pub parallel: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            max_level: 14,
            min_level: 3,
            decay_factor: 6,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadResult<V> {
    pub value: V,
    pub levels: u32,
    pub evaluations: usize,
    /// |S_k - S_{k-1}| at the last level.
    pub last_change: f64,
}

struct Node<R> {
    at: Abscissa<R>,
    w: R,
}

/// Node at parameter t, or None once it falls outside the kept range.
fn node<R: Real>(t: &R, cutoff: &R, ctx: &PrecisionContext) -> Option<Node<R>> {
    let half_pi = R::pi(ctx) / 2.0;
    let (sh, ch) = t.sinh_cosh();
    let u = half_pi.clone() * sh;
    let e = (-(u.abs() * 2.0)).exp();
    if e < *cutoff {
        return None;
    }
    let one_plus = e.clone() + 1.0;
    let small = e.clone() / &one_plus;
    let large = one_plus.recip_like();
    let w = R::pi(ctx) * ch * e / one_plus.square();
    let at = if t.is_negative() {
        Abscissa {
            x: small.clone(),
            from_left: small,
            from_right: large,
        }
    } else {
        Abscissa {
            x: large.clone(),
            from_left: large,
            from_right: small,
        }
    };
    Some(Node { at, w })
}

trait RecipLike {
    fn recip_like(&self) -> Self;
}

impl<R: Real> RecipLike for R {
    fn recip_like(&self) -> Self {
        self.like(1.0) / self
    }
}

fn level_nodes<R: Real>(level: u32, cutoff: &R, ctx: &PrecisionContext) -> Vec<Node<R>> {
    let h = R::one(ctx).mul_pow2(-(level as i32));
    let mut out = Vec::new();
    let step = if level == 0 { 1i64 } else { 2 };
    if level == 0 {
        out.extend(node(&R::zero(ctx), cutoff, ctx));
    }
    let mut j = 1i64;
    loop {
        let t = h.clone() * (j as f64);
        let pos = node(&t, cutoff, ctx);
        let neg = node(&(-t), cutoff, ctx);
        if pos.is_none() && neg.is_none() {
            break;
        }
        out.extend(pos);
        out.extend(neg);
        j += step;
    }
    out
}

/// Tanh-sinh on (0,1), doubling the node density until two levels agree.
pub fn tanh_sinh<R, V, F>(f: F, opts: &QuadOptions, ctx: &PrecisionContext) -> Result<QuadResult<V>>
where
    R: Real,
    V: Accumulate<R>,
    F: Fn(&Abscissa<R>) -> Result<V> + Sync,
{
    let bits = R::bits(ctx) as i32;
    let cutoff = R::one(ctx).mul_pow2(-(opts.decay_factor as i32) * bits);
    let tol = R::tol(ctx);
    let mut total: Option<V> = None;
    let mut l1: Option<R> = None;
    let mut prev: Option<V> = None;
    let mut evaluations = 0usize;
    let mut last_change = f64::INFINITY;

    for level in 0..=opts.max_level {
        let nodes = level_nodes::<R>(level, &cutoff, ctx);
        evaluations += nodes.len();
        let vals: Vec<Result<V>> = if opts.parallel && nodes.len() > 32 {
            nodes.par_iter().map(|n| f(&n.at)).collect()
        } else {
            nodes.iter().map(|n| f(&n.at)).collect()
        };
        for (n, v) in nodes.iter().zip(vals) {
            let v = v?;
            let acc = total.get_or_insert_with(|| v.zeroed());
            acc.add_scaled(&n.w, &v);
            let mag = v.l1() * &n.w;
            if !mag.is_finite() {
                return Err(Error::Domain("non-finite integrand value".into()));
            }
            match l1.as_mut() {
                Some(s) => *s += mag,
                None => l1 = Some(mag),
            }
        }
        let h = R::one(ctx).mul_pow2(-(level as i32));
        let mut est = total.clone().expect("at least one node");
        est.scale(&h);
        let scale = l1.clone().expect("at least one node") * &h;
        if let Some(p) = &prev {
            let change = est.dist(p);
            last_change = change.to_f64();
            let floor = scale.clone().max_of(R::one(ctx).mul_pow2(-4 * bits));
            if level >= opts.min_level && change <= tol.clone() * floor {
                return Ok(QuadResult {
                    value: est,
                    levels: level,
                    evaluations,
                    last_change,
                });
            }
        }
        prev = Some(est);
    }
    Err(Error::NoConvergence(format!(
        "tanh-sinh after {} levels (last change {:e})",
        opts.max_level, last_change
    )))
}

/// Spec-level entry point: ∫₀¹ f(u) du for a complex-valued integrand.
pub fn tanh_sinh_quadrature<R, F>(f: F, ctx: &PrecisionContext) -> Result<Complex<R>>
where
    R: Real,
    F: Fn(&Abscissa<R>) -> Result<Complex<R>> + Sync,
{
    Ok(tanh_sinh(f, &QuadOptions::default(), ctx)?.value)
}

/// ∫_a^b f over a finite interval; the abscissa passed on has `x` in [a,b] and
/// endpoint distances scaled by (b - a).
pub fn integrate_interval<R, V, F>(a: &R, b: &R, f: F, opts: &QuadOptions, ctx: &PrecisionContext) -> Result<V>
where
    R: Real,
    V: Accumulate<R>,
    F: Fn(&Abscissa<R>) -> Result<V> + Sync,
{
    let len = b.clone() - a;
    let mut r = tanh_sinh(
        |u: &Abscissa<R>| {
            let from_left = u.from_left.clone() * &len;
            let from_right = u.from_right.clone() * &len;
            let x = if u.from_left < u.from_right {
                a.clone() + &from_left
            } else {
                b.clone() - &from_right
            };
            f(&Abscissa {
                x,
                from_left,
                from_right,
            })
        },
        opts,
        ctx,
    )?
    .value;
    r.scale(&len);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    #[test]
    fn constant_and_beta_half() {
        let ctx = PrecisionContext::for_digits(30);
        let one = tanh_sinh_quadrature(|_: &Abscissa<Float>| Ok(Complex::one(&ctx)), &ctx).unwrap();
        assert!(Real::abs(&(one.re - Float::one(&ctx))) < Float::tol(&ctx));
        let pi = tanh_sinh_quadrature(
            |u: &Abscissa<Float>| {
                let v = (u.from_left.clone() * &u.from_right).sqrt();
                Ok(Complex::from_real(v.like(1.0) / v))
            },
            &ctx,
        )
        .unwrap();
        assert!((pi.re - Float::pi(&ctx)).abs() < Float::tol(&ctx) * 16.0);
    }

    #[test]
    fn log_singularity_in_f64() {
        let ctx = PrecisionContext::for_digits(10);
        let r = tanh_sinh_quadrature(|u: &Abscissa<f64>| Ok(Complex::new(-u.from_left.ln(), 0.0)), &ctx).unwrap();
        assert!((r.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interval_mapping() {
        let ctx = PrecisionContext::for_digits(20);
        let a = Float::from_f64(1.0, &ctx);
        let b = Float::from_f64(3.0, &ctx);
        let r: Complex<Float> = integrate_interval(
            &a,
            &b,
            |t| Ok(Complex::from_real(t.x.clone() * &t.x)),
            &QuadOptions::default(),
            &ctx,
        )
        .unwrap();
        let exact = Float::from_ratio(26, 3, &ctx);
        assert!((r.re - exact).abs() < Float::tol(&ctx) * 64.0);
    }

    #[test]
    fn vector_integrand() {
        let ctx = PrecisionContext::for_digits(10);
        let r = tanh_sinh(
            |u: &Abscissa<f64>| {
                Ok(vec![
                    Complex::new(1.0, 0.0),
                    Complex::new(u.x, 0.0),
                    Complex::new(0.0, u.x * u.x),
                ])
            },
            &QuadOptions::default(),
            &ctx,
        )
        .unwrap()
        .value;
        assert!((r[0].re - 1.0).abs() < 1e-13);
        assert!((r[1].re - 0.5).abs() < 1e-13);
        assert!((r[2].im - 1.0 / 3.0).abs() < 1e-13);
    }
}
