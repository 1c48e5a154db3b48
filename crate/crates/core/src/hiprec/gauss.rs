//! Gauss-Legendre nodes and weights at working precision.

use crate::scalar::{PrecisionContext, Real};

/// (P_m(x), P_m'(x)) by the three-term recurrence.
fn legendre<R: Real>(m: usize, x: &R) -> (R, R) {
    let mut p0 = x.like(1.0);
    let mut p1 = x.clone();
    for k in 2..=m {
        let kf = k as f64;
        let p2 = (x.clone() * &p1 * (2.0 * kf - 1.0) - p0.clone() * (kf - 1.0)) / kf;
        p0 = p1;
        p1 = p2;
    }
    // (1 − x²) P_m' = m (P_{m−1} − x P_m)
    let d = (p0 - x.clone() * &p1) * (m as f64) / (x.like(1.0) - x.square());
    (p1, d)
}

/// The m-point rule on [−1, 1] as (node, weight) pairs, nodes ascending.
pub fn gauss_legendre<R: Real>(m: usize, ctx: &PrecisionContext) -> Vec<(R, R)> {
    assert!(m >= 1, "Gauss-Legendre needs at least one node");
    let inner = ctx.with_extra_bits(16);
    let tol = R::eps(&inner) * 16.0;
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        // Tricomi's initial guess for the i-th largest root
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5);
        let mut x = R::from_f64(theta.cos(), &inner);
        for _ in 0..100 {
            let (p, d) = legendre(m, &x);
            let step = p / &d;
            x -= step.clone();
            if step.abs() <= tol {
                break;
            }
        }
        let (_, d) = legendre(m, &x);
        let w = R::from_f64(2.0, &inner) / ((x.like(1.0) - x.square()) * d.square());
        out.push((x.to_ctx(ctx), w.to_ctx(ctx)));
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    #[test]
    fn exact_for_polynomials() {
        let ctx = PrecisionContext::for_digits(40);
        for m in [1usize, 2, 5, 12] {
            let rule = gauss_legendre::<Float>(m, &ctx);
            assert_eq!(rule.len(), m);
            for k in 0..(2 * m) {
                let mut s = Float::zero(&ctx);
                for (x, w) in &rule {
                    s += x.powi(k as i32) * w;
                }
                let exact = if k % 2 == 1 {
                    Float::zero(&ctx)
                } else {
                    Float::from_ratio(2, k as i64 + 1, &ctx)
                };
                let d: Float = Real::abs(&(s - exact));
                assert!(d.to_f64() < 1e-38, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn exponential_to_full_precision() {
        let ctx = PrecisionContext::for_digits(50);
        let rule = gauss_legendre::<Float>(30, &ctx);
        let mut s = Float::zero(&ctx);
        for (x, w) in &rule {
            s += Real::exp(x) * w;
        }
        let one = Float::one(&ctx);
        let exact = Real::exp(&one) - Real::exp(&(-one.clone()));
        let d: Float = Real::abs(&(s - exact));
        assert!(d.to_f64() < 1e-48);
    }
}
