//! Continued-fraction convergents of real numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{PrecisionContext, Real};

/// Convergents p/q of x with q ≤ max_den, in order of increasing denominator.
pub fn convergents<R: Real>(x: &R, max_den: u64) -> Vec<BigRational> {
    let limit = BigInt::from(max_den);
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    let mut y = x.clone();
    for _ in 0..128 {
        let a_r = y.floor();
        let a_f = a_r.to_f64();
        if !a_f.is_finite() || a_f.abs() > 9.0e15 {
            break;
        }
        let a = BigInt::from(a_f as i64);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > limit {
            break;
        }
        out.push(BigRational::new(p2.clone(), q2.clone()));
        let frac = y - a_r;
        if frac.is_zero() {
            break;
        }
        y = frac.like(1.0) / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    out
}

/// First convergent of x within `tol` of x (absolute), or None.
pub fn best_rational<R: Real>(x: &R, max_den: u64, tol: f64, ctx: &PrecisionContext) -> Option<(BigRational, f64)> {
    convergents(x, max_den).into_iter().find_map(|c| {
        let r = (x.clone() - R::from_rational(&c, ctx)).abs().to_f64();
        (r <= tol).then_some((c, r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirds_and_pi() {
        let (r, _) = best_rational(&0.333333333333f64, 100, 1e-10, &PrecisionContext::new(64)).unwrap();
        assert_eq!(r, BigRational::new(1.into(), 3.into()));
        assert!(best_rational(&std::f64::consts::PI, 50, 1e-10, &PrecisionContext::new(64)).is_none());
        let c = convergents(&std::f64::consts::PI, 1000);
        assert_eq!(c[1], BigRational::new(22.into(), 7.into()));
        assert_eq!(c.last().unwrap(), &BigRational::new(355.into(), 113.into()));
    }

    #[test]
    fn negative_and_mpfr() {
        let ctx = PrecisionContext::for_digits(30);
        let x = rug::Float::from_ratio(-13, 12, &ctx);
        let (r, res) = best_rational(&x, 1000, 1e-25, &ctx).unwrap();
        assert_eq!(r, BigRational::new((-13).into(), 12.into()));
        assert!(res < 1e-28);
    }
}
