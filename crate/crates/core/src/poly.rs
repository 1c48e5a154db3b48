//! Dense univariate polynomials over exact rings, plus Sturm-sequence root counting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::hiprec::Complex;
use crate::scalar::{PrecisionContext, Real};

/// Coefficients in ascending degree; trailing zeros are always trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T: Clone + Num> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial c·T^k.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::one();
        for c in self.coeffs.iter().skip(1) {
            out.push(c.clone() * k.clone());
            k = k + T::one();
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| T::zero() - c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Long division. Exact whenever every leading-coefficient division is exact
    /// (always for fields, and for monic divisors over the integers).
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn map<U: Clone + Num>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl IntPoly {
    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn to_rational(&self) -> RatPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Exact division by a monic divisor; None when the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(d.is_monic(), "exact integer division needs a monic divisor");
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Evaluate with complex arithmetic at any precision.
    pub fn eval_complex<R: Real>(&self, z: &Complex<R>, ctx: &PrecisionContext) -> Complex<R> {
        let mut acc = Complex::zero(ctx);
        for c in self.coeffs.iter().rev() {
            acc = (acc * z).add_real(&R::from_bigint(c, ctx));
        }
        acc
    }

    pub fn eval_real<R: Real>(&self, x: &R, ctx: &PrecisionContext) -> R {
        let mut acc = R::zero(ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + R::from_bigint(c, ctx);
        }
        acc
    }

    /// Primitive square-free part (content removed, positive leading coefficient).
    pub fn squarefree(&self) -> Self {
        let r = self.to_rational();
        let g = r.gcd(&r.derivative());
        let (q, _) = r.div_rem(&g);
        q.primitive_int()
    }
}

impl RatPoly {
    pub fn monic(&self) -> Self {
        let l = self.lead();
        self.map(|c| c / l.clone())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Scale to an integer polynomial with coprime coefficients and positive lead.
    pub fn primitive_int(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let den = self.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs()
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        IntPoly::new(ints.into_iter().map(|c| c / &g * &sign).collect())
    }

    /// Sturm sequence p, p', −rem(...), ... of the square-free part.
    pub fn sturm(&self) -> Vec<RatPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }

    /// Cauchy bound: every root has |x| < 1 + max|c_i / c_n|.
    pub fn root_bound(&self) -> BigRational {
        let l = self.lead().abs();
        let m = self
            .coeffs()
            .iter()
            .map(|c| c.abs() / l.clone())
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    }
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Exact real-root counting and isolation for an integer polynomial.
pub struct SturmChain {
    poly: RatPoly,
    seq: Vec<RatPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Self {
        let poly = p.squarefree().to_rational();
        let seq = poly.sturm();
        Self { poly, seq }
    }

    /// Distinct real roots in the open interval (a, b).
    pub fn count_open(&self, a: &BigRational, b: &BigRational) -> usize {
        if a >= b || self.poly.degree().unwrap_or(0) == 0 {
            return 0;
        }
        // Sturm counts (a, b]; both endpoints must be non-roots for the plain
        // difference, so endpoint roots are handled by nudging inward exactly.
        let on_b = self.poly.eval(b).is_zero();
        let total = if self.poly.eval(a).is_zero() {
            let eps = self.separation(a, b);
            sign_changes(&self.seq, &(a + eps)) as i64 - sign_changes(&self.seq, b) as i64
        } else {
            sign_changes(&self.seq, a) as i64 - sign_changes(&self.seq, b) as i64
        };
        (total - on_b as i64).max(0) as usize
    }

    /// Distinct real roots in [a, b).
    pub fn count_half_open(&self, a: &BigRational, b: &BigRational) -> usize {
        self.count_open(a, b) + self.poly.eval(a).is_zero() as usize
    }

    pub fn count_real(&self) -> usize {
        let bnd = self.poly.root_bound();
        self.count_open(&-bnd.clone(), &bnd)
    }

    /// A positive rational smaller than the distance from `a` to any other root
    /// inside (a, b) (found by halving until no root is left in (a, a+eps]).
    fn separation(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let two = BigRational::from_integer(2.into());
        let mut eps = (b - a) / &two;
        // (T − a) divides the polynomial; the quotient has no root at a
        let lin = RatPoly::new(vec![-a.clone(), BigRational::one()]);
        let (q, _) = self.poly.div_rem(&lin);
        let qs = q.sturm();
        loop {
            let x = a + &eps;
            let c = sign_changes(&qs, a) as i64 - sign_changes(&qs, &x) as i64;
            if c == 0 && !q.eval(&x).is_zero() {
                return eps;
            }
            eps /= &two;
        }
    }

    /// Disjoint isolating intervals (lo, hi) of width ≤ 2^-bits, one per distinct
    /// real root in the open interval (a, b), sorted ascending.
    pub fn isolate(&self, a: &BigRational, b: &BigRational, bits: u32) -> Vec<(BigRational, BigRational)> {
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let two = BigRational::from_integer(2.into());
        let mut out = Vec::new();
        let mut stack = vec![(a.clone(), b.clone())];
        while let Some((lo, hi)) = stack.pop() {
            let n = self.count_open(&lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 && &hi - &lo <= width {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / &two;
            if self.poly.eval(&mid).is_zero() {
                out.push((mid.clone(), mid.clone()));
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            } else {
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

impl<T: fmt::Display + Clone + Num + Signed> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || k == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Display + Clone + Num + Signed> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_and_division() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        assert_eq!(a.div_exact(&b), Some(IntPoly::from_i64(&[-1, 1])));
        assert_eq!(IntPoly::from_i64(&[1, 0, 1]).div_exact(&b), None);
        assert_eq!(b.mul(&b), IntPoly::from_i64(&[1, 2, 1]));
        assert_eq!(a.derivative(), IntPoly::from_i64(&[0, 2]));
        assert_eq!(format!("{}", IntPoly::from_i64(&[0, -1, 1, 1])), "T^3 + T^2 - T");
    }

    #[test]
    fn squarefree_part() {
        // (T+1)^2 (T-1)
        let p = IntPoly::from_i64(&[-1, -1, 1, 1]);
        assert_eq!(p.squarefree(), IntPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn sturm_counts() {
        // T^3 + T^2 - 1 has one real root near 0.7549
        let s = SturmChain::new(&IntPoly::from_i64(&[-1, 0, 1, 1]));
        assert_eq!(s.count_real(), 1);
        assert_eq!(s.count_open(&q(0, 1), &q(1, 1)), 1);
        assert_eq!(s.count_open(&q(0, 1), &q(3, 4)), 0);
        let iv = s.isolate(&q(0, 1), &q(1, 1), 20);
        assert_eq!(iv.len(), 1);
        assert!(iv[0].0 < q(7549, 10000) && iv[0].1 > q(7548, 10000));
    }

    #[test]
    fn endpoint_roots_are_excluded_from_open_counts() {
        // T(T-1)(T-1/2)·2 = 2T^3 - 3T^2 + T
        let s = SturmChain::new(&IntPoly::from_i64(&[0, 1, -3, 2]));
        assert_eq!(s.count_open(&q(0, 1), &q(1, 1)), 1);
        assert_eq!(s.count_half_open(&q(0, 1), &q(1, 1)), 2);
        assert_eq!(s.count_real(), 3);
        let iv = s.isolate(&q(-1, 1), &q(2, 1), 10);
        assert_eq!(iv.len(), 3);
    }
}
