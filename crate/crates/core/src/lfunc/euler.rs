//! Local Euler factors from point counts over finite fields.

use crate::error::{Error, Result};

use super::arith::{
    eval_mod, kronecker_prime, legendre, mul_mod, reduce, reduce_poly, sqrt_minus_one, squarefree_mod, Fp2,
};

/// Where the Dirichlet coefficients come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffSource {
    /// y^e = f(x) over Q with e ∈ {2, 3}; f monic (cubic, or quartic when e = 2).
    EllipticQ { f: Vec<i64>, y_power: u32 },
    /// The base twisted by the Kronecker character of the discriminant d.
    Twist { base: Box<CoeffSource>, d: i64 },
    /// y² = x³ + a4 x + a6 over Z[i], seen as a degree-4 L-function over Q.
    EllipticQi { a4: (i64, i64), a6: (i64, i64) },
    /// y² = f(x), f monic of degree 5.
    Genus2Count { f: Vec<i64> },
    /// The L-function whose Euler factors are the products of those of the factors.
    Product { factors: Vec<CoeffSource> },
    /// Coefficients a_n read from a file (no Euler factors).
    File { path: String, coeffs: Vec<i64> },
}

/// Truncate an ascending polynomial to degree ≤ k.
fn truncate(mut p: Vec<i64>, k: u32) -> Vec<i64> {
    p.truncate(k as usize + 1);
    p
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

/// Number of y ∈ F_p with y^e = v, tabulated over v.
fn power_counts(e: u32, p: u64) -> Vec<u32> {
    let mut c = vec![0u32; p as usize];
    for y in 0..p {
        let mut v = 1u64;
        for _ in 0..e {
            v = mul_mod(v, y, p);
        }
        c[v as usize] += 1;
    }
    c
}

/// #{(x, y) ∈ F_p² : y^e = f(x)}.
fn affine_count(f: &[u64], e: u32, p: u64) -> u64 {
    let counts = power_counts(e, p);
    (0..p).map(|x| counts[eval_mod(f, x, p) as usize] as u64).sum()
}

impl CoeffSource {
    /// Degree of the L-function.
    pub fn degree(&self) -> u32 {
        match self {
            Self::EllipticQ { .. } => 2,
            Self::Twist { base, .. } => base.degree(),
            Self::EllipticQi { .. } | Self::Genus2Count { .. } => 4,
            Self::Product { factors } => factors.iter().map(|f| f.degree()).sum(),
            Self::File { .. } => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::EllipticQ { f, y_power } => {
                let deg = f.len().saturating_sub(1);
                if f.last() != Some(&1) {
                    return Err(Error::Param("coeffs.f must be monic".into()));
                }
                match (y_power, deg) {
                    (2, 3) | (2, 4) | (3, 3) => Ok(()),
                    _ => Err(Error::Param(format!(
                        "coeffs: y^{y_power} = f(x) with deg f = {deg} is not a genus-1 model"
                    ))),
                }
            }
            Self::Twist { base, d } => {
                if base.degree() != 2 {
                    return Err(Error::Param("coeffs.base must be degree 2 for a twist".into()));
                }
                if *d == 0 || *d == 1 {
                    return Err(Error::Param("coeffs.d must be a nontrivial discriminant".into()));
                }
                base.validate()
            }
            Self::EllipticQi { .. } => Ok(()),
            Self::Genus2Count { f } => {
                if f.len() != 6 || f[5] != 1 {
                    return Err(Error::Param("coeffs.f must be monic of degree 5".into()));
                }
                Ok(())
            }
            Self::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::Param("coeffs.factors is empty".into()));
                }
                factors.iter().try_for_each(|f| f.validate())
            }
            Self::File { .. } => Ok(()),
        }
    }

    /// Local factor P_p(T) (L_p = 1/P_p(p^{-s})) truncated to degree ≤ max_pow.
    pub fn local_factor(&self, p: u64, max_pow: u32) -> Result<Vec<i64>> {
        match self {
            Self::EllipticQ { f, y_power } => {
                let a = euler_elliptic_q(f, *y_power, p)?;
                Ok(truncate(vec![1, -a, p as i64], max_pow))
            }
            Self::Twist { base, d } => {
                let chi = kronecker_prime(*d, p) as i64;
                if chi == 0 {
                    return Err(Error::BadPrime(p));
                }
                let b = base.local_factor(p, max_pow)?;
                Ok(b.iter()
                    .enumerate()
                    .map(|(k, c)| if k % 2 == 1 { c * chi } else { *c })
                    .collect())
            }
            Self::EllipticQi { a4, a6 } => euler_elliptic_qi(*a4, *a6, p, max_pow),
            Self::Genus2Count { f } => euler_genus2(f, p, max_pow),
            Self::Product { factors } => {
                let mut acc = vec![1i64];
                for fac in factors {
                    acc = truncate(poly_mul(&acc, &fac.local_factor(p, max_pow)?), max_pow);
                }
                Ok(acc)
            }
            Self::File { .. } => Err(Error::Param("file coefficients have no Euler factors".into())),
        }
    }
}

/// a_p = p + 1 − #E(F_p) for the smooth projective model of y^e = f(x).
pub fn euler_elliptic_q(f: &[i64], y_power: u32, p: u64) -> Result<i64> {
    if p == y_power as u64 || (y_power == 2 && p == 2) || !squarefree_mod(f, p) {
        return Err(Error::BadPrime(p));
    }
    let fp = reduce_poly(f, p);
    let affine = affine_count(&fp, y_power, p) as i64;
    let infinity = match (y_power, f.len() - 1) {
        // one point for y² = cubic
        (2, 3) => 1,
        // 1 + (lead/p) for an even model; the lead is 1
        (2, _) => 2,
        // Y³ = X³ at Z = 0
        _ => power_counts(3, p)[1] as i64,
    };
    Ok(p as i64 + 1 - affine - infinity)
}

/// Local factor at p of y² = x³ + a4 x + a6 over Q(i), as a polynomial in T = p^{-s}.
pub fn euler_elliptic_qi(a4: (i64, i64), a6: (i64, i64), p: u64, max_pow: u32) -> Result<Vec<i64>> {
    if p == 2 {
        return Err(Error::BadPrime(p));
    }
    if let Some(r) = sqrt_minus_one(p) {
        // split: one factor for each of i ↦ r and i ↦ −r
        let mut acc = vec![1i64];
        for root in [r, p - r] {
            let a = (reduce(a4.0, p) + mul_mod(reduce(a4.1, p), root, p)) % p;
            let b = (reduce(a6.0, p) + mul_mod(reduce(a6.1, p), root, p)) % p;
            let disc = (4 * mul_mod(mul_mod(a, a, p), a, p) + 27 * mul_mod(b, b, p)) % p;
            if disc == 0 {
                return Err(Error::BadPrime(p));
            }
            let cub = [b, a, 0, 1];
            let sum: i64 = (0..p).map(|x| legendre(eval_mod(&cub, x, p) as i64, p) as i64).sum();
            acc = poly_mul(&acc, &[1, sum, p as i64]);
        }
        Ok(truncate(acc, max_pow))
    } else {
        // inert: residue field F_p[i] with i² = −1
        let fld = Fp2::new(p, p - 1);
        let a = (reduce(a4.0, p), reduce(a4.1, p));
        let b = (reduce(a6.0, p), reduce(a6.1, p));
        let a3 = fld.mul(fld.mul(a, a), a);
        let b2 = fld.mul(b, b);
        let disc = fld.add(fld.mul((4, 0), a3), fld.mul((27 % p, 0), b2));
        if disc == (0, 0) {
            return Err(Error::BadPrime(p));
        }
        if max_pow < 2 {
            return Ok(vec![1]);
        }
        let cub = [b, a, (0, 0), (1, 0)];
        let mut sum = 0i64;
        for u in 0..p {
            for v in 0..p {
                sum += fld.chi(fld.eval(&cub, (u, v))) as i64;
            }
        }
        // a = q + 1 − #E(F_q) = −sum with q = p², and T² = q^{-s}
        let q = (p * p) as i64;
        Ok(truncate(vec![1, 0, sum, 0, q], max_pow))
    }
}

/// 1 + c₁T + c₂T² + p c₁T³ + p²T⁴ from #C(F_p) and #C(F_{p²}).
pub fn euler_genus2(f: &[i64], p: u64, max_pow: u32) -> Result<Vec<i64>> {
    if p == 2 || !squarefree_mod(f, p) {
        return Err(Error::BadPrime(p));
    }
    let fp = reduce_poly(f, p);
    let chi_sum: i64 = (0..p).map(|x| legendre(eval_mod(&fp, x, p) as i64, p) as i64).sum();
    // #C(F_p) = p + 1 + Σχ, and s₁ = p + 1 − #C(F_p)
    let s1 = -chi_sum;
    let c1 = -s1;
    if max_pow < 2 {
        return Ok(truncate(vec![1, c1], max_pow));
    }
    let fld = Fp2::with_any_nonresidue(p);
    let coeffs: Vec<(u64, u64)> = fp.iter().map(|&c| (c, 0)).collect();
    let mut chi2 = 0i64;
    for u in 0..p {
        for v in 0..p {
            chi2 += fld.chi(fld.eval(&coeffs, (u, v))) as i64;
        }
    }
    let s2 = -chi2;
    let c2 = (s1 * s1 - s2) / 2;
    let pi = p as i64;
    Ok(truncate(vec![1, c1, c2, pi * c1, pi * pi], max_pow))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count_y2(f: &[i64], p: u64) -> i64 {
        let fp = reduce_poly(f, p);
        let mut n = 0;
        for x in 0..p {
            for y in 0..p {
                if mul_mod(y, y, p) == eval_mod(&fp, x, p) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn point_count_at_three() {
        // y² = x³ − x + 1 over F_3: six affine points plus infinity
        assert_eq!(brute_count_y2(&[1, -1, 0, 1], 3), 6);
        assert_eq!(euler_elliptic_q(&[1, -1, 0, 1], 2, 3).unwrap(), -3);
    }

    #[test]
    fn hasse_and_brute_force() {
        let f = [4, -4, 0, 1];
        for p in super::super::arith::primes_up_to(200).into_iter().filter(|&p| p > 11) {
            let a = euler_elliptic_q(&f, 2, p).unwrap();
            assert_eq!(a, p as i64 - brute_count_y2(&f, p));
            assert!((a * a) as u64 <= 4 * p);
        }
        assert!(matches!(euler_elliptic_q(&f, 2, 11), Err(Error::BadPrime(11))));
        assert!(matches!(euler_elliptic_q(&f, 2, 2), Err(Error::BadPrime(2))));
    }

    #[test]
    fn plane_cubic_counts() {
        let f = [0, -1, 1, 1];
        for p in [2u64, 7, 11, 13, 17, 19, 31] {
            let a = euler_elliptic_q(&f, 3, p).unwrap();
            let fp = reduce_poly(&f, p);
            let mut n = 0i64;
            for x in 0..p {
                for y in 0..p {
                    if mul_mod(mul_mod(y, y, p), y, p) == eval_mod(&fp, x, p) {
                        n += 1;
                    }
                }
            }
            let inf = (0..p).filter(|&y| mul_mod(mul_mod(y, y, p), y, p) == 1).count() as i64;
            assert_eq!(a, p as i64 + 1 - n - inf);
            if p % 3 == 2 {
                assert_eq!(a, 0);
            }
        }
        assert!(euler_elliptic_q(&f, 3, 3).is_err());
        assert!(euler_elliptic_q(&f, 3, 5).is_err());
    }

    #[test]
    fn gaussian_split_and_inert() {
        let (a4, a6) = ((4, -8), (0, 0));
        // p = 5: the prime i ↦ 3 divides 4 − 8i, the other is good
        assert!(matches!(euler_elliptic_qi(a4, a6, 5, 4), Err(Error::BadPrime(5))));
        // p = 13 splits with i ↦ 5, 8; compare with direct counts
        let lf = euler_elliptic_qi(a4, a6, 13, 4).unwrap();
        let mut expect = vec![1i64];
        for r in [5i64, 8] {
            let a = (4 - 8 * r).rem_euclid(13);
            let ap = euler_elliptic_q(&[0, a, 0, 1], 2, 13).unwrap();
            expect = poly_mul(&expect, &[1, -ap, 13]);
        }
        assert_eq!(lf, expect);
        // p = 3 is inert: a single factor in T² with |a| ≤ 2·9
        let lf = euler_elliptic_qi(a4, a6, 3, 4).unwrap();
        assert_eq!((lf[1], lf[3], lf[4]), (0, 0, 9));
        assert!(lf[2].abs() <= 18);
    }

    #[test]
    fn genus_two_factor_is_palindromic_up_to_p() {
        let f = [0, -1, 0, 0, 1, 1];
        for p in [3u64, 5, 7, 11] {
            let lf = euler_genus2(&f, p, 4).unwrap();
            assert_eq!(lf[3], p as i64 * lf[1]);
            assert_eq!(lf[4], (p * p) as i64);
            // |c₁| ≤ 4√p
            assert!((lf[1] * lf[1]) as u64 <= 16 * p);
        }
        assert!(euler_genus2(&f, 283, 4).is_err());
    }

    #[test]
    fn twist_flips_odd_coefficients() {
        let base = CoeffSource::EllipticQ {
            f: vec![0, -1, 1, 1],
            y_power: 2,
        };
        let tw = CoeffSource::Twist {
            base: Box::new(base.clone()),
            d: -3,
        };
        // χ₋₃(7) = 1, χ₋₃(11) = −1
        assert_eq!(tw.local_factor(7, 2).unwrap(), base.local_factor(7, 2).unwrap());
        let b = base.local_factor(11, 2).unwrap();
        assert_eq!(tw.local_factor(11, 2).unwrap(), vec![1, -b[1], b[2]]);
        assert!(matches!(tw.local_factor(3, 2), Err(Error::BadPrime(3))));
    }
}
