//! Certificates that every root of an integer polynomial is a root of unity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::roots::aberth;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub const DEFAULT_MAX_ORDER: u64 = 512;

/// Tolerance on | |z| − 1 | for the numeric screening stage.
const CIRCLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnityCertificate {
    /// Order of each root, with multiplicity, ascending.
    pub orders: Vec<u64>,
    /// Exponents e_m with phi | ∏ (T^m − 1)^{e_m}.
    pub witness: Vec<(u64, u32)>,
    /// The exact quotient ∏ (T^m − 1)^{e_m} / phi has been computed with zero remainder.
    pub exact_division: bool,
}

/// The m-th cyclotomic polynomial, by exact division of T^m − 1.
pub fn cyclotomic(m: u64) -> IntPoly {
    let mut p = x_pow_minus_one(m);
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic factor");
        }
    }
    p
}

fn x_pow_minus_one(m: u64) -> IntPoly {
    IntPoly::monomial(BigInt::one(), m as usize).sub(&IntPoly::constant(BigInt::one()))
}

/// Smallest m ≤ max_order with θ ≈ j/m for some integer j.
fn detect_order(theta_turns: f64, max_order: u64) -> Option<u64> {
    let t = theta_turns.rem_euclid(1.0);
    (1..=max_order).find(|&m| {
        let x = t * m as f64;
        (x - x.round()).abs() < 1e-9
    })
}

/// Checks that every root of phi (monic, integer) is a root of unity.
///
/// Numerical screening on the square-free part finds candidate orders; the
/// verdict rests on exact cyclotomic divisibility.
pub fn is_all_roots_of_unity(phi: &IntPoly, max_order: u64) -> Result<UnityCertificate> {
    let sf = phi.squarefree();
    if sf.degree().unwrap_or(0) == 0 {
        return Err(Error::Param("polynomial has no roots".into()));
    }
    let mut candidates = BTreeMap::new();
    for z in aberth(&sf)? {
        let modulus = z.abs();
        if (modulus - 1.0).abs() > CIRCLE_TOL {
            return Err(Error::NotOnUnitCircle(format!(
                "root {:.6}{:+.6}i has modulus {modulus:.12}",
                z.re, z.im
            )));
        }
        let turns = z.im.atan2(z.re) / (2.0 * std::f64::consts::PI);
        let m = detect_order(turns, max_order).ok_or(Error::OrderBoundExceeded(max_order as u32))?;
        candidates.insert(m, ());
    }
    if !phi.is_monic() {
        return Err(Error::NotOnUnitCircle(
            "leading coefficient is not 1, so some root is not an algebraic integer".into(),
        ));
    }

    // multiplicity of each cyclotomic factor, exactly
    let mut rest = phi.clone();
    let mut orders = Vec::new();
    let mut witness = Vec::new();
    for &m in candidates.keys() {
        let cm = cyclotomic(m);
        let mut e = 0u32;
        while let Some(q) = rest.div_exact(&cm) {
            rest = q;
            e += 1;
        }
        if e == 0 {
            return Err(Error::OrderBoundExceeded(max_order as u32));
        }
        let phi_m = cm.degree().unwrap_or(0) * e as usize;
        orders.extend(std::iter::repeat_n(m, phi_m));
        witness.push((m, e));
    }
    if rest.degree() != Some(0) {
        return Err(Error::OrderBoundExceeded(max_order as u32));
    }

    let mut product = IntPoly::constant(BigInt::one());
    for &(m, e) in &witness {
        product = product.mul(&x_pow_minus_one(m).pow(e));
    }
    let exact_division = product.div_exact(phi).is_some();
    if !exact_division {
        return Err(Error::Hypothesis("exact divisibility witness failed".into()));
    }
    orders.sort_unstable();
    Ok(UnityCertificate {
        orders,
        witness,
        exact_division,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn repeated_factor() {
        let phi = IntPoly::from_i64(&[1, 1]).pow(2).mul(&IntPoly::from_i64(&[-1, 1]));
        let c = is_all_roots_of_unity(&phi, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(c.orders, vec![1, 2, 2]);
        assert_eq!(c.witness, vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn golden_ratio_is_rejected() {
        let phi = IntPoly::from_i64(&[-1, -1, 1]);
        assert!(matches!(
            is_all_roots_of_unity(&phi, DEFAULT_MAX_ORDER),
            Err(Error::NotOnUnitCircle(_))
        ));
    }

    #[test]
    fn order_bound() {
        assert!(matches!(
            is_all_roots_of_unity(&cyclotomic(7), 5),
            Err(Error::OrderBoundExceeded(5))
        ));
    }
}
