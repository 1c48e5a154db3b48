use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::unity::{is_all_roots_of_unity, UnityCertificate, DEFAULT_MAX_ORDER};
use super::CurveSpec;
use crate::poly::{IntPoly, SturmChain};
use crate::scalar::Real;

const SAMPLES: usize = 1 << 12;

#[derive(Debug, Clone, Serialize)]
pub struct ConditionI {
    pub passed: bool,
    pub certificate: Option<UnityCertificate>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalPoint {
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionIII {
    pub passed: bool,
    /// Distinct roots of f − 1 in [0,1); zero means f < 1 there.
    pub roots_f_minus_one: usize,
    /// Distinct roots of f + 1 in [0,1); zero means f > −1 there.
    pub roots_f_plus_one: usize,
    pub f_at_one: String,
    pub critical_points: Vec<CriticalPoint>,
    pub sample_max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionIV {
    pub passed: bool,
    pub roots_in_unit_interval: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionV {
    pub passed: bool,
    /// Coefficient of T in f; (−1)^{n−1}λ₁⋯λ_n equals its negative.
    pub linear_coefficient: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub passed: bool,
    pub roots_of_unity: ConditionI,
    pub real_coefficients: bool,
    pub bounded: ConditionIII,
    pub unique_unit_root: ConditionIV,
    pub product_sign: ConditionV,
}

impl HypothesisReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.roots_of_unity.passed {
            out.push(format!(
                "(i) {}",
                self.roots_of_unity
                    .failure
                    .as_deref()
                    .unwrap_or("roots of Phi are not all roots of unity")
            ));
        }
        if !self.real_coefficients {
            out.push("(ii) f has non-real coefficients".into());
        }
        if !self.bounded.passed {
            out.push("(iii) |f| < 1 on [0,1) with f(1) > 0 fails".into());
        }
        if !self.unique_unit_root.passed {
            out.push(format!(
                "(iv) {} roots of f in (0,1)",
                self.unique_unit_root.roots_in_unit_interval
            ));
        }
        if !self.product_sign.passed {
            out.push("(v) (-1)^(n-1) * product of roots is not positive".into());
        }
        out
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn eval_f64(f: &IntPoly, t: f64) -> f64 {
    f.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
}

/// Critical points of f in the open interval (a, b) with their values.
fn critical_points(f: &IntPoly, a: &BigRational, b: &BigRational) -> Vec<CriticalPoint> {
    let df = f.derivative();
    if df.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let chain = SturmChain::new(&df);
    let rf = f.to_rational();
    chain
        .isolate(a, b, 48)
        .into_iter()
        .map(|(lo, hi)| {
            let mid = (lo + hi) / ratio(2, 1);
            let value = rf.eval(&mid).to_f64().unwrap_or(f64::NAN);
            CriticalPoint {
                t: mid.to_f64().unwrap_or(f64::NAN),
                value,
            }
        })
        .collect()
}

/// sup |f| over [a, b], from endpoint values and isolated critical points.
pub fn sup_abs_on(f: &IntPoly, a: &BigRational, b: &BigRational) -> f64 {
    let rf = f.to_rational();
    let ends = [rf.eval(a), rf.eval(b)]
        .iter()
        .map(|v| v.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0f64, f64::max);
    critical_points(f, a, b)
        .iter()
        .map(|c| c.value.abs())
        .fold(ends, f64::max)
}

/// Evaluates conditions (i)–(v) of the hypothesis block for the curve.
pub fn check_assumptions<R: Real>(curve: &CurveSpec<R>) -> HypothesisReport {
    let f = &curve.f;
    let one = IntPoly::constant(BigInt::one());
    let zero_q = BigRational::zero();
    let one_q = BigRational::one();

    let roots_of_unity = match is_all_roots_of_unity(&curve.phi(), DEFAULT_MAX_ORDER) {
        Ok(c) => ConditionI {
            passed: c.exact_division,
            certificate: Some(c),
            failure: None,
        },
        Err(e) => ConditionI {
            passed: false,
            certificate: None,
            failure: Some(e.to_string()),
        },
    };

    let count = |p: &IntPoly| SturmChain::new(p).count_half_open(&zero_q, &one_q);
    let roots_f_minus_one = count(&f.sub(&one));
    let roots_f_plus_one = count(&f.add(&one));
    let f_one: BigInt = f.eval(&BigInt::one());
    let sample_max = (0..SAMPLES)
        .map(|k| eval_f64(f, k as f64 / SAMPLES as f64).abs())
        .fold(0.0f64, f64::max);
    let bounded = ConditionIII {
        passed: roots_f_minus_one == 0 && roots_f_plus_one == 0 && f_one.is_positive(),
        roots_f_minus_one,
        roots_f_plus_one,
        f_at_one: f_one.to_string(),
        critical_points: critical_points(f, &zero_q, &one_q),
        sample_max,
        samples: SAMPLES,
    };

    let in_unit = {
        let g = IntPoly::new(f.coeffs().get(1..).unwrap_or(&[]).to_vec());
        SturmChain::new(&g).count_open(&zero_q, &one_q)
    };
    let unique_unit_root = ConditionIV {
        passed: in_unit == 1,
        roots_in_unit_interval: in_unit,
    };

    let c1 = f.coeff(1);
    let product_sign = ConditionV {
        passed: c1.is_negative(),
        linear_coefficient: c1.to_string(),
    };

    let passed = roots_of_unity.passed && bounded.passed && unique_unit_root.passed && product_sign.passed;
    HypothesisReport {
        passed,
        roots_of_unity,
        real_coefficients: true,
        bounded,
        unique_unit_root,
        product_sign,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvespec::{build_curve, preset, Family};
    use crate::scalar::PrecisionContext;

    #[test]
    fn ex1_n3_passes() {
        let ctx = PrecisionContext::new(64);
        let c = build_curve::<f64>(2, &preset(Family::Ex1, 3, 0).unwrap(), &ctx).unwrap();
        let r = check_assumptions(&c);
        assert!(r.passed, "{:?}", r.failures());
        assert!(r.bounded.sample_max < 1.0);
    }

    #[test]
    fn ex2_critical_point_is_the_side_condition() {
        let ctx = PrecisionContext::new(64);
        let c = build_curve::<f64>(2, &preset(Family::Ex2, 3, 1).unwrap(), &ctx).unwrap();
        let r = check_assumptions(&c);
        assert!(r.passed, "{:?}", r.failures());
        // interior critical point of f at 1 − 2l/(n+1) = 1/2
        let cp = r
            .bounded
            .critical_points
            .iter()
            .find(|c| (c.t - 0.5).abs() < 1e-9)
            .unwrap();
        assert!(cp.value.abs() < 1.0);
    }

    #[test]
    fn sup_on_subinterval() {
        // f = T^4 + T^3 − T has f' = 4T^3 + 3T^2 − 1 with root near 0.4554
        let f = preset(Family::Ex1, 3, 0).unwrap();
        let m = sup_abs_on(&f, &ratio(0, 1), &ratio(3, 4));
        let t: f64 = 0.455_410_041_101_028_45;
        let v = (t.powi(4) + t.powi(3) - t).abs();
        assert!((m - v).abs() < 1e-12);
    }
}
