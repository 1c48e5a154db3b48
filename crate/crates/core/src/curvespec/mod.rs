//! Superelliptic curves Y^N = f(X) with f = X·∏(X − λ_i): construction,
//! hypothesis certificates, genus and the two example families.

mod hypothesis;
pub mod roots;
mod unity;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

pub use hypothesis::{
    check_assumptions, sup_abs_on, ConditionI, ConditionIII, ConditionIV, ConditionV, CriticalPoint, HypothesisReport,
};
pub use unity::{cyclotomic, is_all_roots_of_unity, UnityCertificate, DEFAULT_MAX_ORDER};

use crate::error::{Error, Result};
use crate::hiprec::Complex;
use crate::poly::{IntPoly, SturmChain};
use crate::scalar::{PrecisionContext, Real};

/// Curve data. `lambdas` lists the nonzero roots of f: real roots ascending,
/// then conjugate pairs (upper half-plane member first), and the root in (0,1),
/// when there is exactly one, moved to the end.
#[derive(Debug, Clone)]
pub struct CurveSpec<R> {
    pub big_n: u32,
    pub f: IntPoly,
    pub lambdas: Vec<Complex<R>>,
    /// Whether each λ is exactly real (certified by a Sturm count).
    pub is_real: Vec<bool>,
    /// True when the last λ is the unique root in (0,1).
    pub has_unit_root: bool,
    pub ctx: PrecisionContext,
    pub certificate: Option<HypothesisReport>,
}

impl<R: Real> CurveSpec<R> {
    /// Number of nonzero branch points.
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// λ_n, the root in (0,1).
    pub fn lambda_n(&self) -> Result<R> {
        if !self.has_unit_root {
            return Err(Error::NoRealRootInUnitInterval(0));
        }
        Ok(self.lambdas[self.n() - 1].re.clone())
    }

    /// Φ = f − 1.
    pub fn phi(&self) -> IntPoly {
        self.f.sub(&IntPoly::constant(BigInt::one()))
    }

    pub fn genus(&self) -> Result<u64> {
        genus(self.big_n as u64, self.n() as u64)
    }

    /// Real roots of f (including 0), ascending.
    pub fn real_roots(&self) -> Vec<R> {
        let mut out = vec![R::zero(&self.ctx)];
        for (z, &r) in self.lambdas.iter().zip(&self.is_real) {
            if r {
                out.push(z.re.clone());
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
        out
    }

    /// Attach the hypothesis report.
    pub fn certify(mut self) -> Self {
        self.certificate = Some(check_assumptions(&self));
        self
    }

    /// Fails unless the attached certificate passes.
    pub fn require_certificate(&self) -> Result<&HypothesisReport> {
        match &self.certificate {
            Some(c) if c.passed => Ok(c),
            Some(c) => Err(Error::Hypothesis(c.failures().join("; "))),
            None => Err(Error::Hypothesis("curve has not been certified".into())),
        }
    }
}

/// Builds the curve, failing when several roots of f lie in (0,1).
pub fn build_curve<R: Real>(big_n: u32, f: &IntPoly, ctx: &PrecisionContext) -> Result<CurveSpec<R>> {
    build(big_n, f, ctx, false)
}

/// As [`build_curve`], but also fails when no root lies in (0,1).
pub fn build_curve_strict<R: Real>(big_n: u32, f: &IntPoly, ctx: &PrecisionContext) -> Result<CurveSpec<R>> {
    build(big_n, f, ctx, true)
}

fn build<R: Real>(big_n: u32, f: &IntPoly, ctx: &PrecisionContext, strict: bool) -> Result<CurveSpec<R>> {
    if big_n < 2 {
        return Err(Error::Param("N must be at least 2".into()));
    }
    let deg = f.degree().unwrap_or(0);
    if deg < 2 {
        return Err(Error::Param("f must have degree at least 2".into()));
    }
    if !f.is_monic() {
        return Err(Error::Param("f must be monic".into()));
    }
    if !f.coeff(0).is_zero() {
        return Err(Error::Param("f(0) must be 0".into()));
    }
    let g = IntPoly::new(f.coeffs()[1..].to_vec());
    if g.coeff(0).is_zero() {
        return Err(Error::RepeatedRoot);
    }
    if g.squarefree().degree() != g.degree() {
        return Err(Error::RepeatedRoot);
    }

    let sturm = SturmChain::new(&g);
    let n_real = sturm.count_real();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let in_unit = sturm.count_open(&zero, &one);
    if in_unit > 1 {
        return Err(Error::Hypothesis(format!(
            "{in_unit} roots of f in (0,1); the ordering needs exactly one"
        )));
    }
    if strict && in_unit == 0 {
        return Err(Error::NoRealRootInUnitInterval(0));
    }

    let mut approx = roots::aberth(&g)?;
    approx.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).expect("finite"));
    let (real_part, complex_part) = approx.split_at(n_real);

    let mut reals: Vec<Complex<f64>> = real_part.iter().map(|z| Complex::new(z.re, 0.0)).collect();
    reals.sort_by(|a, b| a.re.partial_cmp(&b.re).expect("finite"));
    let mut uppers: Vec<Complex<f64>> = complex_part.iter().filter(|z| z.im > 0.0).cloned().collect();
    if uppers.len() * 2 != complex_part.len() {
        return Err(Error::NoConvergence("complex roots do not pair up".into()));
    }
    uppers.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite"));

    let mut lambdas = Vec::with_capacity(deg - 1);
    let mut is_real = Vec::with_capacity(deg - 1);
    let mut unit: Option<Complex<R>> = None;
    for z in &reals {
        let mut w: Complex<R> = roots::polish(&g, z, ctx)?;
        w.im = R::zero(ctx);
        if in_unit == 1 && z.re > 0.0 && z.re < 1.0 && unit.is_none() {
            unit = Some(w);
        } else {
            lambdas.push(w);
            is_real.push(true);
        }
    }
    for z in &uppers {
        let w: Complex<R> = roots::polish(&g, z, ctx)?;
        if !(w.im.to_f64() > 0.0) {
            return Err(Error::NoConvergence("complex root collapsed onto the real axis".into()));
        }
        lambdas.push(w.clone());
        lambdas.push(w.conj());
        is_real.extend([false, false]);
    }
    let has_unit_root = unit.is_some();
    if in_unit == 1 && !has_unit_root {
        return Err(Error::NoConvergence("root in (0,1) not located numerically".into()));
    }
    if let Some(u) = unit {
        lambdas.push(u);
        is_real.push(true);
    }
    distinct_check(&lambdas)?;
    Ok(CurveSpec {
        big_n,
        f: f.clone(),
        lambdas,
        is_real,
        has_unit_root,
        ctx: *ctx,
        certificate: None,
    })
}

fn distinct_check<R: Real>(z: &[Complex<R>]) -> Result<()> {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if (z[i].clone() - &z[j]).abs().to_f64() < 1e-12 {
                return Err(Error::NoConvergence("two polished roots coincide".into()));
            }
        }
    }
    Ok(())
}

/// g = ((N−1)n − (gcd(N, n+1) − 1)) / 2 by Riemann–Hurwitz.
pub fn genus(big_n: u64, n: u64) -> Result<u64> {
    if big_n < 2 || n < 1 {
        return Err(Error::Param("genus needs N >= 2 and n >= 1".into()));
    }
    let num = (big_n - 1) * n + 1 - big_n.gcd(&(n + 1));
    if !num.is_multiple_of(2) {
        return Err(Error::Parity(big_n, n));
    }
    Ok(num / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ex1,
    Ex2,
}

/// f for the example families: X^{n+1} + X^n − X, or (X+1)^{n+1−l}(X−1)^l + 1.
pub fn preset(family: Family, n: u32, l: u32) -> Result<IntPoly> {
    if n < 1 {
        return Err(Error::Param("n must be at least 1".into()));
    }
    let n = n as usize;
    match family {
        Family::Ex1 => {
            let mut c = vec![BigInt::zero(); n + 2];
            c[n + 1] = BigInt::one();
            c[n] += BigInt::one();
            c[1] -= BigInt::one();
            Ok(IntPoly::new(c))
        }
        Family::Ex2 => {
            let l = l as usize;
            if l.is_multiple_of(2) || 2 * l > n {
                return Err(Error::Param(format!(
                    "ex2 needs l odd with 0 < l < (n+1)/2, got n={n}, l={l}"
                )));
            }
            let plus = IntPoly::from_i64(&[1, 1]).pow((n + 1 - l) as u32);
            let minus = IntPoly::from_i64(&[-1, 1]).pow(l as u32);
            Ok(plus.mul(&minus).add(&IntPoly::constant(BigInt::one())))
        }
    }
}

/// Parsed curve description.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveInput {
    pub big_n: u32,
    pub f: IntPoly,
}

impl CurveInput {
    /// Accepts `{"N": int, "f": [c0, ...]}` or
    /// `{"preset": {"family": "ex1"|"ex2", "n": int, "l": int}, "N": int}`
    /// (N defaults to 2 for presets). Coefficients may be JSON strings.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("curve JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("curve: expected a JSON object".into()))?;
        let big_n = match obj.get("N") {
            Some(x) => x
                .as_u64()
                .filter(|&n| n >= 2 && n <= u32::MAX as u64)
                .ok_or_else(|| Error::Parse("curve.N: expected an integer >= 2".into()))? as u32,
            None if obj.contains_key("preset") => 2,
            None => return Err(Error::Parse("curve.N: missing".into())),
        };
        if let Some(p) = obj.get("preset") {
            let family: Family = serde_json::from_value(
                p.get("family")
                    .cloned()
                    .ok_or_else(|| Error::Parse("curve.preset.family: missing".into()))?,
            )
            .map_err(|_| Error::Parse("curve.preset.family: expected \"ex1\" or \"ex2\"".into()))?;
            let n = p
                .get("n")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::Parse("curve.preset.n: expected a positive integer".into()))?;
            let l = match p.get("l") {
                Some(x) => x
                    .as_u64()
                    .ok_or_else(|| Error::Parse("curve.preset.l: expected an integer".into()))?,
                None if family == Family::Ex1 => 0,
                None => return Err(Error::Parse("curve.preset.l: missing".into())),
            };
            return Ok(Self {
                big_n,
                f: preset(family, n as u32, l as u32)?,
            });
        }
        let coeffs = obj
            .get("f")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("curve.f: expected an array of integers".into()))?;
        let mut c = Vec::with_capacity(coeffs.len());
        for (i, x) in coeffs.iter().enumerate() {
            c.push(parse_int(x).ok_or_else(|| Error::Parse(format!("curve.f[{i}]: expected an integer")))?);
        }
        Ok(Self {
            big_n,
            f: IntPoly::new(c),
        })
    }

    pub fn build<R: Real>(&self, ctx: &PrecisionContext) -> Result<CurveSpec<R>> {
        build_curve(self.big_n, &self.f, ctx)
    }
}

/// An arbitrary-size integer given as a JSON number or decimal string.
pub fn parse_int(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}
