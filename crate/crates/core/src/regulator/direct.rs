//! r_D({f,g})(γ − γ̄) by integrating the real 1-form
//! η(f,g) = log|f| d arg g − log|g| d arg f along the path and its conjugate.

use std::fmt;

use crate::curvespec::CurveSpec;
use crate::error::{Error, Result};
use crate::hiprec::{tanh_sinh, Abscissa, Complex, QuadOptions};
use crate::scalar::{PrecisionContext, Real};

use super::expr::{eta, Dual, Expr};

/// Base paths. `Delta` runs over t ∈ [0, λ_n]; `DeltaPrime` over t ∈ (−∞, λ₁]
/// with λ₁ the smallest real root, parametrized by t = −1/u.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseCycle {
    Delta,
    DeltaPrime,
}

/// (X, Y) ↦ (x(X,Y), y(X,Y)).
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    pub x: Expr,
    pub y: Expr,
}

impl Automorphism {
    pub fn parse(x: &str, y: &str) -> Result<Self> {
        Ok(Self {
            x: Expr::parse(x)?,
            y: Expr::parse(y)?,
        })
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            x: self.x.substitute(&other.x, &other.y),
            y: self.y.substitute(&other.x, &other.y),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleTerm {
    pub coeff: i64,
    pub base: BaseCycle,
    pub auto: Option<Automorphism>,
}

/// Integer combination of pushforwards of the base cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleSpec {
    pub name: String,
    pub terms: Vec<CycleTerm>,
}

/// The order-4 automorphism of Y^4 = X^3 + X^2 − X.
pub fn sigma() -> Automorphism {
    Automorphism::parse("-1/X", "Y/X").expect("static expression")
}

impl CycleSpec {
    pub fn base(name: &str, base: BaseCycle) -> Self {
        Self {
            name: name.into(),
            terms: vec![CycleTerm {
                coeff: 1,
                base,
                auto: None,
            }],
        }
    }

    /// delta, delta-prime, sigma-delta, sigma2-delta, zeta-delta.
    pub fn named(name: &str) -> Result<Self> {
        let pushed = |auto: Automorphism| Self {
            name: name.into(),
            terms: vec![CycleTerm {
                coeff: 1,
                base: BaseCycle::Delta,
                auto: Some(auto),
            }],
        };
        Ok(match name {
            "delta" => Self::base(name, BaseCycle::Delta),
            "delta-prime" => Self::base(name, BaseCycle::DeltaPrime),
            "sigma-delta" => pushed(sigma()),
            "sigma2-delta" => pushed(sigma().compose(&sigma())),
            "zeta-delta" => Self {
                name: name.into(),
                terms: vec![
                    CycleTerm {
                        coeff: 1,
                        base: BaseCycle::Delta,
                        auto: Some(Automorphism::parse("X", "zeta(3)*Y")?),
                    },
                    CycleTerm {
                        coeff: -1,
                        base: BaseCycle::Delta,
                        auto: Some(Automorphism::parse("X", "zeta(3)^2*Y")?),
                    },
                ],
            },
            other => return Err(Error::Parse(format!("unknown cycle '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTerm {
    pub coeff: i64,
    pub f: Expr,
    pub g: Expr,
}

/// Integer combination of symbols {f, g}.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    pub name: String,
    pub terms: Vec<SymbolTerm>,
}

impl fmt::Display for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.coeff) {
                (0, 1) => {}
                (0, -1) => write!(f, "-")?,
                (_, 1) => write!(f, " + ")?,
                (_, -1) => write!(f, " - ")?,
                (_, c) if c < 0 => write!(f, " - {}", -c)?,
                (0, c) => write!(f, "{c}")?,
                (_, c) => write!(f, " + {c}")?,
            }
            write!(f, "{{{}, {}}}", t.f, t.g)?;
        }
        Ok(())
    }
}

impl SymbolSpec {
    pub fn single(name: &str, f: &str, g: &str) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            terms: vec![SymbolTerm {
                coeff: 1,
                f: Expr::parse(f)?,
                g: Expr::parse(g)?,
            }],
        })
    }

    /// Named symbols (xi, xi2, sigma-xi, sigma2-xi, zeta-xi) or a literal such
    /// as "{1-Y,X} - 2{1+Y,X}".
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "xi" => Self::single(name, "1-Y", "X"),
            "xi2" => Self::single(name, "Y-X^2", "X"),
            "sigma-xi" => Ok(Self::single("xi", "1-Y", "X")?.pullback(&sigma(), name)),
            "sigma2-xi" => Ok(Self::single("xi", "1-Y", "X")?.pullback(&sigma().compose(&sigma()), name)),
            "zeta-xi" => {
                let mut s = Self::single(name, "1-zeta(3)*Y", "X")?;
                s.terms.push(SymbolTerm {
                    coeff: -1,
                    f: Expr::parse("1-zeta(3)^2*Y")?,
                    g: Expr::parse("X")?,
                });
                Ok(s)
            }
            lit if lit.contains('{') => Self::parse_literal(lit),
            other => Err(Error::Parse(format!("unknown symbol '{other}'"))),
        }
    }

    pub fn parse_literal(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest
                .find('{')
                .ok_or_else(|| Error::Parse(format!("expected '{{' in symbol '{s}'")))?;
            let head: String = rest[..open].chars().filter(|c| !c.is_whitespace()).collect();
            let coeff = match head.as_str() {
                "" | "+" => 1,
                "-" => -1,
                h => {
                    let h = h.trim_end_matches('*');
                    h.parse::<i64>()
                        .or_else(|_| h.replace('+', "").parse::<i64>())
                        .map_err(|_| Error::Parse(format!("bad coefficient '{h}' in symbol '{s}'")))?
                }
            };
            if !terms.is_empty() && !head.starts_with(['+', '-']) {
                return Err(Error::Parse(format!("missing sign between terms in symbol '{s}'")));
            }
            let close = rest[open..]
                .find('}')
                .ok_or_else(|| Error::Parse(format!("missing '}}' in symbol '{s}'")))?
                + open;
            let body = &rest[open + 1..close];
            let (f, g) =
                split_top_comma(body).ok_or_else(|| Error::Parse(format!("symbol needs {{f,g}}: '{body}'")))?;
            terms.push(SymbolTerm {
                coeff,
                f: Expr::parse(f)?,
                g: Expr::parse(g)?,
            });
            rest = rest[close + 1..].trim();
        }
        if terms.is_empty() {
            return Err(Error::Parse("empty symbol".into()));
        }
        Ok(Self { name: s.into(), terms })
    }

    /// φ*ξ, by substituting φ into every entry.
    pub fn pullback(&self, phi: &Automorphism, name: &str) -> Self {
        Self {
            name: name.into(),
            terms: self
                .terms
                .iter()
                .map(|t| SymbolTerm {
                    coeff: t.coeff,
                    f: t.f.substitute(&phi.x, &phi.y),
                    g: t.g.substitute(&phi.x, &phi.y),
                })
                .collect(),
        }
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

#[derive(Debug, Clone, Copy)]
pub struct DirectOptions {
    /// Equal panels the parameter interval is split into.
    pub panels: usize,
    pub quad: QuadOptions,
}

impl Default for DirectOptions {
    fn default() -> Self {
        Self {
            panels: 1,
            quad: QuadOptions {
                max_level: 16,
                ..QuadOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct DirectResult<R> {
    pub values: Vec<R>,
    pub evaluations: usize,
}

/// Offset of the path point from one root of f.
enum Offset<R> {
    Real(R),
    Pair(Complex<R>),
}

struct Path<R> {
    big_n: u32,
    base: BaseCycle,
    /// λ_n for δ, −1/λ₁ for δ′.
    scale: R,
    /// Index into `real` of the root met at the far end.
    end_root: usize,
    zero_root: usize,
    real: Vec<R>,
    complex: Vec<Complex<R>>,
}

impl<R: Real> Path<R> {
    fn new(curve: &CurveSpec<R>, base: BaseCycle, ctx: &PrecisionContext) -> Result<Self> {
        let real: Vec<R> = curve.real_roots().iter().map(|r| r.to_ctx(ctx)).collect();
        let complex: Vec<Complex<R>> = curve
            .lambdas
            .iter()
            .zip(&curve.is_real)
            .filter(|(_, r)| !**r)
            .map(|(z, _)| z.to_ctx(ctx))
            .collect();
        let zero_root = real.iter().position(|r| r.is_zero()).expect("0 is a root of f");
        let (scale, end_root) = match base {
            BaseCycle::Delta => {
                let ln = curve.lambda_n()?.to_ctx(ctx);
                let idx = real
                    .iter()
                    .position(|r| *r == ln)
                    .ok_or_else(|| Error::Param("lambda_n missing from the real roots".into()))?;
                (ln, idx)
            }
            BaseCycle::DeltaPrime => {
                if !real[0].is_negative() {
                    return Err(Error::Param("delta-prime needs a negative real root of f".into()));
                }
                (-(real[0].like(1.0) / &real[0]), 0)
            }
        };
        Ok(Self {
            big_n: curve.big_n,
            base,
            scale,
            end_root,
            zero_root,
            real,
            complex,
        })
    }

    /// (X, Y) on γ at path parameter s, or None where f ≥ 0 (there γ = γ̄).
    fn point(&self, s: &Abscissa<R>, ctx: &PrecisionContext) -> Option<(Dual<R>, Dual<R>)> {
        let (t, dt, offsets) = match self.base {
            BaseCycle::Delta => {
                let t = self.scale.clone() * &s.x;
                let offs: Vec<Offset<R>> = self
                    .real
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        Offset::Real(if i == self.zero_root {
                            self.scale.clone() * &s.from_left
                        } else if i == self.end_root {
                            -(self.scale.clone() * &s.from_right)
                        } else {
                            t.clone() - r
                        })
                    })
                    .chain(
                        self.complex
                            .iter()
                            .map(|z| Offset::Pair(Complex::from_real(t.clone()) - z)),
                    )
                    .collect();
                (t, self.scale.clone(), offs)
            }
            BaseCycle::DeltaPrime => {
                let u = self.scale.clone() * &s.x;
                let t = -(u.like(1.0) / &u);
                let dt = self.scale.clone() / u.square();
                let offs: Vec<Offset<R>> = self
                    .real
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        Offset::Real(if i == self.zero_root {
                            t.clone()
                        } else if i == self.end_root {
                            -(s.from_right.clone() / &u)
                        } else {
                            t.clone() - r
                        })
                    })
                    .chain(
                        self.complex
                            .iter()
                            .map(|z| Offset::Pair(Complex::from_real(t.clone()) - z)),
                    )
                    .collect();
                (t, dt, offs)
            }
        };
        let mut log_abs = R::zero(ctx);
        let mut negative = false;
        let mut dlog = R::zero(ctx);
        for o in &offsets {
            match o {
                Offset::Real(d) => {
                    if d.is_zero() {
                        return None;
                    }
                    negative ^= d.is_negative();
                    log_abs += d.abs().ln();
                    dlog += dt.clone() / d;
                }
                Offset::Pair(z) => {
                    log_abs += z.abs().ln();
                    dlog += (Complex::from_real(dt.clone()) / z).re;
                }
            }
        }
        if !negative {
            return None;
        }
        let n = self.big_n as f64;
        let y = Complex::root_of_unity(1, 2 * self.big_n as i64, ctx).scale(&(log_abs / n).exp());
        let dy = y.scale(&(dlog / n));
        Some((
            Dual::new(Complex::from_real(t), Complex::from_real(dt)),
            Dual::new(y, dy),
        ))
    }
}

fn eta_or_zero<R: Real>(f: &Expr, g: &Expr, x: &Dual<R>, y: &Dual<R>, ctx: &PrecisionContext) -> Result<R> {
    let fv = f.eval(x, y, ctx)?;
    let gv = g.eval(x, y, ctx)?;
    if fv.v.is_zero() || gv.v.is_zero() {
        return Ok(R::zero(ctx));
    }
    Ok(eta(&fv, &gv))
}

/// ∫ over one base path of η(f_j, g_j) on γ − γ̄, divided by 2π, for each pair.
pub fn integrate_pairs<R: Real>(
    curve: &CurveSpec<R>,
    base: BaseCycle,
    pairs: &[(Expr, Expr)],
    opts: &DirectOptions,
    ctx: &PrecisionContext,
) -> Result<DirectResult<R>> {
    if pairs.is_empty() {
        return Ok(DirectResult {
            values: Vec::new(),
            evaluations: 0,
        });
    }
    if opts.panels == 0 {
        return Err(Error::Param("at least one panel is needed".into()));
    }
    let inner = ctx.with_extra_bits(32);
    let path = Path::new(curve, base, &inner)?;
    let panels = opts.panels;
    let width = R::from_ratio(1, panels as i64, &inner);
    let mut totals = vec![R::zero(&inner); pairs.len()];
    let mut evaluations = 0;
    for p in 0..panels {
        let a = R::from_ratio(p as i64, panels as i64, &inner);
        let b_right = R::from_ratio((panels - p - 1) as i64, panels as i64, &inner);
        let integrand = |u: &Abscissa<R>| -> Result<Vec<Complex<R>>> {
            let fl = width.clone() * &u.from_left;
            let fr = width.clone() * &u.from_right;
            let s = Abscissa {
                x: a.clone() + &fl,
                from_left: a.clone() + &fl,
                from_right: b_right.clone() + &fr,
            };
            let Some((x, y)) = path.point(&s, &inner) else {
                return Ok(vec![Complex::zero(&inner); pairs.len()]);
            };
            let yb = Dual::new(y.v.conj(), y.d.conj());
            pairs
                .iter()
                .map(|(f, g)| {
                    let up = eta_or_zero(f, g, &x, &y, &inner)?;
                    let down = eta_or_zero(f, g, &x, &yb, &inner)?;
                    Ok(Complex::from_real(up - down))
                })
                .collect()
        };
        let r = tanh_sinh(integrand, &opts.quad, &inner)?;
        evaluations += r.evaluations;
        for (tot, v) in totals.iter_mut().zip(r.value) {
            *tot += v.re * &width;
        }
    }
    let two_pi = R::pi(&inner) * 2.0;
    Ok(DirectResult {
        values: totals.into_iter().map(|v| (v / &two_pi).to_ctx(ctx)).collect(),
        evaluations,
    })
}

/// r_D(symbol)(cycle) for several symbols against one cycle.
pub fn reg_direct_many<R: Real>(
    curve: &CurveSpec<R>,
    symbols: &[SymbolSpec],
    cycle: &CycleSpec,
    opts: &DirectOptions,
    ctx: &PrecisionContext,
) -> Result<Vec<R>> {
    let mut out = vec![R::zero(ctx); symbols.len()];
    for base in [BaseCycle::Delta, BaseCycle::DeltaPrime] {
        // (weight, symbol index, pulled-back pair)
        let mut pairs = Vec::new();
        let mut meta = Vec::new();
        for ct in cycle.terms.iter().filter(|c| c.base == base) {
            for (si, s) in symbols.iter().enumerate() {
                let pulled = match &ct.auto {
                    Some(a) => s.pullback(a, &s.name),
                    None => s.clone(),
                };
                for st in pulled.terms {
                    meta.push((ct.coeff * st.coeff, si));
                    pairs.push((st.f, st.g));
                }
            }
        }
        if pairs.is_empty() {
            continue;
        }
        let r = integrate_pairs(curve, base, &pairs, opts, ctx)?;
        for ((w, si), v) in meta.into_iter().zip(r.values) {
            out[si] += v * (w as f64);
        }
    }
    Ok(out)
}

pub fn reg_direct<R: Real>(
    curve: &CurveSpec<R>,
    symbol: &SymbolSpec,
    cycle: &CycleSpec,
    ctx: &PrecisionContext,
) -> Result<R> {
    let v = reg_direct_many(
        curve,
        std::slice::from_ref(symbol),
        cycle,
        &DirectOptions::default(),
        ctx,
    )?;
    Ok(v.into_iter().next().expect("one symbol"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvespec::{build_curve, preset, Family};
    use crate::regulator::reg_series;
    use rug::Float;

    fn curve(big_n: u32, n: u32, ctx: &PrecisionContext) -> CurveSpec<Float> {
        build_curve::<Float>(big_n, &preset(Family::Ex1, n, 0).unwrap(), ctx)
            .unwrap()
            .certify()
    }

    fn diff(a: &Float, b: &str, ctx: &PrecisionContext) -> f64 {
        let b = <Float as Real>::parse(b, ctx).unwrap();
        Real::abs(&(a.clone() - &b)).to_f64()
    }

    #[test]
    fn literal_symbols_parse() {
        let s = SymbolSpec::named("{1-Y,X} - 2{1+Y, X}").unwrap();
        assert_eq!(s.terms.len(), 2);
        assert_eq!(s.terms[1].coeff, -2);
        assert!(SymbolSpec::named("{1-Y}").is_err());
        assert!(SymbolSpec::named("{1-Y,X}{Y,X}").is_err());
        assert!(SymbolSpec::named("nope").is_err());
        assert!(CycleSpec::named("gamma").is_err());
    }

    #[test]
    fn sigma_has_order_four_and_preserves_the_curve() {
        let s = sigma();
        let s4 = s.compose(&s).compose(&s).compose(&s);
        let ctx = PrecisionContext::new(64);
        let x = Dual::new(Complex::new(0.37, 0.11), Complex::new(1.0, 0.0));
        let y = Dual::new(Complex::new(-0.2, 0.5), Complex::new(0.0, 1.0));
        let xv = s4.x.eval(&x, &y, &ctx).unwrap().v;
        let yv = s4.y.eval(&x, &y, &ctx).unwrap().v;
        assert!((xv - &x.v).abs() < 1e-14 && (yv - &y.v).abs() < 1e-14);
        // Y^4 − X^3 − X^2 + X is multiplied by X^{-4}
        let e = Expr::parse("Y^4 - X^3 - X^2 + X").unwrap();
        let sx = s.x.eval(&x, &y, &ctx).unwrap();
        let sy = s.y.eval(&x, &y, &ctx).unwrap();
        let lhs = e.eval(&sx, &sy, &ctx).unwrap().v;
        let rhs = e.eval(&x, &y, &ctx).unwrap().v / &x.v.powi(4);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn direct_matches_series_on_delta() {
        let ctx = PrecisionContext::for_digits(25);
        let c = curve(2, 3, &ctx);
        let d = reg_direct(
            &c,
            &SymbolSpec::named("xi").unwrap(),
            &CycleSpec::named("delta").unwrap(),
            &ctx,
        )
        .unwrap();
        let s = reg_series(&c, &ctx).unwrap();
        assert!(Real::abs(&(d - &s)).to_f64() < 1e-22);
    }

    #[test]
    fn genus_two_entries() {
        let ctx = PrecisionContext::for_digits(25);
        let c = curve(2, 4, &ctx);
        let syms = [SymbolSpec::named("xi").unwrap(), SymbolSpec::named("xi2").unwrap()];
        let dp = reg_direct_many(
            &c,
            &syms,
            &CycleSpec::named("delta-prime").unwrap(),
            &DirectOptions::default(),
            &ctx,
        )
        .unwrap();
        assert!(diff(&dp[0], "-0.25869891405241850202655302706581105434092244125967", &ctx) < 1e-22);
        assert!(diff(&dp[1], "-0.74910711218020537922324806983278156297750025766609", &ctx) < 1e-22);
    }

    #[test]
    fn panel_refinement_is_stable() {
        let ctx = PrecisionContext::for_digits(20);
        let c = curve(4, 2, &ctx);
        let syms = [SymbolSpec::named("xi").unwrap()];
        let cyc = CycleSpec::named("sigma-delta").unwrap();
        let one = reg_direct_many(&c, &syms, &cyc, &DirectOptions::default(), &ctx).unwrap();
        let opts = DirectOptions {
            panels: 3,
            ..DirectOptions::default()
        };
        let three = reg_direct_many(&c, &syms, &cyc, &opts, &ctx).unwrap();
        assert!(Real::abs(&(one[0].clone() - &three[0])).to_f64() < 1e-17);
    }
}
