//! Regulator matrices for the genus-2, genus-3 and base-change examples.

use std::str::FromStr;

use crate::curvespec::{build_curve, preset, CurveSpec, Family};
use crate::error::{Error, Result};
use crate::scalar::{PrecisionContext, Real};

use super::direct::{reg_direct_many, CycleSpec, DirectOptions, SymbolSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixCase {
    /// Y^2 = X^5 + X^4 − X; symbols {1−Y,X}, {Y−X²,X}; cycles δ, δ′.
    E24,
    /// Y^4 = X^3 + X^2 − X; ξ, σ*ξ, (σ²)*ξ against δ, σ_*δ, (σ²)_*δ.
    E42,
    /// Y^3 = X^3 + X^2 − X over Q(ζ₃); ξ, (ζ−ζ̄)*ξ against δ, (ζ−ζ̄)_*δ.
    E32k,
}

impl FromStr for MatrixCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e24" => Ok(Self::E24),
            "e42" => Ok(Self::E42),
            "e32k" => Ok(Self::E32k),
            other => Err(Error::Param(format!("no regulator matrix for '{other}'"))),
        }
    }
}

impl MatrixCase {
    pub fn name(self) -> &'static str {
        match self {
            Self::E24 => "e24",
            Self::E42 => "e42",
            Self::E32k => "e32k",
        }
    }

    /// (N, n) of the ex1 curve.
    pub fn curve_params(self) -> (u32, u32) {
        match self {
            Self::E24 => (2, 4),
            Self::E42 => (4, 2),
            Self::E32k => (3, 2),
        }
    }

    pub fn curve<R: Real>(self, ctx: &PrecisionContext) -> Result<CurveSpec<R>> {
        let (big_n, n) = self.curve_params();
        Ok(build_curve(big_n, &preset(Family::Ex1, n, 0)?, ctx)?.certify())
    }

    pub fn symbol_names(self) -> &'static [&'static str] {
        match self {
            Self::E24 => &["xi", "xi2"],
            Self::E42 => &["xi", "sigma-xi", "sigma2-xi"],
            Self::E32k => &["xi", "zeta-xi"],
        }
    }

    pub fn cycle_names(self) -> &'static [&'static str] {
        match self {
            Self::E24 => &["delta", "delta-prime"],
            Self::E42 => &["delta", "sigma-delta", "sigma2-delta"],
            Self::E32k => &["delta", "zeta-delta"],
        }
    }
}

/// A consistency check between entries that must agree (or vanish).
#[derive(Debug, Clone)]
pub struct EntryCheck {
    pub label: String,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RegMatrix<R> {
    pub case: MatrixCase,
    pub symbols: Vec<String>,
    pub cycles: Vec<String>,
    /// entries[i][j] = r_D(symbol_i)(cycle_j).
    pub entries: Vec<Vec<R>>,
    /// For e32k, the matrix with the (ζ−ζ̄)/(ζ−ζ̄) entry divided by (ζ−ζ̄)² = −3.
    pub normalized: Option<Vec<Vec<R>>>,
    pub det_raw: R,
    /// |det| of the normalized matrix when there is one, else of the raw one.
    pub det: R,
    pub checks: Vec<EntryCheck>,
}

pub fn determinant<R: Real>(m: &[Vec<R>], ctx: &PrecisionContext) -> Result<R> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Param("determinant of a non-square matrix".into()));
    }
    Ok(match n {
        0 => R::one(ctx),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = R::zero(ctx);
            for j in 0..n {
                let minor: Vec<Vec<R>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].clone() * determinant(&minor, ctx)?;
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    })
}

fn gap<R: Real>(a: &R, b: &R) -> f64 {
    (a.clone() - b).abs().to_f64()
}

pub fn reg_matrix<R: Real>(case: MatrixCase, opts: &DirectOptions, ctx: &PrecisionContext) -> Result<RegMatrix<R>> {
    let curve: CurveSpec<R> = case.curve(ctx)?;
    let symbols: Vec<SymbolSpec> = case
        .symbol_names()
        .iter()
        .map(|s| SymbolSpec::named(s))
        .collect::<Result<_>>()?;
    let cycles: Vec<CycleSpec> = case
        .cycle_names()
        .iter()
        .map(|c| CycleSpec::named(c))
        .collect::<Result<_>>()?;
    let cols: Vec<Vec<R>> = cycles
        .iter()
        .map(|c| reg_direct_many(&curve, &symbols, c, opts, ctx))
        .collect::<Result<_>>()?;
    let entries: Vec<Vec<R>> = (0..symbols.len())
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();

    let mut checks = Vec::new();
    let mut normalized = None;
    match case {
        MatrixCase::E24 => {}
        MatrixCase::E42 => {
            // σ has order 4, so r((σ^i)*ξ)((σ^j)_*δ) depends only on i + j mod 4
            for s in 0..4 {
                let cells: Vec<&R> = (0..3)
                    .flat_map(|i| (0..3).map(move |j| (i, j)))
                    .filter(|(i, j)| (i + j) % 4 == s)
                    .map(|(i, j)| &entries[i][j])
                    .collect();
                let residual = cells.windows(2).map(|w| gap(w[0], w[1])).fold(0.0, f64::max);
                checks.push(EntryCheck {
                    label: format!("entries with i+j = {s} mod 4 agree"),
                    residual,
                });
            }
            // the pulled-back symbol in reduced form, against the pushforward cycle
            let reduced = SymbolSpec::single("sigma2-xi-reduced", "1+Y", "X")?;
            let lhs = reg_direct_many(&curve, &[reduced], &CycleSpec::named("delta")?, opts, ctx)?;
            checks.push(EntryCheck {
                label: "r({1+Y,X})(delta) = r(xi)(sigma2_* delta)".into(),
                residual: gap(&lhs[0], &entries[0][2]),
            });
        }
        MatrixCase::E32k => {
            checks.push(EntryCheck {
                label: "r(xi)((zeta - zeta bar)_* delta) = 0".into(),
                residual: entries[0][1].abs().to_f64(),
            });
            checks.push(EntryCheck {
                label: "r((zeta - zeta bar)^* xi)(delta) = 0".into(),
                residual: entries[1][0].abs().to_f64(),
            });
            let a0 = entries[0][0].clone();
            checks.push(EntryCheck {
                label: "raw (zeta - zeta bar) entry = -3 r(xi)(delta)".into(),
                residual: gap(&entries[1][1], &(a0 * -3.0)),
            });
            let mut m = entries.clone();
            m[1][1] = m[1][1].clone() / -3.0;
            normalized = Some(m);
        }
    }
    let det_raw = determinant(&entries, ctx)?;
    let det = match &normalized {
        Some(m) => determinant(m, ctx)?.abs(),
        None => det_raw.abs(),
    };
    Ok(RegMatrix {
        case,
        symbols: symbols.iter().map(|s| s.name.clone()).collect(),
        cycles: cycles.iter().map(|c| c.name.clone()).collect(),
        entries,
        normalized,
        det_raw,
        det,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn parse(s: &str, ctx: &PrecisionContext) -> Float {
        <Float as Real>::parse(s, ctx).unwrap()
    }

    #[test]
    fn small_determinants() {
        let ctx = PrecisionContext::new(64);
        let m = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]];
        assert!((determinant(&m, &ctx).unwrap() - 18.0).abs() < 1e-12);
        assert!(determinant(&[vec![1.0, 2.0]], &ctx).is_err());
    }

    #[test]
    fn genus_two_matrix() {
        let ctx = PrecisionContext::for_digits(22);
        let m = reg_matrix::<Float>(MatrixCase::E24, &DirectOptions::default(), &ctx).unwrap();
        let want = parse("0.44889338217039979100950815236832711055130985508762", &ctx);
        assert!(Real::abs(&(m.det.clone() - &want)).to_f64() < 1e-19);
        let d = parse("0.28090959342921653089311129619302051571945475691571", &ctx);
        assert!(Real::abs(&(m.entries[1][0].clone() - &d)).to_f64() < 1e-19);
    }

    #[test]
    fn base_change_structure() {
        let ctx = PrecisionContext::for_digits(20);
        let m = reg_matrix::<Float>(MatrixCase::E32k, &DirectOptions::default(), &ctx).unwrap();
        for c in &m.checks {
            assert!(c.residual < 1e-17, "{}: {}", c.label, c.residual);
        }
        let want = parse("0.53620021356228778605831812308182307487055561499420", &ctx);
        assert!(Real::abs(&(m.det.clone() - &want)).to_f64() < 1e-17);
    }
}
