//! Rational expressions in X and Y, evaluated with forward-mode derivatives.

use std::fmt;

use crate::error::{Error, Result};
use crate::hiprec::Complex;
use crate::scalar::{PrecisionContext, Real};

/// A complex value together with its derivative along the path parameter.
#[derive(Debug, Clone)]
pub struct Dual<R> {
    pub v: Complex<R>,
    pub d: Complex<R>,
}

impl<R: Real> Dual<R> {
    pub fn new(v: Complex<R>, d: Complex<R>) -> Self {
        Self { v, d }
    }

    pub fn constant(v: Complex<R>) -> Self {
        let d = v.like(0.0, 0.0);
        Self { v, d }
    }

    fn add(&self, o: &Self) -> Self {
        Self::new(self.v.clone() + &o.v, self.d.clone() + &o.d)
    }

    fn sub(&self, o: &Self) -> Self {
        Self::new(self.v.clone() - &o.v, self.d.clone() - &o.d)
    }

    fn mul(&self, o: &Self) -> Self {
        Self::new(self.v.clone() * &o.v, self.d.clone() * &o.v + self.v.clone() * &o.d)
    }

    fn div(&self, o: &Self) -> Result<Self> {
        if o.v.is_zero() {
            return Err(Error::SingularityOnPath("division by zero in a symbol".into()));
        }
        let q = self.v.clone() / &o.v;
        let d = (self.d.clone() - q.clone() * &o.d) / &o.v;
        Ok(Self::new(q, d))
    }

    fn neg(&self) -> Self {
        Self::new(-self.v.clone(), -self.d.clone())
    }

    fn powi(&self, k: i32) -> Result<Self> {
        if k < 0 {
            let one = Self::constant(self.v.like(1.0, 0.0));
            return one.div(&self.powi(-k)?);
        }
        if k == 0 {
            return Ok(Self::constant(self.v.like(1.0, 0.0)));
        }
        let vk1 = self.v.powi(k - 1);
        let d = vk1.clone() * &self.d * (k as f64);
        Ok(Self::new(vk1 * &self.v, d))
    }

    /// d log of the value: v'/v.
    pub fn dlog(&self) -> Complex<R> {
        self.d.clone() / &self.v
    }
}

/// log|F|·d arg G − log|G|·d arg F.
pub fn eta<R: Real>(f: &Dual<R>, g: &Dual<R>) -> R {
    let lf = f.v.abs().ln();
    let lg = g.v.abs().ln();
    lf * g.dlog().im - lg * f.dlog().im
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    X,
    Y,
    /// p/q
    Rational(i64, i64),
    I,
    /// e^{2πi/m}
    Zeta(u32),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn parse(s: &str) -> Result<Self> {
        let toks = lex(s)?;
        let mut p = Parser { toks, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in expression '{s}'")));
        }
        Ok(e)
    }

    pub fn eval<R: Real>(&self, x: &Dual<R>, y: &Dual<R>, ctx: &PrecisionContext) -> Result<Dual<R>> {
        Ok(match self {
            Expr::X => x.clone(),
            Expr::Y => y.clone(),
            Expr::Rational(p, q) => Dual::constant(Complex::from_real(R::from_ratio(*p, *q, ctx))),
            Expr::I => Dual::constant(Complex::i(ctx)),
            Expr::Zeta(m) => Dual::constant(Complex::root_of_unity(1, *m as i64, ctx)),
            Expr::Add(a, b) => a.eval(x, y, ctx)?.add(&b.eval(x, y, ctx)?),
            Expr::Sub(a, b) => a.eval(x, y, ctx)?.sub(&b.eval(x, y, ctx)?),
            Expr::Mul(a, b) => a.eval(x, y, ctx)?.mul(&b.eval(x, y, ctx)?),
            Expr::Div(a, b) => a.eval(x, y, ctx)?.div(&b.eval(x, y, ctx)?)?,
            Expr::Neg(a) => a.eval(x, y, ctx)?.neg(),
            Expr::Pow(a, k) => a.eval(x, y, ctx)?.powi(*k)?,
        })
    }

    /// Replace X and Y by the given expressions.
    pub fn substitute(&self, x: &Expr, y: &Expr) -> Expr {
        let s = |e: &Expr| Box::new(e.substitute(x, y));
        match self {
            Expr::X => x.clone(),
            Expr::Y => y.clone(),
            Expr::Add(a, b) => Expr::Add(s(a), s(b)),
            Expr::Sub(a, b) => Expr::Sub(s(a), s(b)),
            Expr::Mul(a, b) => Expr::Mul(s(a), s(b)),
            Expr::Div(a, b) => Expr::Div(s(a), s(b)),
            Expr::Neg(a) => Expr::Neg(s(a)),
            Expr::Pow(a, k) => Expr::Pow(s(a), *k),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::X => write!(f, "X"),
            Expr::Y => write!(f, "Y"),
            Expr::Rational(p, 1) => write!(f, "{p}"),
            Expr::Rational(p, q) => write!(f, "({p}/{q})"),
            Expr::I => write!(f, "i"),
            Expr::Zeta(m) => write!(f, "zeta({m})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Pow(a, k) => write!(f, "{a}^{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(
                t.parse().map_err(|_| Error::Parse(format!("number too large: {t}")))?,
            ));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in expression '{s}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.product()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.product()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                let rhs = self.unary()?;
                e = match (&e, &rhs) {
                    (Expr::Rational(p, 1), Expr::Rational(q, 1)) if *q != 0 => Expr::Rational(*p, *q),
                    _ => Expr::Div(Box::new(e), Box::new(rhs)),
                };
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k = i32::try_from(k).map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
                }
                _ => return Err(Error::Parse("exponent must be an integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match t {
            Tok::Num(n) => Ok(Expr::Rational(n, 1)),
            Tok::Op('(') => {
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Tok::Ident(id) => match id.as_str() {
                "X" | "x" => Ok(Expr::X),
                "Y" | "y" => Ok(Expr::Y),
                "i" | "I" => Ok(Expr::I),
                "zeta" => {
                    if !self.eat('(') {
                        return Err(Error::Parse("zeta needs an order: zeta(m)".into()));
                    }
                    let m = match self.toks.get(self.pos).cloned() {
                        Some(Tok::Num(m)) if m >= 1 && m <= u32::MAX as i64 => m as u32,
                        _ => return Err(Error::Parse("zeta(m) needs a positive integer m".into())),
                    };
                    self.pos += 1;
                    if !self.eat(')') {
                        return Err(Error::Parse("missing ')' after zeta(m".into()));
                    }
                    Ok(Expr::Zeta(m))
                }
                other => Err(Error::Parse(format!("unknown identifier '{other}'"))),
            },
            Tok::Op(c) => Err(Error::Parse(format!("unexpected '{c}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: (f64, f64), dv: (f64, f64)) -> Dual<f64> {
        Dual::new(Complex::new(v.0, v.1), Complex::new(dv.0, dv.1))
    }

    #[test]
    fn parse_and_evaluate() {
        let ctx = PrecisionContext::new(64);
        let e = Expr::parse("1 - Y/X^3 + 2/3*X").unwrap();
        let x = d((2.0, 0.0), (1.0, 0.0));
        let y = d((0.5, 0.0), (0.0, 0.0));
        let r = e.eval(&x, &y, &ctx).unwrap();
        assert!((r.v.re - (1.0 - 0.5 / 8.0 + 4.0 / 3.0)).abs() < 1e-15);
        // derivative in X: 3Y/X^4 + 2/3
        assert!((r.d.re - (1.5 / 16.0 + 2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn zeta_and_i() {
        let ctx = PrecisionContext::new(64);
        let e = Expr::parse("zeta(3)^3 + i^2").unwrap();
        let one = d((1.0, 0.0), (0.0, 0.0));
        let r = e.eval(&one, &one, &ctx).unwrap();
        assert!(r.v.abs() < 1e-15);
    }

    #[test]
    fn substitution_is_composition() {
        let ctx = PrecisionContext::new(64);
        let e = Expr::parse("1 - Y").unwrap();
        let sx = Expr::parse("-1/X").unwrap();
        let sy = Expr::parse("Y/X").unwrap();
        let pulled = e.substitute(&sx, &sy);
        let x = d((0.3, 0.0), (1.0, 0.0));
        let y = d((0.2, 0.4), (0.1, 0.0));
        let a = pulled.eval(&x, &y, &ctx).unwrap();
        let b = e
            .eval(&sx.eval(&x, &y, &ctx).unwrap(), &sy.eval(&x, &y, &ctx).unwrap(), &ctx)
            .unwrap();
        assert!((a.v - b.v).abs() < 1e-15 && (a.d - b.d).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("1 - W").is_err());
        assert!(Expr::parse("(1 - Y").is_err());
        assert!(Expr::parse("Y^X").is_err());
    }
}
