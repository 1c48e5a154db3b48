//! L-function specifications and their Dirichlet coefficients.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

use super::arith::{is_prime, primes_up_to, smallest_prime_factors};
use super::euler::CoeffSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    Solve,
}

impl Sign {
    pub fn value(self) -> Option<i32> {
        match self {
            Sign::Plus => Some(1),
            Sign::Minus => Some(-1),
            Sign::Solve => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NMax {
    Auto,
    Fixed(usize),
}

/// Λ(s) = cond^{s/2} Γ_C(s)^d L(s) = w Λ(2 − s), with L given by its Euler product.
#[derive(Debug, Clone, PartialEq)]
pub struct LSpec {
    pub degree: u32,
    pub conductor: u64,
    pub gamma_mult: u32,
    pub sign: Sign,
    pub source: CoeffSource,
    /// Local polynomials P_p(T) that replace the computed factor at p.
    pub bad_factors: BTreeMap<u64, Vec<i64>>,
    pub n_max: NMax,
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("{path}.{key}: missing")))
}

fn as_i64(v: &Value, path: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::Parse(format!("{path}: expected an integer")))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::Parse(format!("{path}: expected a non-negative integer")))
}

fn int_list(v: &Value, path: &str) -> Result<Vec<i64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{path}: expected an array of integers")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_i64(x, &format!("{path}[{i}]")))
        .collect()
}

fn gaussian(v: &Value, path: &str) -> Result<(i64, i64)> {
    let l = int_list(v, path)?;
    match l.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Parse(format!("{path}: expected [re, im]"))),
    }
}

fn parse_source(v: &Value, path: &str, base_dir: Option<&Path>) -> Result<CoeffSource> {
    let kind = field(v, path, "source")?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("{path}.source: expected a string")))?;
    let src = match kind {
        "elliptic-q" => CoeffSource::EllipticQ {
            f: int_list(field(v, path, "f")?, &format!("{path}.f"))?,
            y_power: match v.get("y_power") {
                None => 2,
                Some(x) => as_u64(x, &format!("{path}.y_power"))? as u32,
            },
        },
        "twist" => CoeffSource::Twist {
            base: Box::new(parse_source(
                field(v, path, "base")?,
                &format!("{path}.base"),
                base_dir,
            )?),
            d: as_i64(field(v, path, "d")?, &format!("{path}.d"))?,
        },
        "elliptic-qi" => CoeffSource::EllipticQi {
            a4: gaussian(field(v, path, "a4")?, &format!("{path}.a4"))?,
            a6: match v.get("a6") {
                None => (0, 0),
                Some(x) => gaussian(x, &format!("{path}.a6"))?,
            },
        },
        "genus2-count" => CoeffSource::Genus2Count {
            f: int_list(field(v, path, "f")?, &format!("{path}.f"))?,
        },
        "product" => {
            let arr = field(v, path, "factors")?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{path}.factors: expected an array")))?;
            CoeffSource::Product {
                factors: arr
                    .iter()
                    .enumerate()
                    .map(|(i, f)| parse_source(f, &format!("{path}.factors[{i}]"), base_dir))
                    .collect::<Result<_>>()?,
            }
        }
        "file" => {
            let rel = field(v, path, "path")?
                .as_str()
                .ok_or_else(|| Error::Parse(format!("{path}.path: expected a string")))?;
            let full = match base_dir {
                Some(d) if Path::new(rel).is_relative() => d.join(rel),
                _ => Path::new(rel).to_path_buf(),
            };
            let text = std::fs::read_to_string(&full)
                .map_err(|e| Error::Parse(format!("{path}.path: cannot read {}: {e}", full.display())))?;
            CoeffSource::File {
                path: rel.into(),
                coeffs: parse_coefficient_file(&text)?.1,
            }
        }
        other => return Err(Error::Parse(format!("{path}.source: unknown source '{other}'"))),
    };
    src.validate().map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    Ok(src)
}

/// Reads "# degree d conductor N" followed by lines "n a_n"; returns (header, a) with a[0] unused.
pub fn parse_coefficient_file(text: &str) -> Result<((u32, u64), Vec<i64>)> {
    let mut header = None;
    let mut pairs = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            let toks: Vec<&str> = h.split_whitespace().collect();
            if let ["degree", d, "conductor", n] = toks.as_slice() {
                let d = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad degree", ln + 1)))?;
                let n = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad conductor", ln + 1)))?;
                header = Some((d, n));
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(n), Some(a), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse(format!("line {}: expected 'n a_n'", ln + 1)));
        };
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad index", ln + 1)))?;
        let a: i64 = a
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad coefficient", ln + 1)))?;
        pairs.push((n, a));
    }
    let header = header.ok_or_else(|| Error::Parse("missing '# degree d conductor N' header".into()))?;
    let top = pairs.iter().map(|p| p.0).max().unwrap_or(0);
    let mut a = vec![0i64; top + 1];
    for (n, v) in pairs {
        if n == 0 {
            return Err(Error::Parse("coefficient index 0".into()));
        }
        a[n] = v;
    }
    Ok((header, a))
}

impl LSpec {
    pub fn from_json(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("lspec: {e}")))?;
        Self::from_value(&v, base_dir)
    }

    pub fn from_value(v: &Value, base_dir: Option<&Path>) -> Result<Self> {
        let p = "lspec";
        let degree = as_u64(field(v, p, "degree")?, "lspec.degree")? as u32;
        if degree != 2 && degree != 4 {
            return Err(Error::Parse("lspec.degree: must be 2 or 4".into()));
        }
        let conductor = as_u64(field(v, p, "conductor")?, "lspec.conductor")?;
        if conductor == 0 {
            return Err(Error::Parse("lspec.conductor: must be positive".into()));
        }
        let gamma_mult = match v.get("gamma_mult") {
            Some(x) => as_u64(x, "lspec.gamma_mult")? as u32,
            None => degree / 2,
        };
        if gamma_mult * 2 != degree {
            return Err(Error::Parse("lspec.gamma_mult: must be degree/2".into()));
        }
        let sign = match field(v, p, "sign")? {
            Value::String(s) if s == "solve" => Sign::Solve,
            x => match x.as_i64() {
                Some(1) => Sign::Plus,
                Some(-1) => Sign::Minus,
                _ => return Err(Error::Parse("lspec.sign: expected 1, -1 or \"solve\"".into())),
            },
        };
        let source = parse_source(field(v, p, "coeffs")?, "lspec.coeffs", base_dir)?;
        if !matches!(source, CoeffSource::File { .. }) && source.degree() != degree {
            return Err(Error::Parse(format!(
                "lspec.coeffs: source has degree {}, spec says {degree}",
                source.degree()
            )));
        }
        let mut bad_factors = BTreeMap::new();
        if let Some(bf) = v.get("bad_factors") {
            let arr = bf
                .as_array()
                .ok_or_else(|| Error::Parse("lspec.bad_factors: expected an array".into()))?;
            for (i, e) in arr.iter().enumerate() {
                let path = format!("lspec.bad_factors[{i}]");
                let prime = as_u64(field(e, &path, "p")?, &format!("{path}.p"))?;
                if !is_prime(prime) {
                    return Err(Error::Parse(format!("{path}.p: {prime} is not prime")));
                }
                let poly = int_list(field(e, &path, "poly")?, &format!("{path}.poly"))?;
                if poly.first() != Some(&1) {
                    return Err(Error::Parse(format!("{path}.poly: constant term must be 1")));
                }
                bad_factors.insert(prime, poly);
            }
        }
        let n_max = match v.get("n_max") {
            None => NMax::Auto,
            Some(Value::String(s)) if s == "auto" => NMax::Auto,
            Some(x) => NMax::Fixed(as_u64(x, "lspec.n_max")? as usize),
        };
        Ok(Self {
            degree,
            conductor,
            gamma_mult,
            sign,
            source,
            bad_factors,
            n_max,
        })
    }

    /// Local factor at p, preferring the configured bad factor.
    pub fn local_factor(&self, p: u64, max_pow: u32) -> Result<Vec<i64>> {
        match self.bad_factors.get(&p) {
            Some(f) => Ok(f.iter().take(max_pow as usize + 1).copied().collect()),
            None => self.source.local_factor(p, max_pow),
        }
    }

    /// a_1..a_n (index 0 unused).
    pub fn coefficients(&self, n: usize) -> Result<Vec<i64>> {
        if let CoeffSource::File { coeffs, path } = &self.source {
            if coeffs.len() <= n {
                return Err(Error::TailTooLarge(format!(
                    "{path} has coefficients up to {}, {n} needed",
                    coeffs.len().saturating_sub(1)
                )));
            }
            return Ok(coeffs[..=n].to_vec());
        }
        dirichlet_from_euler(n, |p, k| self.local_factor(p, k))
    }
}

/// Multiplicative coefficients from local factors P_p (a_{p^k} = [T^k] 1/P_p(T)).
pub fn dirichlet_from_euler<F>(n: usize, local: F) -> Result<Vec<i64>>
where
    F: Fn(u64, u32) -> Result<Vec<i64>>,
{
    let mut a = vec![0i64; n + 1];
    if n == 0 {
        return Ok(a);
    }
    a[1] = 1;
    let spf = smallest_prime_factors(n);
    let mut prime_powers: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    for p in primes_up_to(n as u64) {
        let mut k = 0u32;
        let mut q = 1u64;
        while q * p <= n as u64 {
            q *= p;
            k += 1;
        }
        let poly = local(p, k)?;
        if poly.first() != Some(&1) {
            return Err(Error::Param(format!("local factor at {p} must have constant term 1")));
        }
        let mut inv = vec![0i64; k as usize + 1];
        inv[0] = 1;
        for j in 1..=k as usize {
            let mut s = 0i64;
            for i in 1..=j.min(poly.len() - 1) {
                s = s
                    .checked_sub(
                        poly[i]
                            .checked_mul(inv[j - i])
                            .ok_or_else(|| Error::Overflow("a_{p^k}".into()))?,
                    )
                    .ok_or_else(|| Error::Overflow("a_{p^k}".into()))?;
            }
            inv[j] = s;
        }
        prime_powers.insert(p, inv);
    }
    for m in 2..=n {
        let p = spf[m] as u64;
        let mut rest = m;
        let mut e = 0usize;
        while rest % p as usize == 0 {
            rest /= p as usize;
            e += 1;
        }
        a[m] = a[rest]
            .checked_mul(prime_powers[&p][e])
            .ok_or_else(|| Error::Overflow(format!("a_{m}")))?;
    }
    Ok(a)
}

/// Good primes p ≤ n where |a_p| exceeds degree·√p.
pub fn weil_violations(spec: &LSpec, a: &[i64]) -> Vec<u64> {
    primes_up_to(a.len() as u64 - 1)
        .into_iter()
        .filter(|p| !spec.bad_factors.contains_key(p))
        .filter(|&p| {
            let ap = a[p as usize] as f64;
            ap.abs() > spec.degree as f64 * (p as f64).sqrt() + 1e-9
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const E23: &str = r#"{"degree": 2, "conductor": 92, "sign": -1,
        "coeffs": {"source": "elliptic-q", "f": [1, -1, 0, 1]},
        "bad_factors": [{"p": 2, "poly": [1]}, {"p": 23, "poly": [1, -1]}]}"#;

    #[test]
    fn parse_and_generate() {
        let s = LSpec::from_json(E23, None).unwrap();
        assert_eq!((s.degree, s.gamma_mult, s.sign), (2, 1, Sign::Minus));
        let a = s.coefficients(100).unwrap();
        assert_eq!(a[3], -3);
        assert_eq!(a[6], a[2] * a[3]);
        assert_eq!(a[23], 1);
        assert_eq!(a[46], a[2] * a[23]);
        // a_9 = a_3² − 3
        assert_eq!(a[9], a[3] * a[3] - 3);
        assert!(weil_violations(&s, &a).is_empty());
    }

    #[test]
    fn errors_name_the_field() {
        let bad = E23.replace(r#""f": [1, -1, 0, 1]"#, r#""f": [1, "x", 0, 1]"#);
        let e = LSpec::from_json(&bad, None).unwrap_err().to_string();
        assert!(e.contains("lspec.coeffs.f[1]"), "{e}");
        let bad = E23.replace(r#""sign": -1"#, r#""sign": 2"#);
        assert!(LSpec::from_json(&bad, None)
            .unwrap_err()
            .to_string()
            .contains("lspec.sign"));
        let bad = E23.replace(r#"{"p": 2, "poly": [1]}, "#, "");
        let s = LSpec::from_json(&bad, None).unwrap();
        assert!(matches!(s.coefficients(10), Err(Error::BadPrime(2))));
    }

    #[test]
    fn coefficient_file_roundtrip() {
        let ((d, n), a) = parse_coefficient_file("# degree 2 conductor 11\n1 1\n2 -2\n3 -1\n").unwrap();
        assert_eq!((d, n), (2, 11));
        assert_eq!(a, vec![0, 1, -2, -1]);
        assert!(parse_coefficient_file("1 1\n").is_err());
        assert!(parse_coefficient_file("# degree 2 conductor 11\n1\n").is_err());
    }
}
