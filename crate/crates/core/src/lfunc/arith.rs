//! Small-prime arithmetic for point counting.

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Smallest prime factor of every n ≤ limit (spf[0] = spf[1] = 0).
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for j in (i..=limit).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn reduce(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = reduce(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (d/p) for a prime p.
pub fn kronecker_prime(d: i64, p: u64) -> i32 {
    if p == 2 {
        if d % 2 == 0 {
            return 0;
        }
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    legendre(d, p)
}

/// A square root of −1 modulo a prime p ≡ 1 mod 4.
pub fn sqrt_minus_one(p: u64) -> Option<u64> {
    if p % 4 != 1 {
        return None;
    }
    (2..p).find_map(|a| {
        let r = pow_mod(a, (p - 1) / 4, p);
        (mul_mod(r, r, p) == p - 1).then_some(r)
    })
}

/// Horner evaluation of an integer polynomial (ascending coefficients) mod p.
pub fn eval_mod(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

pub fn reduce_poly(f: &[i64], p: u64) -> Vec<u64> {
    f.iter().map(|&c| reduce(c, p)).collect()
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = inv_mod(b[db], p);
    while r.len() > db {
        let lead = mul_mod(*r.last().expect("nonempty"), inv_lead, p);
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(lead, c, p)) % p;
        }
        r = trim(r);
    }
    r
}

/// Whether f mod p keeps its degree and has no repeated factor.
pub fn squarefree_mod(f: &[i64], p: u64) -> bool {
    let fp = trim(reduce_poly(f, p));
    if fp.len() != f.len() {
        return false;
    }
    let df: Vec<u64> = trim(
        fp.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    );
    if df.is_empty() {
        return false;
    }
    let (mut a, mut b) = (fp, df);
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// F_{p²} = F_p[√n] for a non-residue n.
#[derive(Debug, Clone, Copy)]
pub struct Fp2 {
    pub p: u64,
    pub nr: u64,
}

impl Fp2 {
    pub fn new(p: u64, nr: u64) -> Self {
        Self { p, nr }
    }

    pub fn with_any_nonresidue(p: u64) -> Self {
        let nr = (2..p)
            .find(|&a| legendre(a as i64, p) == -1)
            .expect("odd prime has a non-residue");
        Self { p, nr }
    }

    pub fn add(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        ((a.0 + b.0) % self.p, (a.1 + b.1) % self.p)
    }

    pub fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        (
            (mul_mod(a.0, b.0, p) + mul_mod(self.nr, mul_mod(a.1, b.1, p), p)) % p,
            (mul_mod(a.0, b.1, p) + mul_mod(a.1, b.0, p)) % p,
        )
    }

    pub fn pow(&self, mut a: (u64, u64), mut e: u64) -> (u64, u64) {
        let mut r = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Quadratic character on F_{p²}.
    pub fn chi(&self, a: (u64, u64)) -> i32 {
        if a == (0, 0) {
            return 0;
        }
        let q = self.p * self.p;
        if self.pow(a, (q - 1) / 2) == (1, 0) {
            1
        } else {
            -1
        }
    }

    /// Horner evaluation of a polynomial with F_{p²} coefficients.
    pub fn eval(&self, f: &[(u64, u64)], x: (u64, u64)) -> (u64, u64) {
        f.iter().rev().fold((0, 0), |acc, &c| self.add(self.mul(acc, x), c))
    }
}
