//! Smoothed approximate functional equation for Λ(s) and derivatives of L at s = 0.
//!
//! With A = √cond/(2π)^d and x_n = n/A,
//! Λ(s)/2^d = Σ a_n [x_n^{-s} I(s, x_n t) + w x_n^{s−2} I(2−s, x_n/t)]
//! for any t > 0, where I(s, y) = ∫_y^∞ K(u) u^{s−1} du and K is the inverse
//! Mellin transform of Γ(s)^d: e^{-u} for d = 1, 2K₀(2√u) for d = 2.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hiprec::{bessel_k0, gamma, gauss_legendre, upper_incomplete_gamma, Complex};
use crate::scalar::{PrecisionContext, Real};

use super::spec::{weil_violations, LSpec, NMax};

/// Theta-scaling used to test the functional equation.
pub const THETA_SCALE: f64 = 1.2;
/// Off-centre points where the functional equation is tested.
pub const TEST_POINTS: [f64; 3] = [0.7, 1.3, 0.4];

/// Cumulative Gauss-Legendre table for ∫_{p_i}^∞ 2K₀(2√u) u^{s−1} du.
struct BesselTable<R> {
    /// Per segment [p_i, p_{i+1}] (the last runs on to the cutoff): (ln u, w·K(u)/u).
    segments: Vec<Vec<(R, R)>>,
    points: usize,
}

fn nodes_for(a: f64, b: f64, bits: u32) -> usize {
    let z = (a + b) / (b - a);
    let rho = z + (z * z - 1.0).sqrt();
    let m = ((bits as f64 + 10.0) * std::f64::consts::LN_2 / (2.0 * rho.ln())).ceil() as usize + 3;
    m.clamp(4, 120)
}

/// First u where √π u^{-1/4} e^{-2√u} u^{3/2} drops below 2^{-(bits+20)}.
fn bessel_cutoff(bits: u32, from: f64) -> f64 {
    let target = -((bits + 20) as f64) * std::f64::consts::LN_2;
    let mut u = from.max(1.0);
    while 0.5 * std::f64::consts::PI.ln() + 1.25 * u.ln() - 2.0 * u.sqrt() > target {
        u *= 1.1;
    }
    u
}

impl<R: Real> BesselTable<R> {
    fn new(points: &[R], ctx: &PrecisionContext) -> Result<Self> {
        let bits = R::bits(ctx);
        let mut rules: HashMap<usize, Vec<(R, R)>> = HashMap::new();
        let mut segments = Vec::with_capacity(points.len());
        let last = points.last().expect("at least one point").to_f64();
        let cutoff = bessel_cutoff(bits, last);
        let mut bounds: Vec<(R, R)> = points.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        // geometric segments beyond the last point
        let mut tail = Vec::new();
        let mut a = points.last().expect("at least one point").clone();
        while a.to_f64() < cutoff {
            let af = a.to_f64();
            let b = R::from_f64(af + (af.sqrt() * 0.5).max(0.5), ctx);
            tail.push((a.clone(), b.clone()));
            a = b;
        }
        bounds.push(tail.first().cloned().unwrap_or((a.clone(), a.clone())));
        let mut build = |lo: &R, hi: &R| -> Result<Vec<(R, R)>> {
            if lo >= hi {
                return Ok(Vec::new());
            }
            let m = nodes_for(lo.to_f64(), hi.to_f64(), bits);
            let rule = rules.entry(m).or_insert_with(|| gauss_legendre(m, ctx));
            let half = (hi.clone() - lo) / 2.0;
            let mid = (hi.clone() + lo) / 2.0;
            rule.iter()
                .map(|(x, w)| {
                    let u = mid.clone() + half.clone() * x;
                    let k = bessel_k0(&(u.sqrt() * 2.0), ctx)? * 2.0;
                    Ok((u.ln(), w.clone() * &half * k / &u))
                })
                .collect()
        };
        for (lo, hi) in &bounds[..bounds.len() - 1] {
            segments.push(build(lo, hi)?);
        }
        let mut last_seg = Vec::new();
        for (lo, hi) in &tail {
            last_seg.extend(build(lo, hi)?);
        }
        segments.push(last_seg);
        Ok(Self {
            segments,
            points: points.len(),
        })
    }

    fn integrals(&self, s: &Complex<R>, ctx: &PrecisionContext) -> Vec<Complex<R>> {
        let real = s.im.is_zero();
        let mut out = vec![Complex::zero(ctx); self.points];
        let mut acc = Complex::zero(ctx);
        for (i, seg) in self.segments.iter().enumerate().rev() {
            let mut re = R::zero(ctx);
            let mut im = R::zero(ctx);
            for (lu, c) in seg {
                let mag = (s.re.clone() * lu).exp() * c;
                if real {
                    re += mag;
                } else {
                    let (sn, cs) = (s.im.clone() * lu).sin_cos();
                    re += mag.clone() * cs;
                    im += mag * sn;
                }
            }
            acc += Complex::new(re, im);
            out[i] = acc.clone();
        }
        out
    }
}

/// I(s, p) for every point p and every s.
fn upper_integrals<R: Real>(
    d: u32,
    points: &[R],
    ss: &[Complex<R>],
    ctx: &PrecisionContext,
) -> Result<Vec<Vec<Complex<R>>>> {
    match d {
        1 => ss
            .iter()
            .map(|s| points.iter().map(|p| upper_incomplete_gamma(s, p, ctx)).collect())
            .collect(),
        2 => {
            let table = BesselTable::new(points, ctx)?;
            Ok(ss.iter().map(|s| table.integrals(s, ctx)).collect())
        }
        _ => Err(Error::Param("gamma_mult must be 1 or 2".into())),
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LOptions {
    /// Overrides the automatic coefficient cutoff.
    pub n_max: Option<usize>,
    /// Cauchy circle radius; default 10^(−digits/4).
    pub radius: Option<f64>,
    /// Nodes on the circle; default 16(r+1).
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeCheck {
    pub s: f64,
    /// |Λ_t(s) − Λ_1(s)| / scale for t = THETA_SCALE.
    pub theta_residual: f64,
    /// |Λ(s) − wΛ(2−s)| / scale, zero by construction of the two-sided sum.
    pub symmetry_residual: f64,
}

/// An L-function with generated coefficients, ready to evaluate.
#[derive(Debug, Clone)]
pub struct LFunction<R> {
    pub spec: LSpec,
    pub a: Vec<i64>,
    pub n_max: usize,
    pub w: i32,
    pub w_solved: bool,
    pub tail_estimate: f64,
    pub weil_violations: Vec<u64>,
    digits: u32,
    ctx: PrecisionContext,
    big_a: R,
}

fn kernel_decay(d: u32, x: f64) -> f64 {
    if d == 1 {
        (-x).exp()
    } else {
        std::f64::consts::PI.sqrt() * x.powf(-0.25) * (-2.0 * x.sqrt()).exp()
    }
}

/// Cutoff where the smoothing kernel has decayed below 10^{-(digits+10)}.
pub fn auto_n_max(spec: &LSpec, digits: u32) -> usize {
    let d = spec.gamma_mult as f64;
    let big_a = (spec.conductor as f64).sqrt() / (2.0 * std::f64::consts::PI).powf(d);
    let l = std::f64::consts::LN_10 * (digits as f64 + 10.0);
    let x = if spec.gamma_mult == 1 {
        l + 10.0
    } else {
        (l / 2.0 + 3.0).powi(2)
    };
    (big_a * x).ceil() as usize + 10
}

impl<R: Real> LFunction<R> {
    pub fn new(spec: &LSpec, digits: u32, opts: &LOptions) -> Result<Self> {
        let ctx = PrecisionContext::for_digits(digits).with_extra_bits(16);
        let n_max = match (opts.n_max, spec.n_max) {
            (Some(n), _) | (None, NMax::Fixed(n)) => n,
            (None, NMax::Auto) => auto_n_max(spec, digits),
        };
        if n_max < 1 {
            return Err(Error::Param("n_max must be positive".into()));
        }
        let d = spec.gamma_mult;
        let big_af = (spec.conductor as f64).sqrt() / (2.0 * std::f64::consts::PI).powi(d as i32);
        let x_end = n_max as f64 / big_af;
        let tail_estimate = spec.degree as f64 * (n_max as f64).powf(1.5) * big_af * kernel_decay(d, x_end) / x_end;
        let tol = 10f64.powi(-(digits as i32));
        if tail_estimate > tol {
            return Err(Error::TailTooLarge(format!(
                "n_max = {n_max} leaves a tail of about {tail_estimate:e} (> {tol:e})"
            )));
        }
        let n_coeffs = (n_max as f64 * THETA_SCALE).ceil() as usize + 1;
        let a = spec.coefficients(n_coeffs)?;
        let weil = if matches!(spec.source, super::euler::CoeffSource::File { .. }) {
            Vec::new()
        } else {
            weil_violations(spec, &a)
        };
        let two_pi_d = (R::pi(&ctx) * 2.0).powi(d as i32);
        let big_a = R::from_bigint(&spec.conductor.into(), &ctx).sqrt() / two_pi_d;
        let mut lf = Self {
            spec: spec.clone(),
            a,
            n_max,
            w: 1,
            w_solved: false,
            tail_estimate,
            weil_violations: weil,
            digits,
            ctx,
            big_a,
        };
        match spec.sign.value() {
            Some(w) => lf.w = w,
            None => {
                lf.w = lf.solve_sign()?;
                lf.w_solved = true;
            }
        }
        Ok(lf)
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// (Σ a_n x_n^{-s} I(s, x_n t), Σ a_n x_n^{s−2} I(2−s, x_n/t)) for every s, using n ≤ terms.
    fn halves(
        &self,
        ss: &[Complex<R>],
        t: &R,
        terms: usize,
        ctx: &PrecisionContext,
    ) -> Result<Vec<(Complex<R>, Complex<R>)>> {
        let a_ctx = self.big_a.to_ctx(ctx);
        let ns: Vec<usize> = (1..=terms.min(self.a.len() - 1)).filter(|&n| self.a[n] != 0).collect();
        let xs: Vec<R> = ns.iter().map(|&n| R::from_i64(n as i64, ctx) / &a_ctx).collect();
        let fwd: Vec<R> = xs.iter().map(|x| x.clone() * t).collect();
        let back: Vec<R> = xs.iter().map(|x| x.clone() / t).collect();
        let refl: Vec<Complex<R>> = ss.iter().map(|s| Complex::from_real(s.re.like(2.0)) - s).collect();
        let same = t.to_f64() == 1.0;
        let i_fwd = upper_integrals(self.spec.gamma_mult, &fwd, ss, ctx)?;
        let i_back = if same {
            upper_integrals(self.spec.gamma_mult, &fwd, &refl, ctx)?
        } else {
            upper_integrals(self.spec.gamma_mult, &back, &refl, ctx)?
        };
        let log_x: Vec<R> = xs.iter().map(|x| x.ln()).collect();
        let mut out = Vec::with_capacity(ss.len());
        for (k, s) in ss.iter().enumerate() {
            let mut p = Complex::zero(ctx);
            let mut q = Complex::zero(ctx);
            for (j, &n) in ns.iter().enumerate() {
                let an = self.a[n] as f64;
                let xs_neg = s.scale(&-log_x[j].clone()).exp();
                let xs_refl = refl[k].scale(&-log_x[j].clone()).exp();
                p += (xs_neg * &i_fwd[k][j]) * an;
                q += (xs_refl * &i_back[k][j]) * an;
            }
            out.push((p, q));
        }
        Ok(out)
    }

    /// Λ(s)/2^d.
    pub fn lambda_many(&self, ss: &[Complex<R>], ctx: &PrecisionContext) -> Result<Vec<Complex<R>>> {
        let one = R::one(ctx);
        Ok(self
            .halves(ss, &one, self.n_max, ctx)?
            .into_iter()
            .map(|(p, q)| p + q * (self.w as f64))
            .collect())
    }

    /// Λ(s) = cond^{s/2} Γ_C(s)^d L(s).
    pub fn completed_lambda(&self, s: &Complex<R>) -> Result<Complex<R>> {
        let v = self.lambda_many(std::slice::from_ref(s), &self.ctx)?;
        let two_d = R::from_i64(1 << self.spec.gamma_mult, &self.ctx);
        Ok(v[0].scale(&two_d))
    }

    /// Tries both signs against the theta test; fails unless exactly one fits.
    fn solve_sign(&self) -> Result<i32> {
        let ctx = &self.ctx;
        let ss: Vec<Complex<R>> = TEST_POINTS[..2]
            .iter()
            .map(|&s| Complex::from_real(R::from_f64(s, ctx)))
            .collect();
        let terms = (self.n_max as f64 * THETA_SCALE).ceil() as usize;
        let h1 = self.halves(&ss, &R::one(ctx), terms, ctx)?;
        let h2 = self.halves(&ss, &R::from_f64(THETA_SCALE, ctx), terms, ctx)?;
        let resid = |w: f64| -> f64 {
            h1.iter()
                .zip(&h2)
                .map(|((p1, q1), (p2, q2))| {
                    let a = p1.clone() + q1.clone() * w;
                    let b = p2.clone() + q2.clone() * w;
                    let scale = p1.abs().to_f64() + q1.abs().to_f64();
                    (a - b).abs().to_f64() / scale
                })
                .fold(0.0, f64::max)
        };
        let (rp, rm) = (resid(1.0), resid(-1.0));
        let tol = 10f64.powi(-(self.digits as i32) + 3);
        match (rp < tol, rm < tol) {
            (true, false) => Ok(1),
            (false, true) => Ok(-1),
            _ => Err(Error::SignUnknown),
        }
    }

    /// Functional-equation checks at the off-centre test points.
    pub fn fe_checks(&self) -> Result<Vec<FeCheck>> {
        let ctx = &self.ctx;
        let ss: Vec<Complex<R>> = TEST_POINTS
            .iter()
            .map(|&s| Complex::from_real(R::from_f64(s, ctx)))
            .collect();
        let refl: Vec<Complex<R>> = TEST_POINTS
            .iter()
            .map(|&s| Complex::from_real(R::from_f64(2.0 - s, ctx)))
            .collect();
        let terms = (self.n_max as f64 * THETA_SCALE).ceil() as usize;
        let w = self.w as f64;
        let h1 = self.halves(&ss, &R::one(ctx), terms, ctx)?;
        let h2 = self.halves(&ss, &R::from_f64(THETA_SCALE, ctx), terms, ctx)?;
        let hr = self.halves(&refl, &R::one(ctx), terms, ctx)?;
        Ok(TEST_POINTS
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let (p1, q1) = &h1[k];
                let (p2, q2) = &h2[k];
                let (pr, qr) = &hr[k];
                let scale = p1.abs().to_f64() + q1.abs().to_f64();
                let l1 = p1.clone() + q1.clone() * w;
                let l2 = p2.clone() + q2.clone() * w;
                let lr = pr.clone() + qr.clone() * w;
                FeCheck {
                    s,
                    theta_residual: (l1.clone() - l2).abs().to_f64() / scale,
                    symmetry_residual: (l1 - lr * w).abs().to_f64() / scale,
                }
            })
            .collect())
    }

    /// L(s) = Λ(s)/2^d · s^d / (A^s Γ(s+1)^d), analytic at 0.
    fn l_from_lambda(&self, s: &Complex<R>, lam: &Complex<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
        let d = self.spec.gamma_mult as i32;
        let g = gamma(&(s.clone() + 1.0), ctx)?.powi(d);
        let a_s = s.scale(&self.big_a.to_ctx(ctx).ln()).exp();
        Ok(lam.clone() * &s.powi(d) / &(a_s * &g))
    }

    /// L^{(r)}(0) by the Cauchy integral on a circle of radius h.
    pub fn l_derivative_at_zero(&self, r: usize, opts: &LOptions) -> Result<LDerivative> {
        let d = self.spec.gamma_mult as usize;
        let m = opts.nodes.unwrap_or(16 * (r + 1)).max(2 * r + 2);
        let h = opts.radius.unwrap_or(10f64.powf(-(self.digits as f64) / 4.0));
        if r < d {
            return Ok(LDerivative {
                order: r,
                value: "0".into(),
                value_f64: 0.0,
                imag_residual: 0.0,
                radius: h,
                nodes: 0,
                n_max: self.n_max,
                w: self.w,
            });
        }
        let extra = ((r as f64) * (-h.log2()) + 24.0).ceil() as u32;
        let ctx = self.ctx.with_extra_bits(extra);
        let hr = R::from_f64(h, &ctx);
        let half = m / 2;
        let ss: Vec<Complex<R>> = (0..=half)
            .map(|k| Complex::root_of_unity(k as i64, m as i64, &ctx).scale(&hr))
            .collect();
        let lams = self.lambda_many(&ss, &ctx)?;
        let mut sum = Complex::zero(&ctx);
        for k in 0..m {
            let (s_k, lam_k, conj) = if k <= half {
                (ss[k].clone(), lams[k].clone(), false)
            } else {
                (ss[m - k].clone(), lams[m - k].clone(), true)
            };
            let mut l = self.l_from_lambda(&s_k, &lam_k, &ctx)?;
            if conj {
                l = l.conj();
            }
            sum += l * &Complex::root_of_unity(-((r * k) as i64), m as i64, &ctx);
        }
        let mut fact = R::one(&ctx);
        for j in 2..=r {
            fact = fact * (j as f64);
        }
        let scale = fact / (R::from_i64(m as i64, &ctx) * hr.powi(r as i32));
        let v = sum.scale(&scale);
        let out = self.ctx;
        let imag = v.im.abs().to_f64();
        Ok(LDerivative {
            order: r,
            value: v.re.to_ctx(&out).to_sci(self.digits as usize + 5),
            value_f64: v.re.to_f64(),
            imag_residual: imag,
            radius: h,
            nodes: m,
            n_max: self.n_max,
            w: self.w,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LDerivative {
    pub order: usize,
    pub value: String,
    pub value_f64: f64,
    pub imag_residual: f64,
    pub radius: f64,
    pub nodes: usize,
    pub n_max: usize,
    pub w: i32,
}

/// r-th derivative at 0 of a product from the factors' derivatives (derivs[k] = f^{(k)}(0))
/// and their orders of vanishing; terms with k_i below order_i are dropped.
pub fn leibniz_product_derivative<R: Real>(factors: &[(Vec<R>, usize)], r: usize, ctx: &PrecisionContext) -> R {
    fn rec<R: Real>(factors: &[(Vec<R>, usize)], left: usize, coeff: f64, acc: R, out: &mut R) {
        let Some(((derivs, order), rest)) = factors.split_first() else {
            if left == 0 {
                *out += acc * coeff;
            }
            return;
        };
        let upto = if rest.is_empty() { left..=left } else { 0..=left };
        for k in upto {
            if k < *order || k >= derivs.len() {
                continue;
            }
            // multinomial built from successive binomials C(left, k)
            let mut binom = 1.0;
            for j in 0..k {
                binom = binom * (left - j) as f64 / (j + 1) as f64;
            }
            rec(rest, left - k, coeff * binom, acc.clone() * &derivs[k], out);
        }
    }
    let mut out = R::zero(ctx);
    rec(factors, r, 1.0, R::one(ctx), &mut out);
    out
}
