//! Preset verification runs: regulator side, L side, and their rational ratio.

use std::str::FromStr;

use regulus_core::curvespec::CurveInput;
use regulus_core::lfunc::{leibniz_product_derivative, LSpec};
use regulus_core::regulator::{reg_matrix, CycleSpec, DirectOptions, MatrixCase, SymbolSpec};
use regulus_core::{BigFloat, Curve, Error, PrecisionContext, Real, Result};

use crate::commands::{lvalue_into, max_pairwise, regulator_values, Method};
use crate::report::{Report, Timer};

const ORIGIN: &str = "published value";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    E23,
    E23p,
    E24,
    E42,
    E32k,
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e23" => Ok(Self::E23),
            "e23p" => Ok(Self::E23p),
            "e24" => Ok(Self::E24),
            "e42" => Ok(Self::E42),
            "e32k" => Ok(Self::E32k),
            other => Err(Error::Param(format!(
                "unknown preset '{other}' (expected e23, e23p, e24, e42 or e32k)"
            ))),
        }
    }
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Self::E23 => "e23",
            Self::E23p => "e23p",
            Self::E24 => "e24",
            Self::E42 => "e42",
            Self::E32k => "e32k",
        }
    }
}

pub mod files {
    pub const E23_CURVE: &str = include_str!("../presets/e23.curve.json");
    pub const E23P_CURVE: &str = include_str!("../presets/e23p.curve.json");
    pub const E23_L: &str = include_str!("../presets/e23.l.json");
    pub const E23P_L: &str = include_str!("../presets/e23p.l.json");
    pub const E24_L: &str = include_str!("../presets/e24.l.json");
    pub const E42_E2_L: &str = include_str!("../presets/e42-e2.l.json");
    pub const E42_EPRIME_L: &str = include_str!("../presets/e42-eprime.l.json");
    pub const E32K_E3_L: &str = include_str!("../presets/e32k-e3.l.json");
    pub const E32K_TWIST_L: &str = include_str!("../presets/e32k-e3-twist.l.json");
    pub const E32K_L: &str = include_str!("../presets/e32k.l.json");
}

mod refs {
    pub const E23_R: &str = "-0.47095904334493274691418567400102924042656389674994";
    pub const E23_L1: &str = "-1.4128771300347982407425570220030877212796916902498";
    pub const E23P_R: &str = "-0.66881964039649037504127102520475989774413452667566";
    pub const E23P_L1: &str = "-1.3376392807929807500825420504095197954882690533513";
    pub const E24_ENTRIES: [[&str; 2]; 2] = [
        [
            "-0.50222774458567807234309977656150357407699614640711",
            "-0.25869891405241850202655302706581105434092244125967",
        ],
        [
            "0.28090959342921653089311129619302051571945475691571",
            "-0.74910711218020537922324806983278156297750025766609",
        ],
    ];
    pub const E24_R: &str = "0.44889338217039979100950815236832711055130985508762";
    pub const E24_L2: &str = "-3.5911470573631983280760652189466168844104788407010";
    /// c_k = r((σ^i)^*ξ)((σ^j)_*δ) for i + j ≡ k mod 4.
    pub const E42_C: [&str; 4] = [
        "-0.98844708489657058704834105512085052973343416105202",
        "-0.70555740813628736374241199707594442755919668795397",
        "0.58887994509588812937108115517011098298739696261455",
        "0.30599026833560490606515209712520488081315948951649",
    ];
    pub const E42_R: &str = "0.70147792522235455249515324047670619687499664105676";
    pub const E42_L3: &str = "0.6475180848206349715339876065938826432692415861783";
    pub const E32K_A0: &str = "-0.73225693138562217781835762443363615482360800039157";
    pub const E32K_R: &str = "0.53620021356228778605831812308182307487055561499420";
    pub const E32K_L2: &str = "38.606415376484720596198904861891261390680004279582";
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyArgs {
    pub digits: u32,
    /// Digits for degree-2 L-values; default min(digits, 17).
    pub l2_digits: Option<u32>,
    /// Digits for degree-4 L-values; default min(digits, 13).
    pub l4_digits: Option<u32>,
    pub timings: bool,
}

impl VerifyArgs {
    pub fn new(digits: u32) -> Self {
        Self {
            digits,
            l2_digits: None,
            l4_digits: None,
            timings: false,
        }
    }

    fn l2(&self) -> u32 {
        self.l2_digits.unwrap_or(self.digits.min(17))
    }

    fn l4(&self) -> u32 {
        self.l4_digits.unwrap_or(self.digits.min(13))
    }
}

fn spec(text: &str) -> Result<LSpec> {
    LSpec::from_json(text, None)
}

fn ratio_tol(digits: u32) -> f64 {
    10f64.powi(-(digits as i32 - 8))
}

struct Ctx<'a> {
    report: Report,
    args: &'a VerifyArgs,
}

impl Ctx<'_> {
    fn lvalue(&mut self, name: &str, text: &str, order: usize, digits: u32) -> Result<BigFloat> {
        lvalue_into(
            &mut self.report,
            name,
            &spec(text)?,
            order,
            digits,
            None,
            false,
            self.args.timings,
        )
    }
}

pub fn run_verify(preset: Preset, args: &VerifyArgs) -> Result<Report> {
    if args.digits > 50 || args.digits < 10 {
        return Err(Error::Param("--digits must lie in 10..=50".into()));
    }
    let mut c = Ctx {
        report: Report::new("verify", preset.name(), args.digits),
        args,
    };
    match preset {
        Preset::E23 => series_preset(&mut c, files::E23_CURVE, refs::E23_R, files::E23_L, refs::E23_L1, "1/3")?,
        Preset::E23p => series_preset(
            &mut c,
            files::E23P_CURVE,
            refs::E23P_R,
            files::E23P_L,
            refs::E23P_L1,
            "1/2",
        )?,
        Preset::E24 => e24(&mut c)?,
        Preset::E42 => e42(&mut c)?,
        Preset::E32k => e32k(&mut c)?,
    }
    c.report.finish();
    Ok(c.report)
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Param(format!("stage '{name}' failed: {e}")))
}

fn series_preset(c: &mut Ctx, curve_json: &str, r_ref: &str, l_json: &str, l_ref: &str, ratio: &str) -> Result<()> {
    let d = c.args.digits;
    let ctx = PrecisionContext::for_digits(d);
    let curve: Curve = stage("curve", CurveInput::from_json(curve_json)?.build::<BigFloat>(&ctx))?.certify();
    stage("hypotheses", curve.require_certificate().map(|_| ()))?;
    let methods = [Method::Series, Method::Integral, Method::Direct];
    let values = stage(
        "regulator",
        regulator_values(
            &curve,
            &SymbolSpec::named("xi")?,
            &CycleSpec::named("delta")?,
            &methods,
            &ctx,
            c.args.timings,
        ),
    )?;
    let r = values[0].1.clone();
    for (m, v, t) in &values {
        let name = format!("R = r({{1-Y,X}})(delta) [{}]", m.name());
        if *m == Method::Series {
            c.report.compare(&name, v, d, &[m.name()], r_ref, ORIGIN, d);
        } else {
            c.report.quantity(&name, v, d, &[m.name()]);
        }
        let q = c.report.quantities.last_mut().expect("just pushed");
        q.elapsed_s = t.map(|s| (s * 1000.0).round() / 1000.0);
    }
    let vs: Vec<BigFloat> = values.iter().map(|v| v.1.clone()).collect();
    c.report.check(
        "max pairwise deviation between methods",
        max_pairwise(&vs),
        10f64.powi(-(d as i32 - 5)),
    );

    let ld = c.args.l2();
    let l = stage("L-function", c.lvalue("L'(E, 0)", l_json, 1, ld))?;
    attach_reference(c, &l, l_ref, ld - 2);
    c.report
        .ratio("R", "L'(E, 0)", &r, &l, ratio_tol(d.min(ld)), Some(ratio));
    Ok(())
}

/// Replaces the last plain quantity by the same value compared against a reference.
fn attach_reference(c: &mut Ctx, value: &BigFloat, reference: &str, required: u32) {
    let q = c.report.quantities.pop().expect("a quantity to compare");
    c.report.compare(
        &q.name,
        value,
        q.digits,
        &["approximate functional equation"],
        reference,
        ORIGIN,
        required,
    );
    c.report.quantities.last_mut().expect("just pushed").elapsed_s = q.elapsed_s;
}

fn matrix_side(c: &mut Ctx, case: MatrixCase) -> Result<regulus_core::regulator::RegMatrix<BigFloat>> {
    let d = c.args.digits;
    let ctx = PrecisionContext::for_digits(d);
    let timer = Timer::start(c.args.timings);
    let m = stage(
        "regulator matrix",
        reg_matrix::<BigFloat>(case, &DirectOptions::default(), &ctx),
    )?;
    let tol = 10f64.powi(-(d as i32 - 5));
    for chk in &m.checks {
        c.report.check(&chk.label, chk.residual, tol);
    }
    let q = c.report.quantity("raw determinant", &m.det_raw, d, &["direct"]);
    timer.stamp(q);
    Ok(m)
}

fn entry_name(m: &regulus_core::regulator::RegMatrix<BigFloat>, i: usize, j: usize) -> String {
    format!("r({})({})", m.symbols[i], m.cycles[j])
}

fn e24(c: &mut Ctx) -> Result<()> {
    let d = c.args.digits;
    let m = matrix_side(c, MatrixCase::E24)?;
    for i in 0..2 {
        for j in 0..2 {
            c.report.compare(
                &entry_name(&m, i, j),
                &m.entries[i][j],
                d,
                &["direct"],
                refs::E24_ENTRIES[i][j],
                ORIGIN,
                d - 2,
            );
        }
    }
    c.report
        .compare("R = |det|", &m.det, d, &["direct"], refs::E24_R, ORIGIN, d - 4);

    let ld = c.args.l4();
    let s = spec(files::E24_L)?;
    let l = stage(
        "L-function",
        lvalue_into(&mut c.report, "L''(Jac, 0)", &s, 2, ld, None, false, c.args.timings),
    )?;
    attach_reference(c, &l, refs::E24_L2, ld - 2);
    let n_max = c
        .report
        .details
        .as_array()
        .and_then(|a| a.last())
        .and_then(|e| e["n_max"].as_u64())
        .unwrap_or(0);
    c.report.check(
        "n_max below 283^2, where the linear factor at 283 stops being exact",
        n_max as f64,
        (283.0f64 * 283.0) - 1.0,
    );
    c.report
        .ratio("R", "L''(Jac, 0)", &m.det, &l, ratio_tol(d.min(ld)), Some("-1/8"));
    Ok(())
}

fn e42(c: &mut Ctx) -> Result<()> {
    let d = c.args.digits;
    let m = matrix_side(c, MatrixCase::E42)?;
    for (k, (i, j)) in [(0, 0), (0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        c.report.compare(
            &entry_name(&m, i, j),
            &m.entries[i][j],
            d,
            &["direct"],
            refs::E42_C[k],
            ORIGIN,
            d - 2,
        );
    }
    c.report
        .compare("R = |det|", &m.det, d, &["direct"], refs::E42_R, ORIGIN, d - 5);

    let (l2d, l4d) = (c.args.l2(), c.args.l4());
    let a = stage("L-function E2", c.lvalue("L'(E2, 0)", files::E42_E2_L, 1, l2d))?;
    let b = stage("L-function E'", c.lvalue("L''(E', 0)", files::E42_EPRIME_L, 2, l4d))?;
    let ld = l2d.min(l4d);
    let ctx = PrecisionContext::for_digits(ld);
    let zero = BigFloat::zero(&ctx);
    let leibniz = leibniz_product_derivative(
        &[
            (vec![zero.clone(), a.clone()], 1),
            (vec![zero.clone(), zero, b.clone()], 2),
        ],
        3,
        &ctx,
    );
    let literal = a.clone() * &b * 6.0;

    // the reference is compared against both readings; only the one that matches gates the run
    let reference = <BigFloat as Real>::parse(refs::E42_L3, &PrecisionContext::for_digits(60))?;
    let rel = |x: &BigFloat| Real::abs(&(x.clone() - &reference)).to_f64() / Real::abs(&reference).to_f64();
    let (r_leib, r_lit) = (rel(&leibniz), rel(&literal));
    c.report.compare(
        "L'''(E42, 0) by Leibniz = 3 L'(E2,0) L''(E',0)",
        &leibniz,
        ld,
        &["leibniz"],
        refs::E42_L3,
        ORIGIN,
        ld - 2,
    );
    let leib_pass = c.report.quantities.last().expect("just pushed").pass;
    c.report.compare(
        "L'''(E42, 0) as printed = 6 L'(E2,0) L''(E',0)",
        &literal,
        ld,
        &["leibniz", "coefficient 6"],
        refs::E42_L3,
        ORIGIN,
        ld - 2,
    );
    let lit_pass = c.report.quantities.last().expect("just pushed").pass;
    let n = c.report.quantities.len();
    let (matching, value) = if leib_pass {
        c.report.quantities[n - 1].pass = true;
        ("3 L'(E2,0) L''(E',0)", leibniz.clone())
    } else if lit_pass {
        c.report.quantities[n - 2].pass = true;
        ("6 L'(E2,0) L''(E',0)", literal.clone())
    } else {
        ("3 L'(E2,0) L''(E',0)", leibniz.clone())
    };
    if leib_pass || lit_pass {
        c.report.note(format!(
            "reference L'''(E42,0) matches the reading {matching}; relative gaps: Leibniz {r_leib:.3e}, printed coefficient {r_lit:.3e}"
        ));
    } else {
        c.report.note(format!(
            "reference L'''(E42,0) matches neither reading; relative gaps: Leibniz {r_leib:.3e}, printed coefficient {r_lit:.3e}"
        ));
    }
    c.report.check(
        "reference L'''(E42,0) matches one reading",
        r_leib.min(r_lit),
        10f64.powi(-(ld as i32 - 2)),
    );
    c.report.ratio(
        "R",
        &format!("L'''(E42, 0) = {matching}"),
        &m.det,
        &value,
        ratio_tol(d.min(ld)),
        Some("13/12"),
    );
    c.report.ratio(
        "R",
        "3 L'(E2,0) L''(E',0)",
        &m.det,
        &leibniz,
        ratio_tol(d.min(ld)),
        None,
    );
    Ok(())
}

fn e32k(c: &mut Ctx) -> Result<()> {
    let d = c.args.digits;
    let m = matrix_side(c, MatrixCase::E32k)?;
    c.report.compare(
        &entry_name(&m, 0, 0),
        &m.entries[0][0],
        d,
        &["direct"],
        refs::E32K_A0,
        ORIGIN,
        d - 2,
    );
    let norm = m.normalized.as_ref().expect("e32k has a normalized matrix");
    c.report.compare(
        &format!("{} / (zeta - zeta bar)^2", entry_name(&m, 1, 1)),
        &norm[1][1],
        d,
        &["direct"],
        refs::E32K_A0,
        ORIGIN,
        d - 2,
    );
    c.report.compare(
        "R = |det| (normalized)",
        &m.det,
        d,
        &["direct"],
        refs::E32K_R,
        ORIGIN,
        d - 5,
    );

    let (l2d, l4d) = (c.args.l2(), c.args.l4());
    let prod = stage("L-function E_K", c.lvalue("L''(E_K, 0)", files::E32K_L, 2, l4d))?;
    attach_reference(c, &prod, refs::E32K_L2, l4d - 2);
    let a = stage("L-function E", c.lvalue("L'(E, 0)", files::E32K_E3_L, 1, l2d))?;
    let b = stage(
        "L-function E twist",
        c.lvalue("L'(E x chi_-3, 0)", files::E32K_TWIST_L, 1, l2d),
    )?;
    let ctx = PrecisionContext::for_digits(l2d);
    let zero = BigFloat::zero(&ctx);
    let via = leibniz_product_derivative(&[(vec![zero.clone(), a], 1), (vec![zero, b], 1)], 2, &ctx);
    c.report.compare(
        "L''(E_K, 0) = 2 L'(E,0) L'(E x chi_-3,0)",
        &via,
        l2d,
        &["twist product", "leibniz"],
        refs::E32K_L2,
        ORIGIN,
        l2d - 2,
    );
    let gap = Real::abs(&(via - &prod)).to_f64() / Real::abs(&prod).to_f64();
    c.report.check(
        "degree-4 product equals the twist-product Leibniz value",
        gap,
        10f64.powi(-(l4d as i32 - 2)),
    );
    c.report
        .ratio("R", "L''(E_K, 0)", &m.det, &prod, ratio_tol(d.min(l4d)), Some("1/72"));
    Ok(())
}
