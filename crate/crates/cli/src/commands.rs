//! Thin drivers behind `check`, `regulator` and `lvalue`.

use std::path::Path;

use regulus_core::curvespec::{check_assumptions, CurveInput};
use regulus_core::lfunc::{LFunction, LOptions, LSpec};
use regulus_core::regulator::{
    reg_direct_many, reg_series_detailed, reg_term_integral, CycleSpec, DirectOptions, SymbolSpec,
};
use regulus_core::{BigFloat, Curve, Error, PrecisionContext, Real, Result};

use crate::report::{Report, Timer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    Integral,
    Direct,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Series => "series",
            Self::Integral => "integral",
            Self::Direct => "direct",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        match s {
            "series" => Ok(vec![Self::Series]),
            "integral" => Ok(vec![Self::Integral]),
            "direct" => Ok(vec![Self::Direct]),
            "all" => Ok(vec![Self::Series, Self::Integral, Self::Direct]),
            other => Err(Error::Param(format!(
                "--methods: expected series, integral, direct or all, got '{other}'"
            ))),
        }
    }
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn run_check(path: &Path) -> Result<Report> {
    let input = CurveInput::from_json(&read(path)?)?;
    let ctx = PrecisionContext::for_digits(30);
    let curve: Curve = input.build(&ctx)?;
    let hyp = check_assumptions(&curve);
    let mut report = Report::new("check", &path.display().to_string(), 30);
    for (name, ok) in [
        ("(i) roots of Phi are roots of unity", hyp.roots_of_unity.passed),
        ("(ii) f has real coefficients", hyp.real_coefficients),
        ("(iii) |f| < 1 on [0,1) and f(1) > 0", hyp.bounded.passed),
        ("(iv) exactly one root of f in (0,1)", hyp.unique_unit_root.passed),
        ("(v) (-1)^(n-1) * product of roots > 0", hyp.product_sign.passed),
    ] {
        report.check(name, if ok { 0.0 } else { 1.0 }, 0.0);
    }
    for f in hyp.failures() {
        report.note(f);
    }
    report.details = serde_json::json!({
        "N": curve.big_n,
        "f": curve.f.to_string(),
        "genus": curve.genus().ok(),
        "hypotheses": hyp,
    });
    report.finish();
    Ok(report)
}

pub struct RegulatorArgs<'a> {
    pub symbol: &'a str,
    pub cycle: &'a str,
    pub methods: &'a [Method],
    pub digits: u32,
    pub timings: bool,
}

fn symbol_spec(s: &str) -> Result<SymbolSpec> {
    SymbolSpec::named(s).or_else(|_| SymbolSpec::parse_literal(s))
}

/// Σ_k reg_term_integral over the same k range the series used.
pub fn termwise_integral(curve: &Curve, terms: usize, ctx: &PrecisionContext) -> Result<BigFloat> {
    let mut sum = BigFloat::zero(ctx);
    for k in 1..=terms {
        sum += reg_term_integral(curve, k, ctx)?;
    }
    Ok(sum)
}

/// The three regulator methods for {1−Y,X} on δ, or the direct method alone for other pairs.
pub fn regulator_values(
    curve: &Curve,
    symbol: &SymbolSpec,
    cycle: &CycleSpec,
    methods: &[Method],
    ctx: &PrecisionContext,
    timings: bool,
) -> Result<Vec<(Method, BigFloat, Option<f64>)>> {
    let standard = symbol.name == "xi" && cycle.name == "delta";
    let mut out = Vec::new();
    let mut terms = None;
    for &m in methods {
        let t = std::time::Instant::now();
        let v = match m {
            Method::Series | Method::Integral if !standard => {
                return Err(Error::Param(format!(
                    "the {} method only covers symbol xi on cycle delta",
                    m.name()
                )))
            }
            Method::Series => {
                let s = reg_series_detailed(curve, ctx)?;
                terms = Some(s.terms);
                s.value
            }
            Method::Integral => {
                let k = match terms {
                    Some(k) => k,
                    None => reg_series_detailed(curve, ctx)?.terms,
                };
                termwise_integral(curve, k, ctx)?
            }
            Method::Direct => reg_direct_many(
                curve,
                std::slice::from_ref(symbol),
                cycle,
                &DirectOptions::default(),
                ctx,
            )?
            .remove(0),
        };
        out.push((m, v, timings.then(|| t.elapsed().as_secs_f64())));
    }
    Ok(out)
}

pub fn max_pairwise(values: &[BigFloat]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            worst = worst.max(Real::abs(&(a.clone() - b)).to_f64());
        }
    }
    worst
}

pub fn run_regulator(path: &Path, args: &RegulatorArgs) -> Result<Report> {
    let input = CurveInput::from_json(&read(path)?)?;
    let ctx = PrecisionContext::for_digits(args.digits);
    let curve: Curve = input.build::<BigFloat>(&ctx)?.certify();
    let symbol = symbol_spec(args.symbol)?;
    let cycle = CycleSpec::named(args.cycle)?;
    let values = regulator_values(&curve, &symbol, &cycle, args.methods, &ctx, args.timings)?;
    let mut report = Report::new("regulator", &path.display().to_string(), args.digits);
    let name = format!("r({})({})", symbol, cycle.name);
    for (m, v, t) in &values {
        let q = report.quantity(&format!("{name} [{}]", m.name()), v, args.digits, &[m.name()]);
        q.elapsed_s = t.map(|s| (s * 1000.0).round() / 1000.0);
    }
    if values.len() > 1 {
        let vs: Vec<BigFloat> = values.iter().map(|v| v.1.clone()).collect();
        report.check(
            "max pairwise deviation between methods",
            max_pairwise(&vs),
            10f64.powi(-(args.digits as i32 - 5)),
        );
    }
    report.details = serde_json::json!({
        "N": curve.big_n,
        "f": curve.f.to_string(),
        "hypotheses_passed": curve.require_certificate().is_ok(),
    });
    report.finish();
    Ok(report)
}

pub struct LValueArgs {
    pub order: usize,
    pub digits: u32,
    pub n_max: Option<usize>,
    pub check_cutoff: bool,
    pub timings: bool,
}

/// L^{(r)}(0) plus the functional-equation and coefficient checks.
#[allow(clippy::too_many_arguments)]
pub fn lvalue_into(
    report: &mut Report,
    name: &str,
    spec: &LSpec,
    order: usize,
    digits: u32,
    n_max: Option<usize>,
    check_cutoff: bool,
    timings: bool,
) -> Result<BigFloat> {
    let timer = Timer::start(timings);
    let opts = LOptions {
        n_max,
        ..LOptions::default()
    };
    let lf = LFunction::<BigFloat>::new(spec, digits, &opts)?;
    let d = lf.l_derivative_at_zero(order, &opts)?;
    let ctx = PrecisionContext::for_digits(digits);
    let value = <BigFloat as Real>::parse(&d.value, &ctx)?;
    let tol = 10f64.powi(-(digits as i32 - 2));
    let q = report.quantity(
        name,
        &value,
        digits,
        &["approximate functional equation", "Cauchy integral"],
    );
    timer.stamp(q);
    for c in lf.fe_checks()? {
        report.check(
            &format!("{name}: theta invariance at s = {}", c.s),
            c.theta_residual,
            tol,
        );
    }
    report.check(
        &format!("{name}: imaginary part of the Cauchy integral"),
        d.imag_residual,
        tol,
    );
    report.check(
        &format!("{name}: coefficients violating the Ramanujan bound"),
        lf.weil_violations.len() as f64,
        0.0,
    );
    report.check(
        &format!("{name}: tail beyond n_max"),
        lf.tail_estimate,
        10f64.powi(-(digits as i32)),
    );
    if check_cutoff {
        let doubled = LOptions {
            n_max: Some(2 * lf.n_max),
            ..opts
        };
        let lf2 = LFunction::<BigFloat>::new(spec, digits, &doubled)?;
        let d2 = lf2.l_derivative_at_zero(order, &doubled)?;
        let v2 = <BigFloat as Real>::parse(&d2.value, &ctx)?;
        let rel = Real::abs(&(v2 - &value)).to_f64() / Real::abs(&value).to_f64().max(1.0);
        report.check(&format!("{name}: change when n_max is doubled"), rel, tol);
    }
    let entry = serde_json::json!({
        "name": name,
        "n_max": lf.n_max,
        "sign": lf.w,
        "sign_solved": lf.w_solved,
        "cauchy_radius": d.radius,
        "cauchy_nodes": d.nodes,
    });
    match &mut report.details {
        serde_json::Value::Array(a) => a.push(entry),
        other => *other = serde_json::Value::Array(vec![entry]),
    }
    Ok(value)
}

pub fn run_lvalue(path: &Path, args: &LValueArgs) -> Result<Report> {
    let spec = LSpec::from_json(&read(path)?, path.parent())?;
    let mut report = Report::new("lvalue", &path.display().to_string(), args.digits);
    lvalue_into(
        &mut report,
        &format!("L^({})(0)", args.order),
        &spec,
        args.order,
        args.digits,
        args.n_max,
        args.check_cutoff,
        args.timings,
    )?;
    report.finish();
    Ok(report)
}
