//! JSON report shared by every command.

use std::time::Instant;

use regulus_core::ratapprox::best_rational;
use regulus_core::{BigFloat, PrecisionContext, Real};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Reference {
    pub value: String,
    pub origin: String,
    /// Relative agreement in decimal digits, capped at the digits the reference carries.
    pub agreement_digits: f64,
    pub required_digits: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: String,
    /// Decimal digits the value was computed to.
    pub digits: u32,
    pub methods: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_s: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ratio {
    pub numerator: String,
    pub denominator: String,
    pub rational: Option<String>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub target: String,
    pub digits: u32,
    pub quantities: Vec<Quantity>,
    pub checks: Vec<Check>,
    pub ratios: Vec<Ratio>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    pub pass: bool,
}

/// Significant digits shown for a value computed to `digits`.
pub fn render(x: &BigFloat, digits: u32) -> String {
    x.to_sci(digits as usize)
}

pub fn agreement_digits(x: &BigFloat, reference: &BigFloat, cap: f64) -> f64 {
    let diff = Real::abs(&(x.clone() - reference)).to_f64();
    let scale = Real::abs(reference).to_f64().max(1e-300);
    if diff == 0.0 {
        return cap;
    }
    (-(diff / scale).log10()).min(cap)
}

/// Digits carried by a printed decimal string.
pub fn printed_digits(s: &str) -> f64 {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len() as f64
}

impl Report {
    pub fn new(command: &str, target: &str, digits: u32) -> Self {
        Self {
            command: command.into(),
            target: target.into(),
            digits,
            quantities: Vec::new(),
            checks: Vec::new(),
            ratios: Vec::new(),
            notes: Vec::new(),
            details: serde_json::Value::Null,
            pass: true,
        }
    }

    pub fn quantity(&mut self, name: &str, value: &BigFloat, digits: u32, methods: &[&str]) -> &mut Quantity {
        self.quantities.push(Quantity {
            name: name.into(),
            value: render(value, digits),
            digits,
            methods: methods.iter().map(|m| m.to_string()).collect(),
            reference: None,
            elapsed_s: None,
            pass: true,
        });
        self.quantities.last_mut().expect("just pushed")
    }

    /// Adds a value compared against a reference constant.
    #[allow(clippy::too_many_arguments)]
    pub fn compare(
        &mut self,
        name: &str,
        value: &BigFloat,
        digits: u32,
        methods: &[&str],
        reference: &str,
        origin: &str,
        required: u32,
    ) {
        let ctx = PrecisionContext::for_digits(60);
        let r = <BigFloat as Real>::parse(reference, &ctx).expect("reference constants parse");
        let agree = agreement_digits(value, &r, printed_digits(reference));
        let q = self.quantity(name, value, digits, methods);
        q.pass = agree >= required as f64;
        q.reference = Some(Reference {
            value: reference.into(),
            origin: origin.into(),
            agreement_digits: (agree * 100.0).round() / 100.0,
            required_digits: required,
        });
    }

    pub fn check(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }

    /// Rationalizes num/den with denominators up to `max_den`.
    pub fn ratio(
        &mut self,
        numerator: &str,
        denominator: &str,
        num: &BigFloat,
        den: &BigFloat,
        tol: f64,
        expected: Option<&str>,
    ) {
        let ctx = PrecisionContext::new(num.prec().min(den.prec()));
        let q = num.clone() / den;
        let found = best_rational(&q, 1000, tol, &ctx);
        let rational = found.as_ref().map(|(r, _)| r.to_string());
        let pass = match (expected, &rational) {
            (Some(e), Some(r)) => e == r,
            (None, Some(_)) => true,
            _ => false,
        };
        self.ratios.push(Ratio {
            numerator: numerator.into(),
            denominator: denominator.into(),
            rational,
            residual: found.map(|(_, r)| r),
            tolerance: tol,
            expected: expected.map(String::from),
            pass,
        });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Sets `pass` from every comparison in the report.
    pub fn finish(&mut self) {
        self.pass = self.quantities.iter().all(|q| q.pass)
            && self.checks.iter().all(|c| c.pass)
            && self.ratios.iter().all(|r| r.pass);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Wall-clock timer whose readings only reach the report when timings are on.
pub struct Timer {
    start: Instant,
    enabled: bool,
}

impl Timer {
    pub fn start(enabled: bool) -> Self {
        Self {
            start: Instant::now(),
            enabled,
        }
    }

    pub fn stamp(&self, q: &mut Quantity) {
        if self.enabled {
            q.elapsed_s = Some((self.start.elapsed().as_secs_f64() * 1000.0).round() / 1000.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_counting() {
        assert_eq!(printed_digits("-0.4709590"), 7.0);
        assert_eq!(printed_digits("38.6064"), 6.0);
        assert_eq!(printed_digits("1.5e-3"), 2.0);
    }

    #[test]
    fn comparisons_and_ratios() {
        let ctx = PrecisionContext::for_digits(30);
        let x = <BigFloat as Real>::parse("0.33333333333333333333333", &ctx).unwrap();
        let one = BigFloat::with_val(ctx.prec_bits, 1);
        let mut r = Report::new("test", "x", 20);
        r.compare("third", &x, 20, &["exact"], "0.3333333333", "reference", 9);
        r.ratio("third", "one", &x, &one, 1e-12, Some("1/3"));
        r.finish();
        assert!(r.pass, "{}", r.to_json());
        r.compare("off", &x, 20, &["exact"], "0.3334", "reference", 4);
        r.finish();
        assert!(!r.pass);
    }
}
