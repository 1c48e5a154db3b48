use regulus_core::curvespec::{build_curve, preset, Family};
use regulus_core::lfunc::{LFunction, LOptions, LSpec};
use regulus_core::regulator::{reg_direct_many, reg_series, CycleSpec, DirectOptions, SymbolSpec};
use regulus_core::{BigFloat, Curve, Error, PrecisionContext, Real};

const CONGRUENT: &str = r#"{
  "degree": 2, "conductor": 32, "sign": "solve",
  "coeffs": {"source": "elliptic-q", "f": [0, -1, 0, 1]},
  "bad_factors": [{"p": 2, "poly": [1]}]
}"#;

const RANK_ONE: &str = r#"{
  "degree": 2, "conductor": 92, "sign": -1,
  "coeffs": {"source": "elliptic-q", "f": [1, -1, 0, 1]},
  "bad_factors": [{"p": 2, "poly": [1]}, {"p": 23, "poly": [1, -1]}]
}"#;

fn parse(s: &str, digits: u32) -> BigFloat {
    <BigFloat as Real>::parse(s, &PrecisionContext::for_digits(digits)).unwrap()
}

#[test]
fn first_derivative_matches_dirichlet_series_at_two() {
    // Λ(0) = wΛ(2) gives L'(0) = w·A²·L(2), and Σ a_n n^-2 converges absolutely
    for (text, w) in [(CONGRUENT, 1), (RANK_ONE, -1)] {
        let spec = LSpec::from_json(text, None).unwrap();
        let lf = LFunction::<BigFloat>::new(&spec, 15, &LOptions::default()).unwrap();
        assert_eq!(lf.w, w);
        let got = lf.l_derivative_at_zero(1, &LOptions::default()).unwrap().value_f64;
        let n = 40_000;
        let a = spec.coefficients(n).unwrap();
        let l2: f64 = (1..=n).rev().map(|k| a[k] as f64 / (k as f64 * k as f64)).sum();
        let big_a2 = spec.conductor as f64 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
        let want = w as f64 * big_a2 * l2;
        assert!(((got - want) / want).abs() < 1e-5, "{got} vs {want}");
    }
}

#[test]
fn derivative_is_stable_under_cutoff_and_precision() {
    let spec = LSpec::from_json(RANK_ONE, None).unwrap();
    let base = LFunction::<BigFloat>::new(&spec, 15, &LOptions::default()).unwrap();
    let v15 = parse(&base.l_derivative_at_zero(1, &LOptions::default()).unwrap().value, 30);
    let doubled = LOptions {
        n_max: Some(2 * base.n_max),
        ..LOptions::default()
    };
    let lf = LFunction::<BigFloat>::new(&spec, 15, &doubled).unwrap();
    let v15d = parse(&lf.l_derivative_at_zero(1, &doubled).unwrap().value, 30);
    let lf = LFunction::<BigFloat>::new(&spec, 25, &LOptions::default()).unwrap();
    let v25 = parse(&lf.l_derivative_at_zero(1, &LOptions::default()).unwrap().value, 30);
    assert!(Real::abs(&(v15.clone() - &v15d)).to_f64() < 1e-13);
    assert!(Real::abs(&(v15 - &v25)).to_f64() < 1e-13);
    // odd sign forces a zero of L at the centre
    let v0 = parse(&lf.l_derivative_at_zero(0, &LOptions::default()).unwrap().value, 30);
    assert!(Real::abs(&v0).to_f64() < 1e-20);
}

#[test]
fn wrong_sign_fails_theta_test() {
    let spec = LSpec::from_json(&RANK_ONE.replace("\"sign\": -1", "\"sign\": 1"), None).unwrap();
    let lf = LFunction::<BigFloat>::new(&spec, 15, &LOptions::default()).unwrap();
    let worst = lf
        .fe_checks()
        .unwrap()
        .iter()
        .map(|c| c.theta_residual)
        .fold(0.0, f64::max);
    assert!(worst > 1e-6, "{worst}");
}

#[test]
fn malformed_spec_names_the_field() {
    let err = LSpec::from_json(r#"{"degree": 2, "sign": 1, "coeffs": {}}"#, None).unwrap_err();
    assert!(matches!(err, Error::Parse(_)));
    assert!(err.to_string().contains("conductor"), "{err}");
}

#[test]
fn regulator_methods_agree_on_both_families() {
    let ctx = PrecisionContext::for_digits(20);
    let xi = SymbolSpec::named("xi").unwrap();
    let delta = CycleSpec::named("delta").unwrap();
    for (fam, n, l) in [(Family::Ex1, 2, 0), (Family::Ex2, 3, 1)] {
        let curve: Curve = build_curve::<BigFloat>(2, &preset(fam, n, l).unwrap(), &ctx)
            .unwrap()
            .certify();
        let s = reg_series(&curve, &ctx).unwrap();
        let d = reg_direct_many(
            &curve,
            std::slice::from_ref(&xi),
            &delta,
            &DirectOptions::default(),
            &ctx,
        )
        .unwrap()
        .remove(0);
        assert!(Real::abs(&(s - d)).to_f64() < 1e-16, "{fam:?} n={n}");
    }
}

#[test]
fn double_and_multiprecision_paths_agree() {
    let ctx = PrecisionContext::new(53);
    let f = preset(Family::Ex1, 3, 0).unwrap();
    let low = build_curve::<f64>(2, &f, &ctx).unwrap().certify();
    let x: f64 = reg_series(&low, &ctx).unwrap();
    let hctx = PrecisionContext::for_digits(30);
    let high: Curve = build_curve::<BigFloat>(2, &f, &hctx).unwrap().certify();
    let y = reg_series(&high, &hctx).unwrap();
    assert!((x - y.to_f64()).abs() < 1e-12);
}
