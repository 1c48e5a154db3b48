use num_rational::BigRational;
use proptest::prelude::*;

use regulus_core::curvespec::genus;
use regulus_core::hiprec::{beta_real, log_tracked, Complex};
use regulus_core::lauricella::{fd_integral, fd_series, FDParams};
use regulus_core::lfunc::{dirichlet_from_euler, leibniz_product_derivative};
use regulus_core::ratapprox::best_rational;
use regulus_core::{BigFloat, PrecisionContext, Real};

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn beta_duplication(x in 0.05f64..15.0) {
        let ctx = PrecisionContext::for_digits(30);
        let x = BigFloat::from_f64(x, &ctx);
        let lhs: BigFloat = beta_real(&x, &(x.clone() + 1.0), &ctx).unwrap();
        let rhs: BigFloat = beta_real(&x, &x, &ctx).unwrap() / 2.0;
        prop_assert!(Real::abs(&((lhs - &rhs) / rhs)).to_f64() < 1e-28);
    }

    #[test]
    fn beta_is_symmetric(a in 0.1f64..8.0, b in 0.1f64..8.0) {
        let ctx = PrecisionContext::for_digits(25);
        let (a, b) = (BigFloat::from_f64(a, &ctx), BigFloat::from_f64(b, &ctx));
        let ab: BigFloat = beta_real(&a, &b, &ctx).unwrap();
        let ba: BigFloat = beta_real(&b, &a, &ctx).unwrap();
        prop_assert!(Real::abs(&((ab - &ba) / ba)).to_f64() < 1e-24);
    }

    #[test]
    fn genus_matches_riemann_hurwitz(big_n in 2u64..12, n in 1u64..40) {
        let num = (big_n - 1) * n + 1 - num_integer::gcd(big_n, n + 1);
        match genus(big_n, n) {
            Ok(g) => prop_assert_eq!(2 * g, num),
            Err(_) => prop_assert!(num % 2 == 1),
        }
    }

    #[test]
    fn rationalization_is_scale_free(p in -400i64..400, q in 1i64..400, k in 1i64..9) {
        let ctx = PrecisionContext::for_digits(40);
        let x: BigFloat = BigFloat::from_f64(p as f64, &ctx) / (q as f64);
        let y: BigFloat = BigFloat::from_f64((k * p) as f64, &ctx) / ((k * q) as f64);
        let rx = best_rational(&x, 1000, 1e-30, &ctx).map(|r| r.0);
        let ry = best_rational(&y, 1000, 1e-30, &ctx).map(|r| r.0);
        prop_assert_eq!(rx.clone(), ry);
        prop_assert_eq!(rx, Some(BigRational::new(p.into(), q.into())));
    }

    #[test]
    fn euler_products_are_multiplicative(seed in proptest::collection::vec(-3i64..=3, 8)) {
        // a degree-2 local factor per prime class, chosen from the seed
        let a = dirichlet_from_euler(600, |p, _| {
            let t = seed[(p % 8) as usize];
            Ok(if p % 5 == 0 { vec![1, -t] } else { vec![1, -t, p as i64] })
        })
        .unwrap();
        for m in 1..=600usize {
            for n in 2..=600 / m {
                if num_integer::gcd(m, n) == 1 {
                    prop_assert_eq!(a[m * n], a[m] * a[n]);
                }
            }
        }
    }

    #[test]
    fn leibniz_matches_product_expansion(
        f in proptest::collection::vec(-5i32..=5, 5),
        g in proptest::collection::vec(-5i32..=5, 5),
        of in 0usize..3,
        og in 0usize..3,
        r in 0usize..5,
    ) {
        let ctx = PrecisionContext::new(53);
        // Taylor coefficients with the vanishing orders built in
        let cf: Vec<f64> = f.iter().enumerate().map(|(k, &c)| if k < of { 0.0 } else { c as f64 }).collect();
        let cg: Vec<f64> = g.iter().enumerate().map(|(k, &c)| if k < og { 0.0 } else { c as f64 }).collect();
        let derivs = |c: &[f64]| c.iter().enumerate().map(|(k, v)| v * factorial(k)).collect::<Vec<f64>>();
        let got = leibniz_product_derivative(&[(derivs(&cf), of), (derivs(&cg), og)], r, &ctx);
        let prod: f64 = (0..=r).map(|k| cf[k] * cg[r - k]).sum();
        prop_assert!((got - prod * factorial(r)).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fd_series_matches_euler_integral(
        a in 0.1f64..2.0,
        gap in 0.3f64..2.5,
        params in proptest::collection::vec((-2.0f64..2.0, 0.0f64..0.6, -3.0f64..3.0), 1..=3),
    ) {
        let ctx = PrecisionContext::for_digits(20);
        let b: Vec<BigFloat> = params.iter().map(|t| BigFloat::from_f64(t.0, &ctx)).collect();
        let x: Vec<Complex<BigFloat>> = params
            .iter()
            .map(|&(_, r, th)| Complex::from_f64(r * th.cos(), r * th.sin(), &ctx))
            .collect();
        let p = FDParams::real(BigFloat::from_f64(a, &ctx), b, BigFloat::from_f64(a + gap, &ctx), x).unwrap();
        let s = fd_series(&p, 1e-24, &ctx).unwrap();
        let i = fd_integral(&p, &ctx).unwrap();
        prop_assert!((s - i).abs().to_f64() < 1e-16);
    }

    #[test]
    fn tracked_log_winds_by_two_pi(turns in -2i32..=2, cx in -0.5f64..0.5, cy in -0.5f64..0.5) {
        let ctx = PrecisionContext::for_digits(30);
        let steps = 64 * turns.unsigned_abs().max(1) as usize;
        // a loop around 0 for nonzero turns, otherwise a small circle away from 0
        let (centre, radius, laps) = if turns != 0 { ((cx, cy), 1.0, turns as f64) } else { ((2.0 + cx, cy), 0.3, 1.0) };
        let point = |s: usize| {
            let th = (s % steps) as f64 / steps as f64 * std::f64::consts::TAU * laps;
            Complex::from_f64(centre.0 + radius * th.cos(), centre.1 + radius * th.sin(), &ctx)
        };
        let start: Complex<BigFloat> = point(0).ln();
        let mut w = start.clone();
        for s in 1..=steps {
            w = log_tracked(&w, &point(s)).unwrap();
        }
        let jump = w - start;
        let two_pi: BigFloat = <BigFloat as Real>::pi(&ctx) * 2.0;
        let want: BigFloat = two_pi * turns as f64;
        prop_assert!(Real::abs(&jump.re).to_f64() < 1e-25);
        prop_assert!(Real::abs(&(jump.im - want)).to_f64() < 1e-25);
    }
}
