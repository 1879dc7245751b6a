use lmk_core::coeffs::{gen_lame_tables, Family};
use lmk_core::exact::{rat, Rational, TPoly};
use lmk_core::expand::{eigen_series, eval_function, formal_residual, Branch, ProblemSpec};
use lmk_core::special::jacobi_sncndn;
use lmk_core::uniform::LiouvilleMap;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = TPoly> {
    prop::collection::vec(rational(), 0..6).prop_map(TPoly::from_coeffs)
}

proptest! {
    #[test]
    fn product_rule(p in poly(), q in poly()) {
        let lhs = (&p * &q).derivative();
        let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&p - &p, TPoly::zero());
    }

    #[test]
    fn rational_eval_matches_float(p in poly(), n in -20i64..20) {
        let t = rat(n, 7);
        let exact = lmk_core::exact::to_f64(&p.eval_exact(&t));
        let approx = p.eval(n as f64 / 7.0);
        prop_assert!((exact - approx).abs() <= 1e-9 * (1.0 + exact.abs()));
    }

    #[test]
    fn jacobi_identities(z in -20.0f64..20.0, k in 0.0f64..0.999) {
        let e = jacobi_sncndn(z, k).unwrap();
        prop_assert!((e.sn * e.sn + e.cn * e.cn - 1.0).abs() < 1e-13);
        prop_assert!((e.dn * e.dn + k * k * e.sn * e.sn - 1.0).abs() < 1e-13);
        let o = jacobi_sncndn(-z, k).unwrap();
        prop_assert!((o.sn + e.sn).abs() < 1e-14 && (o.cn - e.cn).abs() < 1e-14);
    }

    #[test]
    fn liouville_round_trip(s in 0.0f64..0.3, k in 0.0f64..0.95, x in -0.97f64..0.97, lame in any::<bool>()) {
        let family = if lame { Family::Lame } else { Family::Mathieu };
        let k = if lame { k } else { 0.0 };
        let map = LiouvilleMap::new(family, k, s).unwrap();
        let zeta = map.forward(x).unwrap();
        prop_assert!(zeta * x >= 0.0);
        let back = map.inverse(zeta).unwrap();
        prop_assert!((back - x).abs() < 1e-10, "x={} zeta={} back={}", x, zeta, back);
    }

    #[test]
    fn branches_share_the_series(m in 0u32..4, num in 0i64..8, kappa in 20.0f64..5000.0, n in 0usize..4) {
        let k2 = rat(num, 8);
        let t = gen_lame_tables(m, &k2, 3).unwrap();
        let a = ProblemSpec::lame(m, Branch::A, k2.clone(), kappa).unwrap();
        let b = ProblemSpec::lame(m, Branch::B, k2, kappa).unwrap();
        let va = eigen_series(&a, &t, n).unwrap().value;
        let vb = eigen_series(&b, &t, n).unwrap().value;
        prop_assert_eq!(va.hi, vb.hi);
        prop_assert_eq!(va.lo, vb.lo);
    }

    #[test]
    fn residual_vanishes_for_any_modulus(m in 0u32..3, num in 0i64..30, den in 31i64..60) {
        let t = gen_lame_tables(m, &rat(num, den), 2).unwrap();
        let r = formal_residual(&t, 2).unwrap();
        prop_assert!(r.iter().take(3).all(|d| d.is_zero()));
    }

    #[test]
    fn expansion_parity(m in 0u32..4, b in any::<bool>(), z in 0.0f64..0.12, mathieu in any::<bool>()) {
        let branch = if b { Branch::B } else { Branch::A };
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        if mathieu {
            let spec = ProblemSpec::mathieu(m, branch, 400.0).unwrap();
            let t = lmk_core::coeffs::gen_mathieu_tables(m, 2).unwrap();
            // Reflection about π/2 sends t to -t and keeps sin z.
            let p = core::f64::consts::FRAC_PI_2;
            let l = eval_function(&spec, &t, p - z, 2).unwrap();
            let r = eval_function(&spec, &t, p + z, 2).unwrap();
            prop_assert!((l - sign * r).abs() <= 1e-12 * (1.0 + l.abs()));
        } else {
            let spec = ProblemSpec::lame(m, branch, rat(1, 2), 400.0).unwrap();
            let t = gen_lame_tables(m, &rat(1, 2), 2).unwrap();
            let l = eval_function(&spec, &t, z, 2).unwrap();
            let r = eval_function(&spec, &t, -z, 2).unwrap();
            prop_assert!((l - sign * r).abs() <= 1e-12 * (1.0 + l.abs()));
        }
    }
}
