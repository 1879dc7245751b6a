use lmk_core::coeffs::{gen_lame_tables, gen_mathieu_tables};
use lmk_core::exact::{int, rat, Rational};
use lmk_core::expand::{eigen_series_exact, formal_residual};

#[test]
fn residual_annihilated_through_order_n() {
    for k2 in [int(0), rat(1, 4), rat(1, 2)] {
        for m in 0..=3u32 {
            let t = gen_lame_tables(m, &k2, 4).unwrap();
            for n in 0..=4 {
                let r = formal_residual(&t, n).unwrap();
                for (j, d) in r.iter().enumerate().take(n + 1) {
                    assert!(d.is_zero(), "k2={k2} m={m} n={n} j={j}");
                }
                assert!(!r[n + 1].is_zero(), "k2={k2} m={m} n={n}: first omitted order vanishes");
            }
        }
    }
    for m in 0..=3u32 {
        let t = gen_mathieu_tables(m, 4).unwrap();
        let r = formal_residual(&t, 4).unwrap();
        assert!(r.iter().take(5).all(|d| d.is_zero()));
    }
}

#[test]
fn lame_limit_is_mathieu_exactly() {
    for m in 0..=4u32 {
        let l = gen_lame_tables(m, &int(0), 5).unwrap();
        let mt = gen_mathieu_tables(m, 5).unwrap();
        for h in [rat(5, 1), rat(37, 3), rat(200, 1)] {
            let kappa: Rational = int(2) * &h;
            for n in 0..=5 {
                let lv = eigen_series_exact(&l, &kappa, n).unwrap();
                let mv = eigen_series_exact(&mt, &h, n).unwrap();
                assert_eq!(lv - int(2) * &h * &h, mv, "m={m} h={h} n={n}");
            }
        }
    }
}
