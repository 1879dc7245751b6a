//! Generated tables against the published closed forms, exactly.

use lmk_core::coeffs::{degree_bounds, gen_lame_tables, gen_mathieu_tables};
use lmk_core::exact::{int, rat, Rational, TPoly};

fn poly(terms: &[(usize, Rational)]) -> TPoly {
    let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut v = vec![int(0); deg + 1];
    for (k, c) in terms {
        v[*k] += c;
    }
    TPoly::from_coeffs(v)
}

fn two(p: u32) -> Rational {
    rat(1, 1i64 << p)
}

#[test]
fn lame_first_terms() {
    for k2 in [int(0), rat(1, 4), rat(1, 2), rat(2, 3), rat(7, 8)] {
        let c = &k2 + int(1);
        for m in 0..=4i64 {
            let t = gen_lame_tables(m as u32, &k2, 2).unwrap();
            let mm = int(m);
            let twom1 = int(2 * m + 1);
            assert_eq!(t.a[0], TPoly::one());
            assert!(t.b[0].is_zero());
            assert_eq!(t.p[0], TPoly::one());
            assert!(t.q[0].is_zero());
            assert_eq!(t.a[1], poly(&[(2, &c / int(32))]));
            assert_eq!(t.b[1], poly(&[(3, &c / int(16)), (1, -(&c / int(16)) * &twom1)]));
            assert_eq!(t.p[1], poly(&[(2, (&k2 + int(9)) / int(32))]));
            assert_eq!(t.q[1], t.b[1]);
            assert_eq!(t.eta[1], (int(3) - &k2) / int(16) * &twom1);
            assert_eq!(t.mu[1], -(&c / int(8)) * (int(1) + int(2) * &mm + int(2) * &mm * &mm));
            let km1 = &k2 - int(1);
            let mu2 = -(&twom1 / int(32)) * (&km1 * &km1 * (int(1) + &mm + &mm * &mm) - int(2) * &k2);
            assert_eq!(t.mu[2], mu2, "m={m} k2={k2}");
        }
    }
}

#[test]
fn lame_extraction_identity_first_order() {
    let k2 = rat(1, 2);
    for m in 0..=4i64 {
        let t = gen_lame_tables(m as u32, &k2, 1).unwrap();
        let a11 = t.a[1].coeff(2);
        let b10 = t.b[1].coeff(1);
        assert_eq!(a11, (&k2 + int(1)) / int(32));
        assert_eq!(b10, -(&k2 + int(1)) * int(2 * m + 1) / int(16));
        assert_eq!(int(2 * m + 1) * b10 - int(2) * a11, t.mu[1]);
    }
}

fn mathieu_q2_corrected(m: i64) -> TPoly {
    let mm = int(m);
    poly(&[
        (5, two(7)),
        (3, -int(1 + 2 * m) * int(13) * two(11)),
        (1, -(int(11) + int(20) * &mm + int(20) * &mm * &mm) * two(11)),
    ])
}

#[test]
fn mathieu_first_terms() {
    for m in 0..=4i64 {
        let t = gen_mathieu_tables(m as u32, 2).unwrap();
        let mm = int(m);
        let c1 = int(1 + 2 * m);
        assert_eq!(t.mu[0], &mm + rat(1, 2));
        assert_eq!(t.mu[1], -(int(1) + int(2) * &mm + int(2) * &mm * &mm) / int(16));
        assert_eq!(t.mu[2], -(int(1) + int(3) * &mm + int(3) * &mm * &mm + int(2) * &mm * &mm * &mm) / int(128));
        assert_eq!(t.eta[1], int(6 * m + 3) / int(32));
        assert_eq!(t.a[1], poly(&[(2, two(6))]));
        let b1 = poly(&[(3, two(5)), (1, -&c1 * two(5))]);
        assert_eq!(t.b[1], b1);
        assert_eq!(t.q[1], b1);
        assert_eq!(t.p[1], poly(&[(2, int(9) * two(6))]));
        let tail2 = (int(5) + int(6) * &mm - int(12) * &mm * &mm - int(8) * &mm * &mm * &mm) * two(12);
        let a2 = poly(&[
            (8, two(13)),
            (6, -&c1 * two(11)),
            (4, (int(9) + int(10) * &mm + int(10) * &mm * &mm) * two(12)),
            (2, tail2.clone()),
        ]);
        assert_eq!(t.a[2], a2, "A2 m={m}");
        let b2 = poly(&[
            (5, two(8)),
            (3, -&c1 * int(5) * two(11)),
            (1, -(int(11) + int(20) * &mm + int(20) * &mm * &mm) * two(11)),
        ]);
        assert_eq!(t.b[2], b2, "B2 m={m}");
        let p2 = poly(&[
            (8, two(13)),
            (6, -&c1 * two(11)),
            (4, (int(113) + int(10) * &mm + int(10) * &mm * &mm) * two(12)),
            (2, tail2),
        ]);
        assert_eq!(t.p[2], p2, "P2 m={m}");
        assert_eq!(t.q[2], mathieu_q2_corrected(m), "Q2 m={m}");
    }
}

/// The widely reproduced form of `Q_2` carries `11 - 20m - 20m²` in its
/// linear term. `Q_2 - B_2 = (t²/8) B_1` has no linear term, so the linear
/// coefficient must equal that of `B_2`; the generated value does, and the
/// other form differs from it in that coefficient only (for `m ≥ 1`).
#[test]
fn mathieu_q2_linear_term_sign() {
    for m in 0..=4i64 {
        let t = gen_mathieu_tables(m as u32, 2).unwrap();
        assert_eq!(t.q[2].coeff(1), t.b[2].coeff(1));
        let b1_shift = t.b[1].shift(2).scale(&rat(1, 8));
        assert_eq!(&t.q[2] - &t.b[2], b1_shift);
        let mm = int(m);
        let printed_linear = -(int(11) - int(20) * &mm - int(20) * &mm * &mm) * two(11);
        let diff = &t.q[2].coeff(1) - &printed_linear;
        assert_eq!(diff == int(0), m == 0);
        for k in [3, 5] {
            assert_eq!(t.q[2].coeff(k), mathieu_q2_corrected(m).coeff(k));
        }
    }
}

#[test]
fn parity_and_degrees_to_order_eight() {
    for m in 0..=4u32 {
        for k2 in [int(0), rat(1, 2)] {
            let t = gen_lame_tables(m, &k2, 8).unwrap();
            for s in 1..=8 {
                let (da, db) = degree_bounds(s);
                assert_eq!(t.a[s].degree(), Some(da), "A m={m} s={s}");
                assert_eq!(t.b[s].degree(), Some(db), "B m={m} s={s}");
                assert!(t.a[s].is_even() && t.p[s].is_even());
                assert!(t.b[s].is_odd() && t.q[s].is_odd());
                assert_eq!(t.a[s].coeff(0), int(0));
            }
        }
    }
}

#[test]
fn mathieu_scaling_law() {
    for m in 0..=3u32 {
        let l = gen_lame_tables(m, &int(0), 4).unwrap();
        let mt = gen_mathieu_tables(m, 4).unwrap();
        for s in 1..=4usize {
            assert_eq!(&l.mu[s] * two(s as u32), mt.mu[s]);
            assert_eq!(&l.eta[s] * two(s as u32), mt.eta[s]);
        }
    }
}
