use std::f64::consts::PI;

use lmk_core::exact::{int, TPoly};
use lmk_core::quad::integrate;
use lmk_core::special::{elliptic_k, hermite, jacobi_arcsn, jacobi_sncndn, pcf_d, pcf_d_both};

#[test]
fn jacobi_identities_and_period() {
    for k in [0.0, 0.1, 0.5, 0.7071067811865476, 0.9, 0.99] {
        let kq = elliptic_k(k).unwrap();
        for i in -40..=40 {
            let z = i as f64 * 0.37;
            let e = jacobi_sncndn(z, k).unwrap();
            assert!((e.sn * e.sn + e.cn * e.cn - 1.0).abs() < 1e-13);
            assert!((e.dn * e.dn + k * k * e.sn * e.sn - 1.0).abs() < 1e-13);
            let p = jacobi_sncndn(z + 4.0 * kq, k).unwrap();
            assert!((p.sn - e.sn).abs() < 1e-12 && (p.cn - e.cn).abs() < 1e-12);
        }
        let e = jacobi_sncndn(kq, k).unwrap();
        assert!((e.sn - 1.0).abs() < 1e-13 && e.cn.abs() < 1e-7);
    }
}

#[test]
fn arcsn_inverts_sn() {
    for k in [0.0, 0.3, 0.8] {
        for i in -10..=10 {
            let x = i as f64 / 10.5;
            let z = jacobi_arcsn(x, k).unwrap();
            assert!((jacobi_sncndn(z, k).unwrap().sn - x).abs() < 1e-14);
        }
    }
    assert!(jacobi_arcsn(1.5, 0.3).is_err());
}

#[test]
fn elliptic_k_against_quadrature() {
    for k in [0.0, 0.2, 0.5, 0.8, 0.95] {
        let q = integrate(|th: f64| 1.0 / (1.0 - k * k * th.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-16, 1e-15)
            .unwrap();
        let agm = elliptic_k(k).unwrap();
        assert!((agm - q).abs() < 1e-12 * q, "k={k}: {agm} vs {q}");
    }
}

#[test]
fn weber_equation_residual() {
    // D'' + (m + 1/2 - t²/4) D = 0, with D'' by the recurrence
    // D_m'' = m D_{m-1}' - D_m/2 - (t/2) D_m'.
    for m in 0..=8u32 {
        for i in -60..=60 {
            let t = i as f64 * 0.1;
            let (d, dp) = pcf_d_both(m, t);
            let dm1p = if m == 0 { 0.0 } else { pcf_d_both(m - 1, t).1 };
            let dpp = m as f64 * dm1p - 0.5 * d - 0.5 * t * dp;
            let res = dpp + (m as f64 + 0.5 - t * t / 4.0) * d;
            assert!(res.abs() < 1e-10, "m={m} t={t}: {res}");
        }
    }
}

#[test]
fn weber_residual_by_finite_differences() {
    let h = 1e-3;
    for m in 0..=5u32 {
        for i in -20..=20 {
            let t = i as f64 * 0.25;
            let dpp = (pcf_d(m, t + h) - 2.0 * pcf_d(m, t) + pcf_d(m, t - h)) / (h * h);
            let res = dpp + (m as f64 + 0.5 - t * t / 4.0) * pcf_d(m, t);
            // h² D⁗ / 12 truncation, and D⁗ grows like m².
            assert!(res.abs() < 1e-6 * ((m + 1) * (m + 1)) as f64, "m={m} t={t}: {res}");
        }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |a, i| a * i as f64)
}

#[test]
fn parabolic_cylinder_orthogonality() {
    for m in 0..=6u32 {
        for n in 0..=6u32 {
            let v = integrate(|t| pcf_d(m, t) * pcf_d(n, t), -40.0, 40.0, 1e-15, 1e-13).unwrap();
            let want = if m == n { factorial(m) * (2.0 * PI).sqrt() } else { 0.0 };
            assert!((v - want).abs() < 1e-11 * factorial(m.max(n)), "m={m} n={n}: {v}");
        }
    }
    let d3 = integrate(|t| pcf_d(3, t).powi(2), -40.0, 40.0, 1e-15, 1e-14).unwrap();
    assert!((d3 - 6.0 * (2.0 * PI).sqrt()).abs() < 1e-12);
}

#[test]
fn hermite_against_explicit_sum() {
    // H_m(t) = m! Σ_j (-1)^j (2t)^{m-2j} / (j! (m-2j)!)
    for m in 0..=12u32 {
        let h = hermite(m);
        let mut want = vec![int(0); m as usize + 1];
        let fact = |n: u32| (1..=n as i64).fold(int(1), |a, i| a * int(i));
        for j in 0..=m / 2 {
            let sign = if j % 2 == 0 { int(1) } else { int(-1) };
            let c = sign * fact(m) * int(1i64 << (m - 2 * j)) / (fact(j) * fact(m - 2 * j));
            want[(m - 2 * j) as usize] = c;
        }
        assert_eq!(h, TPoly::from_coeffs(want), "m={m}");
    }
}
