//! Complete elliptic integral, Jacobi elliptic functions, Hermite polynomials
//! and parabolic cylinder functions of non-negative integer order.

use alloc::format;

#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::error::{Error, Result};
use crate::exact::{int, TPoly};
use crate::real::Real;

/// `(sn, cn, dn)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// `K(k)` by the arithmetic-geometric mean.
pub fn elliptic_k<R: Real>(k: R) -> Result<R> {
    elliptic_k_k2(k * k).map_err(|_| Error::Domain(format!("elliptic_K needs 0 <= k < 1, got {k:?}")))
}

/// `K` as a function of the parameter `k²`.
pub fn elliptic_k_k2<R: Real>(k2: R) -> Result<R> {
    if !(k2 >= R::zero() && k2 < R::one()) {
        return Err(Error::Domain(format!("elliptic_K needs 0 <= k^2 < 1, got {k2:?}")));
    }
    let mut a = R::one();
    let mut b = (R::one() - k2).sqrt();
    let half = R::from_f64(0.5);
    for _ in 0..64 {
        if (a - b).abs().to_f64() <= 4.0 * R::epsilon() * a.to_f64() {
            break;
        }
        let an = (a + b) * half;
        b = (a * b).sqrt();
        a = an;
    }
    Ok(R::pi() / (a + a))
}

/// Jacobi `sn, cn, dn` by descending Landen transformation, with the
/// argument reduced modulo `4K` first.
pub fn jacobi_sncndn(z: f64, k: f64) -> Result<EllipticTriple> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus must satisfy 0 <= k < 1, got {k}")));
    }
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if k == 0.0 {
        return Ok(EllipticTriple { sn: z.sin(), cn: z.cos(), dn: 1.0 });
    }
    let period = 4.0 * elliptic_k(k)?;
    let u = z - period * (z / period).round();

    let mut a = [0.0f64; 32];
    let mut c = [0.0f64; 32];
    a[0] = 1.0;
    c[0] = k;
    let mut b = (1.0 - k * k).sqrt();
    let mut n = 0;
    while c[n].abs() > f64::EPSILON * a[n] && n + 1 < a.len() {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = a[n] * u * (2.0f64).powi(n as i32);
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - k * k * sn * sn).sqrt();
    Ok(EllipticTriple { sn, cn, dn })
}

/// Inverse of `sn(·, k)` on `[-1, 1]`, with values in `[-K, K]`.
pub fn jacobi_arcsn(x: f64, k: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("arcsn needs |x| <= 1, got {x}")));
    }
    let kq = elliptic_k(k)?;
    let y = x.abs();
    let (mut lo, mut hi) = (0.0, kq);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if jacobi_sncndn(mid, k)?.sn < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(x.signum() * 0.5 * (lo + hi))
}

/// Physicists' Hermite polynomial `H_m` with exact integer coefficients.
pub fn hermite(m: u32) -> TPoly {
    let t2 = TPoly::monomial(int(2), 1);
    let mut prev = TPoly::one();
    if m == 0 {
        return prev;
    }
    let mut cur = t2.clone();
    for n in 1..m {
        let next = &(&t2 * &cur) - &prev.scale(&int(2 * n as i64));
        prev = cur;
        cur = next;
    }
    cur
}

/// `(He_{m-1}(t), He_m(t))` for the probabilists' Hermite polynomials, with
/// `He_{-1} = 0`.
fn he_pair(m: u32, t: f64) -> (f64, f64) {
    let (mut p, mut c) = (0.0, 1.0);
    for n in 0..m {
        let next = t * c - n as f64 * p;
        p = c;
        c = next;
    }
    (p, c)
}

/// `D_m(t) = exp(-t²/4) He_m(t)`.
pub fn pcf_d(m: u32, t: f64) -> f64 {
    (-0.25 * t * t).exp() * he_pair(m, t).1
}

/// `D_m'(t) = m D_{m-1}(t) - (t/2) D_m(t)`.
pub fn pcf_d_prime(m: u32, t: f64) -> f64 {
    pcf_d_both(m, t).1
}

/// `(D_m(t), D_m'(t))` from one recurrence pass.
pub fn pcf_d_both(m: u32, t: f64) -> (f64, f64) {
    let g = (-0.25 * t * t).exp();
    let (p, c) = he_pair(m, t);
    let d = g * c;
    (d, m as f64 * g * p - 0.5 * t * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Dd;
    use core::f64::consts::PI;

    #[test]
    fn k_examples() {
        assert_eq!(elliptic_k(0.0f64).unwrap(), PI / 2.0);
        let v = elliptic_k(core::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((v - 1.854_074_677_301_372).abs() < 1e-14);
        let k9 = elliptic_k(0.9f64).unwrap();
        let k5 = elliptic_k(0.5f64).unwrap();
        assert!(k9 > k5 && k5 > PI / 2.0);
        assert!(elliptic_k(1.0f64).is_err());
        let kd = elliptic_k_k2(Dd::from_f64(0.5)).unwrap();
        assert!((kd.to_f64() - 1.854_074_677_301_372).abs() < 1e-15);
    }

    #[test]
    fn sncndn_examples() {
        let e = jacobi_sncndn(0.0, 0.6).unwrap();
        assert_eq!((e.sn, e.cn, e.dn), (0.0, 1.0, 1.0));
        let kk = elliptic_k(0.6f64).unwrap();
        assert!((jacobi_sncndn(kk, 0.6).unwrap().sn - 1.0).abs() < 1e-14);
        let e = jacobi_sncndn(0.7, 0.0).unwrap();
        assert_eq!((e.sn, e.cn, e.dn), ((0.7f64).sin(), (0.7f64).cos(), 1.0));
        // reference value from an independent arbitrary-precision evaluation
        let e = jacobi_sncndn(0.5, 0.5).unwrap();
        assert!((e.sn - 0.475_082_936_028_536_5).abs() < 1e-14, "{}", e.sn);
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0), TPoly::one());
        assert_eq!(hermite(1), TPoly::from_ints(&[0, 2]));
        assert_eq!(hermite(4), TPoly::from_ints(&[12, 0, -48, 0, 16]));
    }

    #[test]
    fn pcf_examples() {
        assert_eq!(pcf_d(0, 0.0), 1.0);
        assert_eq!(pcf_d(2, 0.0), -1.0);
        assert_eq!(pcf_d_prime(0, 0.0), 0.0);
        assert_eq!(pcf_d_prime(1, 0.0), 1.0);
        let t = 1.3;
        let lhs = t * pcf_d(2, t);
        let rhs = pcf_d(3, t) + 2.0 * pcf_d(1, t);
        assert!((lhs - rhs).abs() < 1e-13);
        // Hermite closed form D_m(t) = 2^{-m/2} e^{-t²/4} H_m(t/√2)
        let h = hermite(5).eval(t / 2f64.sqrt());
        let d = 2f64.powf(-2.5) * (-t * t / 4.0).exp() * h;
        assert!((d - pcf_d(5, t)).abs() < 1e-13);
    }
}
