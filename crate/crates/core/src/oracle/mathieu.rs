//! Mathieu eigenvalues from the truncated Fourier matrix, and independently
//! from the continued fraction of the same three-term recurrence.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::error::{Error, Result};
use crate::expand::{Branch, EigenResult, Method};
use crate::real::{Dd, Real};

use super::OracleConfig;

/// The four periodicity classes of Mathieu functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierClass {
    /// `ce_{2j}`: `cos 2rz`.
    CeEven,
    /// `ce_{2j+1}`: `cos (2r+1)z`.
    CeOdd,
    /// `se_{2j+1}`: `sin (2r+1)z`.
    SeOdd,
    /// `se_{2j+2}`: `sin (2r+2)z`.
    SeEven,
}

impl FourierClass {
    /// Class and index within it for branch `a` (`ce_m`) or `b` (`se_{m+1}`).
    pub fn for_problem(m: u32, branch: Branch) -> (Self, usize) {
        let class = match (branch, m % 2) {
            (Branch::A, 0) => FourierClass::CeEven,
            (Branch::A, _) => FourierClass::CeOdd,
            (Branch::B, 0) => FourierClass::SeOdd,
            (Branch::B, _) => FourierClass::SeEven,
        };
        (class, (m / 2) as usize)
    }

    /// Angular frequency of basis element `r`.
    pub fn freq(self, r: usize) -> f64 {
        match self {
            FourierClass::CeEven => (2 * r) as f64,
            FourierClass::CeOdd | FourierClass::SeOdd => (2 * r + 1) as f64,
            FourierClass::SeEven => (2 * r + 2) as f64,
        }
    }

    fn is_cosine(self) -> bool {
        matches!(self, FourierClass::CeEven | FourierClass::CeOdd)
    }
}

/// Symmetric tridiagonal matrix: `diag[i]`, and `off[i]` coupling `i-1, i`
/// (`off[0]` unused).
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub diag: Vec<Dd>,
    pub off: Vec<Dd>,
}

impl Tridiag {
    /// Fourier matrix of a class with `q = h²`, in the symmetric basis where
    /// the `cos 0z` coefficient is scaled by `√2`.
    pub fn mathieu(class: FourierClass, q: Dd, n: usize) -> Self {
        let mut diag = Vec::with_capacity(n);
        let mut off = vec![q; n];
        off[0] = Dd::zero();
        for r in 0..n {
            let f = class.freq(r);
            diag.push(Dd::from_f64(f * f));
        }
        match class {
            FourierClass::CeEven if n > 1 => off[1] = q * Dd::from_f64(2.0).sqrt(),
            FourierClass::CeOdd => diag[0] += q,
            FourierClass::SeOdd => diag[0] -= q,
            _ => {}
        }
        Tridiag { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues below `x` (Sturm sequence count).
    pub fn count_below(&self, x: Dd) -> usize {
        let tiny = Dd::from_f64(1e-300);
        let mut count = 0;
        let mut d = Dd::one();
        for i in 0..self.len() {
            let b = self.off[i];
            d = if i == 0 { self.diag[0] - x } else { self.diag[i] - x - b * b / d };
            if d.hi == 0.0 {
                d = tiny;
            }
            if d.hi < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r = self.off[i].hi.abs() + if i + 1 < n { self.off[i + 1].hi.abs() } else { 0.0 };
            lo = lo.min(self.diag[i].hi - r);
            hi = hi.max(self.diag[i].hi + r);
        }
        (lo - 1.0, hi + 1.0)
    }

    /// The `j`-th smallest eigenvalue by bisection on the Sturm count.
    pub fn eigenvalue(&self, j: usize) -> Result<Dd> {
        if j >= self.len() {
            return Err(Error::Range(format!("eigenvalue index {j} exceeds matrix size {}", self.len())));
        }
        let (l, h) = self.gershgorin();
        let (mut lo, mut hi) = (Dd::from_f64(l), Dd::from_f64(h));
        let two = Dd::from_f64(2.0);
        for _ in 0..250 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            let scale = lo.abs().to_f64().max(hi.abs().to_f64()).max(1.0);
            if (hi - lo).to_f64() <= 1e-31 * scale {
                break;
            }
        }
        Ok((lo + hi) / two)
    }

    /// Unit eigenvector for an eigenvalue estimate, by inverse iteration in
    /// `f64` with partial pivoting.
    pub fn eigenvector(&self, lambda: Dd) -> Vec<f64> {
        let n = self.len();
        let shift = lambda.to_f64() * (1.0 + 1e-14) + 1e-14;
        let d: Vec<f64> = self.diag.iter().map(|x| (*x - Dd::from_f64(shift)).to_f64()).collect();
        let e: Vec<f64> = self.off.iter().map(|x| x.to_f64()).collect();
        let mut v = vec![1.0; n];
        for _ in 0..4 {
            v = solve_tridiag(&d, &e, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= norm;
            }
        }
        v
    }
}

/// Solves `(T) x = b` for symmetric tridiagonal `T` (diagonal `d`,
/// off-diagonal `e[i]` between `i-1, i`) by Gaussian elimination with
/// partial pivoting.
fn solve_tridiag(d: &[f64], e: &[f64], b: &[f64]) -> Vec<f64> {
    let n = d.len();
    // rows stored as (a_i: diag, c_i: super, g_i: second super)
    let mut dl: Vec<f64> = (0..n).map(|i| if i > 0 { e[i] } else { 0.0 }).collect();
    let mut dd = d.to_vec();
    let mut du: Vec<f64> = (0..n).map(|i| if i + 1 < n { e[i + 1] } else { 0.0 }).collect();
    let mut du2 = vec![0.0; n];
    let mut x = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        if dl[i + 1].abs() > dd[i].abs() {
            // swap rows i and i+1
            let (a, c, g, r) = (dd[i], du[i], du2[i], x[i]);
            dd[i] = dl[i + 1];
            du[i] = dd[i + 1];
            du2[i] = if i + 1 < n - 1 { du[i + 1] } else { 0.0 };
            x[i] = x[i + 1];
            let f = a / dd[i];
            dd[i + 1] = c - f * du[i];
            if i + 1 < n - 1 {
                du[i + 1] = g - f * du2[i];
            }
            x[i + 1] = r - f * x[i];
        } else {
            if dd[i] == 0.0 {
                dd[i] = 1e-300;
            }
            let f = dl[i + 1] / dd[i];
            dd[i + 1] -= f * du[i];
            x[i + 1] -= f * x[i];
        }
        dl[i + 1] = 0.0;
    }
    if dd[n - 1] == 0.0 {
        dd[n - 1] = 1e-300;
    }
    x[n - 1] /= dd[n - 1];
    if n >= 2 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i];
    }
    x
}

/// Default truncation: comfortably past the spread of the coefficients.
fn default_dim(m: u32, h: f64) -> usize {
    m as usize + 20 + (8.0 * h.sqrt()).ceil() as usize
}

fn check_h(h: f64) -> Result<()> {
    if !(h.is_finite() && h >= 0.0) {
        return Err(Error::Domain(format!("h must be finite and non-negative, got {h}")));
    }
    Ok(())
}

/// Eigenvalue `a_m` (branch `a`) or `b_{m+1}` (branch `b`) of
/// `w'' + (λ - 2h² cos 2z) w = 0`, with truncation checked by doubling.
pub fn mathieu_eigen_oracle(m: u32, branch: Branch, h: f64, cfg: &OracleConfig) -> Result<EigenResult> {
    cfg.validate(m)?;
    check_h(h)?;
    let (class, j) = FourierClass::for_problem(m, branch);
    let q = Dd::from_f64(h) * Dd::from_f64(h);
    let mut n = if cfg.matrix_dim > 0 { cfg.matrix_dim } else { default_dim(m, h) };
    let mut prev = Tridiag::mathieu(class, q, n).eigenvalue(j)?;
    for _ in 0..5 {
        n *= 2;
        let cur = Tridiag::mathieu(class, q, n).eigenvalue(j)?;
        let diff = (cur - prev).abs().to_f64();
        let scale = cur.abs().to_f64().max(1.0);
        if diff <= 1e-26 * scale {
            return Ok(EigenResult {
                value: cur,
                method: Method::Oracle("fourier-matrix"),
                err_estimate: diff.max(1e-30 * scale),
            });
        }
        prev = cur;
    }
    Err(Error::Numeric(format!("Fourier truncation did not converge for m={m}, h={h} at dimension {n}")))
}

/// The same eigenvalue as the root of the continued-fraction function split
/// at the requested index, found by secant iteration from `guess`.
pub fn mathieu_eigen_cf(m: u32, branch: Branch, h: f64, guess: Dd, depth: usize) -> Result<EigenResult> {
    check_h(h)?;
    let (class, j) = FourierClass::for_problem(m, branch);
    let q = Dd::from_f64(h) * Dd::from_f64(h);
    let t = Tridiag::mathieu(class, q, depth.max(j + 10));
    let f = |lam: Dd| -> Dd {
        let n = t.len();
        // downward ratio R_{r} = v_r / v_{r-1} from the tail
        let mut r = Dd::zero();
        for i in (j + 1..n).rev() {
            let next = if i + 1 < n { t.off[i + 1] * r } else { Dd::zero() };
            r = -t.off[i] / (t.diag[i] - lam + next);
        }
        let upper = if j + 1 < n { t.off[j + 1] * r } else { Dd::zero() };
        // upward ratio T_r = v_{r-1} / v_r from the head
        let mut tr = Dd::zero();
        for i in 1..=j {
            let prevterm = if i >= 2 { t.off[i - 1] * tr } else { Dd::zero() };
            tr = -t.off[i] / (t.diag[i - 1] - lam + prevterm);
        }
        let lower = if j >= 1 { t.off[j] * tr } else { Dd::zero() };
        t.diag[j] - lam + lower + upper
    };
    let scale = guess.abs().to_f64().max(1.0);
    let mut x0 = guess;
    let mut x1 = guess + Dd::from_f64(1e-7 * scale);
    let mut f0 = f(x0);
    let mut f1 = f(x1);
    for _ in 0..200 {
        let den = f1 - f0;
        if den.hi == 0.0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / den;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
        if (x1 - x0).abs().to_f64() <= 1e-29 * scale || f1.hi == 0.0 {
            let err = (x1 - x0).abs().to_f64().max(1e-30 * scale);
            return Ok(EigenResult { value: x1, method: Method::Oracle("continued-fraction"), err_estimate: err });
        }
    }
    Err(Error::Numeric(format!("continued fraction did not converge for m={m}, h={h}")))
}

/// `ce_m` or `se_{m+1}` as a Fourier sum normalised to `∫_0^{2π} w² = π`,
/// with `ce_m(0) > 0` and `se_{m+1}'(0) > 0`.
#[derive(Debug, Clone)]
pub struct MathieuFunction {
    pub class: FourierClass,
    pub h: f64,
    pub eigenvalue: Dd,
    /// Coefficients in the symmetric basis (unit vector).
    pub coeffs: Vec<f64>,
}

impl MathieuFunction {
    pub fn new(m: u32, branch: Branch, h: f64, cfg: &OracleConfig) -> Result<Self> {
        let ev = mathieu_eigen_oracle(m, branch, h, cfg)?;
        let (class, j) = FourierClass::for_problem(m, branch);
        let q = Dd::from_f64(h) * Dd::from_f64(h);
        let n = 2 * if cfg.matrix_dim > 0 { cfg.matrix_dim } else { default_dim(m, h) };
        let t = Tridiag::mathieu(class, q, n);
        let lam = t.eigenvalue(j)?;
        let mut coeffs = t.eigenvector(lam);
        let mut f = MathieuFunction { class, h, eigenvalue: ev.value, coeffs: coeffs.clone() };
        // At large h the function is exponentially small at z = 0; read the
        // sign just past the last zero of D_m(2√h cos z) instead.
        let x0 = ((4.0 * m as f64 + 2.0).sqrt() + 1.5) / (2.0 * h.sqrt());
        let s = if x0 < 0.9 {
            f.eval(x0.acos())
        } else if class.is_cosine() {
            f.eval(0.0)
        } else {
            f.eval_deriv(0.0)
        };
        if s < 0.0 {
            for c in &mut coeffs {
                *c = -*c;
            }
            f.coeffs = coeffs;
        }
        Ok(f)
    }

    fn amplitude(&self, r: usize) -> f64 {
        if r == 0 && self.class == FourierClass::CeEven {
            self.coeffs[0] * core::f64::consts::FRAC_1_SQRT_2
        } else {
            self.coeffs[r]
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        let mut s = 0.0;
        for r in 0..self.coeffs.len() {
            let w = self.class.freq(r) * z;
            s += self.amplitude(r) * if self.class.is_cosine() { w.cos() } else { w.sin() };
        }
        s
    }

    pub fn eval_deriv(&self, z: f64) -> f64 {
        let mut s = 0.0;
        for r in 0..self.coeffs.len() {
            let f = self.class.freq(r);
            let w = f * z;
            s += self.amplitude(r) * f * if self.class.is_cosine() { -w.sin() } else { w.cos() };
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_h_gives_squares() {
        let cfg = OracleConfig::default();
        for m in 0..6u32 {
            let a = mathieu_eigen_oracle(m, Branch::A, 0.0, &cfg).unwrap().value.to_f64();
            let b = mathieu_eigen_oracle(m, Branch::B, 0.0, &cfg).unwrap().value.to_f64();
            assert!((a - (m * m) as f64).abs() < 1e-20, "a m={m} {a}");
            assert!((b - ((m + 1) * (m + 1)) as f64).abs() < 1e-20, "b m={m} {b}");
        }
    }

    #[test]
    fn known_value_q_one() {
        let cfg = OracleConfig::default();
        let a0 = mathieu_eigen_oracle(0, Branch::A, 1.0, &cfg).unwrap();
        assert!((a0.value.to_f64() + 0.455_138_604_107_414_9).abs() < 1e-12, "{}", a0.value);
        let cf = mathieu_eigen_cf(0, Branch::A, 1.0, a0.value + Dd::from_f64(1e-3), 60).unwrap();
        assert!((cf.value - a0.value).abs().to_f64() < 1e-20);
    }

    #[test]
    fn eigenfunction_normalisation_and_sign() {
        let cfg = OracleConfig::default();
        for (m, br) in [(0, Branch::A), (1, Branch::A), (0, Branch::B), (1, Branch::B)] {
            let f = MathieuFunction::new(m, br, 3.0, &cfg).unwrap();
            let n = crate::quad::integrate(|z| f.eval(z).powi(2), 0.0, 2.0 * core::f64::consts::PI, 1e-13, 1e-13)
                .unwrap();
            assert!((n - core::f64::consts::PI).abs() < 1e-10);
            if br == Branch::A {
                assert!(f.eval(0.0) > 0.0);
            } else {
                assert!(f.eval_deriv(0.0) > 0.0);
            }
        }
    }
}
