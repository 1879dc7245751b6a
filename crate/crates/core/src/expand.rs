//! Truncated eigenvalue series, eigenfunction expansions near the centre of
//! oscillation, normalisation constants and exact residuals.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::coeffs::{weber_t, CoeffTables, DPair, Family};
use crate::error::{Error, Result};
use crate::exact::{self, int, Rational, TPoly};
use crate::real::{Dd, Real};
use crate::special::{elliptic_k, jacobi_sncndn, pcf_d_both};

/// Eigenvalue branch: `a` for `Ec`/`ce`, `b` for `Es`/`se`.
///
/// For Mathieu, branch `b` with index `m` is `se_{m+1}` (eigenvalue
/// `b_{m+1}`); the index `m` always counts the zeros of the `D_m` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    A,
    B,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::A => "a",
            Branch::B => "b",
        }
    }
}

/// One eigenproblem instance.
///
/// `param` is the large parameter: `κ` for Lamé, `h` for Mathieu.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub family: Family,
    pub m: u32,
    pub branch: Branch,
    pub k2: Rational,
    pub param: f64,
}

impl ProblemSpec {
    /// Lamé problem from exact `k²` and `κ`.
    pub fn lame(m: u32, branch: Branch, k2: Rational, kappa: f64) -> Result<Self> {
        if k2 < Rational::zero() || k2 >= Rational::one() {
            return Err(Error::Domain(format!("k^2 must lie in [0, 1), got {k2}")));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Domain(format!("kappa must be positive and finite, got {kappa}")));
        }
        Ok(ProblemSpec { family: Family::Lame, m, branch, k2, param: kappa })
    }

    /// Lamé problem from a floating modulus; `k²` is the exact square of `k`.
    pub fn lame_k(m: u32, branch: Branch, k: f64, kappa: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain(format!("modulus must satisfy 0 <= k < 1, got {k}")));
        }
        let kr = exact::from_f64(k)?;
        Self::lame(m, branch, &kr * &kr, kappa)
    }

    /// Lamé problem from degree `ν` and modulus `k`, with `κ = √(ν(ν+1)) k`.
    pub fn lame_nu_k(m: u32, branch: Branch, nu: f64, k: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::Domain(format!("nu must be positive, got {nu}")));
        }
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!("modulus must satisfy 0 < k < 1, got {k}")));
        }
        Self::lame_k(m, branch, k, (nu * (nu + 1.0)).sqrt() * k)
    }

    pub fn mathieu(m: u32, branch: Branch, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Domain(format!("h must be positive and finite, got {h}")));
        }
        Ok(ProblemSpec { family: Family::Mathieu, m, branch, k2: Rational::zero(), param: h })
    }

    pub fn k(&self) -> f64 {
        exact::to_f64(&self.k2).sqrt()
    }

    pub fn k2_f64(&self) -> f64 {
        exact::to_f64(&self.k2)
    }

    /// `κ` for Lamé, `2h` for Mathieu.
    pub fn kappa(&self) -> f64 {
        match self.family {
            Family::Lame => self.param,
            Family::Mathieu => 2.0 * self.param,
        }
    }

    /// `ν` recovered from `κ` and `k` (Lamé with `k > 0` only).
    pub fn nu(&self) -> Option<f64> {
        let k = self.k();
        if self.family != Family::Lame || k == 0.0 {
            return None;
        }
        let nn = (self.param / k) * (self.param / k);
        Some(0.5 * ((1.0 + 4.0 * nn).sqrt() - 1.0))
    }

    /// `√(2κ)` for Lamé, `2√h` for Mathieu: the scale in `t`.
    pub fn t_scale(&self) -> f64 {
        match self.family {
            Family::Lame => (2.0 * self.param).sqrt(),
            Family::Mathieu => 2.0 * self.param.sqrt(),
        }
    }

    /// Half-width of the fundamental interval: `K(k)` or `π/2`.
    pub fn quarter_period(&self) -> Result<f64> {
        match self.family {
            Family::Lame => elliptic_k(self.k()),
            Family::Mathieu => Ok(core::f64::consts::FRAC_PI_2),
        }
    }

    /// The `t` coordinate of `z`, with the factor multiplying the odd-branch
    /// expansion (`cn z` or `sin z`).
    pub fn t_of_z(&self, z: f64) -> Result<(f64, f64)> {
        match self.family {
            Family::Lame => {
                let e = jacobi_sncndn(z, self.k())?;
                Ok((self.t_scale() * e.sn, e.cn))
            }
            Family::Mathieu => Ok((self.t_scale() * z.cos(), z.sin())),
        }
    }

    /// Checks that `tables` were generated for this problem.
    pub fn check_tables(&self, tables: &CoeffTables) -> Result<()> {
        if tables.family != self.family || tables.m != self.m || tables.k2 != self.k2 {
            return Err(Error::Domain(format!(
                "tables ({}, m={}, k2={}) do not match problem ({}, m={}, k2={})",
                tables.family.name(),
                tables.m,
                tables.k2,
                self.family.name(),
                self.m,
                self.k2
            )));
        }
        Ok(())
    }
}

/// How an eigenvalue was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series(usize),
    Oracle(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResult {
    pub value: Dd,
    pub method: Method,
    pub err_estimate: f64,
}

fn check_order(tables: &CoeffTables, n: usize) -> Result<()> {
    if n > tables.order {
        return Err(Error::Range(format!("order {n} exceeds table order {}", tables.order)));
    }
    Ok(())
}

/// The `s`-th term of the eigenvalue series, `s ≥ 1`.
fn series_term(tables: &CoeffTables, s: usize, x: Dd) -> Dd {
    let mut p = Dd::one();
    let xi = Dd::one() / x;
    for _ in 1..s {
        p *= xi;
    }
    let mu = Dd::from_rational(&tables.mu[s]);
    match tables.family {
        Family::Lame => mu * p * Dd::from_f64(2.0),
        Family::Mathieu => mu * p * Dd::from_f64(4.0),
    }
}

/// Truncated eigenvalue series.
///
/// Lamé: `(2m+1)κ + 2 Σ_{s=1}^{n} μ_s κ^{1-s}`. Mathieu:
/// `-2h² + 4h Σ_{s=0}^{n} μ_s h^{-s}`. Both branches share the series.
/// The error estimate is the first omitted term, or the last included one if
/// the tables stop at `n`.
pub fn eigen_series(spec: &ProblemSpec, tables: &CoeffTables, n: usize) -> Result<EigenResult> {
    spec.check_tables(tables)?;
    check_order(tables, n)?;
    let x = Dd::from_f64(spec.param);
    let lead = Dd::from_f64((2 * spec.m + 1) as f64);
    let mut v = match spec.family {
        Family::Lame => lead * x,
        Family::Mathieu => lead * x * Dd::from_f64(2.0) - x * x * Dd::from_f64(2.0),
    };
    for s in 1..=n {
        v += series_term(tables, s, x);
    }
    let err = if n < tables.order {
        series_term(tables, n + 1, x).abs().to_f64()
    } else if n >= 1 {
        series_term(tables, n, x).abs().to_f64()
    } else {
        (lead * x).to_f64().abs()
    };
    Ok(EigenResult { value: v, method: Method::Series(n), err_estimate: err })
}

/// The eigenvalue series in exact arithmetic at a rational parameter.
pub fn eigen_series_exact(tables: &CoeffTables, param: &Rational, n: usize) -> Result<Rational> {
    check_order(tables, n)?;
    if param <= &Rational::zero() {
        return Err(Error::Domain(format!("parameter must be positive, got {param}")));
    }
    let mut sum = Rational::zero();
    let mut p = Rational::one();
    for s in 0..=n {
        sum += &tables.mu[s] * &p;
        p /= param;
    }
    Ok(match tables.family {
        Family::Lame => int(2) * param * sum,
        Family::Mathieu => int(4) * param * sum - int(2) * param * param,
    })
}

fn factorial(m: u32) -> f64 {
    (1..=m).fold(1.0, |a, i| a * i as f64)
}

/// Normalisation constant with the `η` series truncated at `n`.
///
/// Lamé: `(πκ)^{1/4}/√(2 m!) (1 + Σ η_s κ^{-s})^{-1/2}`; Mathieu:
/// `(πh/(2 m!²))^{1/4} (1 + Σ η_s h^{-s})^{-1/2}`.
pub fn norm_const(tables: &CoeffTables, spec: &ProblemSpec, n: usize) -> Result<f64> {
    spec.check_tables(tables)?;
    check_order(tables, n)?;
    let x = spec.param;
    let mut corr = 0.0;
    let mut p = 1.0;
    for s in 1..=n {
        p /= x;
        corr += exact::to_f64(&tables.eta[s]) * p;
    }
    let mf = factorial(spec.m);
    let pre = match spec.family {
        Family::Lame => (core::f64::consts::PI * x).powf(0.25) / (2.0 * mf).sqrt(),
        Family::Mathieu => (core::f64::consts::PI * x / (2.0 * mf * mf)).powf(0.25),
    };
    Ok(pre / (1.0 + corr).sqrt())
}

/// Options for [`eval_function_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Largest `|t|` accepted.
    pub t_cap: f64,
    /// Truncation of the normalisation series; `None` uses the function order.
    pub norm_order: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { t_cap: 6.0, norm_order: None }
    }
}

/// `(Σ X_s x^{-s}, Σ Y_s x^{-s})` at `t`, for `s ≤ n`.
fn poly_sums(x: &[TPoly], y: &[TPoly], n: usize, t: f64, param: f64) -> (f64, f64) {
    let (mut sx, mut sy, mut p) = (0.0, 0.0, 1.0);
    for s in 0..=n {
        sx += x[s].eval(t) * p;
        sy += y[s].eval(t) * p;
        p /= param;
    }
    (sx, sy)
}

/// The expansion near the centre of oscillation, at `z`.
pub fn eval_function(spec: &ProblemSpec, tables: &CoeffTables, z: f64, n: usize) -> Result<f64> {
    eval_function_with(spec, tables, z, n, &EvalOptions::default())
}

pub fn eval_function_with(
    spec: &ProblemSpec,
    tables: &CoeffTables,
    z: f64,
    n: usize,
    opts: &EvalOptions,
) -> Result<f64> {
    spec.check_tables(tables)?;
    check_order(tables, n)?;
    let (t, odd_factor) = spec.t_of_z(z)?;
    if !(t.abs() <= opts.t_cap) {
        return Err(Error::Domain(format!(
            "t = {t} outside expansion validity |t| <= {}",
            opts.t_cap
        )));
    }
    let c = norm_const(tables, spec, opts.norm_order.unwrap_or(n))?;
    let (d, dp) = pcf_d_both(spec.m, t);
    Ok(match spec.branch {
        Branch::A => {
            let (sa, sb) = poly_sums(&tables.a, &tables.b, n, t, spec.param);
            c * (d * sa + dp * sb)
        }
        Branch::B => {
            let (sp, sq) = poly_sums(&tables.p, &tables.q, n, t, spec.param);
            c * odd_factor * (d * sp + dp * sq)
        }
    })
}

/// Residual of the truncated expansion under the `t`-form operator, as a
/// Laurent series in `ε`: entry `j` is the coefficient of `ε^j`.
///
/// The expansion uses `A_s, B_s` and `μ_s` for `s ≤ n`. Entries `0..=n`
/// vanish identically when the tables are correct.
pub fn formal_residual(tables: &CoeffTables, n: usize) -> Result<Vec<DPair>> {
    check_order(tables, n)?;
    let op = tables.operator();
    let t = weber_t(tables.m);
    let top = (2 * n).max(n + 2);
    let mut r = vec![DPair::default(); top + 1];
    let add = |r: &mut Vec<DPair>, j: usize, v: DPair| {
        r[j] = core::mem::take(&mut r[j]) + v;
    };
    for s in 0..=n {
        let w = DPair::new(tables.a[s].clone(), tables.b[s].clone());
        let w1 = w.derivative(&t);
        let w2 = w1.derivative(&t);
        add(&mut r, s, w2.clone() + w.mul_poly(&-&t));
        add(&mut r, s + 1, w2.mul_poly(&op.p) + w1.mul_poly(&op.p1));
        add(&mut r, s + 2, w2.mul_poly(&op.q) + w1.mul_poly(&op.q1));
        for j in 1..=n {
            add(&mut r, s + j, w.scale(&tables.mu[j]));
        }
    }
    Ok(r)
}

/// Residual polynomials at a numeric parameter, with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualPolys {
    pub m: u32,
    pub ra: Vec<f64>,
    pub rb: Vec<f64>,
}

impl ResidualPolys {
    /// `R_A(t) D_m(t) + R_B(t) D_m'(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        let horner = |c: &[f64]| c.iter().rev().fold(0.0, |acc, x| acc * t + x);
        let (d, dp) = pcf_d_both(self.m, t);
        horner(&self.ra) * d + horner(&self.rb) * dp
    }

    /// `max |residual|` on a uniform grid over `[-t_max, t_max]`.
    pub fn sup_norm(&self, t_max: f64, points: usize) -> f64 {
        (0..=points)
            .map(|i| self.eval(-t_max + 2.0 * t_max * i as f64 / points as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Sums the formal residual at `ε = 1/param` exactly, then rounds.
pub fn residual_polys(tables: &CoeffTables, spec: &ProblemSpec, n: usize) -> Result<ResidualPolys> {
    spec.check_tables(tables)?;
    let r = formal_residual(tables, n)?;
    let eps = Rational::one() / exact::from_f64(spec.param)?;
    let mut ra = TPoly::zero();
    let mut rb = TPoly::zero();
    let mut p = Rational::one();
    for d in &r {
        ra = &ra + &d.a.scale(&p);
        rb = &rb + &d.b.scale(&p);
        p *= &eps;
    }
    Ok(ResidualPolys { m: tables.m, ra: ra.to_f64_coeffs(), rb: rb.to_f64_coeffs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{gen_lame_tables, gen_mathieu_tables};
    use crate::exact::rat;

    #[test]
    fn series_examples() {
        let spec = ProblemSpec::lame(0, Branch::A, rat(1, 2), 100.0).unwrap();
        let t = gen_lame_tables(0, &rat(1, 2), 3).unwrap();
        let r = eigen_series(&spec, &t, 2).unwrap();
        assert_eq!(r.value.to_f64(), 99.62546875);
        assert_eq!(r.method, Method::Series(2));
        assert_eq!(eigen_series(&spec, &t, 0).unwrap().value.to_f64(), 100.0);
        assert!(eigen_series(&spec, &t, 4).is_err());

        let spec = ProblemSpec::mathieu(0, Branch::A, 10.0).unwrap();
        let t = gen_mathieu_tables(0, 2).unwrap();
        assert_eq!(eigen_series(&spec, &t, 1).unwrap().value.to_f64(), -180.25);
        assert_eq!(eigen_series_exact(&t, &int(10), 1).unwrap(), rat(-721, 4));
    }

    #[test]
    fn branches_share_series() {
        let t = gen_lame_tables(1, &rat(1, 3), 4).unwrap();
        for n in 0..=4 {
            let a = ProblemSpec::lame(1, Branch::A, rat(1, 3), 37.5).unwrap();
            let b = ProblemSpec { branch: Branch::B, ..a.clone() };
            assert_eq!(eigen_series(&a, &t, n).unwrap(), eigen_series(&b, &t, n).unwrap());
        }
    }

    #[test]
    fn mismatched_tables_rejected() {
        let t = gen_lame_tables(1, &rat(1, 3), 1).unwrap();
        let spec = ProblemSpec::lame(0, Branch::A, rat(1, 3), 10.0).unwrap();
        assert!(matches!(eigen_series(&spec, &t, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn norm_examples() {
        let spec = ProblemSpec::lame(0, Branch::A, rat(1, 2), 1.0 / core::f64::consts::PI).unwrap();
        let t = gen_lame_tables(0, &rat(1, 2), 1).unwrap();
        let c = norm_const(&t, &spec, 0).unwrap();
        assert!((c - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        let spec = ProblemSpec::mathieu(0, Branch::A, 10.0).unwrap();
        let t = gen_mathieu_tables(0, 1).unwrap();
        let want = (10.0 * core::f64::consts::PI / 2.0).powf(0.25) / (1.0f64 + 3.0 / 320.0).sqrt();
        assert!((norm_const(&t, &spec, 1).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn mathieu_centre_value() {
        let spec = ProblemSpec::mathieu(0, Branch::A, 50.0).unwrap();
        let t = gen_mathieu_tables(0, 3).unwrap();
        let v = eval_function(&spec, &t, core::f64::consts::FRAC_PI_2, 3).unwrap();
        let c = norm_const(&t, &spec, 3).unwrap();
        assert!((v - c).abs() < 1e-12 * c);
    }

    #[test]
    fn lame_odd_branch_vanishes_at_centre_for_odd_m() {
        let t = gen_lame_tables(1, &rat(1, 2), 2).unwrap();
        let spec = ProblemSpec::lame(1, Branch::B, rat(1, 2), 200.0).unwrap();
        assert_eq!(eval_function(&spec, &t, 0.0, 2).unwrap(), 0.0);
    }

    #[test]
    fn outside_validity_rejected() {
        let t = gen_lame_tables(0, &rat(1, 2), 1).unwrap();
        let spec = ProblemSpec::lame(0, Branch::A, rat(1, 2), 400.0).unwrap();
        assert!(matches!(eval_function(&spec, &t, 1.0, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn residual_vanishes_through_order_n() {
        for m in 0..3u32 {
            let t = gen_lame_tables(m, &rat(1, 4), 3).unwrap();
            let r = formal_residual(&t, 3).unwrap();
            for (j, d) in r.iter().enumerate() {
                assert_eq!(d.is_zero(), j <= 3, "m={m} j={j}");
            }
        }
    }
}
