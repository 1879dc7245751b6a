//! Exact generation of the expansion coefficients.
//!
//! With `t = √(2κ) sn(z,k)` and `ε = 1/κ` the Lamé equation becomes
//!
//! ```text
//! w'' - T w + ε (P w'' + p₁ w') + ε² (Q w'' + q₁ w') + (Σ_{s≥1} μ_s ε^s) w = 0,
//! T = t²/4 - m - 1/2,  P = -(1+k²) t²/2,  p₁ = -(1+k²) t/2,  Q = k² t⁴/4,  q₁ = k² t³/2,
//! ```
//!
//! where the eigenvalue is `h = 2κ (m + 1/2 + Σ μ_s κ^{-s})`. Substituting
//! `w = D_m(t) Σ A_s ε^s + D_m'(t) Σ B_s ε^s` and reducing with
//! `D_m'' = T D_m` separates each order into a `D_m` and a `D_m'` equation.
//! Order by order these give a third-order equation for the odd polynomial
//! `B_s`, solved top-down, whose constant term fixes `μ_s`; `A_s` follows by
//! one integration with `A_s(0) = 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Add;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binom_half, int, rat, HalfSign, Rational, TPoly};

/// Largest order accepted by the generators.
pub const MAX_ORDER: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Lame,
    Mathieu,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Lame => "lame",
            Family::Mathieu => "mathieu",
        }
    }
}

/// Polynomial coefficients of the `t`-form operator (see the module docs).
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub p: TPoly,
    pub p1: TPoly,
    pub q: TPoly,
    pub q1: TPoly,
}

impl Operator {
    pub fn lame(k2: &Rational) -> Self {
        let c = k2 + int(1);
        Operator {
            p: TPoly::monomial(-&c / int(2), 2),
            p1: TPoly::monomial(-&c / int(2), 1),
            q: TPoly::monomial(k2 / int(4), 4),
            q1: TPoly::monomial(k2 / int(2), 3),
        }
    }

    /// Mathieu's equation in `t = 2√h cos z` with `ε = 1/h`.
    pub fn mathieu() -> Self {
        Operator {
            p: TPoly::monomial(rat(-1, 4), 2),
            p1: TPoly::monomial(rat(-1, 4), 1),
            q: TPoly::zero(),
            q1: TPoly::zero(),
        }
    }
}

/// `T = t²/4 - m - 1/2`, so that `D_m'' = T D_m`.
pub fn weber_t(m: u32) -> TPoly {
    TPoly::from_coeffs(vec![-(int(m as i64) + rat(1, 2)), int(0), rat(1, 4)])
}

/// The combination `a(t) D_m(t) + b(t) D_m'(t)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DPair {
    pub a: TPoly,
    pub b: TPoly,
}

impl DPair {
    pub fn new(a: TPoly, b: TPoly) -> Self {
        DPair { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Derivative in `t`, reduced with `D'' = T D`.
    pub fn derivative(&self, t: &TPoly) -> DPair {
        DPair { a: &self.a.derivative() + &(t * &self.b), b: &self.a + &self.b.derivative() }
    }

    pub fn mul_poly(&self, p: &TPoly) -> DPair {
        DPair { a: &self.a * p, b: &self.b * p }
    }

    pub fn scale(&self, c: &Rational) -> DPair {
        DPair { a: self.a.scale(c), b: self.b.scale(c) }
    }
}

impl Add for DPair {
    type Output = DPair;
    fn add(self, o: DPair) -> DPair {
        DPair { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

/// The Part II dataset for one `(family, m, k²)`.
///
/// `mu[0] = m + 1/2` and `eta[0] = 1` are stored so that every sequence is
/// indexed by the power of the large parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTables {
    pub family: Family,
    pub m: u32,
    pub k2: Rational,
    pub order: usize,
    pub a: Vec<TPoly>,
    pub b: Vec<TPoly>,
    pub p: Vec<TPoly>,
    pub q: Vec<TPoly>,
    pub mu: Vec<Rational>,
    pub eta: Vec<Rational>,
}

/// Raw solution of the recurrences for an arbitrary operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub a: Vec<TPoly>,
    pub b: Vec<TPoly>,
    pub mu: Vec<Rational>,
}

/// Degree bounds `(deg A_s, deg B_s)` for `s ≥ 1`.
pub fn degree_bounds(s: usize) -> (usize, usize) {
    if s % 2 == 0 {
        (4 * s, 4 * s - 3)
    } else {
        (4 * s - 2, 4 * s - 1)
    }
}

/// Known part of order `s`: everything except `A_s'' + 2T B_s' + (t/2) B_s`
/// in the `D` equation and `2A_s' + B_s''` in the `D'` equation.
fn known_terms(op: &Operator, t: &TPoly, a: &[TPoly], b: &[TPoly], mu: &[Rational], s: usize) -> DPair {
    let mut f = DPair::default();
    let mut add_op = |w: DPair, c2: &TPoly, c1: &TPoly| {
        let w1 = w.derivative(t);
        let w2 = w1.derivative(t);
        let g = w2.mul_poly(c2) + w1.mul_poly(c1);
        f = core::mem::take(&mut f) + g;
    };
    add_op(DPair::new(a[s - 1].clone(), b[s - 1].clone()), &op.p, &op.p1);
    if s >= 2 {
        add_op(DPair::new(a[s - 2].clone(), b[s - 2].clone()), &op.q, &op.q1);
    }
    for j in 1..s {
        f = f + DPair::new(a[s - j].clone(), b[s - j].clone()).scale(&mu[j]);
    }
    f
}

/// Solves the order recurrences for `s = 1..=n`.
pub fn solve(op: &Operator, m: u32, n: usize) -> Result<Solution> {
    if n > MAX_ORDER {
        return Err(Error::Range(format!("order {n} exceeds the supported maximum {MAX_ORDER}")));
    }
    let t = weber_t(m);
    let c4m2 = int(4 * m as i64 + 2);
    let mut a = vec![TPoly::one()];
    let mut b = vec![TPoly::zero()];
    let mut mu = vec![int(m as i64) + rat(1, 2)];
    for s in 1..=n {
        let f = known_terms(op, &t, &a, &b, &mu, s);
        let (f2, f1) = (f.a, f.b);
        if !f2.is_even() || !f1.is_odd() {
            return Err(Error::Generation(format!("order {s}: known terms lost parity")));
        }
        // B''' - (t² - 4m - 2) B' - t B = 2μ_s + R
        let r = &f2.scale(&int(2)) - &f1.derivative();
        let top = r.degree().unwrap_or(0) / 2;
        let mut bc = vec![Rational::zero(); top + 2];
        for i in (0..top).rev() {
            let i64_ = i as i64;
            let rhs = r.coeff(2 * i + 2)
                - &c4m2 * int(2 * i64_ + 3) * &bc[i + 1]
                - int((2 * i64_ + 5) * (2 * i64_ + 4) * (2 * i64_ + 3)) * &bc[i + 2];
            bc[i] = rhs / int(-(2 * i64_ + 2));
        }
        let mu_s = (&c4m2 * &bc[0] + int(6) * &bc[1] - r.coeff(0)) / int(2);
        let mut bv = vec![Rational::zero(); 2 * top + 2];
        for (i, x) in bc.iter().enumerate().take(top) {
            bv[2 * i + 1] = x.clone();
        }
        let bs = TPoly::from_coeffs(bv);
        let bp = bs.derivative();
        let as_ = (&(&bp - &TPoly::constant(bp.coeff(0))) + &f1.integral()).scale(&rat(-1, 2));

        let (da, db) = degree_bounds(s);
        if as_.degree().unwrap_or(0) > da || bs.degree().unwrap_or(0) > db {
            return Err(Error::Generation(format!(
                "order {s}: degrees ({:?}, {:?}) exceed bounds ({da}, {db})",
                as_.degree(),
                bs.degree()
            )));
        }
        if !as_.is_even() || !bs.is_odd() {
            return Err(Error::Generation(format!("order {s}: A_s or B_s has wrong parity")));
        }
        let extracted = int(2 * m as i64 + 1) * bs.coeff(1) - int(2) * as_.coeff(2);
        if extracted != mu_s {
            return Err(Error::Generation(format!(
                "order {s}: eigenvalue coefficient {mu_s} disagrees with extraction identity {extracted}"
            )));
        }
        a.push(as_);
        b.push(bs);
        mu.push(mu_s);
    }
    Ok(Solution { a, b, mu })
}

/// Coefficients `c_j t^{2j}` of `√(1 - ε t²/2) = Σ c_j t^{2j} ε^j`.
fn cn_series(n: usize) -> Vec<TPoly> {
    (0..=n)
        .map(|j| {
            let c = binom_half(HalfSign::Plus, j) * pow_rat(&rat(-1, 2), j);
            TPoly::monomial(c, 2 * j)
        })
        .collect()
}

fn pow_rat(x: &Rational, j: usize) -> Rational {
    let mut r = Rational::one();
    for _ in 0..j {
        r *= x;
    }
    r
}

/// Converts `A → P` (or `B → Q`) through `A_s = Σ_j C(1/2,j) (-t²/2)^j P_{s-j}`.
pub fn to_odd_solution(a: &[TPoly]) -> Vec<TPoly> {
    let c = cn_series(a.len());
    let mut p: Vec<TPoly> = Vec::with_capacity(a.len());
    for s in 0..a.len() {
        let mut x = a[s].clone();
        for j in 1..=s {
            x = &x - &(&c[j] * &p[s - j]);
        }
        p.push(x);
    }
    p
}

/// Moment kinds `p(m,n) = ∫tⁿD²`, `q(m,n) = ∫tⁿD'²`, `r(m,n) = ∫tⁿ⁺¹DD'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    P,
    Q,
    R,
}

/// Moments divided by `m!√(2π)`.
#[derive(Debug, Clone)]
pub struct Moments {
    m: u32,
    p: Vec<Rational>,
}

impl Moments {
    /// Precomputes `p̂(m, n)` for even `n ≤ nmax + 4`.
    pub fn new(m: u32, nmax: usize) -> Self {
        let top = nmax + 4;
        let mut p = vec![Rational::zero(); top + 1];
        let c = int(2 * m as i64 + 1);
        p[0] = Rational::one();
        if top >= 2 {
            p[2] = c.clone();
        }
        let mut n = 4;
        while n <= top {
            let ni = n as i64;
            p[n] = int(2 * (ni - 1)) * &c / int(ni) * &p[n - 2]
                + int((ni - 3) * (ni - 2) * (ni - 1)) / int(ni) * &p[n - 4];
            n += 2;
        }
        Moments { m, p }
    }

    fn ensure(&self, n: usize) -> Result<()> {
        if n + 4 >= self.p.len() {
            return Err(Error::Range(format!("moment order {n} not precomputed")));
        }
        Ok(())
    }

    pub fn get(&self, kind: MomentKind, n: usize) -> Result<Rational> {
        if n % 2 == 1 {
            return Ok(Rational::zero());
        }
        self.ensure(n)?;
        let ni = n as i64;
        let half_c = int(self.m as i64) + rat(1, 2);
        Ok(match kind {
            MomentKind::P => self.p[n].clone(),
            MomentKind::Q => rat(ni + 3, 4 * (ni + 1)) * &self.p[n + 2] - half_c * &self.p[n],
            MomentKind::R => {
                int(2 * self.m as i64 + 1) / int(ni + 2) * &self.p[n + 2]
                    - rat(ni + 4, 2 * (ni + 2) * (ni + 3)) * &self.p[n + 4]
            }
        })
    }

    /// `∫ tⁿ D D' dt`, normalised.
    fn dd_prime(&self, n: usize) -> Result<Rational> {
        if n == 0 {
            return Ok(Rational::zero());
        }
        self.get(MomentKind::R, n - 1)
    }

    /// `∫ (a D² + 2 b D D' + c D'²) dt`, normalised.
    pub fn integrate(&self, a: &TPoly, b: &TPoly, c: &TPoly) -> Result<Rational> {
        let mut s = Rational::zero();
        for (n, x) in a.coeffs().iter().enumerate() {
            if !x.is_zero() {
                s += x * self.get(MomentKind::P, n)?;
            }
        }
        for (n, x) in b.coeffs().iter().enumerate() {
            if !x.is_zero() {
                s += int(2) * x * self.dd_prime(n)?;
            }
        }
        for (n, x) in c.coeffs().iter().enumerate() {
            if !x.is_zero() {
                s += x * self.get(MomentKind::Q, n)?;
            }
        }
        Ok(s)
    }
}

/// `p̂`, `q̂` or `r̂` for one `(m, n)`; odd `n` gives exactly zero.
pub fn pqr_moment(kind: MomentKind, m: u32, n: usize) -> Rational {
    if n % 2 == 1 {
        return Rational::zero();
    }
    Moments::new(m, n).get(kind, n).expect("moment table sized for n")
}

/// Normalisation coefficients `η_0 = 1, η_1, …, η_n` from the `κ^{-s}`
/// coefficients of `∫ (1 - t²/(2κ))^{-1/2} (D ΣA_sκ^{-s} + D' ΣB_sκ^{-s})² dt`.
pub fn normalisation_coeffs(m: u32, a: &[TPoly], b: &[TPoly]) -> Result<Vec<Rational>> {
    let n = a.len() - 1;
    let maxdeg = a
        .iter()
        .chain(b)
        .map(|p| p.degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let mom = Moments::new(m, 2 * maxdeg + 2 * n + 2);
    let weight: Vec<TPoly> = (0..=n)
        .map(|j| TPoly::monomial(binom_half(HalfSign::Minus, j) * pow_rat(&rat(-1, 2), j), 2 * j))
        .collect();
    let mut eta = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let mut aa = TPoly::zero();
        let mut ab = TPoly::zero();
        let mut bb = TPoly::zero();
        for j in 0..=s {
            for i in 0..=(s - j) {
                let l = s - j - i;
                aa = &aa + &(&weight[j] * &(&a[i] * &a[l]));
                ab = &ab + &(&weight[j] * &(&a[i] * &b[l]));
                bb = &bb + &(&weight[j] * &(&b[i] * &b[l]));
            }
        }
        eta.push(mom.integrate(&aa, &ab, &bb)?);
    }
    Ok(eta)
}

fn assemble(family: Family, m: u32, k2: Rational, sol: Solution) -> Result<CoeffTables> {
    let order = sol.a.len() - 1;
    let p = to_odd_solution(&sol.a);
    let q = to_odd_solution(&sol.b);
    let eta = normalisation_coeffs(m, &sol.a, &sol.b)?;
    Ok(CoeffTables { family, m, k2, order, a: sol.a, b: sol.b, p, q, mu: sol.mu, eta })
}

/// Lamé tables for `0 ≤ k² < 1`.
pub fn gen_lame_tables(m: u32, k2: &Rational, n: usize) -> Result<CoeffTables> {
    if k2 < &Rational::zero() || k2 >= &Rational::one() {
        return Err(Error::Domain(format!("k^2 must lie in [0, 1), got {k2}")));
    }
    let sol = solve(&Operator::lame(k2), m, n)?;
    assemble(Family::Lame, m, k2.clone(), sol)
}

/// Mathieu tables, obtained from the `k² = 0` Lamé tables by `κ = 2h`:
/// every order-`s` quantity is divided by `2^s`.
pub fn gen_mathieu_tables(m: u32, n: usize) -> Result<CoeffTables> {
    let l = gen_lame_tables(m, &Rational::zero(), n)?;
    Ok(rescale_to_mathieu(&l))
}

/// Applies the `κ = 2h` rescaling to `k² = 0` Lamé tables.
pub fn rescale_to_mathieu(l: &CoeffTables) -> CoeffTables {
    let f = |s: usize| rat(1, 1i64 << s);
    let polys = |v: &[TPoly]| -> Vec<TPoly> { v.iter().enumerate().map(|(s, p)| p.scale(&f(s))).collect() };
    let scal = |v: &[Rational]| -> Vec<Rational> { v.iter().enumerate().map(|(s, x)| x * f(s)).collect() };
    CoeffTables {
        family: Family::Mathieu,
        m: l.m,
        k2: Rational::zero(),
        order: l.order,
        a: polys(&l.a),
        b: polys(&l.b),
        p: polys(&l.p),
        q: polys(&l.q),
        mu: scal(&l.mu),
        eta: scal(&l.eta),
    }
}

impl CoeffTables {
    pub fn operator(&self) -> Operator {
        match self.family {
            Family::Lame => Operator::lame(&self.k2),
            Family::Mathieu => Operator::mathieu(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2s() -> Vec<Rational> {
        vec![int(0), rat(1, 4), rat(1, 2), rat(1, 3), rat(9, 10)]
    }

    #[test]
    fn first_order_lame() {
        for k2 in k2s() {
            let c = &k2 + int(1);
            for m in 0..5u32 {
                let t = gen_lame_tables(m, &k2, 1).unwrap();
                let mm = int(m as i64);
                assert_eq!(t.a[1], TPoly::monomial(&c / int(32), 2));
                let b1 = TPoly::from_coeffs(vec![int(0), -(&c / int(16)) * (int(2) * &mm + int(1)), int(0), &c / int(16)]);
                assert_eq!(t.b[1], b1);
                assert_eq!(t.mu[1], -(&c / int(8)) * (int(1) + int(2) * &mm + int(2) * &mm * &mm));
                assert_eq!(t.p[1], TPoly::monomial((&k2 + int(9)) / int(32), 2));
                assert_eq!(t.q[1], t.b[1]);
                assert_eq!(t.eta[1], (int(3) - &k2) / int(16) * (int(2) * &mm + int(1)));
            }
        }
    }

    #[test]
    fn mu2_at_origin() {
        let t = gen_lame_tables(0, &int(0), 2).unwrap();
        assert_eq!(t.mu[2], rat(-1, 32));
    }

    #[test]
    fn table3_degrees() {
        for s in 1..=6 {
            let t = gen_lame_tables(2, &rat(1, 2), s).unwrap();
            let (da, db) = degree_bounds(s);
            assert_eq!(t.a[s].degree(), Some(da));
            assert_eq!(t.b[s].degree(), Some(db));
        }
    }

    #[test]
    fn mathieu_direct_matches_rescaled() {
        for m in 0..4 {
            let direct = solve(&Operator::mathieu(), m, 4).unwrap();
            let scaled = gen_mathieu_tables(m, 4).unwrap();
            assert_eq!(direct.a, scaled.a);
            assert_eq!(direct.b, scaled.b);
            assert_eq!(direct.mu, scaled.mu);
        }
    }

    #[test]
    fn moments() {
        assert_eq!(pqr_moment(MomentKind::P, 3, 0), int(1));
        assert_eq!(pqr_moment(MomentKind::P, 3, 2), int(7));
        assert_eq!(pqr_moment(MomentKind::P, 0, 4), int(3));
        assert_eq!(pqr_moment(MomentKind::R, 2, 0), rat(-1, 2));
        assert_eq!(pqr_moment(MomentKind::Q, 0, 0), rat(1, 4));
        assert_eq!(pqr_moment(MomentKind::Q, 1, 3), int(0));
    }

    #[test]
    fn order_cap() {
        assert!(matches!(solve(&Operator::mathieu(), 0, MAX_ORDER + 1), Err(Error::Range(_))));
        assert!(matches!(gen_lame_tables(0, &rat(3, 2), 1), Err(Error::Domain(_))));
    }
}
