//! Uniform approximations on the whole interval.
//!
//! With `x = sn(z,k)` (Lamé) or `x = cos z` (Mathieu, which is the Lamé case
//! `k = 0`, `κ = 2h`), the eigenproblem has turning points at `x = ±s`. The
//! Liouville map `x ↦ ζ` sends them to `±σ` and satisfies
//!
//! ```text
//! ∫_s^x √((t²-s²)/g(t)) dt = ∫_σ^ζ √(τ²-σ²) dτ,   g(t) = (1-t²)(1-k²t²),
//! ```
//!
//! with the analogous identities inside `[-s, s]`. Eigenfunctions are then
//! approximated by `C ((ζ²-σ²)/(x²-s²))^{1/4} D_m(√(2κ) ζ)`, plus an optional
//! correction `B₀(ζ)/κ² · d/dζ D_m(√(2κ) ζ)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};


#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::coeffs::{gen_lame_tables, gen_mathieu_tables, Family};
use crate::error::{Error, Result};
use crate::expand::{eigen_series, ProblemSpec};
use crate::quad;
use crate::real::Real;
use crate::special::{jacobi_sncndn, pcf_d_both};

const QUAD_TOL: f64 = 1e-15;

fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    quad::integrate(f, a, b, QUAD_TOL, 1e-14)
}

/// `∫_{-s}^{s} √((s²-t²)/g) dt = (π/2) σ²`, solved for `σ` by quadrature
/// after `t = s sin θ`.
fn sigma_quadrature(s: f64, k: f64) -> Result<f64> {
    let k2 = k * k;
    let half = integrate(
        |th| {
            let (sn, cs) = (th.sin(), th.cos());
            let t2 = s * s * sn * sn;
            s * s * cs * cs / ((1.0 - t2) * (1.0 - k2 * t2)).sqrt()
        },
        0.0,
        FRAC_PI_2,
    )?;
    Ok((4.0 * half / PI).sqrt())
}

/// `₂F₁(1/2, 1/2; 2; x)` by its power series, `0 ≤ x < 1`.
pub fn hyp2f1_half_half_two(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut j = 0.0;
    while j < 1e6 {
        term *= (j + 0.5) * (j + 0.5) / ((j + 2.0) * (j + 1.0)) * x;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        j += 1.0;
    }
    sum
}

/// The image `σ` of the turning point `s`.
///
/// Lamé uses quadrature; Mathieu uses `σ² = s² ₂F₁(1/2,1/2;2;s²)`.
pub fn sigma_from_s(s: f64, family: Family, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::Domain(format!("turning point must satisfy 0 <= s < 1, got {s}")));
    }
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus must satisfy 0 <= k < 1, got {k}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    match family {
        Family::Lame => sigma_quadrature(s, k),
        Family::Mathieu => Ok(s * hyp2f1_half_half_two(s * s).sqrt()),
    }
}

/// Limit of `σ` as `s → 1`: `2√(arcsin k/(π k))`.
pub fn sigma_star(k: f64) -> f64 {
    if k == 0.0 {
        2.0 / PI.sqrt()
    } else {
        2.0 * (k.asin() / (PI * k)).sqrt()
    }
}

/// `ζ*` at `s = 0`: `√(2 artanh(k)/k)`.
pub fn zeta_star_critical(k: f64) -> f64 {
    if k == 0.0 {
        2f64.sqrt()
    } else {
        (2.0 * num_traits::Float::atanh(k) / k).sqrt()
    }
}

/// `sinh 2u - 2u`, accurate for small `u`.
fn f_outer(u: f64) -> f64 {
    if u < 0.5 {
        series_odd_tail(2.0 * u, 1.0)
    } else {
        (2.0 * u).sinh() - 2.0 * u
    }
}

/// `2ψ - sin 2ψ`, accurate for small `ψ`.
fn f_inner(psi: f64) -> f64 {
    if psi < 0.5 {
        series_odd_tail(2.0 * psi, -1.0)
    } else {
        2.0 * psi - (2.0 * psi).sin()
    }
}

/// `Σ_{j≥1} sign^{j+1} y^{2j+1}/(2j+1)!`.
fn series_odd_tail(y: f64, sign: f64) -> f64 {
    let y2 = y * y;
    let mut term: f64 = y * y2 / 6.0;
    let mut sum: f64 = 0.0;
    let mut j = 1.0;
    let mut sg = 1.0;
    while term.abs() > 1e-18 * sum.abs() || sum == 0.0 {
        sum += sg * term;
        term *= y2 / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
        sg *= sign;
        j += 1.0;
        if j > 60.0 || term == 0.0 {
            break;
        }
    }
    sum
}

fn newton<F: Fn(f64) -> (f64, f64)>(f: F, mut x: f64, lo: f64, hi: f64) -> Result<f64> {
    for _ in 0..200 {
        let (v, d) = f(x);
        if d == 0.0 {
            break;
        }
        let nx = (x - v / d).clamp(lo, hi);
        let done = (nx - x).abs() <= 4.0 * f64::EPSILON * nx.abs().max(1e-300);
        x = nx;
        if done || v == 0.0 {
            return Ok(x);
        }
    }
    let (v, _) = f(x);
    if v.abs() <= 1e-12 * x.abs().max(1.0) {
        Ok(x)
    } else {
        Err(Error::Numeric(format!("Liouville map root finder stalled at {x} (residual {v})")))
    }
}

/// Solves `sinh 2u - 2u = y`, `y ≥ 0`, starting above the root.
fn solve_outer(y: f64) -> Result<f64> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    let u0 = (0.75 * y).cbrt().min(0.5 * num_traits::Float::asinh(2.0 * y) + 1.0);
    newton(|u| (f_outer(u) - y, 4.0 * u.sinh().powi(2)), u0, 0.0, f64::INFINITY)
}

/// Solves `2ψ - sin 2ψ = y` on `[0, π/2]`, starting above the root.
fn solve_deficit(y: f64) -> Result<f64> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    if y >= PI {
        return Ok(FRAC_PI_2);
    }
    let guess = 1.1 * (0.75 * y).cbrt();
    let p0 = if guess <= 1.1 { guess } else { FRAC_PI_2 };
    newton(|p| (f_inner(p) - y, 4.0 * p.sin().powi(2)), p0, 0.0, FRAC_PI_2)
}

/// Solves `2α + sin 2α = y` on `[0, π/2]`, starting below the root.
fn solve_direct(y: f64) -> Result<f64> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    newton(|a| (2.0 * a + (2.0 * a).sin() - y, 4.0 * a.cos().powi(2)), 0.0, 0.0, FRAC_PI_2)
}

/// A point of the map with its amplitude `((ζ²-σ²)/(x²-s²))^{1/4}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPoint {
    pub x: f64,
    pub zeta: f64,
    pub amp: f64,
}

/// The Liouville map for one turning point `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleMap {
    pub family: Family,
    pub k: f64,
    pub s: f64,
    pub sigma: f64,
    pub zeta_star: f64,
}

impl LiouvilleMap {
    pub fn new(family: Family, k: f64, s: f64) -> Result<Self> {
        let k = if family == Family::Mathieu { 0.0 } else { k };
        let sigma = sigma_from_s(s, family, k)?;
        let mut map = LiouvilleMap { family, k, s, sigma, zeta_star: 0.0 };
        map.zeta_star = map.point(1.0)?.zeta;
        Ok(map)
    }

    /// Map for the eigenvalue `lambda` of `spec`: `s² = λ/κ²` (Lamé) or
    /// `s² = (λ + 2h²)/(4h²)` (Mathieu).
    pub fn for_eigenvalue(spec: &ProblemSpec, lambda: f64) -> Result<Self> {
        let s2 = match spec.family {
            Family::Lame => lambda / (spec.param * spec.param),
            Family::Mathieu => (lambda + 2.0 * spec.param * spec.param) / (4.0 * spec.param * spec.param),
        };
        if !(0.0..1.0).contains(&s2) {
            return Err(Error::Domain(format!("eigenvalue {lambda} gives s^2 = {s2} outside [0, 1)")));
        }
        Self::new(spec.family, spec.k(), s2.sqrt())
    }

    fn g(&self, t: f64) -> f64 {
        (1.0 - t * t) * (1.0 - self.k * self.k * t * t)
    }

    /// `∫_s^x √((t²-s²)/g) dt` for `s ≤ x ≤ 1`.
    fn outer_integral(&self, x: f64) -> Result<f64> {
        let s = self.s;
        let k2 = self.k * self.k;
        let tm = 0.5 * (1.0 + s);
        let b1 = (2.0 * s).min(tm);
        let mut total = 0.0;
        if s > 0.0 {
            let hi = x.min(b1);
            if hi > s {
                let vmax = num_traits::Float::ln_1p((hi - s) / s + (((hi - s) / s) * (2.0 + (hi - s) / s)).sqrt());
                total += integrate(
                    |v| {
                        let t = s * v.cosh();
                        let sh = s * v.sinh();
                        sh * sh / self.g(t).sqrt()
                    },
                    0.0,
                    vmax,
                )?;
            }
        }
        let (a, b) = (b1.max(s), x.min(tm));
        if b > a {
            total += integrate(|t| ((t * t - s * s).max(0.0) / self.g(t)).sqrt(), a, b)?;
        }
        if x > tm {
            let (vlo, vhi) = ((1.0 - x).max(0.0).sqrt(), (1.0 - tm).sqrt());
            total += integrate(
                |v| {
                    let t = 1.0 - v * v;
                    2.0 * (t * t - s * s).max(0.0).sqrt() / ((2.0 - v * v).sqrt() * (1.0 - k2 * t * t).sqrt())
                },
                vlo,
                vhi,
            )?;
        }
        Ok(total)
    }

    /// `∫ s² cos²θ / √g(s sin θ) dθ` over `[0, θ₁]`.
    fn inner_direct(&self, th1: f64) -> Result<f64> {
        let s = self.s;
        integrate(
            |th| {
                let c = th.cos();
                s * s * c * c / self.g(s * th.sin()).sqrt()
            },
            0.0,
            th1,
        )
    }

    /// `∫_x^s √((s²-t²)/g) dt` with `t = s cos θ`, `θ ∈ [0, acos(x/s)]`.
    fn inner_deficit(&self, x: f64) -> Result<f64> {
        let s = self.s;
        let th1 = 2.0 * ((s - x) / (2.0 * s)).max(0.0).sqrt().asin();
        integrate(
            |th| {
                let sn = th.sin();
                s * s * sn * sn / self.g(s * th.cos()).sqrt()
            },
            0.0,
            th1,
        )
    }

    /// `ζ(x)` with amplitude, `-1 ≤ x ≤ 1`.
    pub fn point(&self, x: f64) -> Result<MapPoint> {
        if !(x.abs() <= 1.0) {
            return Err(Error::Domain(format!("map argument must satisfy |x| <= 1, got {x}")));
        }
        if x < 0.0 {
            let p = self.point(-x)?;
            return Ok(MapPoint { x, zeta: -p.zeta, amp: p.amp });
        }
        let (s, sg) = (self.s, self.sigma);
        let gs = self.g(s);
        let turning_amp = || {
            if s == 0.0 {
                1.0
            } else {
                ((sg / s).powf(2.0 / 3.0) * gs.powf(-1.0 / 3.0)).powf(0.25)
            }
        };
        if x == s {
            return Ok(MapPoint { x, zeta: sg, amp: turning_amp() });
        }
        if x > s {
            let l = self.outer_integral(x)?;
            let (zeta, ratio) = if sg == 0.0 {
                let z = (2.0 * l).sqrt();
                (z, if x == 0.0 { 1.0 } else { z * z / (x * x) })
            } else {
                let u = solve_outer(4.0 * l / (sg * sg))?;
                let sh = u.sinh();
                (sg * u.cosh(), sg * sg * sh * sh / ((x - s) * (x + s)))
            };
            let amp = if ratio > 0.0 && ratio.is_finite() { ratio.powf(0.25) } else { turning_amp() };
            return Ok(MapPoint { x, zeta, amp });
        }
        let (zeta, ratio) = if x <= s * core::f64::consts::FRAC_1_SQRT_2 {
            let j = self.inner_direct((x / s).asin())?;
            let a = solve_direct(4.0 * j / (sg * sg))?;
            let c = a.cos();
            (sg * a.sin(), sg * sg * c * c / ((s - x) * (s + x)))
        } else {
            let d = self.inner_deficit(x)?;
            let p = solve_deficit(4.0 * d / (sg * sg))?;
            let sn = p.sin();
            (sg * p.cos(), sg * sg * sn * sn / ((s - x) * (s + x)))
        };
        let amp = if ratio > 0.0 && ratio.is_finite() { ratio.powf(0.25) } else { turning_amp() };
        Ok(MapPoint { x, zeta, amp })
    }

    pub fn forward(&self, x: f64) -> Result<f64> {
        Ok(self.point(x)?.zeta)
    }

    /// `x(ζ)` by safeguarded Newton on [`forward`](Self::forward), using
    /// `dζ/dx = 1/(amp² √g)`.
    pub fn inverse(&self, zeta: f64) -> Result<f64> {
        if zeta < 0.0 {
            return Ok(-self.inverse(-zeta)?);
        }
        if zeta > self.zeta_star {
            return Err(Error::Domain(format!("zeta {zeta} beyond zeta* = {}", self.zeta_star)));
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut x = if self.sigma > 0.0 { (zeta * self.s / self.sigma).min(0.99) } else { zeta.min(0.99) };
        for _ in 0..200 {
            let p = self.point(x)?;
            let f = p.zeta - zeta;
            if f == 0.0 {
                return Ok(x);
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = 1.0 / (p.amp * p.amp * self.g(x).max(0.0).sqrt());
            let mut nx = x - f / d;
            if !(nx > lo && nx < hi) || !nx.is_finite() {
                nx = 0.5 * (lo + hi);
            }
            if (nx - x).abs() <= 2.0 * f64::EPSILON * x.max(1e-300) || hi - lo <= 4.0 * f64::EPSILON {
                return Ok(nx);
            }
            x = nx;
        }
        Err(Error::Numeric(format!("inverse Liouville map did not converge for zeta = {zeta}")))
    }
}

/// Power-series product truncated to `n` terms.
fn ps_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    for (i, x) in a.iter().enumerate().take(n) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            c[i + j] += x * y;
        }
    }
    c
}

/// Reciprocal of a power series with nonzero constant term.
fn ps_inv(a: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    c[0] = 1.0 / a[0];
    for i in 1..n {
        let s: f64 = (1..=i).map(|j| a.get(j).copied().unwrap_or(0.0) * c[i - j]).sum();
        c[i] = -s / a[0];
    }
    c
}

const B0_TERMS: usize = 24;
/// Below this the closed form loses digits to the cancelling `6/ζ²` terms;
/// at it, series and closed form agree to about `1e-14` relative.
const B0_SERIES_BELOW: f64 = 0.6;

/// Choice of overall sign for the two-term correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum B0Sign {
    /// The closed form exactly as displayed for the family.
    AsPrinted,
    /// Its negative.
    Flipped,
}

impl B0Sign {
    pub fn factor(self) -> f64 {
        match self {
            B0Sign::AsPrinted => 1.0,
            B0Sign::Flipped => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            B0Sign::AsPrinted => "as-printed",
            B0Sign::Flipped => "flipped",
        }
    }
}

/// The correction coefficient `B₀(ζ)` of the two-term approximation.
///
/// Lamé: `32ζB₀ = (k²+1) ln(ζ²C/4) - 3(k²-1)²/(2C) + 3k coth(kζ²/2) + 2k²ζ² - 6/ζ²`
/// with `C = 2k coth(kζ²/2) - k² - 1`. Mathieu:
/// `256 B₀ = 3ζ/(4-ζ²) - (2/ζ) ln(1-ζ²/4)`. Near `ζ = 0` the odd Taylor
/// series is used instead.
#[derive(Debug, Clone, PartialEq)]
pub struct B0Correction {
    pub family: Family,
    pub k: f64,
    series: Vec<f64>,
}

/// `y coth y`, with its series near zero.
fn ycoth(y: f64) -> f64 {
    if y.abs() < 1e-3 {
        let y2 = y * y;
        1.0 + y2 / 3.0 - y2 * y2 / 45.0
    } else {
        y / num_traits::Float::tanh(y)
    }
}

impl B0Correction {
    pub fn new(family: Family, k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain(format!("modulus must satisfy 0 <= k < 1, got {k}")));
        }
        let kk = if family == Family::Mathieu { 0.0 } else { k };
        let mut series = lame_b0_series(kk);
        if family == Family::Mathieu {
            for c in &mut series {
                *c *= -0.25;
            }
        }
        Ok(B0Correction { family, k: kk, series })
    }

    /// Largest `|ζ|` accepted (the closed form's first singularity).
    pub fn singular_point(&self) -> f64 {
        match self.family {
            Family::Mathieu => 2.0,
            Family::Lame => 2f64.sqrt() * zeta_star_critical(self.k),
        }
    }

    pub fn eval(&self, zeta: f64) -> Result<f64> {
        if !(zeta.abs() < self.singular_point()) {
            return Err(Error::Domain(format!("B0 undefined at zeta = {zeta}")));
        }
        if zeta.abs() < B0_SERIES_BELOW {
            return Ok(self.eval_series(zeta));
        }
        Ok(self.eval_closed(zeta))
    }

    /// Odd Taylor series `Σ c_j ζ^{2j-1}`.
    pub fn eval_series(&self, zeta: f64) -> f64 {
        let w = zeta * zeta;
        let mut acc = 0.0;
        for c in self.series.iter().rev() {
            acc = acc * w + c;
        }
        acc * zeta
    }

    pub fn eval_closed(&self, zeta: f64) -> f64 {
        let w = zeta * zeta;
        match self.family {
            Family::Mathieu => (3.0 * zeta / (4.0 - w) - 2.0 / zeta * num_traits::Float::ln_1p(-w / 4.0)) / 256.0,
            Family::Lame => {
                let k = self.k;
                let k2 = k * k;
                // k coth(k w / 2) = (2/w) · y coth y with y = k w / 2
                let kcoth = 2.0 / w * ycoth(0.5 * k * w);
                let c = 2.0 * kcoth - k2 - 1.0;
                let v = (k2 + 1.0) * (0.25 * w * c).ln() - 3.0 * (k2 - 1.0).powi(2) / (2.0 * c)
                    + 3.0 * kcoth
                    + 2.0 * k2 * w
                    - 6.0 / w;
                v / (32.0 * zeta)
            }
        }
    }
}

/// Coefficients `c_j` of `B₀ = Σ c_j ζ^{2j-1}` for the Lamé closed form,
/// from the small-`w` expansion of the integrand `ψ̂` with `w = ζ²`.
fn lame_b0_series(k: f64) -> Vec<f64> {
    let n = B0_TERMS + 2;
    let k2 = k * k;
    // x² = w X(w)
    let mut x = vec![0.0; n];
    let mut fact = vec![1.0; 2 * n + 2];
    for i in 1..fact.len() {
        fact[i] = fact[i - 1] * i as f64;
    }
    for i in 0..n {
        // sinh(kw)/k contributes k^{2i} w^{2i+1}/(2i+1)! to x²
        if 2 * i < n {
            x[2 * i] += k2.powi(i as i32) / fact[2 * i + 1];
        }
        // (1 + k^{-2}) sinh²(kw/2) = Σ_{i≥1} (k^{2i} + k^{2i-2}) w^{2i} / (2 (2i)!)
        if i >= 1 && 2 * i - 1 < n {
            x[2 * i - 1] -= (k2.powi(i as i32) + k2.powi(i as i32 - 1)) / (2.0 * fact[2 * i]);
        }
    }
    let y = ps_inv(&x, n);
    let y2 = ps_mul(&y, &y, n);
    let c1 = 1.0 + k2;
    // ψ̂ = (3/(4w))(1 - Y²) + k² w/4 + (1+k²) Y/4 + (1+k²)/8
    let mut psi = vec![0.0; n - 1];
    for j in 0..n - 1 {
        psi[j] = -0.75 * y2[j + 1] + 0.25 * c1 * y[j];
    }
    psi[0] += 0.125 * c1;
    psi[1] += 0.25 * k2;
    (1..=B0_TERMS).map(|j| psi[j] / (4.0 * j as f64)).collect()
}

/// Options for [`UniformApprox`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformOptions {
    /// Order of the eigenvalue series used to place the turning point.
    pub h_order: usize,
    pub b0_sign: B0Sign,
}

impl Default for UniformOptions {
    fn default() -> Self {
        UniformOptions { h_order: 2, b0_sign: B0Sign::AsPrinted }
    }
}

/// One- and two-term uniform approximations for one problem.
#[derive(Debug, Clone)]
pub struct UniformApprox {
    pub spec: ProblemSpec,
    pub map: LiouvilleMap,
    pub b0: B0Correction,
    pub opts: UniformOptions,
    pub eigenvalue: f64,
    /// Normalisation constant `C`.
    pub c: f64,
    scale: f64,
    b0_den: f64,
}

fn factorial(m: u32) -> f64 {
    (1..=m).fold(1.0, |a, i| a * i as f64)
}

impl UniformApprox {
    pub fn new(spec: &ProblemSpec, opts: UniformOptions) -> Result<Self> {
        let tables = match spec.family {
            Family::Lame => gen_lame_tables(spec.m, &spec.k2, opts.h_order)?,
            Family::Mathieu => gen_mathieu_tables(spec.m, opts.h_order)?,
        };
        let lambda = eigen_series(spec, &tables, opts.h_order)?.value.to_f64();
        Self::with_eigenvalue(spec, lambda, opts)
    }

    /// Builds the approximation around a given eigenvalue.
    pub fn with_eigenvalue(spec: &ProblemSpec, lambda: f64, opts: UniformOptions) -> Result<Self> {
        let map = LiouvilleMap::for_eigenvalue(spec, lambda)?;
        let b0 = B0Correction::new(spec.family, spec.k())?;
        let m = spec.m;
        let mf = factorial(m);
        let x = spec.param;
        let (c, scale, b0_den) = match spec.family {
            Family::Lame => (
                (PI * x).powf(0.25) / (2.0 * mf).sqrt() * (1.0 - (2 * m + 1) as f64 / (8.0 * x)),
                (2.0 * x).sqrt(),
                x * x,
            ),
            Family::Mathieu => (
                (PI * x / (2.0 * mf * mf)).powf(0.25) * (1.0 - (2 * m + 1) as f64 / (16.0 * x)),
                2.0 * x.sqrt(),
                x * x,
            ),
        };
        Ok(UniformApprox { spec: spec.clone(), map, b0, opts, eigenvalue: lambda, c, scale, b0_den })
    }

    /// `x` for `z`: `sn(z,k)` or `cos z`.
    pub fn x_of_z(&self, z: f64) -> Result<f64> {
        match self.spec.family {
            Family::Lame => Ok(jacobi_sncndn(z, self.spec.k())?.sn),
            Family::Mathieu => Ok(z.cos()),
        }
    }

    /// The approximation at `z` with `terms ∈ {1, 2}`.
    pub fn eval(&self, z: f64, terms: u8) -> Result<f64> {
        self.eval_x(self.x_of_z(z)?, terms)
    }

    pub fn eval_x(&self, x: f64, terms: u8) -> Result<f64> {
        if !(terms == 1 || terms == 2) {
            return Err(Error::Domain(format!("terms must be 1 or 2, got {terms}")));
        }
        let p = self.map.point(x)?;
        let arg = self.scale * p.zeta;
        let (d, dp) = pcf_d_both(self.spec.m, arg);
        let mut v = d;
        if terms == 2 && p.zeta != 0.0 {
            let b = self.opts.b0_sign.factor() * self.b0.eval(p.zeta)?;
            v += b / self.b0_den * self.scale * dp;
        }
        Ok(self.c * p.amp * v)
    }
}
