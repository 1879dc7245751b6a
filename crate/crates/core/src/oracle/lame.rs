//! Lamé eigenvalues by shooting on `w'' + (λ - κ² sn² z) w = 0` over
//! `[0, K]`, integrating with Taylor series in double-double arithmetic.
//!
//! The mesh carries the Taylor coefficients of `κ² sn²` at every node, so a
//! shot costs one convolution per step. The forward solution starts at `0`
//! with the parity condition, the backward one at `K` with the branch
//! condition, and they are matched near the turning point. When the
//! solution decays by more than `e^45` between the turning point and `K`,
//! the backward start moves in to where that decay is reached and uses the
//! decaying WKB data instead; the end condition then only changes the
//! eigenvalue below double-double resolution.
//!
//! Near the centre the solutions grow like `exp(κ z²/2)` in the complex
//! plane, so their Taylor coefficients decay only like `1/√(j!)`. Each step
//! is therefore sized from the tail of the series of two test solutions at
//! its node rather than from the local frequency alone.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::coeffs::Family;
use crate::error::{Error, Result};
use crate::expand::{Branch, EigenResult, Method, ProblemSpec};
use crate::quad::{self, GaussLegendre};
use crate::real::{Dd, Real};
use crate::special::{elliptic_k_k2, jacobi_arcsn, jacobi_sncndn};

use super::OracleConfig;

const STEP_PHASE: f64 = 2.5;
const SCAN_POINTS: usize = 24;

/// Steps are at most this fraction of `K'`, the distance from the real axis
/// to the poles of `sn`.
const POLE_FRACTION: f64 = 0.125;

/// Taylor order whose truncation is below `tol`, both for the oscillation
/// over one step and for the geometric decay set by the poles of `sn`.
fn taylor_order(tol: f64) -> usize {
    let mut term = 1.0;
    for n in 1..=96usize {
        term *= STEP_PHASE / n as f64;
        if n >= 16 && term < 1e-3 * tol && POLE_FRACTION.powi(n as i32) < 1e-3 * tol {
            return n;
        }
    }
    96
}

fn conv(a: &[Dd], b: &[Dd], j: usize) -> Dd {
    let mut s = Dd::zero();
    for i in 0..=j {
        s += a[i] * b[j - i];
    }
    s
}

fn horner(c: &[Dd], x: Dd) -> Dd {
    let mut s = Dd::zero();
    for v in c.iter().rev() {
        s = s * x + *v;
    }
    s
}

fn horner_deriv(c: &[Dd], x: Dd) -> Dd {
    let mut s = Dd::zero();
    for j in (1..c.len()).rev() {
        s = s * x + c[j].mul_f64(j as f64);
    }
    s
}

struct Node {
    z: Dd,
    sn: Dd,
    /// Taylor coefficients of `κ² sn²` about `z`.
    pot: Vec<Dd>,
}

struct Mesh {
    nodes: Vec<Node>,
    order: usize,
    truncated: bool,
    match_idx: usize,
    kappa2: Dd,
    /// `1/((j+1)(j+2))`.
    inv: Vec<Dd>,
}

/// Series of the solution with data `(w, w')` for the potential `pot`.
fn solution_series(pot: &[Dd], inv: &[Dd], lam: Dd, order: usize, w: Dd, wp: Dd) -> Vec<Dd> {
    let mut c = vec![Dd::zero(); order + 1];
    c[0] = w;
    if order >= 1 {
        c[1] = wp;
    }
    for j in 0..order.saturating_sub(1) {
        c[j + 2] = (conv(pot, &c, j) - lam * c[j]) * inv[j];
    }
    c
}

/// Largest step for which the last four terms of both test series stay
/// below `tol/100` relative to their data.
fn tail_step(pot: &[Dd], inv: &[Dd], lam: Dd, order: usize, tol: f64) -> f64 {
    let scale = lam.to_f64().abs().sqrt().max(1.0);
    let mut h = f64::INFINITY;
    for (w, wp) in [(Dd::one(), Dd::zero()), (Dd::zero(), Dd::from_f64(scale))] {
        let c = solution_series(pot, inv, lam, order, w, wp);
        for j in order.saturating_sub(3)..=order {
            let a = c[j].to_f64().abs();
            if a > 0.0 && j > 0 {
                h = h.min((1e-2 * tol / a).powf(1.0 / j as f64));
            }
        }
    }
    h
}

impl Mesh {
    fn build(kappa: f64, k2: Dd, lam_ref: f64, lam_hi: f64, tol: f64, decay: f64) -> Result<Self> {
        let order = taylor_order(tol);
        let inv: Vec<Dd> = (0..=order).map(|j| Dd::one() / Dd::from_f64(((j + 1) * (j + 2)) as f64)).collect();
        let k2f = k2.to_f64();
        let k = k2f.sqrt();
        let kq_dd = elliptic_k_k2(k2)?;
        let kq = kq_dd.to_f64();
        let kprime = if k2f > 0.0 { elliptic_k_k2(1.0 - k2f)? } else { f64::INFINITY };
        let hmax = (0.25f64).min(kprime * POLE_FRACTION);
        let kap2 = kappa * kappa;

        let turning = if lam_ref > 0.0 && lam_ref < kap2 { Some(jacobi_arcsn((lam_ref / kap2).sqrt(), k)?) } else { None };
        let mut z_end = kq_dd;
        let mut truncated = false;
        if let Some(zt) = turning {
            let rate = |z: f64| -> f64 {
                let s = jacobi_sncndn(z, k).map(|e| e.sn).unwrap_or(1.0);
                (kap2 * s * s - lam_ref).max(0.0).sqrt()
            };
            let exponent = |z: f64| quad::integrate(rate, zt, z, 1e-10, 1e-10);
            if exponent(kq)? > decay {
                let (mut lo, mut hi) = (zt, kq);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if exponent(mid)? > decay {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                z_end = Dd::from_f64(hi);
                truncated = true;
            }
        }
        let z_end_f = z_end.to_f64();

        let kappa2 = Dd::from_f64(kappa) * Dd::from_f64(kappa);
        let mut nodes = Vec::new();
        let (mut z, mut s0, mut c0, mut d0) = (Dd::zero(), Dd::zero(), Dd::one(), Dd::one());
        let mut s = vec![Dd::zero(); order + 1];
        let mut c = vec![Dd::zero(); order + 1];
        let mut d = vec![Dd::zero(); order + 1];
        loop {
            s[0] = s0;
            c[0] = c0;
            d[0] = d0;
            for j in 0..order {
                let inv = Dd::one() / Dd::from_f64((j + 1) as f64);
                s[j + 1] = conv(&c, &d, j) * inv;
                c[j + 1] = -conv(&s, &d, j) * inv;
                d[j + 1] = -k2 * conv(&s, &c, j) * inv;
            }
            let pot: Vec<Dd> = (0..=order).map(|j| kappa2 * conv(&s, &s, j)).collect();
            let h_tail = tail_step(&pot, &inv, Dd::from_f64(lam_ref), order, tol);
            nodes.push(Node { z, sn: s0, pot });
            if nodes.len() > 200_000 {
                return Err(Error::Numeric("shooting mesh exceeds 200000 nodes".into()));
            }

            let zf = z.to_f64();
            if zf >= z_end_f {
                break;
            }
            let cap = hmax.min(h_tail);
            let mut h = cap;
            for _ in 0..3 {
                let sn = jacobi_sncndn((zf + h).min(kq), k)?.sn;
                let omega = (kap2 * sn * sn + lam_hi.abs()).sqrt().max(1e-3);
                h = cap.min(STEP_PHASE / omega);
            }
            let step = if zf + 1.05 * h >= z_end_f { z_end - z } else { Dd::from_f64(h) };
            s0 = horner(&s, step);
            c0 = horner(&c, step);
            d0 = horner(&d, step);
            z = if zf + 1.05 * h >= z_end_f { z_end } else { z + step };
        }

        let last = nodes.len() - 1;
        let match_idx = match turning {
            Some(zt) => {
                let mut best = 1;
                for (i, n) in nodes.iter().enumerate().skip(1) {
                    if (n.z.to_f64() - zt).abs() < (nodes[best].z.to_f64() - zt).abs() {
                        best = i;
                    }
                }
                best.min(last)
            }
            None => (last / 2).max(1).min(last),
        };
        Ok(Mesh { nodes, order, truncated, match_idx, kappa2, inv })
    }

    /// Taylor coefficients of the solution about node `i` with data `(w, w')`.
    fn local(&self, i: usize, lam: Dd, w: Dd, wp: Dd) -> Vec<Dd> {
        solution_series(&self.nodes[i].pot, &self.inv, lam, self.order, w, wp)
    }

    fn step(&self, i: usize, lam: Dd, w: Dd, wp: Dd, delta: Dd) -> (Dd, Dd, Vec<Dd>) {
        let c = self.local(i, lam, w, wp);
        (horner(&c, delta), horner_deriv(&c, delta), c)
    }
}

/// Parity and end conditions on `[0, K]`: for even `m` the solution is even
/// about `0`, for odd `m` odd; branch `a` has `w'(K) = 0`, branch `b`
/// `w(K) = 0`.
#[derive(Debug, Clone, Copy)]
struct Conditions {
    even: bool,
    branch: Branch,
}

struct Shot {
    mismatch: Dd,
    forward: Vec<Dd>,
    backward: Vec<Dd>,
    wf: Dd,
    wfp: Dd,
    wb: Dd,
    wbp: Dd,
    omega: f64,
    /// Local series per step: forward steps about their left node, backward
    /// steps about their right node.
    series: Option<(Vec<Vec<Dd>>, Vec<Vec<Dd>>)>,
}

fn shoot(mesh: &Mesh, cond: Conditions, lam: Dd, keep: bool) -> Shot {
    let nodes = &mesh.nodes;
    let last = nodes.len() - 1;
    let mi = mesh.match_idx;
    let (mut w, mut wp) = if cond.even { (Dd::one(), Dd::zero()) } else { (Dd::zero(), Dd::one()) };
    let mut forward = vec![w];
    let mut fs = Vec::new();
    for i in 0..mi {
        let delta = nodes[i + 1].z - nodes[i].z;
        let (a, b, c) = mesh.step(i, lam, w, wp, delta);
        w = a;
        wp = b;
        forward.push(w);
        if keep {
            fs.push(c);
        }
    }
    let (wf, wfp) = (w, wp);

    let (mut v, mut vp) = if mesh.truncated {
        let q = mesh.kappa2 * nodes[last].sn * nodes[last].sn - lam;
        if q.hi > 0.0 {
            (Dd::one(), -q.sqrt())
        } else {
            (Dd::one(), Dd::zero())
        }
    } else {
        match cond.branch {
            Branch::A => (Dd::one(), Dd::zero()),
            Branch::B => (Dd::zero(), -Dd::one()),
        }
    };
    let mut backward = vec![v];
    let mut bs = Vec::new();
    for i in (mi + 1..=last).rev() {
        let delta = nodes[i - 1].z - nodes[i].z;
        let (a, b, c) = mesh.step(i, lam, v, vp, delta);
        v = a;
        vp = b;
        backward.push(v);
        if keep {
            bs.push(c);
        }
    }
    backward.reverse();
    bs.reverse();
    let (wb, wbp) = (v, vp);

    let omega = Dd::from_f64(lam.to_f64().abs().sqrt().max(1.0));
    let nf = (wf * wf + wfp * wfp / (omega * omega)).sqrt();
    let nb = (wb * wb + wbp * wbp / (omega * omega)).sqrt();
    let mismatch = (wf * wbp - wfp * wb) / (omega * nf * nb);
    Shot { mismatch, forward, backward, wf, wfp, wb, wbp, omega: omega.to_f64(), series: keep.then_some((fs, bs)) }
}

/// Factor taking the backward solution onto the forward one at the match.
fn join_factor(s: &Shot) -> Dd {
    if s.wb.abs().to_f64() * s.omega >= 1e-3 * s.wbp.abs().to_f64() {
        s.wf / s.wb
    } else {
        s.wfp / s.wbp
    }
}

fn zero_count(s: &Shot) -> usize {
    let r = join_factor(s).signum();
    let mut signs = Vec::new();
    for v in &s.forward {
        signs.push(v.signum());
    }
    for v in s.backward.iter().skip(1) {
        signs.push(v.signum() * r);
    }
    let mut count = 0;
    let mut prev = 0.0;
    for x in signs {
        if x == 0.0 {
            continue;
        }
        if prev != 0.0 && x != prev {
            count += 1;
        }
        prev = x;
    }
    count
}

/// Illinois refinement of a sign change of the mismatch.
fn refine(mesh: &Mesh, cond: Conditions, mut a: Dd, mut b: Dd, tol: f64) -> Result<Dd> {
    let mut fa = shoot(mesh, cond, a, false).mismatch;
    let mut fb = shoot(mesh, cond, b, false).mismatch;
    let mut side = 0i8;
    for _ in 0..300 {
        let c = b - fb * (b - a) / (fb - fa);
        let scale = c.abs().to_f64().max(1.0);
        if (b - a).abs().to_f64() <= tol * scale {
            return Ok(c);
        }
        let fc = shoot(mesh, cond, c, false).mismatch;
        if fc.hi == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa = fa.mul_f64(0.5);
            }
            side = -1;
        } else {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            side = 1;
        }
    }
    Err(Error::Numeric("eigenvalue refinement did not converge".into()))
}

fn default_width(spec: &ProblemSpec) -> f64 {
    let m = spec.m as f64;
    let mu1 = (1.0 + spec.k2_f64()) * (1.0 + 2.0 * m + 2.0 * m * m) / 8.0;
    4.0 * (mu1 + 1.0)
}

struct Located {
    lambda: Dd,
    mesh: Mesh,
    cond: Conditions,
}

fn locate(spec: &ProblemSpec, cfg: &OracleConfig, tol: f64) -> Result<Located> {
    if spec.family != Family::Lame {
        return Err(Error::Domain("the shooting oracle solves the Lamé equation".into()));
    }
    cfg.validate(spec.m)?;
    let kappa = spec.param;
    let k2 = Dd::from_rational(&spec.k2);
    let cond = Conditions { even: spec.m % 2 == 0, branch: spec.branch };
    let centre = (2 * spec.m + 1) as f64 * kappa;
    let want = (spec.m / 2) as usize;
    let mut width = if cfg.bracket_width > 0.0 { cfg.bracket_width } else { default_width(spec) };
    let mut last_err = Error::Bracket(format!("no sign change near {centre}"));
    for _ in 0..6 {
        let (lo, hi) = (centre - width, centre + width);
        let mesh = Mesh::build(kappa, k2, centre, hi, tol, cfg.decay_exponent)?;
        let pts: Vec<Dd> = (0..=SCAN_POINTS)
            .map(|i| Dd::from_f64(lo) + Dd::from_f64(2.0 * width * i as f64 / SCAN_POINTS as f64))
            .collect();
        let vals: Vec<Dd> = pts.iter().map(|&l| shoot(&mesh, cond, l, false).mismatch).collect();
        let mut found_any = false;
        for i in 0..SCAN_POINTS {
            if vals[i].signum() * vals[i + 1].signum() > 0.0 {
                continue;
            }
            found_any = true;
            let lam = if vals[i].hi == 0.0 { pts[i] } else { refine(&mesh, cond, pts[i], pts[i + 1], tol)? };
            let shot = shoot(&mesh, cond, lam, false);
            if zero_count(&shot) == want {
                return Ok(Located { lambda: lam, mesh, cond });
            }
        }
        last_err = if found_any {
            Error::Identification(format!(
                "no eigenvalue with {want} interior zeros in [{lo}, {hi}] for m={}",
                spec.m
            ))
        } else {
            Error::Bracket(format!("no sign change in [{lo}, {hi}]"))
        };
        width *= 2.0;
    }
    Err(last_err)
}

/// Reference Lamé eigenvalue. The error estimate is the change when the
/// tolerance is loosened a hundredfold, plus the tolerance itself.
pub fn lame_eigen_oracle(spec: &ProblemSpec, cfg: &OracleConfig) -> Result<EigenResult> {
    let fine = locate(spec, cfg, cfg.ode_tol)?.lambda;
    let coarse = locate(spec, cfg, (cfg.ode_tol * 100.0).min(1e-4))?.lambda;
    let scale = fine.abs().to_f64().max(1.0);
    let err = (fine - coarse).abs().to_f64() + cfg.ode_tol * scale;
    Ok(EigenResult { value: fine, method: Method::Oracle("taylor-shooting"), err_estimate: err })
}

#[derive(Debug, Clone)]
struct Segment {
    lo: f64,
    hi: f64,
    centre: f64,
    coeffs: Vec<f64>,
}

/// A Lamé eigenfunction from the shooting solution, normalised so that
/// `∫_{-K}^{K} dn(z) w² dz = π/2` with the end-of-interval sign convention.
#[derive(Debug, Clone)]
pub struct LameEigenfunction {
    pub eigenvalue: Dd,
    pub err_estimate: f64,
    pub quarter_period: f64,
    even: bool,
    branch: Branch,
    segments: Vec<Segment>,
    z_end: f64,
    scale: f64,
}

impl LameEigenfunction {
    pub fn new(spec: &ProblemSpec, cfg: &OracleConfig) -> Result<Self> {
        let ev = lame_eigen_oracle(spec, cfg)?;
        let loc = locate(spec, cfg, cfg.ode_tol)?;
        let shot = shoot(&loc.mesh, loc.cond, loc.lambda, true);
        let r = join_factor(&shot);
        let (fs, bs) = shot.series.unwrap_or_default();
        let nodes = &loc.mesh.nodes;
        let mut segments = Vec::with_capacity(nodes.len());
        for (i, c) in fs.iter().enumerate() {
            segments.push(Segment {
                lo: nodes[i].z.to_f64(),
                hi: nodes[i + 1].z.to_f64(),
                centre: nodes[i].z.to_f64(),
                coeffs: c.iter().map(|x| x.to_f64()).collect(),
            });
        }
        let mi = loc.mesh.match_idx;
        for (j, c) in bs.iter().enumerate() {
            let i = mi + j;
            segments.push(Segment {
                lo: nodes[i].z.to_f64(),
                hi: nodes[i + 1].z.to_f64(),
                centre: nodes[i + 1].z.to_f64(),
                coeffs: c.iter().map(|x| (*x * r).to_f64()).collect(),
            });
        }
        let kq = spec.quarter_period()?;
        let z_end = nodes[nodes.len() - 1].z.to_f64();
        let mut f = LameEigenfunction {
            eigenvalue: ev.value,
            err_estimate: ev.err_estimate,
            quarter_period: kq,
            even: loc.cond.even,
            branch: spec.branch,
            segments,
            z_end,
            scale: 1.0,
        };
        let k = spec.k();
        let gl = GaussLegendre::new(24);
        let mut norm = 0.0;
        for s in &f.segments {
            for i in 0..gl.len() {
                let (z, wgt) = gl.point(i, s.lo, s.hi);
                let v = s.eval(z);
                norm += wgt * jacobi_sncndn(z, k)?.dn * v * v;
            }
        }
        norm *= 2.0;
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numeric(format!("shooting eigenfunction has norm {norm}")));
        }
        let sign = shot.wf.signum();
        let sign = if sign == 0.0 { 1.0 } else { sign };
        f.scale = sign * (core::f64::consts::FRAC_PI_2 / norm).sqrt();
        Ok(f)
    }

    fn raw(&self, u: f64, deriv: bool) -> f64 {
        if u > self.z_end {
            return 0.0;
        }
        let i = self.segments.partition_point(|s| s.hi < u).min(self.segments.len() - 1);
        let s = &self.segments[i];
        if deriv {
            s.eval_deriv(u)
        } else {
            s.eval(u)
        }
    }

    /// Reduces `z` to `[0, K]` using the parity about `0` and the symmetry
    /// about `K` (even for branch `a`, odd for branch `b`). Returns the
    /// reduced point and the factors for the value and the derivative.
    fn reduce(&self, z: f64) -> (f64, f64, f64) {
        let kq = self.quarter_period;
        let period = 4.0 * kq;
        let mut u = z - period * (z / period).round();
        let (mut sign, mut dsign) = (1.0, 1.0);
        if u < 0.0 {
            let p0 = if self.even { 1.0 } else { -1.0 };
            u = -u;
            sign *= p0;
            dsign *= -p0;
        }
        if u > kq {
            let pk = if self.branch == Branch::A { 1.0 } else { -1.0 };
            u = 2.0 * kq - u;
            sign *= pk;
            dsign *= -pk;
        }
        (u.max(0.0), sign, dsign)
    }

    pub fn eval(&self, z: f64) -> f64 {
        let (u, sign, _) = self.reduce(z);
        sign * self.scale * self.raw(u, false)
    }

    pub fn eval_deriv(&self, z: f64) -> f64 {
        let (u, _, dsign) = self.reduce(z);
        dsign * self.scale * self.raw(u, true)
    }
}

impl Segment {
    fn eval(&self, z: f64) -> f64 {
        let d = z - self.centre;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * d + c)
    }

    fn eval_deriv(&self, z: f64) -> f64 {
        let d = z - self.centre;
        let mut s = 0.0;
        for j in (1..self.coeffs.len()).rev() {
            s = s * d + j as f64 * self.coeffs[j];
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::oracle::mathieu_eigen_oracle;

    #[test]
    fn small_k_approaches_mathieu() {
        let cfg = OracleConfig::default();
        let m0 = mathieu_eigen_oracle(0, Branch::A, 2.0, &cfg).unwrap().value.to_f64();
        let spec = ProblemSpec::lame_k(0, Branch::A, 0.01, 4.0).unwrap();
        let l = lame_eigen_oracle(&spec, &cfg).unwrap().value.to_f64();
        assert!((l - 8.0 - m0).abs() < 1e-2, "{l} {m0}");
    }

    #[test]
    fn interlacing_and_splitting_sign() {
        let cfg = OracleConfig::default();
        let mut prev = f64::NEG_INFINITY;
        for m in 0..4u32 {
            for br in [Branch::A, Branch::B] {
                let spec = ProblemSpec::lame(m, br, rat(1, 2), 6.0).unwrap();
                let v = lame_eigen_oracle(&spec, &cfg).unwrap().value.to_f64();
                assert!(v > prev, "m={m} {br:?}: {v} <= {prev}");
                prev = v;
            }
        }
    }

    #[test]
    fn eigenfunction_conventions() {
        let cfg = OracleConfig::default();
        for (m, br) in [(0, Branch::A), (1, Branch::A), (0, Branch::B), (1, Branch::B)] {
            let spec = ProblemSpec::lame(m, br, rat(1, 2), 30.0).unwrap();
            let f = LameEigenfunction::new(&spec, &cfg).unwrap();
            let kq = f.quarter_period;
            let k = spec.k();
            let n = quad::integrate(|z| jacobi_sncndn(z, k).unwrap().dn * f.eval(z).powi(2), -kq, kq, 1e-14, 1e-12)
                .unwrap();
            assert!((n - core::f64::consts::FRAC_PI_2).abs() < 1e-9, "m={m} {br:?} {n}");
            match br {
                Branch::A => assert!(f.eval(kq) > 0.0),
                Branch::B => assert!(f.eval_deriv(kq) < 0.0),
            }
            // parity
            assert!((f.eval(-0.3) - if m % 2 == 0 { 1.0 } else { -1.0 } * f.eval(0.3)).abs() < 1e-12);
        }
    }
}
