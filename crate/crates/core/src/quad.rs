//! Gauss–Legendre quadrature, fixed and adaptive.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::error::{Error, Result};

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 0 { 1.0 } else { p1 };
                let pm = if n == 0 { 0.0 } else { p0 };
                dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            nodes[n - 1 - i] = -x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node `i` mapped to `[a, b]` with its scaled weight.
    pub fn point(&self, i: usize, a: f64, b: f64) -> (f64, f64) {
        let h = 0.5 * (b - a);
        (a + h * (self.nodes[i] + 1.0), h * self.weights[i])
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }
}

/// Adaptive integration by interval bisection; each panel is accepted when
/// the 20-point rule on it agrees with the sum over its two halves.
pub struct Adaptive {
    rule: GaussLegendre,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Adaptive {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Adaptive { rule: GaussLegendre::new(20), abs_tol, rel_tol, max_depth: 48 }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let whole = self.rule.integrate(&mut f, a, b);
        let scale_ref = whole.abs();
        let mut stack: Vec<(f64, f64, f64, usize)> = alloc::vec![(a, b, whole, 0)];
        let mut total = 0.0;
        let mut comp = 0.0;
        let width = (b - a).abs();
        let mut refined_ref = scale_ref;
        while let Some((lo, hi, est, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let l = self.rule.integrate(&mut f, lo, mid);
            let r = self.rule.integrate(&mut f, mid, hi);
            let fine = l + r;
            refined_ref = refined_ref.max(fine.abs());
            let share = (hi - lo).abs() / width;
            let tol = self.abs_tol.max(self.rel_tol * refined_ref) * share.max(1e-3);
            if (fine - est).abs() <= tol || (hi - lo).abs() <= 1e-14 * width {
                let y = fine - comp;
                let t = total + y;
                comp = (t - total) - y;
                total = t;
            } else if depth >= self.max_depth {
                return Err(Error::Numeric(format!(
                    "adaptive quadrature did not converge on [{lo}, {hi}]"
                )));
            } else {
                stack.push((lo, mid, l, depth + 1));
                stack.push((mid, hi, r, depth + 1));
            }
        }
        if !total.is_finite() {
            return Err(Error::Numeric(format!("non-finite integral on [{a}, {b}]")));
        }
        Ok(total)
    }
}

/// `∫_a^b f` to the given absolute/relative tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    Adaptive::new(abs_tol, rel_tol).integrate(f, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rule_exact_for_polynomials() {
        let g = GaussLegendre::new(10);
        let v = g.integrate(|x| x.powi(19) + x.powi(18), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-15);
        let s: f64 = (0..g.len()).map(|i| g.point(i, 0.0, 3.0).1).sum();
        assert!((s - 3.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_gaussian_and_sqrt() {
        let v = integrate(|x| (-x * x).exp(), -20.0, 20.0, 1e-15, 1e-14).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-13);
        let v = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-13, 1e-13).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }
}
