//! Reference solvers independent of the asymptotic machinery: Fourier
//! matrices for Mathieu, high-order Taylor shooting for Lamé, and a
//! Sturm–Liouville residual bound for the truncated expansions.

use alloc::format;

#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::coeffs::{CoeffTables, Family};
use crate::error::{Error, Result};
use crate::expand::{self, Branch, EigenResult, ProblemSpec};
use crate::quad;
use crate::real::{Dd, Real};

pub mod lame;
pub mod mathieu;

pub use lame::{lame_eigen_oracle, LameEigenfunction};
pub use mathieu::{mathieu_eigen_cf, mathieu_eigen_oracle, FourierClass, MathieuFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Fourier truncation for Mathieu; `0` picks one from `m` and `h`.
    pub matrix_dim: usize,
    /// Relative tolerance of the shooting solver (Taylor truncation and
    /// root refinement).
    pub ode_tol: f64,
    /// Half-width of the initial eigenvalue bracket; `0` uses
    /// `4(|μ_1| + 1)`.
    pub bracket_width: f64,
    /// Tolerance for normalisation integrals.
    pub quad_tol: f64,
    /// The shooting solver replaces the boundary condition at `K` by a
    /// decaying start where the WKB exponent past the turning point reaches
    /// this value; the eigenfunction is zero beyond it.
    pub decay_exponent: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { matrix_dim: 0, ode_tol: 1e-26, bracket_width: 0.0, quad_tol: 1e-13, decay_exponent: 45.0 }
    }
}

impl OracleConfig {
    pub fn validate(&self, m: u32) -> Result<()> {
        if !(self.ode_tol.is_finite() && self.ode_tol >= 1e-31 && self.ode_tol <= 1e-6) {
            return Err(Error::Domain(format!("ode_tol must lie in [1e-31, 1e-6], got {}", self.ode_tol)));
        }
        if !(self.quad_tol.is_finite() && self.quad_tol > 0.0 && self.quad_tol < 1e-3) {
            return Err(Error::Domain(format!("quad_tol must lie in (0, 1e-3), got {}", self.quad_tol)));
        }
        if !(self.bracket_width.is_finite() && self.bracket_width >= 0.0) {
            return Err(Error::Domain(format!("bracket_width must be non-negative, got {}", self.bracket_width)));
        }
        if !(self.decay_exponent >= 10.0 && self.decay_exponent <= 600.0) {
            return Err(Error::Domain(format!("decay_exponent must lie in [10, 600], got {}", self.decay_exponent)));
        }
        if self.matrix_dim != 0 && self.matrix_dim < m as usize / 2 + 4 {
            return Err(Error::Domain(format!("matrix_dim {} too small for m={m}", self.matrix_dim)));
        }
        Ok(())
    }
}

/// Reference eigenvalue for either family.
pub fn eigen_oracle(spec: &ProblemSpec, cfg: &OracleConfig) -> Result<EigenResult> {
    match spec.family {
        Family::Lame => lame_eigen_oracle(spec, cfg),
        Family::Mathieu => mathieu_eigen_oracle(spec.m, spec.branch, spec.param, cfg),
    }
}

/// A reference eigenfunction in the published normalisation.
#[derive(Debug, Clone)]
pub enum Eigenfunction {
    Lame(LameEigenfunction),
    Mathieu(MathieuFunction),
}

impl Eigenfunction {
    pub fn new(spec: &ProblemSpec, cfg: &OracleConfig) -> Result<Self> {
        Ok(match spec.family {
            Family::Lame => Eigenfunction::Lame(LameEigenfunction::new(spec, cfg)?),
            Family::Mathieu => Eigenfunction::Mathieu(MathieuFunction::new(spec.m, spec.branch, spec.param, cfg)?),
        })
    }

    pub fn eigenvalue(&self) -> Dd {
        match self {
            Eigenfunction::Lame(f) => f.eigenvalue,
            Eigenfunction::Mathieu(f) => f.eigenvalue,
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        match self {
            Eigenfunction::Lame(f) => f.eval(z),
            Eigenfunction::Mathieu(f) => f.eval(z),
        }
    }
}

/// Factor `c` with `∫ weight · (c f)² = π/2` over one bump (`[-K, K]` with
/// weight `dn` for Lamé, `[0, π]` for Mathieu), signed so that `c f` is
/// positive just inside the right end of the fundamental interval, where
/// branch `a` is positive at the end and branch `b` decreases through zero.
pub fn normalize_eigenfunction<F: Fn(f64) -> f64>(spec: &ProblemSpec, f: F, cfg: &OracleConfig) -> Result<f64> {
    let (lo, hi) = match spec.family {
        Family::Lame => {
            let k = spec.quarter_period()?;
            (-k, k)
        }
        Family::Mathieu => (0.0, core::f64::consts::PI),
    };
    let kmod = spec.k();
    let weight = |z: f64| match spec.family {
        Family::Lame => crate::special::jacobi_sncndn(z, kmod).map(|e| e.dn).unwrap_or(1.0),
        Family::Mathieu => 1.0,
    };
    let integral = quad::integrate(|z| weight(z) * f(z) * f(z), lo, hi, 1e-300, cfg.quad_tol)?;
    if !(integral > 0.0) {
        return Err(Error::Numeric(format!("eigenfunction has non-positive norm {integral}")));
    }
    // Mathieu functions are centred at π/2 with the end of the interval at 0.
    let end = match spec.family {
        Family::Lame => hi,
        Family::Mathieu => 0.0,
    };
    let inward = match spec.family {
        Family::Lame => -1.0,
        Family::Mathieu => 1.0,
    };
    let span = hi - lo;
    let mut sign = 0.0;
    for i in 0..4000 {
        let v = f(end + inward * span * i as f64 / 8000.0);
        if v != 0.0 {
            sign = v.signum();
            break;
        }
    }
    if sign == 0.0 {
        return Err(Error::Numeric(format!("eigenfunction vanishes near z = {end}")));
    }
    Ok(sign * (core::f64::consts::FRAC_PI_2 / integral).sqrt())
}

/// Outcome of [`sl_residual_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlBound {
    pub bound: f64,
    pub series: Dd,
    pub oracle: Dd,
    /// `|series - oracle| <= bound`.
    pub holds: bool,
}

/// `‖(d²/dz² + λ_n - V) w_n‖ / ‖w_n‖` for the order-`n` expansion of branch
/// `a`, which bounds the distance from `λ_n` to the spectrum.
///
/// In the `t` variable the residual is `c²` times the exact residual
/// polynomials, with `c` the `t` scale; the integrals run over `|t|` up to
/// the smaller of 40 and `0.999 c`, beyond which the Gaussian factor
/// leaves nothing representable.
pub fn sl_residual_bound(spec: &ProblemSpec, tables: &CoeffTables, n: usize, cfg: &OracleConfig) -> Result<SlBound> {
    if spec.branch != Branch::A {
        return Err(Error::Domain("the residual bound is implemented for branch a only".into()));
    }
    spec.check_tables(tables)?;
    let res = expand::residual_polys(tables, spec, n)?;
    let c = spec.t_scale();
    let k2 = spec.k2_f64();
    let jac = |t: f64| -> f64 {
        let x = t / c;
        let inner = match spec.family {
            Family::Lame => (1.0 - x * x) * (1.0 - k2 * x * x),
            Family::Mathieu => 1.0 - x * x,
        };
        1.0 / (c * inner.sqrt())
    };
    let trial = |t: f64| -> f64 {
        let (a, b) = poly_sums(tables, n, t, spec.param);
        let (d, dp) = crate::special::pcf_d_both(spec.m, t);
        d * a + dp * b
    };
    let tmax = (0.999 * c).min(40.0);
    let num = quad::integrate(|t| res.eval(t).powi(2) * jac(t), 0.0, tmax, 1e-300, cfg.quad_tol)?;
    let den = quad::integrate(|t| trial(t).powi(2) * jac(t), 0.0, tmax, 1e-300, cfg.quad_tol)?;
    let bound = c * c * (num / den).sqrt();
    let series = expand::eigen_series(spec, tables, n)?.value;
    let oracle = eigen_oracle(spec, cfg)?;
    let gap = (series - oracle.value).abs().to_f64();
    Ok(SlBound { bound, series, oracle: oracle.value, holds: gap <= bound + oracle.err_estimate })
}

fn poly_sums(tables: &CoeffTables, n: usize, t: f64, param: f64) -> (f64, f64) {
    let (mut a, mut b, mut p) = (0.0, 0.0, 1.0);
    for s in 0..=n {
        a += tables.a[s].eval(t) * p;
        b += tables.b[s].eval(t) * p;
        p /= param;
    }
    (a, b)
}
