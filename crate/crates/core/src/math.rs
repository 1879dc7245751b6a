//! Float functions missing from `core`, routed through `libm`.

// Unused when a std build supplies the inherent methods.
#[allow(dead_code)]
pub(crate) trait FloatExt {
    fn sin(self) -> f64;
    fn cos(self) -> f64;
    fn asin(self) -> f64;
    fn acos(self) -> f64;
    fn sinh(self) -> f64;
    fn cosh(self) -> f64;
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn powf(self, p: f64) -> f64;
    fn powi(self, n: i32) -> f64;
    fn cbrt(self) -> f64;
    fn round(self) -> f64;
    fn ceil(self) -> f64;
}

impl FloatExt for f64 {
    fn sin(self) -> f64 {
        num_traits::Float::sin(self)
    }
    fn cos(self) -> f64 {
        num_traits::Float::cos(self)
    }
    fn asin(self) -> f64 {
        num_traits::Float::asin(self)
    }
    fn acos(self) -> f64 {
        num_traits::Float::acos(self)
    }
    fn sinh(self) -> f64 {
        num_traits::Float::sinh(self)
    }
    fn cosh(self) -> f64 {
        num_traits::Float::cosh(self)
    }
    fn exp(self) -> f64 {
        num_traits::Float::exp(self)
    }
    fn ln(self) -> f64 {
        num_traits::Float::ln(self)
    }
    fn powf(self, p: f64) -> f64 {
        num_traits::Float::powf(self, p)
    }
    fn powi(self, n: i32) -> f64 {
        num_traits::Float::powi(self, n)
    }
    fn cbrt(self) -> f64 {
        num_traits::Float::cbrt(self)
    }
    fn round(self) -> f64 {
        num_traits::Float::round(self)
    }
    fn ceil(self) -> f64 {
        num_traits::Float::ceil(self)
    }
}
