//! Exact rationals and univariate polynomials in `t`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::real::Real;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Displays as `num/den`, or `num` when the denominator is one.
pub type Rational = BigRational;

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `num/den` or an integer. A zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("invalid rational {s:?}: {e}")))
}

/// The exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("non-finite value {x}")))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Sign of the upper argument of [`binom_half`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfSign {
    Plus,
    Minus,
}

/// Generalised binomial coefficient `C(±1/2, j)`.
pub fn binom_half(sign: HalfSign, j: usize) -> Rational {
    let a = match sign {
        HalfSign::Plus => rat(1, 2),
        HalfSign::Minus => rat(-1, 2),
    };
    let mut c = Rational::one();
    for i in 0..j {
        c = c * (&a - int(i as i64)) / int(i as i64 + 1);
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// Polynomial in `t` with exact rational coefficients, stored low to high
/// power with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct TPoly {
    c: Vec<Rational>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        TPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// The zero polynomial reports `Even`.
    pub fn parity(&self) -> Parity {
        let odd_zero = self.c.iter().skip(1).step_by(2).all(Zero::is_zero);
        let even_zero = self.c.iter().step_by(2).all(Zero::is_zero);
        if odd_zero {
            Parity::Even
        } else if even_zero {
            Parity::Odd
        } else {
            Parity::None
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_odd(&self) -> bool {
        self.is_zero() || self.parity() == Parity::Odd
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at `t = 0`.
    pub fn integral(&self) -> Self {
        let mut v = Vec::with_capacity(self.c.len() + 1);
        v.push(Rational::zero());
        for (i, x) in self.c.iter().enumerate() {
            v.push(x / int(i as i64 + 1));
        }
        Self::from_coeffs(v)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x * k).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.c.iter().cloned());
        TPoly { c: v }
    }

    pub fn eval_exact(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for x in self.c.iter().rev() {
            acc = acc * t + x;
        }
        acc
    }

    /// Horner evaluation with coefficients rounded at call time.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for x in self.c.iter().rev() {
            acc = acc * t + to_f64(x);
        }
        acc
    }

    pub fn eval_real<R: Real>(&self, t: R) -> R {
        let mut acc = R::zero();
        for x in self.c.iter().rev() {
            acc = acc * t + R::from_rational(x);
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.c.iter().map(to_f64).collect()
    }

    /// Largest coefficient magnitude, as a double.
    pub fn max_abs_coeff(&self) -> f64 {
        self.c.iter().map(|x| to_f64(&x.abs())).fold(0.0, f64::max)
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly[")?;
        for (i, x) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, o: &TPoly) -> TPoly {
        let n = self.c.len().max(o.c.len());
        TPoly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, o: &TPoly) -> TPoly {
        let n = self.c.len().max(o.c.len());
        TPoly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, o: &TPoly) -> TPoly {
        if self.is_zero() || o.is_zero() {
            return TPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        TPoly::from_coeffs(v)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly::from_coeffs(self.c.iter().map(|x| -x).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TPoly {
            type Output = TPoly;
            fn $m(self, o: TPoly) -> TPoly {
                (&self).$m(&o)
            }
        }
        impl $tr<&TPoly> for TPoly {
            type Output = TPoly;
            fn $m(self, o: &TPoly) -> TPoly {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn eval_examples() {
        assert_eq!(TPoly::monomial(int(1), 2).eval(3.0), 9.0);
        assert_eq!(TPoly::zero().eval(1.7), 0.0);
        let k2 = rat(1, 2);
        let a1 = TPoly::monomial((k2 + int(1)) / int(32), 2);
        assert_eq!(a1.eval_exact(&int(2)), rat(3, 16));
        assert_eq!(a1.eval(2.0), 0.1875);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(TPoly::monomial(int(1), 3).derivative(), TPoly::monomial(int(3), 2));
        assert!(TPoly::constant(int(5)).derivative().is_zero());
        // B1 at k2 = 0, m = 0 is (t^3 - t)/16.
        let b1 = TPoly::from_coeffs(vec![int(0), rat(-1, 16), int(0), rat(1, 16)]);
        assert_eq!(b1.derivative(), TPoly::from_coeffs(vec![rat(-1, 16), int(0), rat(3, 16)]));
    }

    #[test]
    fn binom_half_examples() {
        assert_eq!(binom_half(HalfSign::Plus, 0), int(1));
        assert_eq!(binom_half(HalfSign::Plus, 1), rat(1, 2));
        assert_eq!(binom_half(HalfSign::Minus, 2), rat(3, 8));
        assert_eq!(binom_half(HalfSign::Plus, 2), rat(-1, 8));
    }

    #[test]
    fn degree_and_parity() {
        assert_eq!(TPoly::zero().degree(), None);
        assert_eq!(TPoly::from_ints(&[0, 1, 0, 2]).parity(), Parity::Odd);
        assert_eq!(TPoly::from_ints(&[1, 0, 2]).parity(), Parity::Even);
        assert_eq!(TPoly::from_ints(&[1, 1]).parity(), Parity::None);
        assert_eq!(TPoly::from_ints(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("-3/16").unwrap(), rat(-3, 16));
        assert_eq!(parse_rational("6/4").unwrap().to_string(), "3/2");
        assert_eq!(parse_rational("7").unwrap().to_string(), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
