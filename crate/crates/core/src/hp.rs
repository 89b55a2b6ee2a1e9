//! Multi-precision scalars.
//!
//! Real values are plain MPFR floats (`rug::Float`); complex values are a
//! pair of them. Every value carries its own precision, and binary
//! operations produce a result at the larger of the two operand precisions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Working precision used when nothing else is requested.
pub const DEFAULT_PRECISION: u32 = 256;

/// A real number at configurable binary precision.
pub type Real = Float;

pub fn real(prec: u32, v: f64) -> Real {
    Float::with_val(prec, v)
}

pub fn zero(prec: u32) -> Real {
    Float::with_val(prec, 0)
}

pub fn one(prec: u32) -> Real {
    Float::with_val(prec, 1)
}

pub fn pi(prec: u32) -> Real {
    Float::with_val(prec, Constant::Pi)
}

pub fn from_integer(prec: u32, v: &Integer) -> Real {
    Float::with_val(prec, v)
}

pub fn from_rational(prec: u32, v: &Rational) -> Real {
    Float::with_val(prec, v)
}

/// Parses a decimal literal (`"0.25"`, `"1e-6"`) or a fraction (`"1/3"`).
pub fn parse_real(prec: u32, s: &str) -> Result<Real> {
    let s = s.trim();
    if s.contains('/') {
        let q = parse_rational(s)?;
        return Ok(from_rational(prec, &q));
    }
    let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

/// Parses `"p/q"`, an integer, or a finite decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(num / den);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: Integer = all.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    let mut value = if scale >= 0 {
        Rational::from(num * ten.pow(scale as u32))
    } else {
        Rational::from((num, ten.pow((-scale) as u32)))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Relative difference `|a-b| / max(|a|,|b|)`, zero when both vanish.
pub fn rel_diff(a: &Real, b: &Real) -> Real {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let scale = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
    if scale.is_zero() {
        zero(prec)
    } else {
        diff / scale
    }
}

/// Integer power of a real by repeated squaring.
pub fn powi(base: &Real, exp: u32) -> Real {
    base.clone().pow(exp)
}

pub fn powi_signed(base: &Real, exp: i32) -> Real {
    base.clone().pow(exp)
}

/// A complex number with multi-precision parts.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = zero(re.prec());
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(zero(prec), zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(one(prec), zero(prec))
    }

    /// `e^{i·theta}`.
    pub fn cis(theta: &Real) -> Self {
        let (s, c) = theta.clone().sin_cos(zero(theta.prec()));
        Complex::new(c, s)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Real {
        let prec = self.prec();
        Float::with_val(prec, self.re.square_ref()) + Float::with_val(prec, self.im.square_ref())
    }

    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &Real) -> Self {
        let prec = self.prec();
        Complex::new(
            Float::with_val(prec, &self.re * k),
            Float::with_val(prec, &self.im * k),
        )
    }

    /// Non-negative integer power by repeated squaring.
    pub fn powu(&self, mut exp: u32) -> Self {
        let mut result = Complex::one(self.prec());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Relative distance `|a-b| / max(|a|,|b|)`.
    pub fn rel_diff(&self, other: &Complex) -> Real {
        let diff = (self - other).abs();
        let scale = self.abs().max(&other.abs());
        if scale.is_zero() {
            zero(diff.prec())
        } else {
            diff / scale
        }
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let prec = self.prec().max(rhs.prec());
        Complex::new(
            Float::with_val(prec, &self.re + &rhs.re),
            Float::with_val(prec, &self.im + &rhs.im),
        )
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let prec = self.prec().max(rhs.prec());
        Complex::new(
            Float::with_val(prec, &self.re - &rhs.re),
            Float::with_val(prec, &self.im - &rhs.im),
        )
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let prec = self.prec().max(rhs.prec());
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        Complex::new(ac - bd, ad + bc)
    }
}

impl Div for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let den = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Complex::new(num.re / &den, num.im / den)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        &self + &rhs
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        &self - &rhs
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        &self * &rhs
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        &self / &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions_exactly() {
        assert_eq!(parse_rational("0.4").unwrap(), Rational::from((2, 5)));
        assert_eq!(parse_rational("1/3").unwrap(), Rational::from((1, 3)));
        assert_eq!(
            parse_rational("-1.5e-2").unwrap(),
            Rational::from((-3, 200))
        );
        assert_eq!(parse_rational("0.9/5").unwrap(), Rational::from((9, 50)));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn complex_arithmetic() {
        let p = 128;
        let a = Complex::new(real(p, 1.0), real(p, 2.0));
        let b = Complex::new(real(p, 3.0), real(p, -1.0));
        let prod = &a * &b;
        assert_eq!(prod.re, 5.0);
        assert_eq!(prod.im, 5.0);
        let back = &prod / &b;
        assert!(back.rel_diff(&a) < 1e-35);
        let cube = a.powu(3);
        assert!(cube.rel_diff(&(&(&a * &a) * &a)) < 1e-35);
    }
}
