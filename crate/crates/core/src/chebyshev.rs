//! The Chebyshev quotients `U_k = sin(kπα)/sin(πα)`, their products, and the
//! small integer sequences (superfactorials, q-factorials) used with them.

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::hp::{self, Complex, Real};

/// The kernel parameter α ∈ [0,1), held as an exact rational together with
/// its trigonometric data at a fixed working precision.
#[derive(Clone)]
pub struct AlphaParam {
    alpha: Rational,
    value: Real,
    cos_pi_alpha: Real,
    sin_pi_alpha: Real,
    q: Complex,
    omega: Complex,
    prec: u32,
}

impl AlphaParam {
    pub fn new(alpha: Rational, prec: u32) -> Result<Self> {
        if !(0..1).contains(&alpha) {
            return Err(Error::domain(format!("alpha = {alpha} outside [0,1)")));
        }
        let pi = hp::pi(prec);
        let value = hp::from_rational(prec, &alpha);
        let (sin_pi_alpha, cos_pi_alpha) = sin_cos_pi_rational(&alpha, prec);
        let two_alpha = Rational::from(&alpha * 2u32);
        let (s2, c2) = sin_cos_pi_rational(&two_alpha, prec);
        let q = Complex::new(c2, s2);
        let omega = Complex::cis(&(Float::with_val(prec, &pi * &value) / 2u32));
        Ok(AlphaParam {
            alpha,
            value,
            cos_pi_alpha,
            sin_pi_alpha,
            q,
            omega,
            prec,
        })
    }

    /// Parses `"1/3"`, `"0.45"` or `"0"`.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        Self::new(hp::parse_rational(s)?, prec)
    }

    pub fn from_ratio(num: i64, den: u64, prec: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        Self::new(Rational::from((num, den)), prec)
    }

    /// Exact conversion of a double (every finite double is a dyadic rational).
    pub fn from_f64(alpha: f64, prec: u32) -> Result<Self> {
        let q = Rational::from_f64(alpha)
            .ok_or_else(|| Error::domain(format!("alpha = {alpha} is not finite")))?;
        Self::new(q, prec)
    }

    /// Same α at a different precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.alpha.clone(), prec).expect("alpha already validated")
    }

    pub fn rational(&self) -> &Rational {
        &self.alpha
    }

    pub fn value(&self) -> &Real {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.alpha.to_f64()
    }

    pub fn cos_pi_alpha(&self) -> &Real {
        &self.cos_pi_alpha
    }

    pub fn sin_pi_alpha(&self) -> &Real {
        &self.sin_pi_alpha
    }

    /// `q = e^{2iπα}`.
    pub fn q(&self) -> &Complex {
        &self.q
    }

    /// `ω = e^{iπα/2}`.
    pub fn omega(&self) -> &Complex {
        &self.omega
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.alpha == 0
    }

    /// True when α = 1/m for an integer m ≥ 2.
    pub fn is_unit_fraction(&self) -> bool {
        *self.alpha.numer() == 1 && *self.alpha.denom() >= 2
    }

    pub fn real(&self, v: f64) -> Real {
        hp::real(self.prec, v)
    }
}

impl fmt::Debug for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlphaParam({} @ {} bits)", self.alpha, self.prec)
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.alpha)
    }
}

/// `(sin(πr), cos(πr))` for a rational `r`, reducing `r` modulo 2 exactly and
/// returning exact zeros at multiples of 1/2.
fn sin_cos_pi_rational(r: &Rational, prec: u32) -> (Real, Real) {
    let den = r.denom().clone();
    let two_den = Integer::from(&den * 2u32);
    let mut num = Integer::from(r.numer() % &two_den);
    if num < 0 {
        num += &two_den;
    }
    // r ≡ num/den (mod 2), 0 ≤ num < 2·den.
    let quarter = Integer::from(&num * 2u32);
    if quarter.is_divisible(&den) {
        let k = Integer::from(&quarter / &den).to_u32().expect("k < 4");
        let (s, c) = [(0, 1), (1, 0), (0, -1), (-1, 0)][k as usize];
        return (Float::with_val(prec, s), Float::with_val(prec, c));
    }
    let frac = Rational::from((num, den));
    let angle = Float::with_val(prec + 16, &frac) * hp::pi(prec + 16);
    let (s, c) = angle.sin_cos(Float::new(prec + 16));
    (Float::with_val(prec, s), Float::with_val(prec, c))
}

/// `U_k = sin(kπα)/sin(πα)`, with the limit `U_k = k` at α = 0.
pub fn cheb_u(a: &AlphaParam, k: i64) -> Real {
    if a.is_zero() {
        return Float::with_val(a.prec, k);
    }
    let arg = Rational::from(a.rational() * Integer::from(k));
    let (s, _) = sin_cos_pi_rational(&arg, a.prec);
    s / a.sin_pi_alpha()
}

/// `U_k` through the three-term recurrence `U_{k+1} = 2cos(πα)U_k − U_{k−1}`.
pub fn cheb_u_recurrence(a: &AlphaParam, k: u32) -> Real {
    let prec = a.prec;
    let two_c = Float::with_val(prec, a.cos_pi_alpha() * 2u32);
    let mut prev = hp::zero(prec);
    let mut cur = hp::one(prec);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = Float::with_val(prec, &two_c * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The table `[U_0, U_1, ..., U_max]`.
pub fn cheb_u_table(a: &AlphaParam, max: usize) -> Vec<Real> {
    (0..=max as i64).map(|k| cheb_u(a, k)).collect()
}

/// `V_n = U_1 · U_2 ⋯ U_n`.
pub fn v_product(a: &AlphaParam, n: u32) -> Result<Real> {
    if n == 0 {
        return Err(Error::domain("v_product needs n ≥ 1"));
    }
    Ok((1..=n as i64).fold(hp::one(a.prec), |acc, k| acc * cheb_u(a, k)))
}

/// `sf(k) = 0!·1!⋯k!`.
pub fn superfactorial(k: u32) -> Integer {
    let mut fact = Integer::from(1);
    let mut acc = Integer::from(1);
    for i in 1..=k {
        fact *= i;
        acc *= &fact;
    }
    acc
}

pub fn factorial(k: u32) -> Integer {
    Integer::from(Integer::factorial(k))
}

pub fn binomial(n: i64, k: i64) -> Integer {
    if n < 0 || k < 0 || k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `∏_{i=1}^n (1 + q + ⋯ + q^{i−1})`.
pub fn q_factorial(q: &Complex, n: u32) -> Result<Complex> {
    if n == 0 {
        return Err(Error::domain("q_factorial needs n ≥ 1"));
    }
    let prec = q.prec();
    let mut result = Complex::one(prec);
    let mut q_int = Complex::one(prec); // [i]_q
    let mut q_pow = Complex::one(prec); // q^{i-1}
    for i in 1..=n {
        if i > 1 {
            q_pow = &q_pow * q;
            q_int = &q_int + &q_pow;
        }
        result = &result * &q_int;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(s: &str) -> AlphaParam {
        AlphaParam::parse(s, 256).unwrap()
    }

    #[test]
    fn u_values_at_rational_points() {
        let a = alpha("1/2");
        assert_eq!(cheb_u(&a, 1), 1);
        assert_eq!(cheb_u(&a, 2), 0);
        assert_eq!(cheb_u(&a, 3), -1);
        assert_eq!(cheb_u(&alpha("0"), 5), 5);
        assert!(cheb_u(&alpha("1/3"), 3).is_zero());
        assert_eq!(cheb_u(&alpha("0.3"), 0), 0);
    }

    #[test]
    fn u_is_odd_in_k() {
        let a = alpha("0.37");
        for k in 0..30 {
            let s = Float::with_val(256, cheb_u(&a, k) + cheb_u(&a, -k));
            assert!(s.is_zero(), "k = {k}");
        }
    }

    #[test]
    fn recurrence_small_cases() {
        assert_eq!(cheb_u_recurrence(&alpha("1/3"), 2), 1);
        assert!(cheb_u_recurrence(&alpha("1/2"), 4).abs() < 1e-70);
        let a = alpha("0.1");
        let d = hp::rel_diff(&cheb_u_recurrence(&a, 7), &cheb_u(&a, 7));
        assert!(d < 1e-70);
    }

    #[test]
    fn v_product_cases() {
        for n in 2..8u32 {
            let a = AlphaParam::from_ratio(1, n as u64, 256).unwrap();
            assert!(v_product(&a, n).unwrap().is_zero());
        }
        let v = v_product(&alpha("0.4"), 3).unwrap();
        assert!(v < 0);
        assert_eq!(v_product(&alpha("0"), 4).unwrap(), 24);
        assert!(v_product(&alpha("0.2"), 0).is_err());
    }

    #[test]
    fn superfactorials() {
        assert_eq!(superfactorial(0), 1);
        assert_eq!(superfactorial(3), 12);
        assert_eq!(superfactorial(5), 34560);
    }

    #[test]
    fn q_factorial_cases() {
        let one = Complex::one(128);
        assert_eq!(q_factorial(&one, 4).unwrap().re, 24);
        let q = Complex::new(hp::real(128, 0.3), hp::real(128, 0.9));
        assert!(q_factorial(&q, 1).unwrap().rel_diff(&Complex::one(128)) < 1e-35);
        let minus = Complex::from_real(hp::real(128, -1.0));
        assert!(q_factorial(&minus, 3).unwrap().is_zero());
    }

    #[test]
    fn alpha_bounds_and_trig_invariants() {
        assert!(AlphaParam::parse("1", 64).is_err());
        assert!(AlphaParam::parse("-0.1", 64).is_err());
        let a = alpha("0.3");
        let one = Float::with_val(256, a.cos_pi_alpha().square_ref())
            + Float::with_val(256, a.sin_pi_alpha().square_ref());
        assert!(Float::with_val(256, one - 1u32).abs() < 1e-70);
        assert!(Float::with_val(256, a.q().abs() - 1u32).abs() < 1e-70);
        assert!(a.omega().powu(4).rel_diff(a.q()) < 1e-70);
        assert!(alpha("1/3").is_unit_fraction());
        assert!(!alpha("2/5").is_unit_fraction());
    }
}
