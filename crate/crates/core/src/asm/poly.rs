//! Integer polynomials and the ASM generating functions `Z_n(x,y)`, `Z_{n,k}(x)`.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::Integer;

use super::enumerate::group_by_stats;
use super::mu_max;
use crate::error::Result;
use crate::hp::{Complex, Real};

/// Dense univariate polynomial with big-integer coefficients; `coeffs[d]` is
/// the coefficient of `x^d`, with no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Integer {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    /// `1 + x + ⋯ + x^{m−1}`.
    pub fn q_integer(m: usize) -> Self {
        Self::new(vec![Integer::from(1); m])
    }

    /// `∏_{i=1}^n (1 + x + ⋯ + x^{i−1})`.
    pub fn q_factorial(n: usize) -> Self {
        (1..=n).fold(Self::from_i64(&[1]), |acc, i| acc.mul(&Self::q_integer(i)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|d| self.coeff(d) + other.coeff(d)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        Self::new(out)
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        self.coeffs
            .iter()
            .rev()
            .fold(Integer::new(), |acc, c| acc * x + c)
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let prec = x.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(Real::new(prec), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = z.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(prec), |acc, c| {
                let mut next = &acc * z;
                next.re += c;
                next
            })
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = Integer::from(c.abs_ref());
            match (d, abs == 1) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{abs}x")?,
                (_, true) => write!(f, "x^{d}")?,
                (_, false) => write!(f, "{abs}x^{d}")?,
            }
        }
        Ok(())
    }
}

/// Sparse bivariate polynomial, `(deg_x, deg_y) → coefficient`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivarIntPolynomial {
    terms: BTreeMap<(u32, u32), Integer>,
}

impl BivarIntPolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Integer)>) -> Self {
        let mut out = BTreeMap::new();
        for (k, v) in terms {
            *out.entry(k).or_insert_with(Integer::new) += v;
        }
        out.retain(|_, v: &mut Integer| *v != 0);
        BivarIntPolynomial { terms: out }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Integer> {
        &self.terms
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> Integer {
        self.terms.get(&(dx, dy)).cloned().unwrap_or_default()
    }

    /// Coefficient of `y^k`, as a polynomial in `x`.
    pub fn y_slice(&self, k: u32) -> IntPolynomial {
        let mut coeffs = Vec::new();
        for (&(dx, dy), c) in &self.terms {
            if dy == k {
                let dx = dx as usize;
                if coeffs.len() <= dx {
                    coeffs.resize(dx + 1, Integer::new());
                }
                coeffs[dx] = c.clone();
            }
        }
        IntPolynomial::new(coeffs)
    }

    pub fn eval_integer(&self, x: &Integer, y: &Integer) -> Integer {
        self.terms
            .iter()
            .fold(Integer::new(), |acc, (&(dx, dy), c)| {
                let xp = Integer::from(x.pow(dx));
                let yp = Integer::from(y.pow(dy));
                acc + (c * xp) * yp
            })
    }
}

/// `Z_n(x,y) = Σ_A x^{ν(A)} y^{μ(A)}`.
pub fn z_n_poly(n: usize) -> Result<BivarIntPolynomial> {
    let g = group_by_stats(n)?;
    Ok(BivarIntPolynomial::from_terms(
        g.counts
            .iter()
            .map(|(&(mu, nu), &c)| ((nu, mu), Integer::from(c))),
    ))
}

/// `Z_{n,k}(x) = Σ_{μ(A)=k} x^{ν(A)}`; zero when `k > μ_max(n)`.
pub fn z_nk_poly(n: usize, k: u32) -> Result<IntPolynomial> {
    let g = group_by_stats(n)?;
    if k > mu_max(n as u32) {
        return Ok(IntPolynomial::zero());
    }
    let mut coeffs = Vec::new();
    for (nu, c) in g.slice(k) {
        let nu = nu as usize;
        if coeffs.len() <= nu {
            coeffs.resize(nu + 1, Integer::new());
        }
        coeffs[nu] = Integer::from(c);
    }
    Ok(IntPolynomial::new(coeffs))
}
