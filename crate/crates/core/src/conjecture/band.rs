//! Integer combinations of Chebyshev values and the banded matrices obtained
//! from the transposed Lascoux B-matrix by the row map `L_i → Σ_{j≥i} C(n,j) L_j`.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Integer};

use crate::chebyshev::{binomial, cheb_u, AlphaParam};
use crate::error::{Error, Result};
use crate::hp::Real;
use crate::linalg::Matrix;

/// `Σ_m c_m U_m` over indices `m ≥ 1`; non-positive indices are folded with
/// `U_0 = 0`, `U_{−m} = −U_m` on insertion.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ChebCombo {
    coeffs: BTreeMap<u32, Integer>,
}

impl ChebCombo {
    pub fn zero() -> Self {
        ChebCombo::default()
    }

    pub fn term(m: i64, c: impl Into<Integer>) -> Self {
        let mut out = ChebCombo::zero();
        out.add_term(m, c.into());
        out
    }

    /// Builds from `(index, coefficient)` pairs, folding as it goes.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut out = ChebCombo::zero();
        for &(m, c) in terms {
            out.add_term(m, Integer::from(c));
        }
        out
    }

    pub fn add_term(&mut self, m: i64, c: Integer) {
        if m == 0 || c == 0 {
            return;
        }
        let (idx, c) = if m < 0 {
            ((-m) as u32, -c)
        } else {
            (m as u32, c)
        };
        let entry = self.coeffs.entry(idx).or_default();
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&idx);
        }
    }

    pub fn add(&self, other: &ChebCombo) -> ChebCombo {
        let mut out = self.clone();
        for (&m, c) in &other.coeffs {
            out.add_term(m as i64, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Integer) -> ChebCombo {
        let mut out = ChebCombo::zero();
        for (&m, c) in &self.coeffs {
            out.add_term(m as i64, Integer::from(c * k));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Integer> {
        &self.coeffs
    }

    pub fn coeff(&self, m: u32) -> Integer {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn eval(&self, a: &AlphaParam) -> Real {
        let mut acc = Float::new(a.prec());
        for (&m, c) in &self.coeffs {
            acc += cheb_u(a, m as i64) * c;
        }
        acc
    }
}

impl fmt::Display for ChebCombo {
    /// Highest index first: `U_3 + 9U_1`, `2U_1`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (pos, (m, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = *c < 0;
            let mag = Integer::from(c.abs_ref());
            match (pos, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "U_{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChebCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub const BAND_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandMatrix {
    n: usize,
    entries: Vec<Vec<ChebCombo>>,
}

impl BandMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        2 * self.n - 1
    }

    pub fn entries(&self) -> &[Vec<ChebCombo>] {
        &self.entries
    }

    /// Entry `(i, k)`, 1-indexed.
    pub fn entry(&self, i: usize, k: usize) -> &ChebCombo {
        &self.entries[i - 1][k - 1]
    }

    /// `B(i,k) = B(n+1−i, 2n−k)` for every entry.
    pub fn is_persymmetric(&self) -> bool {
        let n = self.n;
        (1..=n).all(|i| (1..2 * n).all(|k| self.entry(i, k) == self.entry(n + 1 - i, 2 * n - k)))
    }

    /// Every entry outside `i ≤ k ≤ n−1+i` vanishes.
    pub fn is_banded(&self) -> bool {
        let n = self.n;
        (1..=n).all(|i| (1..2 * n).all(|k| (i <= k && k < n + i) || self.entry(i, k).is_zero()))
    }

    pub fn evaluate(&self, a: &AlphaParam) -> Matrix<Real> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|c| c.eval(a)).collect())
            .collect()
    }
}

/// The n × (2n−1) matrix `H(i,k) = C(n, k−i) U_{2i−k}`: the transposed
/// `B_n(1)` with rows and columns reversed.
pub fn horizontal_matrix(n: usize) -> Vec<Vec<ChebCombo>> {
    let n_i = n as i64;
    (1..=n_i)
        .map(|i| {
            (1..2 * n_i)
                .map(|k| ChebCombo::term(2 * i - k, binomial(n_i, k - i)))
                .collect()
        })
        .collect()
}

/// Upper-triangular `T(i,j) = C(n,j)` for `j ≥ i`, 1-indexed.
pub fn row_transform(n: usize) -> Matrix<Integer> {
    let n_i = n as i64;
    (1..=n_i)
        .map(|i| {
            (1..=n_i)
                .map(|j| {
                    if j >= i {
                        binomial(n_i, j)
                    } else {
                        Integer::new()
                    }
                })
                .collect()
        })
        .collect()
}

/// `det T = ∏_{i=1}^n C(n,i)`, the factor between band minors and the
/// corresponding minors of `H`.
pub fn transform_factor(n: usize) -> Integer {
    (1..=n as i64).map(|i| binomial(n as i64, i)).product()
}

/// `T · H`, with the band structure (in particular the vanishing of the
/// `(i, n+i)` entries) checked rather than imposed.
pub fn band_matrix(n: usize) -> Result<BandMatrix> {
    if n == 0 || n > BAND_MAX_N {
        return Err(Error::CapExceeded {
            what: "band matrix size",
            value: n,
            limit: BAND_MAX_N,
        });
    }
    let h = horizontal_matrix(n);
    let t = row_transform(n);
    let entries: Vec<Vec<ChebCombo>> = (0..n)
        .map(|i| {
            (0..2 * n - 1)
                .map(|k| {
                    (0..n).fold(ChebCombo::zero(), |acc, j| {
                        if t[i][j] == 0 {
                            acc
                        } else {
                            acc.add(&h[j][k].scale(&t[i][j]))
                        }
                    })
                })
                .collect()
        })
        .collect();
    let b = BandMatrix { n, entries };
    assert!(
        b.is_banded(),
        "row transform failed to produce a band matrix at n = {n}"
    );
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding_and_display() {
        let c = ChebCombo::from_terms(&[(3, 1), (1, 9), (0, 5), (-1, 2)]);
        assert_eq!(c.to_string(), "U_3 + 7U_1");
        assert!(ChebCombo::from_terms(&[(2, 1), (-2, 1)]).is_zero());
        assert_eq!(ChebCombo::term(-4, 3).to_string(), "-3U_4");
        assert_eq!(ChebCombo::zero().to_string(), "0");
    }

    #[test]
    fn two_by_three() {
        let b = band_matrix(2).unwrap();
        let shown: Vec<Vec<String>> = b
            .entries()
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect();
        assert_eq!(
            shown,
            vec![vec!["2U_1", "U_2", "0"], vec!["0", "U_2", "2U_1"]]
        );
    }

    #[test]
    fn structure_up_to_twelve() {
        for n in 1..=BAND_MAX_N {
            let b = band_matrix(n).unwrap();
            assert!(b.is_persymmetric(), "n = {n}");
            assert!(b.is_banded(), "n = {n}");
        }
        assert!(band_matrix(13).is_err());
    }

    #[test]
    fn evaluation_at_zero() {
        let a = AlphaParam::parse("0", 128).unwrap();
        let m = band_matrix(2).unwrap().evaluate(&a);
        let v: Vec<Vec<f64>> = m
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64()).collect())
            .collect();
        assert_eq!(v, vec![vec![2.0, 2.0, 0.0], vec![0.0, 2.0, 2.0]]);
    }
}
