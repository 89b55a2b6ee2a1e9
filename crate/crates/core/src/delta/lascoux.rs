//! Rectangular factorization of the derivative determinant:
//! `Δ = sf(n−1)² K^{n²} det(A_n(x) · B_n(y))` with
//! `A_n(x)[i][k] = C(n+k−1−i, k−i) x^{k−i}` (n × 2n−1) and
//! `B_n(y)[k][j] = C(n, n−k+j−1) U_{k+2−2j} y^{n−k+j−1}` (2n−1 × n), all 1-indexed.

use rug::{Float, Integer};

use crate::chebyshev::{binomial, cheb_u, superfactorial, AlphaParam};
use crate::error::{Error, Result};
use crate::hp::{self, Real};
use crate::kernel::kernel_unchecked;
use crate::linalg::{self, Matrix};

pub fn a_matrix(n: usize, x: &Real) -> Matrix<Real> {
    let prec = x.prec();
    (1..=n as i64)
        .map(|i| {
            (1..=2 * n as i64 - 1)
                .map(|k| {
                    let c = binomial(n as i64 + k - 1 - i, k - i);
                    if c == 0 {
                        Float::new(prec)
                    } else {
                        Float::with_val(prec, hp::powi_signed(x, (k - i) as i32)) * c
                    }
                })
                .collect()
        })
        .collect()
}

/// `A_n(1)` over the integers.
pub fn a_matrix_integer(n: usize) -> Matrix<Integer> {
    (1..=n as i64)
        .map(|i| {
            (1..=2 * n as i64 - 1)
                .map(|k| binomial(n as i64 + k - 1 - i, k - i))
                .collect()
        })
        .collect()
}

pub fn b_matrix(a: &AlphaParam, n: usize, y: &Real) -> Matrix<Real> {
    let prec = a.prec().max(y.prec());
    let n_i = n as i64;
    (1..=2 * n_i - 1)
        .map(|k| {
            (1..=n_i)
                .map(|j| {
                    let e = n_i - k + j - 1;
                    let c = binomial(n_i, e);
                    if c == 0 {
                        return Float::new(prec);
                    }
                    let u = Float::with_val(prec, cheb_u(a, k + 2 - 2 * j));
                    u * c * Float::with_val(prec, hp::powi_signed(y, e as i32))
                })
                .collect()
        })
        .collect()
}

/// Validates a 1-indexed increasing subset of `{1, …, 2n−1}` of size `n`.
pub fn check_sigma(n: usize, sigma: &[usize]) -> Result<()> {
    if n == 0 || sigma.len() != n {
        return Err(Error::InvalidIndexSet(format!(
            "expected {n} indices, got {}",
            sigma.len()
        )));
    }
    if sigma[0] < 1 || sigma[n - 1] > 2 * n - 1 || sigma.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidIndexSet(format!(
            "{sigma:?} is not an increasing subset of 1..={}",
            2 * n - 1
        )));
    }
    Ok(())
}

/// `A_σ(1) = ∏_{i<j} (σ_j − σ_i) / sf(n−1)`.
pub fn a_sigma(n: usize, sigma: &[usize]) -> Result<Integer> {
    check_sigma(n, sigma)?;
    let mut num = Integer::from(1);
    for i in 0..n {
        for j in i + 1..n {
            num *= (sigma[j] - sigma[i]) as u64;
        }
    }
    Ok(num / superfactorial(n as u32 - 1))
}

/// `A_σ(1)` as the minor of `A_n(1)` on columns `σ`.
pub fn a_sigma_minor(n: usize, sigma: &[usize]) -> Result<Integer> {
    check_sigma(n, sigma)?;
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = sigma.iter().map(|s| s - 1).collect();
    Ok(linalg::det_integer(linalg::submatrix(
        &a_matrix_integer(n),
        &rows,
        &cols,
    )))
}

/// Minor of `B_n(1)` on rows `σ`.
pub fn b_sigma(a: &AlphaParam, n: usize, sigma: &[usize]) -> Result<Real> {
    check_sigma(n, sigma)?;
    let rows: Vec<usize> = sigma.iter().map(|s| s - 1).collect();
    let cols: Vec<usize> = (0..n).collect();
    let b = b_matrix(a, n, &hp::one(a.prec()));
    Ok(linalg::det(linalg::submatrix(&b, &rows, &cols)))
}

/// `det(A_n(x) B_n(y))`, a homogeneous polynomial of degree n(n−1).
pub fn lascoux_polynomial(a: &AlphaParam, n: usize, x: &Real, y: &Real) -> Real {
    let prec = a.prec().max(x.prec()).max(y.prec());
    let x = Float::with_val(prec, x);
    let y = Float::with_val(prec, y);
    let a = if a.prec() < prec {
        a.with_prec(prec)
    } else {
        a.clone()
    };
    linalg::det(linalg::matmul(&a_matrix(n, &x), &b_matrix(&a, n, &y)))
}

/// The derivative determinant through the rectangular factorization.
pub fn delta_lascoux(a: &AlphaParam, n: usize, x: &Real, y: &Real) -> Real {
    let prec = a.prec().max(x.prec()).max(y.prec());
    // Guard bits for the elimination on an n×n product of binomial-sized entries.
    let wp = prec + 32 + 4 * n as u32;
    let aw = a.with_prec(wp);
    let xw = Float::with_val(wp, x);
    let yw = Float::with_val(wp, y);
    let l = lascoux_polynomial(&aw, n, &xw, &yw);
    let k = kernel_unchecked(&aw, &xw, &yw);
    let sf = superfactorial(n as u32 - 1);
    let sf2 = Integer::from(sf.square_ref());
    let v = l * Float::with_val(wp, hp::powi(&k, (n * n) as u32)) * sf2;
    Float::with_val(prec, v)
}
