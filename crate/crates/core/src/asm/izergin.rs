//! The Izergin–Korepin determinant `D_q(X,Y) = det[1/((x_i+y_j)(q x_i+y_j))]`,
//! directly and as Propp's sum over alternating sign matrices.

use rug::ops::Pow;
use rug::Float;

use super::enumerate::enumerate_asm;
use crate::error::{Error, Result};
use crate::hp::Complex;
use crate::kernel::PointTuple;
use crate::linalg::{self, Matrix};

pub const PROPP_MAX_N: usize = 7;

fn sizes(x: &PointTuple, y: &PointTuple) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.len())
}

fn working_prec(q: &Complex, x: &PointTuple, y: &PointTuple) -> u32 {
    q.prec().max(x.prec()).max(y.prec())
}

/// `(x_i + y_j, q x_i + y_j)` for every cell, failing on a vanishing factor.
fn factors(
    q: &Complex,
    x: &PointTuple,
    y: &PointTuple,
    prec: u32,
) -> Result<Vec<Vec<(Float, Complex)>>> {
    x.values()
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            y.values()
                .iter()
                .enumerate()
                .map(|(j, yj)| {
                    let plain = Float::with_val(prec, xi + yj);
                    let mut twisted = q.scale(xi);
                    twisted.re += yj;
                    if plain.is_zero() || twisted.is_zero() {
                        return Err(Error::Pole { i, j });
                    }
                    Ok((plain, twisted))
                })
                .collect()
        })
        .collect()
}

pub fn ik_direct(q: &Complex, x: &PointTuple, y: &PointTuple) -> Result<Complex> {
    sizes(x, y)?;
    let prec = working_prec(q, x, y);
    let m: Matrix<Complex> = factors(q, x, y, prec)?
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|(plain, twisted)| &Complex::one(prec) / &twisted.scale(&plain))
                .collect()
        })
        .collect();
    Ok(linalg::det(m))
}

/// Evaluates `V_X V_Y / P_q(X,Y) · Σ_A (−1)^μ (1−q)^{2μ} q^{C(n,2)−I}
/// ∏_i x_i^{μ_i} y_i^{μ^i} ∏_{a_ij=0} (α_ij x_i + y_j)`, where `μ_i` counts the
/// −1 entries of row `i`, `μ^i` those of column `i`, and `α_ij = q` exactly
/// when the column and row partial sums through `(i,j)` agree.
pub fn ik_propp_sum(q: &Complex, x: &PointTuple, y: &PointTuple) -> Result<Complex> {
    let n = sizes(x, y)?;
    if n > PROPP_MAX_N {
        return Err(Error::CapExceeded {
            what: "Propp sum size",
            value: n,
            limit: PROPP_MAX_N,
        });
    }
    let prec = working_prec(q, x, y);
    let cells = factors(q, x, y, prec)?;
    let xs = x.with_prec(prec);
    let ys = y.with_prec(prec);
    let pairs = (n * (n - 1) / 2) as u32;
    let one_minus_q = &Complex::one(prec) - q;
    let minus_sq = -(&one_minus_q * &one_minus_q);

    let mut sum = Complex::zero(prec);
    for a in enumerate_asm(n)? {
        let s = a.stats();
        let mut term = minus_sq.powu(s.mu) * q.powu(pairs - s.inv);
        let mut monomial = Float::with_val(prec, 1);
        for i in 0..n {
            monomial *= Float::with_val(prec, (&xs.values()[i]).pow(s.mu_row[i]));
            monomial *= Float::with_val(prec, (&ys.values()[i]).pow(s.mu_col[i]));
        }
        term = term.scale(&monomial);
        let molecules = a.molecule_mask();
        for i in 0..n {
            for j in 0..n {
                if a.get(i, j) != 0 {
                    continue;
                }
                term = if molecules[i * n + j] {
                    &term * &cells[i][j].1
                } else {
                    term.scale(&cells[i][j].0)
                };
            }
        }
        sum = &sum + &term;
    }

    let mut pref = Float::with_val(prec, xs.vandermonde() * ys.vandermonde());
    let mut denom = Complex::one(prec);
    for row in &cells {
        for (plain, twisted) in row {
            pref /= plain;
            denom = &denom * twisted;
        }
    }
    Ok(&sum.scale(&pref) / &denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp;

    fn pts(v: &[f64]) -> PointTuple {
        PointTuple::from_f64(192, v).unwrap()
    }

    fn q_on_circle(t: f64) -> Complex {
        Complex::cis(&(hp::pi(192) * 2u32 * hp::real(192, t)))
    }

    #[test]
    fn single_point() {
        let q = q_on_circle(0.2);
        let (x, y) = (pts(&[0.8]), pts(&[1.3]));
        let direct = ik_direct(&q, &x, &y).unwrap();
        let propp = ik_propp_sum(&q, &x, &y).unwrap();
        let mut t = q.scale(&hp::real(192, 0.8));
        t.re += hp::real(192, 1.3);
        let expected = &Complex::one(192) / &t.scale(&(hp::real(192, 0.8) + hp::real(192, 1.3)));
        assert!(direct.rel_diff(&expected) < 1e-50);
        assert!(propp.rel_diff(&expected) < 1e-50);
    }

    #[test]
    fn propp_matches_direct() {
        let q = q_on_circle(0.2);
        let (x, y) = (pts(&[0.3, 0.9, 2.2]), pts(&[0.5, 1.1, 1.7]));
        let d = ik_direct(&q, &x, &y).unwrap();
        let p = ik_propp_sum(&q, &x, &y).unwrap();
        assert!(d.rel_diff(&p) < 1e-45, "{d:?} vs {p:?}");

        let q = Complex::from_real(hp::real(192, 0.6));
        let (x, y) = (pts(&[0.2, 0.7, 1.5, 3.0]), pts(&[0.4, 0.5, 2.5, 2.6]));
        let d = ik_direct(&q, &x, &y).unwrap();
        let p = ik_propp_sum(&q, &x, &y).unwrap();
        assert!(d.rel_diff(&p) < 1e-45, "{d:?} vs {p:?}");
    }

    #[test]
    fn pole_is_reported() {
        let q = Complex::from_real(hp::real(64, -2.0));
        let err = ik_direct(&q, &pts(&[1.0]), &pts(&[2.0])).unwrap_err();
        assert!(matches!(err, Error::Pole { i: 0, j: 0 }));
    }
}
