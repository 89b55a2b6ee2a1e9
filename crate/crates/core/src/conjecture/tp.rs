//! Exhaustive minor search on small rectangular matrices.

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::hp::Real;
use crate::linalg::{self, Matrix};

/// Refuse to enumerate more minors than this.
pub const TP_MINOR_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Real,
}

#[derive(Clone, Debug)]
pub struct OrderMinimum {
    pub order: usize,
    pub minors: u64,
    pub below_tol: u64,
    pub min: MinorWitness,
}

#[derive(Clone, Debug)]
pub struct TpCheckReport {
    pub max_order: usize,
    pub tol: Real,
    pub minors: u64,
    /// Minors below `−tol`.
    pub below_tol: u64,
    /// Minors re-evaluated at doubled precision.
    pub rechecked: u64,
    pub min: MinorWitness,
    pub per_order: Vec<OrderMinimum>,
}

impl TpCheckReport {
    pub fn is_tp(&self) -> bool {
        self.below_tol == 0
    }
}

/// `Σ_{k=1}^{max_order} C(rows,k)·C(cols,k)`, saturating.
pub fn minor_count(rows: usize, cols: usize, max_order: usize) -> u64 {
    (1..=max_order)
        .map(|k| choose(rows, k).saturating_mul(choose(cols, k)))
        .fold(0u64, |acc, c| acc.saturating_add(c))
}

fn choose(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut c: u64 = 1;
    for i in 0..k as u64 {
        c = match c.checked_mul(n as u64 - i) {
            Some(v) => v / (i + 1),
            None => return u64::MAX,
        };
    }
    c
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Every minor of order `≤ max_order`, with the minimum and its witness.
pub fn check_tp(m: &Matrix<Real>, max_order: usize, tol: &Real) -> Result<TpCheckReport> {
    let prec = m.first().and_then(|r| r.first()).map_or(64, |v| v.prec());
    let fixed = m.clone();
    check_tp_with(move |_| fixed.clone(), prec, max_order, tol, false)
}

/// As [`check_tp`], with the matrix supplied at any requested precision.
/// In rigorous mode minors with `|minor| < 10³·tol` are recomputed from the
/// source at twice the precision.
pub fn check_tp_with<F>(
    source: F,
    prec: u32,
    max_order: usize,
    tol: &Real,
    rigorous: bool,
) -> Result<TpCheckReport>
where
    F: Fn(u32) -> Matrix<Real> + Sync,
{
    if *tol < 0 {
        return Err(Error::domain("tolerance must be non-negative"));
    }
    let m = source(prec);
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(Error::domain(
            "check_tp needs a non-empty rectangular matrix",
        ));
    }
    if max_order == 0 || max_order > rows.min(cols) {
        return Err(Error::domain(format!(
            "max order must lie in 1..={} for a {rows}×{cols} matrix",
            rows.min(cols)
        )));
    }
    let count = minor_count(rows, cols, max_order);
    if count > TP_MINOR_LIMIT {
        return Err(Error::CapExceeded {
            what: "number of minors",
            value: count as usize,
            limit: TP_MINOR_LIMIT as usize,
        });
    }
    let fine = if rigorous {
        Some(source(2 * prec))
    } else {
        None
    };
    let near_zero = Float::with_val(prec, tol * 1000u32);
    let neg_tol = Float::with_val(prec, -tol);

    let mut per_order = Vec::with_capacity(max_order);
    let mut rechecked = 0u64;
    for k in 1..=max_order {
        let row_sets = subsets(rows, k);
        let col_sets = subsets(cols, k);
        // One task per row subset; results are merged in subset order.
        let partial: Vec<(MinorWitness, u64, u64)> = row_sets
            .par_iter()
            .map(|rs| {
                let mut best: Option<MinorWitness> = None;
                let mut below = 0u64;
                let mut redone = 0u64;
                for cs in &col_sets {
                    let mut v = linalg::det(linalg::submatrix(&m, rs, cs));
                    if let Some(f) = &fine {
                        if Float::with_val(prec, v.abs_ref()) < near_zero {
                            v = Float::with_val(prec, linalg::det(linalg::submatrix(f, rs, cs)));
                            redone += 1;
                        }
                    }
                    if v < neg_tol {
                        below += 1;
                    }
                    if best.as_ref().is_none_or(|b| v < b.value) {
                        best = Some(MinorWitness {
                            rows: rs.clone(),
                            cols: cs.clone(),
                            value: v,
                        });
                    }
                }
                (best.expect("at least one column subset"), below, redone)
            })
            .collect();
        let mut below_tol = 0;
        let mut min: Option<MinorWitness> = None;
        for (w, below, redone) in partial {
            below_tol += below;
            rechecked += redone;
            if min.as_ref().is_none_or(|b| w.value < b.value) {
                min = Some(w);
            }
        }
        per_order.push(OrderMinimum {
            order: k,
            minors: (row_sets.len() * col_sets.len()) as u64,
            below_tol,
            min: min.expect("at least one row subset"),
        });
    }
    let min = per_order
        .iter()
        .map(|o| &o.min)
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one order")
        .clone();
    Ok(TpCheckReport {
        max_order,
        tol: tol.clone(),
        minors: count,
        below_tol: per_order.iter().map(|o| o.below_tol).sum(),
        rechecked,
        min,
        per_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp;

    fn mat(rows: &[&[f64]]) -> Matrix<Real> {
        rows.iter()
            .map(|r| r.iter().map(|&v| hp::real(128, v)).collect())
            .collect()
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(5, 1)[4], vec![4]);
        assert_eq!(minor_count(5, 9, 5), 2001);
    }

    #[test]
    fn unipotent_upper_triangular() {
        let r = check_tp(&mat(&[&[1.0, 1.0], &[0.0, 1.0]]), 2, &hp::zero(128)).unwrap();
        assert_eq!(r.min.value, 0);
        assert!(r.is_tp());
        assert_eq!(r.minors, 5);
    }

    #[test]
    fn finds_negative_minor() {
        let r = check_tp(&mat(&[&[1.0, 2.0], &[3.0, 1.0]]), 2, &hp::zero(128)).unwrap();
        assert_eq!(r.min.value, -5);
        assert_eq!(
            (r.min.rows.clone(), r.min.cols.clone()),
            (vec![0, 1], vec![0, 1])
        );
        assert!(!r.is_tp());
        assert!(check_tp(&mat(&[&[1.0]]), 2, &hp::zero(128)).is_err());
    }
}
