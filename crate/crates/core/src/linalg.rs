//! Dense determinants over multi-precision reals, complexes and integers.

use rug::{Float, Integer};

use crate::hp::{Complex, Real};

/// Field operations needed by Gaussian elimination.
pub trait Scalar: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Any monotone measure of size, used only for pivot selection.
    fn magnitude(&self) -> Real;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Scalar for Float {
    fn zero_like(&self) -> Self {
        Float::with_val(self.prec(), 0)
    }
    fn one_like(&self) -> Self {
        Float::with_val(self.prec(), 1)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn magnitude(&self) -> Real {
        Float::with_val(self.prec(), self.abs_ref())
    }
    fn add(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec().max(rhs.prec()), self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec().max(rhs.prec()), self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec().max(rhs.prec()), self * rhs)
    }
    fn div(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec().max(rhs.prec()), self / rhs)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
}

impl Scalar for Complex {
    fn zero_like(&self) -> Self {
        Complex::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        Complex::one(self.prec())
    }
    fn is_zero(&self) -> bool {
        Complex::is_zero(self)
    }
    fn magnitude(&self) -> Real {
        self.norm_sqr()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

/// Determinant by Gaussian elimination with full (row and column) pivoting.
///
/// Panics if the matrix is empty or not square.
pub fn det<T: Scalar>(mut a: Matrix<T>) -> T {
    let n = a.len();
    assert!(n > 0, "determinant of an empty matrix");
    assert!(a.iter().all(|row| row.len() == n), "matrix is not square");
    let mut det = a[0][0].one_like();
    let mut negate = false;
    for k in 0..n {
        let (mut pr, mut pc) = (k, k);
        let mut best = a[k][k].magnitude();
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                let m = v.magnitude();
                if m > best {
                    best = m;
                    pr = i;
                    pc = j;
                }
            }
        }
        if best.is_zero() {
            return a[0][0].zero_like();
        }
        if pr != k {
            a.swap(pr, k);
            negate = !negate;
        }
        if pc != k {
            for row in a.iter_mut() {
                row.swap(pc, k);
            }
            negate = !negate;
        }
        let pivot = a[k][k].clone();
        det = det.mul(&pivot);
        let (upper, lower) = a.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let factor = row[k].div(&pivot);
            for j in (k + 1)..n {
                let t = factor.mul(&pivot_row[j]);
                row[j] = row[j].sub(&t);
            }
        }
    }
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Exact integer determinant by Bareiss fraction-free elimination.
pub fn det_integer(mut a: Matrix<Integer>) -> Integer {
    let n = a.len();
    if n == 0 {
        return Integer::from(1);
    }
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn matmul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let inner = b.len();
    assert!(
        a.iter().all(|row| row.len() == inner),
        "inner dimensions differ"
    );
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = row[0].mul(&b[0][j]);
                    for k in 1..inner {
                        acc = acc.add(&row[k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Submatrix on the given (0-based) rows and columns.
pub fn submatrix<T: Clone>(m: &Matrix<T>, rows: &[usize], cols: &[usize]) -> Matrix<T> {
    rows.iter()
        .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &Matrix<T>) -> Matrix<T> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Permanent by Ryser's inclusion-exclusion formula with Gray-code updates.
///
/// Panics if the matrix is empty or not square.
pub fn permanent<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|row| row.len() == n));
    let zero = a[0][0].zero_like();
    let mut row_sums = vec![zero.clone(); n];
    let mut total = zero;
    let mut subset: u64 = 0;
    for g in 1u64..(1u64 << n) {
        // Gray code: flip one column per step.
        let col = g.trailing_zeros() as usize;
        let adding = subset & (1 << col) == 0;
        subset ^= 1 << col;
        for (s, row) in row_sums.iter_mut().zip(a) {
            *s = if adding {
                s.add(&row[col])
            } else {
                s.sub(&row[col])
            };
        }
        let mut prod = row_sums[0].clone();
        for s in &row_sums[1..] {
            prod = prod.mul(s);
        }
        if (n - subset.count_ones() as usize) % 2 == 1 {
            total = total.sub(&prod);
        } else {
            total = total.add(&prod);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::real;

    fn m(rows: &[&[f64]]) -> Matrix<Float> {
        rows.iter()
            .map(|r| r.iter().map(|&v| real(128, v)).collect())
            .collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det(m(&[&[2.0]])), 2.0);
        assert_eq!(det(m(&[&[1.0, 2.0], &[3.0, 4.0]])), -2.0);
        let d = det(m(&[&[0.0, 1.0, 2.0], &[3.0, 0.0, 5.0], &[6.0, 7.0, 0.0]]));
        // 0*(0-35) - 1*(0-30) + 2*(21-0) = 72
        assert!((d - 72.0f64).abs() < 1e-30);
        assert!(det(m(&[&[1.0, 2.0], &[2.0, 4.0]])).is_zero());
    }

    #[test]
    fn bareiss_matches_float() {
        let ints: Matrix<Integer> = vec![
            vec![2.into(), (-1).into(), 0.into()],
            vec![(-1).into(), 2.into(), (-1).into()],
            vec![0.into(), (-1).into(), 2.into()],
        ];
        assert_eq!(det_integer(ints), 4);
        let swap: Matrix<Integer> = vec![vec![0.into(), 1.into()], vec![1.into(), 0.into()]];
        assert_eq!(det_integer(swap), -1);
    }

    #[test]
    fn permanent_small() {
        assert_eq!(permanent(&m(&[&[1.0, 2.0], &[3.0, 4.0]])), 10.0);
        assert_eq!(permanent(&m(&[&[5.0]])), 5.0);
        assert_eq!(permanent(&m(&[&[1.0; 3], &[1.0; 3], &[1.0; 3]])), 6.0);
    }
}
