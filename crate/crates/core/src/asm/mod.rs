//! Alternating sign matrices: enumeration, statistics, generating
//! polynomials and the Izergin–Korepin determinant.

mod enumerate;
mod izergin;
mod poly;

pub use enumerate::{asm_count, enumerate_asm, group_by_stats, AsmIter, GroupedStats, ASM_MAX_N};
pub use izergin::{ik_direct, ik_propp_sum, PROPP_MAX_N};
pub use poly::{z_n_poly, z_nk_poly, BivarIntPolynomial, IntPolynomial};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// An n×n alternating sign matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Asm {
    n: usize,
    entries: Vec<i8>,
}

impl Asm {
    /// Validates row/column sums and the alternation of non-zero entries.
    pub fn new(n: usize, entries: Vec<i8>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::domain("ASM needs n ≥ 1 and n² entries"));
        }
        let lines_ok = |get: &dyn Fn(usize) -> i8| {
            let mut partial = 0i32;
            for t in 0..n {
                let v = get(t);
                if !(-1..=1).contains(&v) {
                    return false;
                }
                partial += v as i32;
                if !(0..=1).contains(&partial) {
                    return false;
                }
            }
            partial == 1
        };
        for i in 0..n {
            if !lines_ok(&|t| entries[i * n + t]) || !lines_ok(&|t| entries[t * n + i]) {
                return Err(Error::domain("not an alternating sign matrix"));
            }
        }
        Ok(Asm { n, entries })
    }

    pub(crate) fn from_rows_unchecked(n: usize, entries: Vec<i8>) -> Self {
        Asm { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        Asm { n, entries: e }
    }

    /// Permutation matrix with a 1 at `(i, perm[i])`.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut e = vec![0; n * n];
        for (i, &j) in perm.iter().enumerate() {
            if j >= n {
                return Err(Error::domain("permutation index out of range"));
            }
            e[i * n + j] = 1;
        }
        Asm::new(n, e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.n)
    }

    pub fn is_permutation(&self) -> bool {
        self.entries.iter().all(|&v| v >= 0)
    }

    /// Anticlockwise rotation by 90°.
    pub fn quarter_turn(&self) -> Asm {
        let n = self.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                e[i * n + j] = self.get(j, n - 1 - i);
            }
        }
        Asm { n, entries: e }
    }

    /// `Σ_{k≤i} a_kj` and `Σ_{l≤j} a_il` for every cell, in one pass.
    pub(crate) fn partial_sums(&self) -> (Vec<i32>, Vec<i32>) {
        let n = self.n;
        let mut col = vec![0i32; n * n];
        let mut row = vec![0i32; n * n];
        for i in 0..n {
            for j in 0..n {
                let v = self.get(i, j) as i32;
                col[i * n + j] = v + if i > 0 { col[(i - 1) * n + j] } else { 0 };
                row[i * n + j] = v + if j > 0 { row[i * n + j - 1] } else { 0 };
            }
        }
        (col, row)
    }

    /// Whether the zero cell `(i,j)` is a south-west/north-east molecule,
    /// i.e. its column partial sum equals its row partial sum.
    pub(crate) fn molecule_mask(&self) -> Vec<bool> {
        let (col, row) = self.partial_sums();
        (0..self.n * self.n)
            .map(|c| self.entries[c] == 0 && col[c] == row[c])
            .collect()
    }

    pub fn stats(&self) -> AsmStats {
        stats(self)
    }
}

impl fmt::Debug for Asm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Asm{:?}", self.rows().collect::<Vec<_>>())
    }
}

impl fmt::Display for Asm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<&str> = row
                .iter()
                .map(|&v| match v {
                    1 => "+",
                    -1 => "-",
                    _ => ".",
                })
                .collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Statistics of one ASM.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsmStats {
    /// Number of −1 entries.
    pub mu: u32,
    /// `I(A) − μ(A)`; equals the inversion number on permutation matrices.
    pub nu: u32,
    /// Generalized inversion number `I(A) = Σ_{i<k, l<j} a_ij a_kl`.
    pub inv: u32,
    /// Number of zero cells whose column and row partial sums agree.
    pub j: u32,
    pub mu_row: Vec<u32>,
    pub mu_col: Vec<u32>,
}

pub fn stats(a: &Asm) -> AsmStats {
    let n = a.n;
    let mut mu_row = vec![0u32; n];
    let mut mu_col = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j) < 0 {
                mu_row[i] += 1;
                mu_col[j] += 1;
            }
        }
    }
    let mu: u32 = mu_row.iter().sum();

    // below_left[i][j] = Σ_{k>i, l<j} a_kl, below_right[i][j] = Σ_{k>i, l>j} a_kl
    let w = n + 1;
    let mut rect = vec![0i64; w * w]; // rect[i][j] = Σ_{k≥i, l<j} a_kl
    for i in (0..n).rev() {
        for j in 0..n {
            rect[i * w + j + 1] = a.get(i, j) as i64 + rect[i * w + j] + rect[(i + 1) * w + j + 1]
                - rect[(i + 1) * w + j];
        }
    }
    let mut inv = 0i64;
    let mut south_east = 0i64;
    for i in 0..n {
        for j in 0..n {
            let v = a.get(i, j) as i64;
            if v == 0 {
                continue;
            }
            let below_left = rect[(i + 1) * w + j];
            let below_all = rect[(i + 1) * w + n];
            let below_upto_j = rect[(i + 1) * w + j + 1];
            inv += v * below_left;
            south_east += v * (below_all - below_upto_j);
        }
    }
    let pairs = (n * (n - 1) / 2) as i64;
    let nu = pairs - south_east;
    let j = a.molecule_mask().iter().filter(|&&m| m).count() as u32;
    AsmStats {
        mu,
        nu: u32::try_from(nu).expect("ν is non-negative on ASMs"),
        inv: u32::try_from(inv).expect("I is non-negative on ASMs"),
        j,
        mu_row,
        mu_col,
    }
}

pub fn quarter_turn(a: &Asm) -> Asm {
    a.quarter_turn()
}

/// Largest number of −1 entries in an n×n ASM.
pub fn mu_max(n: u32) -> u32 {
    if n % 2 == 1 {
        (n - 1) * (n - 1) / 4
    } else {
        n * n.saturating_sub(2) / 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn center_minus() -> Asm {
        Asm::new(3, vec![0, 1, 0, 1, -1, 1, 0, 1, 0]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Asm::new(2, vec![1, 0, 0, 1]).is_ok());
        assert!(Asm::new(2, vec![1, 1, 0, 0]).is_err());
        assert!(Asm::new(3, vec![1, 0, 0, -1, 1, 1, 1, 0, 0]).is_err());
        assert!(Asm::new(1, vec![1]).is_ok());
    }

    #[test]
    fn identity_stats() {
        for n in 1..6 {
            let s = stats(&Asm::identity(n));
            assert_eq!((s.mu, s.nu, s.inv, s.j), (0, 0, 0, 0));
        }
    }

    #[test]
    fn reversal_stats() {
        let s = stats(&Asm::from_permutation(&[2, 1, 0]).unwrap());
        assert_eq!((s.mu, s.inv, s.nu, s.j), (0, 3, 3, 6));
    }

    #[test]
    fn center_minus_stats() {
        let s = stats(&center_minus());
        assert_eq!((s.mu, s.nu, s.inv, s.j), (1, 1, 2, 2));
        assert_eq!(s.mu_row, vec![0, 1, 0]);
        assert_eq!(s.mu_col, vec![0, 1, 0]);
    }

    #[test]
    fn rotations() {
        assert_eq!(center_minus().quarter_turn(), center_minus());
        let swap = Asm::from_permutation(&[1, 0]).unwrap();
        assert_eq!(Asm::identity(2).quarter_turn(), swap);
        let a = Asm::from_permutation(&[1, 3, 0, 2]).unwrap();
        let four = a
            .quarter_turn()
            .quarter_turn()
            .quarter_turn()
            .quarter_turn();
        assert_eq!(four, a);
    }

    #[test]
    fn mu_max_values() {
        assert_eq!([1, 2, 4, 5, 7].map(mu_max), [0, 0, 2, 4, 9]);
    }
}
