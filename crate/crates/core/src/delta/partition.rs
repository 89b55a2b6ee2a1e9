//! Integer partitions and the dimension formula `s_λ(1,…,1)`.

use std::fmt;

use rug::Integer;
use serde::Serialize;

use crate::chebyshev::superfactorial;
use crate::error::{Error, Result};

/// Weakly decreasing positive parts; zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain("partition parts must be weakly decreasing"));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Parts padded with zeros to `n` entries, decreasing.
    pub fn padded(&self, n: usize) -> Result<Vec<u32>> {
        if self.parts.len() > n {
            return Err(Error::domain(format!("partition has more than {n} parts")));
        }
        let mut v = self.parts.clone();
        v.resize(n, 0);
        Ok(v)
    }

    /// Parts padded to `n` entries in weakly increasing order.
    pub fn increasing(&self, n: usize) -> Result<Vec<u32>> {
        let mut v = self.padded(n)?;
        v.reverse();
        Ok(v)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

/// Partitions of `k` into at most `max_parts` parts, in decreasing
/// lexicographic order.
pub fn partitions_of(k: u32, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(k, k, max_parts, &mut cur, &mut out);
    out
}

fn fill(rest: u32, cap: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=cap.min(rest)).rev() {
        // The remaining slots must be able to absorb what is left.
        if (p as u64) * (slots as u64) < rest as u64 {
            break;
        }
        cur.push(p);
        fill(rest - p, p, slots - 1, cur, out);
        cur.pop();
    }
}

/// `s_λ(1,…,1) = ∏_{i<j} (λ_i − λ_j + j − i) / sf(n−1)` with `n` variables.
pub fn schur_dim(lambda: &Partition, n: usize) -> Result<Integer> {
    if n == 0 {
        return Err(Error::domain("schur_dim needs n ≥ 1"));
    }
    let l = lambda.padded(n)?;
    let mut num = Integer::from(1);
    for i in 0..n {
        for j in i + 1..n {
            num *= l[i] as i64 - l[j] as i64 + (j - i) as i64;
        }
    }
    let (q, r) = num.div_rem(superfactorial(n as u32 - 1));
    debug_assert_eq!(r, 0);
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn enumeration() {
        assert_eq!(partitions_of(0, 3), vec![Partition::empty()]);
        assert_eq!(partitions_of(2, 3), vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(partitions_of(6, 6).len(), 11);
        assert_eq!(partitions_of(6, 2).len(), 4);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[3, 1, 0]).increasing(4).unwrap(), vec![0, 0, 1, 3]);
    }

    #[test]
    fn dimensions() {
        assert_eq!(schur_dim(&Partition::empty(), 4).unwrap(), 1);
        assert_eq!(schur_dim(&p(&[1]), 3).unwrap(), 3);
        assert_eq!(schur_dim(&p(&[2, 1]), 2).unwrap(), 2);
        assert_eq!(schur_dim(&p(&[2, 1]), 3).unwrap(), 8);
        assert!(schur_dim(&p(&[1, 1, 1]), 2).is_err());
    }
}
