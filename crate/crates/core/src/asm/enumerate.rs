//! Row-by-row depth-first enumeration over the column partial sums.
//!
//! The state after `r` rows is the set of columns whose running sum is 1,
//! kept as a bitmask. A row is admissible from a state when its non-zero
//! entries alternate starting and ending with +1, every +1 lands on a column
//! at 0 and every −1 on a column at 1. The admissible rows of each state are
//! precomputed once per `n`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use rug::Integer;

use super::{stats, Asm};
use crate::error::{Error, Result};

pub const ASM_MAX_N: usize = 8;

#[derive(Debug)]
struct Row {
    entries: Vec<i8>,
    next: u16,
}

#[derive(Debug)]
struct Transitions {
    n: usize,
    by_state: Vec<Vec<Row>>,
}

impl Transitions {
    fn build(n: usize) -> Self {
        let by_state = (0..1usize << n)
            .map(|mask| {
                let mut rows = Vec::new();
                let mut buf = vec![0i8; n];
                admissible_rows(n, mask as u16, 0, true, &mut buf, &mut rows);
                rows.sort_by(|a, b| a.entries.cmp(&b.entries));
                rows
            })
            .collect();
        Transitions { n, by_state }
    }
}

fn admissible_rows(
    n: usize,
    mask: u16,
    col: usize,
    need_plus: bool,
    buf: &mut [i8],
    out: &mut Vec<Row>,
) {
    if col == n {
        if !need_plus {
            let mut next = mask;
            for (j, &v) in buf.iter().enumerate() {
                if v != 0 {
                    next ^= 1 << j;
                }
            }
            out.push(Row {
                entries: buf.to_vec(),
                next,
            });
        }
        return;
    }
    let bit = mask >> col & 1 == 1;
    buf[col] = 0;
    admissible_rows(n, mask, col + 1, need_plus, buf, out);
    if need_plus && !bit {
        buf[col] = 1;
        admissible_rows(n, mask, col + 1, false, buf, out);
    } else if !need_plus && bit {
        buf[col] = -1;
        admissible_rows(n, mask, col + 1, true, buf, out);
    }
    buf[col] = 0;
}

fn transitions(n: usize) -> Arc<Transitions> {
    static CACHE: [OnceLock<Arc<Transitions>>; ASM_MAX_N + 1] =
        [const { OnceLock::new() }; ASM_MAX_N + 1];
    CACHE[n]
        .get_or_init(|| Arc::new(Transitions::build(n)))
        .clone()
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("ASM size must be at least 1"));
    }
    if n > ASM_MAX_N {
        return Err(Error::CapExceeded {
            what: "ASM size",
            value: n,
            limit: ASM_MAX_N,
        });
    }
    Ok(())
}

/// Deterministic stream of all n×n ASMs, lexicographic by rows.
#[derive(Debug)]
pub struct AsmIter {
    trans: Arc<Transitions>,
    /// `states[r]` is the column mask before row `r`.
    states: Vec<u16>,
    /// Index of the row chosen at each depth.
    choice: Vec<usize>,
    depth: usize,
    /// Depth at which the traversal stops (0 for a full run, 1 inside a fixed first row).
    floor: usize,
    started: bool,
    done: bool,
}

impl AsmIter {
    fn new(trans: Arc<Transitions>, first_row: Option<usize>) -> Self {
        let n = trans.n;
        let mut states = vec![0u16; n + 1];
        let mut choice = vec![0usize; n];
        let (depth, floor) = match first_row {
            Some(k) => {
                choice[0] = k;
                states[1] = trans.by_state[0][k].next;
                (1, 1)
            }
            None => (0, 0),
        };
        AsmIter {
            trans,
            states,
            choice,
            depth,
            floor,
            started: false,
            done: false,
        }
    }

    fn current(&self) -> Asm {
        let n = self.trans.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            entries.extend_from_slice(
                &self.trans.by_state[self.states[r] as usize][self.choice[r]].entries,
            );
        }
        Asm::from_rows_unchecked(n, entries)
    }
}

impl Iterator for AsmIter {
    type Item = Asm;

    fn next(&mut self) -> Option<Asm> {
        if self.done {
            return None;
        }
        let n = self.trans.n;
        if self.started {
            // Resume after the matrix returned last time.
            self.depth -= 1;
            if self.depth < self.floor {
                self.done = true;
                return None;
            }
            self.choice[self.depth] += 1;
        } else {
            self.started = true;
            if self.depth == n {
                return Some(self.current());
            }
        }
        loop {
            let d = self.depth;
            let options = &self.trans.by_state[self.states[d] as usize];
            if self.choice[d] < options.len() {
                self.states[d + 1] = options[self.choice[d]].next;
                self.depth += 1;
                if self.depth == n {
                    return Some(self.current());
                }
                self.choice[self.depth] = 0;
            } else {
                if d == self.floor {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                self.choice[self.depth] += 1;
            }
        }
    }
}

pub fn enumerate_asm(n: usize) -> Result<AsmIter> {
    check_size(n)?;
    Ok(AsmIter::new(transitions(n), None))
}

/// One sub-stream per admissible first row; concatenated in order they give
/// `enumerate_asm(n)`.
fn first_row_streams(n: usize) -> Vec<AsmIter> {
    let trans = transitions(n);
    (0..trans.by_state[0].len())
        .map(|k| AsmIter::new(trans.clone(), Some(k)))
        .collect()
}

/// Number of n×n ASMs, by enumeration.
pub fn asm_count(n: usize) -> Result<u64> {
    check_size(n)?;
    Ok(first_row_streams(n)
        .into_par_iter()
        .map(|it| it.count() as u64)
        .sum())
}

/// Counts of n×n ASMs by `(μ, ν)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedStats {
    pub n: usize,
    pub counts: BTreeMap<(u32, u32), u64>,
}

impl GroupedStats {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, mu: u32, nu: u32) -> u64 {
        self.counts.get(&(mu, nu)).copied().unwrap_or(0)
    }

    /// `(ν, count)` for a fixed μ, in increasing ν.
    pub fn slice(&self, mu: u32) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts
            .range((mu, 0)..=(mu, u32::MAX))
            .map(|(&(_, nu), &c)| (nu, c))
    }

    pub fn count_integer(&self, mu: u32, nu: u32) -> Integer {
        Integer::from(self.count(mu, nu))
    }
}

fn merge(
    mut a: BTreeMap<(u32, u32), u64>,
    b: BTreeMap<(u32, u32), u64>,
) -> BTreeMap<(u32, u32), u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// `(μ, ν) → count`, computed once per `n` and cached for the process.
pub fn group_by_stats(n: usize) -> Result<Arc<GroupedStats>> {
    check_size(n)?;
    static CACHE: [OnceLock<Arc<GroupedStats>>; ASM_MAX_N + 1] =
        [const { OnceLock::new() }; ASM_MAX_N + 1];
    Ok(CACHE[n]
        .get_or_init(|| {
            let counts = first_row_streams(n)
                .into_par_iter()
                .map(|it| {
                    let mut local = BTreeMap::new();
                    for a in it {
                        let s = stats(&a);
                        *local.entry((s.mu, s.nu)).or_insert(0) += 1;
                    }
                    local
                })
                .reduce(BTreeMap::new, merge);
            Arc::new(GroupedStats { n, counts })
        })
        .clone())
}
