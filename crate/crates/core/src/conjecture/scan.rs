//! Grid scans for the positivity of `F_{n,k}` and of the derivative
//! determinant.

use rayon::prelude::*;
use rug::Rational;

use super::fnk::{decomposition_checks, f_nk};
use crate::asm::mu_max;
use crate::chebyshev::AlphaParam;
use crate::delta::{delta, delta_at_origin, Route};
use crate::error::{Error, Result};
use crate::hp::{self, Real};

pub const SCAN_MAX_N: usize = 6;

/// Sample points `(x, y)` given as exact binary fractions.
#[derive(Clone, Debug, PartialEq)]
pub struct XyGrid {
    pub points: Vec<(f64, f64)>,
}

impl XyGrid {
    /// `(1, r)` for every ratio `r`.
    pub fn ratios(ratios: &[f64]) -> Result<Self> {
        Self::new(ratios.iter().map(|&r| (1.0, r)).collect())
    }

    /// All pairs from `count` log-spaced values in `[lo, hi]`.
    pub fn log_square(count: usize, lo: f64, hi: f64) -> Result<Self> {
        if count == 0 || !(lo > 0.0 && lo <= hi) {
            return Err(Error::domain("log grid needs count ≥ 1 and 0 < lo ≤ hi"));
        }
        let vals: Vec<f64> = (0..count)
            .map(|i| {
                if i == 0 {
                    return lo;
                }
                if i == count - 1 {
                    return hi;
                }
                let t = i as f64 / (count - 1) as f64;
                (lo.ln() + t * (hi.ln() - lo.ln())).exp()
            })
            .collect();
        Self::new(
            vals.iter()
                .flat_map(|&x| vals.iter().map(move |&y| (x, y)))
                .collect(),
        )
    }

    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty()
            || points
                .iter()
                .any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()))
        {
            return Err(Error::domain("grid points must be positive and finite"));
        }
        Ok(XyGrid { points })
    }
}

/// `lo + (hi − lo)·j/steps`, `j = 0..=steps`, as exact rationals.
pub fn alpha_grid(lo: &Rational, hi: &Rational, steps: u32) -> Vec<Rational> {
    if steps == 0 {
        return vec![lo.clone()];
    }
    let width = Rational::from(hi - lo);
    (0..=steps)
        .map(|j| lo + (&width * Rational::from((j, steps))))
        .collect()
}

#[derive(Clone, Debug)]
pub struct FnkSample {
    pub alpha: Rational,
    pub k: u32,
    pub x: f64,
    pub y: f64,
    pub value: Real,
}

#[derive(Clone, Debug)]
pub struct Conjecture1Report {
    pub n: usize,
    pub alphas_scanned: Vec<Rational>,
    /// Grid values above `1/n`, outside the conjectured range.
    pub alphas_skipped: Vec<Rational>,
    pub points: usize,
    pub evaluations: u64,
    pub min: Option<FnkSample>,
    pub counterexamples: Vec<FnkSample>,
    pub max_imag_ratio: Real,
    /// Largest relative error of each worked decomposition over the grid.
    pub decompositions: Vec<(&'static str, Real)>,
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=SCAN_MAX_N).contains(&n) {
        return Err(Error::CapExceeded {
            what: "scan size",
            value: n,
            limit: SCAN_MAX_N,
        });
    }
    Ok(())
}

fn exact_point(prec: u32, x: f64, y: f64) -> (Real, Real) {
    (hp::real(prec, x), hp::real(prec, y))
}

struct PointResult {
    samples: Vec<FnkSample>,
    max_imag: Real,
    decomp: Vec<(&'static str, Real)>,
}

pub fn scan_conjecture1(
    n: usize,
    alphas: &[Rational],
    grid: &XyGrid,
    prec: u32,
) -> Result<Conjecture1Report> {
    check_n(n)?;
    let limit = Rational::from((1, n as u32));
    let (scanned, skipped): (Vec<Rational>, Vec<Rational>) =
        alphas.iter().cloned().partition(|a| *a >= 0 && *a <= limit);
    let jobs: Vec<(usize, usize)> = (0..scanned.len())
        .flat_map(|i| (0..grid.points.len()).map(move |j| (i, j)))
        .collect();
    let kmax = mu_max(n as u32);
    let results: Vec<PointResult> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let a = AlphaParam::new(scanned[i].clone(), prec)?;
            let (xf, yf) = grid.points[j];
            let (x, y) = exact_point(prec, xf, yf);
            let mut samples = Vec::with_capacity(kmax as usize + 1);
            let mut max_imag = hp::zero(prec);
            for k in 0..=kmax {
                let f = f_nk(&a, n, k, &x, &y)?;
                max_imag.max_mut(&f.imag_ratio());
                samples.push(FnkSample {
                    alpha: scanned[i].clone(),
                    k,
                    x: xf,
                    y: yf,
                    value: f.value,
                });
            }
            let decomp = decomposition_checks(&a, &x, &y)?
                .into_iter()
                .map(|c| (c.label, c.rel_diff))
                .collect();
            Ok(PointResult {
                samples,
                max_imag,
                decomp,
            })
        })
        .collect::<Result<_>>()?;

    let mut min: Option<FnkSample> = None;
    let mut counterexamples = Vec::new();
    let mut max_imag_ratio = hp::zero(prec);
    let mut decompositions: Vec<(&'static str, Real)> = Vec::new();
    let mut evaluations = 0u64;
    for r in results {
        max_imag_ratio.max_mut(&r.max_imag);
        for (label, rel) in r.decomp {
            match decompositions.iter_mut().find(|(l, _)| *l == label) {
                Some((_, m)) => m.max_mut(&rel),
                None => decompositions.push((label, rel)),
            }
        }
        for s in r.samples {
            evaluations += 1;
            if s.value <= 0 {
                counterexamples.push(s.clone());
            }
            if min.as_ref().is_none_or(|m| s.value < m.value) {
                min = Some(s);
            }
        }
    }
    Ok(Conjecture1Report {
        n,
        alphas_scanned: scanned,
        alphas_skipped: skipped,
        points: grid.points.len(),
        evaluations,
        min,
        counterexamples,
        max_imag_ratio,
        decompositions,
    })
}

/// `min(1/n, 1/(n²−n−6))`, with the second term absent when `n²−n−6 ≤ 0`.
pub fn positivity_threshold(n: usize) -> Rational {
    let first = Rational::from((1, n as u32));
    let d = (n * n) as i64 - n as i64 - 6;
    if d <= 0 {
        first
    } else {
        first.min(Rational::from((1, d as u32)))
    }
}

/// The order at which `Δ(1, 0+)` first turns negative: the least `m` with
/// `mα > 1`. None when α is a unit fraction (`U_m` vanishes instead) or α = 0.
pub fn witness_order(alpha: &Rational) -> Option<usize> {
    if *alpha <= 0 || *alpha >= 1 {
        return None;
    }
    let inv = Rational::from(alpha.recip_ref());
    if *inv.denom() == 1 {
        return None;
    }
    Some(inv.floor().numer().to_usize().expect("small inverse") + 1)
}

#[derive(Clone, Debug)]
pub struct HeatCell {
    pub alpha: Rational,
    pub x: f64,
    pub y: f64,
    pub value: Real,
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct OriginWitness {
    pub alpha: Rational,
    pub order: usize,
    pub value: Real,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub n: usize,
    pub route: Route,
    pub threshold: Rational,
    pub cells: Vec<HeatCell>,
    /// Non-positive values at α below the threshold.
    pub violations: Vec<HeatCell>,
    /// Sign of `Δ^m(1, 0+)` at the order `m ≤ n` where it should fail, for
    /// every grid α above `1/n` that is not a unit fraction.
    pub origin_witnesses: Vec<OriginWitness>,
    /// Witnesses that were not negative.
    pub failed_witnesses: Vec<OriginWitness>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.failed_witnesses.is_empty()
    }
}

pub fn scan_theorem(
    n: usize,
    alphas: &[Rational],
    grid: &XyGrid,
    route: Route,
    prec: u32,
) -> Result<TheoremReport> {
    check_n(n)?;
    if !matches!(route, Route::Asm | Route::Lascoux) {
        return Err(Error::domain(
            "scan_theorem evaluates by the asm or lascoux route",
        ));
    }
    if alphas.iter().any(|a| *a < 0 || *a >= 1) {
        return Err(Error::domain("α must lie in [0, 1)"));
    }
    let threshold = positivity_threshold(n);
    let jobs: Vec<(usize, usize)> = (0..alphas.len())
        .flat_map(|i| (0..grid.points.len()).map(move |j| (i, j)))
        .collect();
    let cells: Vec<HeatCell> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let a = AlphaParam::new(alphas[i].clone(), prec)?;
            let (xf, yf) = grid.points[j];
            let (x, y) = exact_point(prec, xf, yf);
            let value = delta(&a, n, &x, &y, route)?.value;
            let sign = value.cmp0().map_or(0, |o| o as i8);
            Ok(HeatCell {
                alpha: alphas[i].clone(),
                x: xf,
                y: yf,
                value,
                sign,
            })
        })
        .collect::<Result<_>>()?;
    let violations = cells
        .iter()
        .filter(|c| c.alpha <= threshold && c.sign <= 0)
        .cloned()
        .collect();

    let limit = Rational::from((1, n as u32));
    let mut origin_witnesses = Vec::new();
    for al in alphas.iter().filter(|a| **a > limit) {
        if let Some(order) = witness_order(al) {
            let a = AlphaParam::new(al.clone(), prec)?;
            origin_witnesses.push(OriginWitness {
                alpha: al.clone(),
                order,
                value: delta_at_origin(&a, order)?,
            });
        }
    }
    let failed_witnesses = origin_witnesses
        .iter()
        .filter(|w| w.value >= 0)
        .cloned()
        .collect();
    Ok(TheoremReport {
        n,
        route,
        threshold,
        cells,
        violations,
        origin_witnesses,
        failed_witnesses,
    })
}

/// Smallest value of a report cell set, if any.
pub fn min_cell(cells: &[HeatCell]) -> Option<&HeatCell> {
    cells
        .iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
}

/// `Float` → `f64` with `NaN` for non-finite values, for tabular output.
pub fn to_f64(v: &Real) -> f64 {
    if v.is_finite() {
        v.to_f64()
    } else {
        f64::NAN
    }
}
