//! Randomized search for negative minors of `[K_α(x_i, y_j)]`.
//!
//! Every sample owns an RNG stream derived from `(seed, order, index)`, so the
//! parallel scan returns exactly what a sequential one would.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::chebyshev::AlphaParam;
use crate::error::{Error, Result};
use crate::hp::{self, Real};
use crate::kernel::{det_kernel_matrix, PointTuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// Independent points with log-uniform coordinates, sorted.
    LogUniform,
    /// Geometric progressions `x0·(1+ε)^i`, `y0·(1+ε)^i` with ε log-uniform
    /// in `2^eps_log2`; this is where the confluent (derivative) limit lives.
    Clustered,
}

#[derive(Clone, Debug)]
pub struct TpScanConfig {
    pub max_order: usize,
    pub samples_per_order: usize,
    pub seed: u64,
    /// Natural-log range for coordinates (log-uniform mode) or for the base
    /// points `x0`, `y0` (clustered mode).
    pub log_range: (f64, f64),
    pub mode: ScanMode,
    pub eps_log2: (f64, f64),
}

impl Default for TpScanConfig {
    fn default() -> Self {
        TpScanConfig {
            max_order: 3,
            samples_per_order: 100,
            seed: 42,
            log_range: (-5.0, 5.0),
            mode: ScanMode::LogUniform,
            eps_log2: (-30.0, -4.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrderSummary {
    pub order: usize,
    pub min_minor: Real,
    pub witness_x: PointTuple,
    pub witness_y: PointTuple,
    pub negatives: usize,
}

#[derive(Clone, Debug)]
pub struct TpReport {
    pub order: usize,
    pub samples: usize,
    pub min_minor: Real,
    pub witness_x: PointTuple,
    pub witness_y: PointTuple,
    pub seed: u64,
    pub mode: ScanMode,
    pub sign_pattern: Vec<OrderSummary>,
}

impl TpReport {
    pub fn summary(&self, order: usize) -> Option<&OrderSummary> {
        self.sign_pattern.iter().find(|s| s.order == order)
    }

    pub fn all_positive(&self) -> bool {
        self.sign_pattern.iter().all(|s| s.min_minor > 0)
    }
}

struct Sample {
    x: PointTuple,
    y: PointTuple,
    minor: Real,
}

pub fn tp_scan(a: &AlphaParam, cfg: &TpScanConfig) -> Result<TpReport> {
    if cfg.max_order == 0 || cfg.samples_per_order == 0 {
        return Err(Error::domain(
            "tp_scan needs max_order ≥ 1 and samples_per_order ≥ 1",
        ));
    }
    if !(cfg.log_range.0 < cfg.log_range.1) || !(cfg.eps_log2.0 <= cfg.eps_log2.1) {
        return Err(Error::domain("empty sampling range"));
    }
    let mut sign_pattern = Vec::with_capacity(cfg.max_order);
    for order in 1..=cfg.max_order {
        let samples: Vec<Sample> = (0..cfg.samples_per_order)
            .into_par_iter()
            .map(|index| draw_and_evaluate(a, cfg, order, index))
            .collect::<Result<_>>()?;
        let negatives = samples.iter().filter(|s| s.minor < 0).count();
        let best = samples
            .into_iter()
            .reduce(|best, s| if s.minor < best.minor { s } else { best })
            .expect("at least one sample");
        sign_pattern.push(OrderSummary {
            order,
            min_minor: best.minor,
            witness_x: best.x,
            witness_y: best.y,
            negatives,
        });
    }
    let global = sign_pattern
        .iter()
        .reduce(|best, s| {
            if s.min_minor < best.min_minor {
                s
            } else {
                best
            }
        })
        .expect("at least one order")
        .clone();
    Ok(TpReport {
        order: global.order,
        samples: cfg.samples_per_order,
        min_minor: global.min_minor,
        witness_x: global.witness_x,
        witness_y: global.witness_y,
        seed: cfg.seed,
        mode: cfg.mode,
        sign_pattern,
    })
}

fn sample_rng(seed: u64, order: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((order as u64) << 32) | index as u64);
    rng
}

fn draw_and_evaluate(
    a: &AlphaParam,
    cfg: &TpScanConfig,
    order: usize,
    index: usize,
) -> Result<Sample> {
    let mut rng = sample_rng(cfg.seed, order, index);
    let (lo, hi) = cfg.log_range;
    let prec = a.prec();
    let (x, y, gap_bits) = match cfg.mode {
        ScanMode::LogUniform => loop {
            let mut xs: Vec<f64> = (0..order).map(|_| rng.gen_range(lo..hi).exp()).collect();
            let mut ys: Vec<f64> = (0..order).map(|_| rng.gen_range(lo..hi).exp()).collect();
            xs.sort_by(f64::total_cmp);
            ys.sort_by(f64::total_cmp);
            if let (Ok(x), Ok(y)) = (
                PointTuple::from_f64(prec, &xs),
                PointTuple::from_f64(prec, &ys),
            ) {
                let bits = gap_bits(&xs).max(gap_bits(&ys));
                break (x, y, bits);
            }
        },
        ScanMode::Clustered => {
            let x0 = rng.gen_range(lo..hi).exp();
            let y0 = rng.gen_range(lo..hi).exp();
            let e2 = if cfg.eps_log2.0 < cfg.eps_log2.1 {
                rng.gen_range(cfg.eps_log2.0..cfg.eps_log2.1)
            } else {
                cfg.eps_log2.0
            };
            let eps = e2.exp2();
            // Points are built at the elevated precision so the progression is exact enough.
            let wp = prec + 64 + (order * order) as u32 * (-e2).ceil().max(0.0) as u32;
            let ratio = Float::with_val(wp, eps) + 1u32;
            let progression = |base: f64| -> Vec<Real> {
                let mut v = Vec::with_capacity(order);
                let mut cur = hp::real(wp, base);
                for _ in 0..order {
                    v.push(cur.clone());
                    cur *= &ratio;
                }
                v
            };
            let x = PointTuple::new(progression(x0))?;
            let y = PointTuple::new(progression(y0))?;
            (x, y, (-e2).ceil().max(0.0) as u32 + 1)
        }
    };
    let minor = robust_minor(a, &x, &y, order, gap_bits)?;
    // Witness points keep the precision they were built at so they replay exactly.
    Ok(Sample {
        x,
        y,
        minor: Float::with_val(prec, minor),
    })
}

/// Bits of relative separation lost to the closest pair of neighbours.
fn gap_bits(v: &[f64]) -> u32 {
    v.windows(2)
        .map(|w| {
            let rel = (w[1] - w[0]) / w[1];
            (-rel.log2()).ceil().max(0.0) as u32
        })
        .max()
        .unwrap_or(0)
}

/// Determinant at a precision covering the expected cancellation, re-checked
/// 64 bits higher and escalated until sign and leading bits agree.
fn robust_minor(
    a: &AlphaParam,
    x: &PointTuple,
    y: &PointTuple,
    order: usize,
    gap_bits: u32,
) -> Result<Real> {
    let mut wp = a.prec() + 64 + (order * order.saturating_sub(1)) as u32 * gap_bits;
    let eval = |wp: u32| det_kernel_matrix(&a.with_prec(wp), &x.with_prec(wp), &y.with_prec(wp));
    let mut value = eval(wp)?;
    for _ in 0..4 {
        let check = eval(wp + 64)?;
        let agree = value.is_sign_negative() == check.is_sign_negative()
            && hp::rel_diff(&value, &check) < hp::real(64, 2f64.powi(-40));
        if agree {
            return Ok(check);
        }
        wp *= 2;
        value = eval(wp)?;
    }
    Ok(value)
}
