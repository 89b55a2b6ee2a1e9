//! Series expansion of the derivative determinant for `0 < y < x`:
//!
//! `Δ = x^{−n(n+1)} Σ_k (−y/x)^k Σ_{μ_1≤…≤μ_n, |μ|=k} ∏_i U_{i+μ_i} ∏_{i<j} (μ_j−μ_i+j−i)²`.
//!
//! `Literal` sums the shells over partitions. `Resummed` uses Cauchy–Binet
//! with `k_i = n−i+λ_i` to fold the same sum into
//! `sf(n−1)² w^{−n(n−1)/2} det[S_ij]`, `S_ij = Σ_k U_{k+1} C(k,i) C(k,j) w^k`,
//! `w = −y/x`, which needs only single series. Both truncate with a rigorous
//! tail bound; `|U_m| ≤ min(m, 1/sin πα)` and, for the shells, the identity
//! `Σ_{|λ|=k} ∏_{i<j}(λ_i−λ_j+j−i)² = sf(n−1)² C(k+n²−1, n²−1)`.
//!
//! `Closed` sums each `S_ij` exactly: `C(k,i)C(k,j) = Σ_m C(m,i)C(i,m−j)C(k,m)`
//! and `G_m = Σ_k C(k,m) U_{k+1} w^k = Im(ω^{m+1} w^m (1−ωw)^{−m−1}) / sin πα`
//! with `ω = e^{iπα}`. This continues the series to `w = −1`, the diagonal.

use rug::{Float, Integer};
use serde::Serialize;

use super::partition::partitions_of;
use crate::chebyshev::{binomial, cheb_u, superfactorial, AlphaParam};
use crate::error::{Error, Result};
use crate::hp::{self, Complex, Real};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchurMode {
    /// Literal shells when they truncate early, resummed otherwise.
    Auto,
    Literal,
    Resummed,
    Closed,
}

#[derive(Clone, Debug)]
pub struct SchurEval {
    pub value: Real,
    pub error_estimate: Real,
    pub mode: SchurMode,
    /// Last index kept in the series.
    pub truncation: u64,
    pub terms: u64,
}

const LITERAL_MAX_SHELL: u64 = 400;
const AUTO_LITERAL_SHELLS: u64 = 48;
const RESUMMED_MAX_TERMS: u64 = 2_000_000;
const AUTO_RESUMMED_TERMS: u64 = 100_000;

fn log2_binomial_ratio(k: f64, m: f64) -> f64 {
    // log2 C(k+1+m, m) − log2 C(k+m, m)
    ((k + 1.0 + m) / (k + 1.0)).log2()
}

/// Bound on `|Σ_{|μ|=k} ∏U ∏(…)²| r^k`, as log2, for every shell up to the
/// cap; stops once the remaining tail is below `2^tol_log2`.
struct ShellPlan {
    truncation: u64,
    tail_log2: f64,
    max_log2: f64,
    first_log2: f64,
}

fn literal_plan(n: usize, r: f64, inv_sin: Option<f64>, tol_log2: f64) -> Option<ShellPlan> {
    let m = (n * n) as f64 - 1.0;
    let nf = n as f64;
    let base = (n * (n + 1) / 2) as f64;
    let sf2 = 2.0 * superfactorial(n as u32 - 1).to_f64().log2();
    let u_log2 = |k: f64| {
        let growth = nf * ((base + k) / nf).log2();
        match inv_sin {
            Some(v) => growth.min(nf * v.log2()),
            None => growth,
        }
    };
    let bound = |k: u64, comb_log2: f64| sf2 + u_log2(k as f64) + comb_log2 + k as f64 * r.log2();
    let mut comb = 0.0; // log2 C(k+m, m)
    let first = bound(0, 0.0);
    let mut max = first;
    let min_shells = 4 * n as u64;
    for k in 0..=LITERAL_MAX_SHELL {
        let next_comb = comb + log2_binomial_ratio(k as f64, m);
        let b1 = bound(k + 1, next_comb);
        let b2 = bound(k + 2, next_comb + log2_binomial_ratio(k as f64 + 1.0, m));
        let ratio = (b2 - b1).exp2();
        max = max.max(bound(k, comb));
        if k >= min_shells && ratio < 1.0 {
            let tail = b1 - (1.0 - ratio).log2();
            if tail < tol_log2 {
                return Some(ShellPlan {
                    truncation: k,
                    tail_log2: tail,
                    max_log2: max,
                    first_log2: first,
                });
            }
        }
        comb = next_comb;
    }
    None
}

fn inv_sin(a: &AlphaParam) -> Option<f64> {
    if a.is_zero() {
        None
    } else {
        Some(1.0 / a.sin_pi_alpha().to_f64())
    }
}

fn ratio_f64(x: &Real, y: &Real) -> f64 {
    Float::with_val(64, y / x).to_f64()
}

/// Order `(x, y)` so that `y ≤ x`; the determinant is symmetric.
fn oriented<'a>(x: &'a Real, y: &'a Real) -> Result<(&'a Real, &'a Real)> {
    if *x <= 0 || *y <= 0 {
        return Err(Error::domain("schur route needs x, y > 0"));
    }
    Ok(if y <= x { (x, y) } else { (y, x) })
}

pub fn delta_schur(
    a: &AlphaParam,
    n: usize,
    x: &Real,
    y: &Real,
    mode: SchurMode,
) -> Result<SchurEval> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let (x, y) = oriented(x, y)?;
    let prec = a.prec().max(x.prec()).max(y.prec());
    let r = ratio_f64(x, y);
    let tol_log2 = -(prec as f64) - 16.0;
    let plan = literal_plan(n, r, inv_sin(a), tol_log2);
    let diagonal = x == y;
    if diagonal && matches!(mode, SchurMode::Literal | SchurMode::Resummed) {
        return Err(Error::domain("schur series diverges on the diagonal x = y"));
    }
    let resolved = match mode {
        SchurMode::Auto if diagonal => SchurMode::Closed,
        SchurMode::Auto => match &plan {
            Some(p) if p.truncation <= AUTO_LITERAL_SHELLS => SchurMode::Literal,
            _ => match resummed_plan(n, r, inv_sin(a), tol_log2) {
                Some((k, _)) if k <= AUTO_RESUMMED_TERMS => SchurMode::Resummed,
                _ => SchurMode::Closed,
            },
        },
        m => m,
    };
    let bracket = match resolved {
        SchurMode::Literal => {
            let plan = plan.ok_or_else(|| {
                Error::NonConvergence(format!(
                    "literal schur series needs more than {LITERAL_MAX_SHELL} shells at y/x = {r}"
                ))
            })?;
            literal(a, n, x, y, prec, tol_log2, &plan)?
        }
        SchurMode::Closed => closed(a, n, x, y, prec),
        _ => resummed(a, n, x, y, prec)?,
    };
    let (value, err, truncation, terms) = bracket;
    let scale = Float::with_val(prec, hp::powi_signed(x, -((n * (n + 1)) as i32)));
    Ok(SchurEval {
        value: Float::with_val(prec, &value * &scale),
        error_estimate: Float::with_val(prec, &err * &scale),
        mode: resolved,
        truncation,
        terms,
    })
}

type Bracket = (Real, Real, u64, u64);

fn literal(
    a: &AlphaParam,
    n: usize,
    x: &Real,
    y: &Real,
    prec: u32,
    tol_log2: f64,
    plan: &ShellPlan,
) -> Result<Bracket> {
    let cancel = (plan.max_log2 - plan.first_log2).max(0.0).ceil() as u32;
    let wp = prec + 64 + cancel;
    let aw = a.with_prec(wp);
    let w = -Float::with_val(wp, Float::with_val(wp, y) / Float::with_val(wp, x));
    let k_max = plan.truncation as usize;
    let u: Vec<Real> = (0..=(n + k_max) as i64).map(|m| cheb_u(&aw, m)).collect();
    let mut sum = Float::new(wp);
    let mut abs_sum = Float::new(wp);
    let mut w_pow = hp::one(wp);
    let mut terms = 0u64;
    for k in 0..=k_max {
        let mut shell = Float::new(wp);
        for lambda in partitions_of(k as u32, n) {
            let mu = lambda.increasing(n)?;
            let mut weight = Integer::from(1);
            for i in 0..n {
                for j in i + 1..n {
                    weight *= mu[j] as i64 - mu[i] as i64 + (j - i) as i64;
                }
            }
            weight.square_mut();
            let mut prod = Float::with_val(wp, &weight);
            for (i, m) in mu.iter().enumerate() {
                prod *= &u[i + 1 + *m as usize];
            }
            shell += prod;
            terms += 1;
        }
        let term = shell * &w_pow;
        abs_sum += Float::with_val(wp, term.abs_ref());
        sum += term;
        w_pow *= &w;
    }
    let tail = Float::with_val(wp, plan.tail_log2.max(tol_log2)).exp2();
    let rounding = abs_sum * Float::with_val(wp, -(wp as f64) + (terms as f64 + 1.0).log2()).exp2();
    Ok((
        Float::with_val(prec, sum),
        Float::with_val(prec, tail + rounding),
        plan.truncation,
        terms,
    ))
}

/// Truncation index for `S_{n−1,n−1}`, the slowest entry, together with the
/// log2 of the largest partial magnitude of any entry.
fn resummed_plan(n: usize, r: f64, inv_sin: Option<f64>, tol_log2: f64) -> Option<(u64, f64)> {
    let d = (n - 1) as f64;
    let u_log2 = |k: f64| {
        let lin = (k + 1.0).log2();
        match inv_sin {
            Some(v) => lin.min(v.log2()),
            None => lin,
        }
    };
    // log2 of C(k, n−1)², computed incrementally from k = n−1.
    let start = n as u64 - 1;
    let mut comb = 0.0;
    let mut total = f64::NEG_INFINITY;
    let mut k = start;
    while k < RESUMMED_MAX_TERMS {
        let kf = k as f64;
        let b = u_log2(kf) + comb + kf * r.log2();
        total = log2_add(total, b);
        let next_comb = comb + 2.0 * ((kf + 1.0) / (kf + 1.0 - d)).log2();
        let b1 = u_log2(kf + 1.0) + next_comb + (kf + 1.0) * r.log2();
        let b2 = u_log2(kf + 2.0)
            + next_comb
            + 2.0 * ((kf + 2.0) / (kf + 2.0 - d)).log2()
            + (kf + 2.0) * r.log2();
        // Successive ratios of the bound are non-increasing, so the current
        // one dominates the whole tail.
        let ratio = (b2 - b1).exp2();
        if kf > 2.0 * d && ratio < 1.0 {
            let tail = b1 - (1.0 - ratio).log2();
            if tail < tol_log2 {
                return Some((k, total));
            }
        }
        comb = next_comb;
        k += 1;
    }
    None
}

fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

fn resummed(a: &AlphaParam, n: usize, x: &Real, y: &Real, prec: u32) -> Result<Bracket> {
    let r = ratio_f64(x, y);
    let pairs = (n * (n - 1) / 2) as f64;
    // The determinant is O(r^{n(n−1)/2}) while entries reach 2^max_log2.
    let (_, max_log2) = resummed_plan(n, r, inv_sin(a), -(prec as f64))
        .ok_or_else(|| Error::NonConvergence(format!("schur resummation too slow at y/x = {r}")))?;
    let cancel = pairs * (-r.log2()) + n as f64 * max_log2.max(0.0) + (n as f64) * 2.0;
    let wp = prec + 64 + cancel.ceil() as u32;
    let tol_log2 = -(wp as f64);
    let (k_max, _) = resummed_plan(n, r, inv_sin(a), tol_log2)
        .ok_or_else(|| Error::NonConvergence(format!("schur resummation too slow at y/x = {r}")))?;

    let gp = wp + 32 + (64 - k_max.leading_zeros());
    let aw = a.with_prec(gp);
    let w = -Float::with_val(gp, Float::with_val(gp, y) / Float::with_val(gp, x));
    let two_c = Float::with_val(gp, aw.cos_pi_alpha() * 2u32);
    let mut s = vec![vec![Float::new(gp); n]; n];
    // U_{k+1} by the three-term recurrence, seeded with U_0 = 0, U_1 = 1.
    let (mut u_prev, mut u_cur) = (Float::new(gp), hp::one(gp));
    let mut w_pow = hp::one(gp);
    let mut c = vec![Float::new(gp); n];
    for k in 0..=k_max {
        let base = Float::with_val(gp, &u_cur * &w_pow);
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = Float::with_val(gp, binomial(k as i64, i as i64));
        }
        for i in 0..n.min(k as usize + 1) {
            let bi = Float::with_val(gp, &base * &c[i]);
            for j in i..n.min(k as usize + 1) {
                s[i][j] += Float::with_val(gp, &bi * &c[j]);
            }
        }
        let next = Float::with_val(gp, &two_c * &u_cur) - &u_prev;
        u_prev = std::mem::replace(&mut u_cur, next);
        w_pow *= &w;
    }
    for i in 0..n {
        for j in 0..i {
            s[i][j] = s[j][i].clone();
        }
    }
    let m: Vec<Vec<Real>> = s
        .iter()
        .map(|row| row.iter().map(|v| Float::with_val(wp, v)).collect())
        .collect();
    let det = linalg::det(m.clone());
    let sf = superfactorial(n as u32 - 1);
    let sf2 = Float::with_val(wp, Integer::from(sf.square_ref()));
    let w_wp = Float::with_val(wp, &w);
    let norm = Float::with_val(wp, hp::powi_signed(&w_wp, -((n * (n - 1) / 2) as i32)));
    let value = Float::with_val(wp, &det * &norm) * &sf2;

    // Entry errors are below 2^{−wp} each; propagate through the cofactors.
    let mut cof_sum = Float::new(wp);
    if n == 1 {
        cof_sum = hp::one(wp);
    } else {
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&t| t != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&t| t != j).collect();
                cof_sum += linalg::det(linalg::submatrix(&m, &rows, &cols)).abs();
            }
        }
    }
    let entry_err = Float::with_val(wp, tol_log2 + 1.0).exp2();
    let err = cof_sum * entry_err * Float::with_val(wp, norm.abs_ref()) * &sf2;
    Ok((
        Float::with_val(prec, value),
        Float::with_val(prec, err),
        k_max,
        (k_max + 1) * (n * (n + 1) / 2) as u64,
    ))
}

/// `G_m` for `m = 0..=2n−2` at working precision `gp`.
fn closed_generating(a: &AlphaParam, w: &Real, max_m: usize, gp: u32) -> Vec<Real> {
    if a.is_zero() {
        // U_{k+1} = k+1: G_m = (m+1) w^m / (1−w)^{m+2}.
        let one_minus = Float::with_val(gp, 1 - w);
        return (0..=max_m)
            .map(|m| {
                let num = hp::powi(w, m as u32) * (m as u32 + 1);
                num / hp::powi(&one_minus, m as u32 + 2)
            })
            .collect();
    }
    let aw = a.with_prec(gp);
    let omega = Complex::new(aw.cos_pi_alpha().clone(), aw.sin_pi_alpha().clone());
    let ow = omega.scale(w);
    let denom = &Complex::one(gp) - &ow;
    let ratio = &ow / &denom;
    let mut cur = &omega / &denom; // ω (1−ωw)^{−1}
    let mut out = Vec::with_capacity(max_m + 1);
    for _ in 0..=max_m {
        out.push(Float::with_val(gp, &cur.im / aw.sin_pi_alpha()));
        cur = &cur * &ratio;
    }
    out
}

fn closed(a: &AlphaParam, n: usize, x: &Real, y: &Real, prec: u32) -> Bracket {
    let r = ratio_f64(x, y);
    let pairs = (n * (n - 1) / 2) as f64;
    let small_sin = inv_sin(a).map_or(0.0, |v| v.log2().max(0.0));
    let cancel = pairs * (-r.log2()).max(0.0) + 2.0 * small_sin + 4.0 * n as f64;
    let gp = prec + 64 + cancel.ceil() as u32;
    let w = -Float::with_val(gp, Float::with_val(gp, y) / Float::with_val(gp, x));
    let g = closed_generating(a, &w, 2 * n - 2, gp);
    let mut s = vec![vec![Float::new(gp); n]; n];
    for i in 0..n {
        for j in 0..n {
            for m in i.max(j)..=i + j {
                let c = binomial(m as i64, i as i64) * binomial(i as i64, (m - j) as i64);
                s[i][j] += Float::with_val(gp, &g[m] * &c);
            }
        }
    }
    let det = linalg::det(s);
    let sf = superfactorial(n as u32 - 1);
    let sf2 = Float::with_val(gp, Integer::from(sf.square_ref()));
    let norm = hp::powi_signed(&w, -((n * (n - 1) / 2) as i32));
    let value = Float::with_val(prec, det * norm * sf2);
    let err =
        Float::with_val(prec, value.abs_ref()) * Float::with_val(prec, -(prec as f64) + 8.0).exp2();
    (value, err, 0, (n * n) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kernel_unchecked;

    #[test]
    fn first_order_is_kernel() {
        let a = AlphaParam::parse("0.3", 256).unwrap();
        let (x, y) = (hp::real(256, 1.0), hp::real(256, 0.5));
        let k = kernel_unchecked(&a, &x, &y);
        for mode in [SchurMode::Literal, SchurMode::Resummed] {
            let s = delta_schur(&a, 1, &x, &y, mode).unwrap();
            assert!(hp::rel_diff(&s.value, &k) < 1e-60, "{mode:?}");
        }
    }

    #[test]
    fn modes_agree_at_small_ratio() {
        let a = AlphaParam::parse("0.15", 256).unwrap();
        let (x, y) = (hp::real(256, 2.0), hp::real(256, 0.3));
        for n in 2..=4 {
            let l = delta_schur(&a, n, &x, &y, SchurMode::Literal).unwrap();
            let r = delta_schur(&a, n, &x, &y, SchurMode::Resummed).unwrap();
            assert!(hp::rel_diff(&l.value, &r.value) < 1e-50, "n = {n}");
        }
    }

    #[test]
    fn symmetric_and_closed_on_diagonal() {
        let a = AlphaParam::parse("0.45", 256).unwrap();
        let (x, y) = (hp::real(256, 0.7), hp::real(256, 1.9));
        let d1 = delta_schur(&a, 3, &x, &y, SchurMode::Auto).unwrap();
        let d2 = delta_schur(&a, 3, &y, &x, SchurMode::Auto).unwrap();
        assert_eq!(d1.value, d2.value);
        assert!(delta_schur(&a, 2, &x, &x, SchurMode::Literal).is_err());
        let c = delta_schur(&a, 3, &x, &y, SchurMode::Closed).unwrap();
        assert!(hp::rel_diff(&c.value, &d1.value) < 1e-60);
        let half = AlphaParam::parse("1/2", 256).unwrap();
        let one = hp::one(256);
        let diag = delta_schur(&half, 2, &one, &one, SchurMode::Auto).unwrap();
        assert_eq!(diag.mode, SchurMode::Closed);
        assert!(hp::rel_diff(&diag.value, &hp::real(256, 0.25)) < 1e-70);
    }

    #[test]
    fn closed_matches_series_at_zero() {
        let a = AlphaParam::parse("0", 256).unwrap();
        let (x, y) = (hp::real(256, 1.5), hp::real(256, 0.4));
        for n in 1..=4 {
            let l = delta_schur(&a, n, &x, &y, SchurMode::Resummed).unwrap();
            let c = delta_schur(&a, n, &x, &y, SchurMode::Closed).unwrap();
            assert!(hp::rel_diff(&l.value, &c.value) < 1e-60, "n = {n}");
        }
    }
}
