//! The generalized logistic density `g_α(x) = sin(πα) / (2πα(cosh x + cos πα))`
//! and its exponential moments.

use rug::Float;

use crate::chebyshev::AlphaParam;
use crate::error::{Error, Result};
use crate::hp::{self, Real};

pub fn eval_logistic(a: &AlphaParam, x: &Real) -> Real {
    let prec = a.prec();
    let denom = Float::with_val(prec, x.cosh_ref()) + a.cos_pi_alpha();
    let weight = if a.is_zero() {
        // sin(πα)/(πα) → 1
        hp::real(prec, 0.5)
    } else {
        let pi_alpha = hp::pi(prec) * a.value();
        Float::with_val(prec, a.sin_pi_alpha() / pi_alpha) / 2u32
    };
    weight / denom
}

/// Quadrature and closed form of `∫ e^{sx} g_α(x) dx = sin(παs)/(α sin(πs))`.
#[derive(Clone, Debug)]
pub struct MgfCheck {
    pub numeric: Real,
    pub closed: Real,
    /// Integration half-width `T`.
    pub truncation: f64,
    pub evaluations: usize,
}

const LOCAL_TOL: f64 = 1e-12;
const MAX_DEPTH: u32 = 50;
const PANELS: usize = 64;

pub fn logistic_mgf_check(a: &AlphaParam, s: &Real) -> Result<MgfCheck> {
    let s64 = s.to_f64();
    if !(s64.abs() < 1.0) {
        return Err(Error::domain("mgf check needs |s| < 1"));
    }
    if a.is_zero() {
        return Err(Error::domain("mgf check needs α ∈ (0,1)"));
    }
    let prec = a.prec();
    let closed = if s.is_zero() {
        hp::one(prec)
    } else {
        let pi = hp::pi(prec);
        let num = Float::with_val(prec, &pi * a.value()) * s;
        let den = Float::with_val(prec, &pi * s).sin() * a.value();
        num.sin() / den
    };

    let alpha = a.to_f64();
    let c = a.cos_pi_alpha().to_f64();
    let weight = a.sin_pi_alpha().to_f64() / (2.0 * std::f64::consts::PI * alpha);
    let integrand = |x: f64| {
        let e = (-x.abs()).exp();
        2.0 * weight * (s64 * x - x.abs()).exp() / (1.0 + 2.0 * c * e + e * e)
    };

    let t = 60.0 + 10.0 / (1.0 - s64.abs());
    let width = 2.0 * t / PANELS as f64;
    let mut total = 0.0;
    let mut evaluations = 0;
    for p in 0..PANELS {
        let lo = -t + p as f64 * width;
        let hi = lo + width;
        total += adaptive_simpson(&integrand, lo, hi, LOCAL_TOL, &mut evaluations)?;
    }
    Ok(MgfCheck {
        numeric: hp::real(prec, total),
        closed,
        truncation: t,
        evaluations,
    })
}

fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    evals: &mut usize,
) -> Result<f64> {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    *evals += 3;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, evals)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    evals: &mut usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    *evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergence(format!(
            "adaptive Simpson stalled on [{a}, {b}] with local error {delta:e}"
        )));
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, evals)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, evals)?;
    Ok(l + r)
}
