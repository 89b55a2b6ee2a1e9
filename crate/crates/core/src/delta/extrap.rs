//! Central differences and Richardson extrapolation.

use rug::Float;

use crate::chebyshev::binomial;
use crate::error::{Error, Result};
use crate::hp::{self, Real};

/// Neville–Richardson table for values `v_j = f(h_0 / t^j)` whose error
/// expands in `h^p, h^{p+s}, h^{p+2s}, …`. Returns the extrapolated value and
/// the last increment along the diagonal.
pub fn richardson(values: &[Real], ratio: f64, order: u32, step: u32) -> (Real, Real) {
    assert!(!values.is_empty(), "richardson needs at least one value");
    let prec = values[0].prec();
    let mut table: Vec<Real> = values.to_vec();
    let mut diagonal = vec![table.last().expect("non-empty").clone()];
    for m in 0..values.len() - 1 {
        let factor = hp::powi(&Float::with_val(prec, ratio), order + m as u32 * step) - 1u32;
        let next: Vec<Real> = table
            .windows(2)
            .map(|w| {
                let inc = Float::with_val(prec, &w[1] - &w[0]) / &factor;
                Float::with_val(prec, &w[1] + inc)
            })
            .collect();
        table = next;
        diagonal.push(table.last().expect("non-empty").clone());
    }
    let best = diagonal.last().expect("non-empty").clone();
    let err = if diagonal.len() > 1 {
        Float::with_val(prec, &best - &diagonal[diagonal.len() - 2]).abs()
    } else {
        Float::with_val(prec, f64::INFINITY)
    };
    (best, err)
}

/// Leading error order estimated from three successive values of a ladder
/// with step ratio `t`.
pub fn observed_order(values: &[Real], ratio: f64) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let d1 = Float::with_val(64, &values[n - 2] - &values[n - 3])
        .abs()
        .to_f64();
    let d2 = Float::with_val(64, &values[n - 1] - &values[n - 2])
        .abs()
        .to_f64();
    if d1 == 0.0 || d2 == 0.0 {
        return None;
    }
    Some((d1 / d2).ln() / ratio.ln())
}

/// `δ_h^m f(x) / h^m` with the centred stencil `x + (m/2 − k)h`, k = 0..m.
pub fn central_difference<F>(f: &F, x: &Real, m: u32, h: &Real) -> Result<Real>
where
    F: Fn(&Real) -> Result<Real>,
{
    let prec = x.prec().max(h.prec());
    let mut acc = Float::new(prec);
    for k in 0..=m {
        let offset = Float::with_val(prec, h * (m as f64 / 2.0 - k as f64));
        let point = Float::with_val(prec, x + offset);
        let c = binomial(m as i64, k as i64);
        let term = f(&point)? * c;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc / Float::with_val(prec, hp::powi_signed(h, m as i32)))
}

/// Settings for an extrapolated derivative.
#[derive(Clone, Debug)]
pub struct DerivativePlan {
    pub h0: f64,
    pub levels: usize,
}

/// Working precision that keeps `levels` halvings of `h0` free of roundoff
/// in an order-`m` difference quotient.
pub fn derivative_precision(base: u32, m: u32, plan: &DerivativePlan) -> u32 {
    let h_min_bits = (-plan.h0.log2()).max(0.0) + (plan.levels as f64 - 1.0);
    base + 64 + (m as f64 * h_min_bits).ceil() as u32
}

/// `f^{(m)}(x)` from central differences at steps `h0/2^j`, extrapolated in
/// `h²`. `f` is called with arguments carrying the working precision and is
/// expected to evaluate at that precision.
pub fn derivative<F>(f: &F, x: &Real, m: u32, plan: &DerivativePlan) -> Result<(Real, Real)>
where
    F: Fn(&Real) -> Result<Real>,
{
    if m == 0 {
        let v = f(x)?;
        let z = Float::new(v.prec());
        return Ok((v, z));
    }
    if plan.levels < 2 {
        return Err(Error::domain("derivative needs at least two levels"));
    }
    let prec = x.prec();
    let mut values = Vec::with_capacity(plan.levels);
    let mut h = Float::with_val(prec, plan.h0);
    for _ in 0..plan.levels {
        values.push(central_difference(f, x, m, &h)?);
        h /= 2u32;
    }
    Ok(richardson(&values, 2.0, 2, 2))
}
