//! The y-derivatives `T_r = ∂^r K_α/∂y^r` as finite sums in `Q = y + x cos πα`
//! and `K_α`.

use rug::Float;

use super::extrap::{derivative, derivative_precision, DerivativePlan};
use crate::chebyshev::{binomial, cheb_u, factorial, AlphaParam};
use crate::error::{Error, Result};
use crate::hp::{self, Real};
use crate::kernel::kernel_unchecked;

pub const T_KERNEL_MAX_ORDER: u32 = 40;

/// Bits that the alternating sum in `T_r` may cancel.
fn guard_bits(r: u32) -> u32 {
    32 + (13 * r).div_ceil(5)
}

/// `T_{α,r}(x,y)`, including the boundary `y = 0`.
pub(crate) fn t_kernel_unchecked(a: &AlphaParam, r: u32, x: &Real, y: &Real) -> Real {
    let out_prec = a.prec().max(x.prec()).max(y.prec());
    let prec = out_prec + guard_bits(r);
    let a = a.with_prec(prec);
    let x = Float::with_val(prec, x);
    let y = Float::with_val(prec, y);
    let k = kernel_unchecked(&a, &x, &y);
    let q = Float::with_val(prec, &y + Float::with_val(prec, &x * a.cos_pi_alpha()));
    let four_q2k = Float::with_val(prec, q.square_ref()) * 4u32 * &k;
    let p = r / 2;
    let odd = r % 2 == 1;
    // Σ_k (−1)^{sgn} C(·,p−k) (4Q²K)^k, pulling K^{p+1} (even) or K^{p+2} (odd) outside.
    let mut sum = Float::new(prec);
    let mut pow = hp::one(prec);
    for kk in 0..=p as i64 {
        let top = if odd {
            p as i64 + 1 + kk
        } else {
            p as i64 + kk
        };
        let c = binomial(top, p as i64 - kk);
        let term = Float::with_val(prec, &pow * &c);
        let negative = if odd {
            (p as i64 + 1 - kk) % 2 == 1
        } else {
            (p as i64 - kk) % 2 == 1
        };
        if negative {
            sum -= term;
        } else {
            sum += term;
        }
        pow *= &four_q2k;
    }
    let kp = Float::with_val(prec, hp::powi(&k, if odd { p + 2 } else { p + 1 }));
    let mut value = sum * kp * factorial(r);
    if odd {
        value *= q;
        value *= 2u32;
    }
    Float::with_val(out_prec, value)
}

pub fn t_kernel(a: &AlphaParam, r: u32, x: &Real, y: &Real) -> Result<Real> {
    if *x <= 0 || *y <= 0 {
        return Err(Error::domain("t_kernel needs x, y > 0"));
    }
    if r > T_KERNEL_MAX_ORDER {
        return Err(Error::CapExceeded {
            what: "T-kernel order",
            value: r as usize,
            limit: T_KERNEL_MAX_ORDER as usize,
        });
    }
    Ok(t_kernel_unchecked(a, r, x, y))
}

/// `T_{α,r}(1, 0+) = (−1)^r r! U_{r+1}`.
pub fn t_kernel_at_origin(a: &AlphaParam, r: u32) -> Real {
    let v = cheb_u(a, r as i64 + 1) * factorial(r);
    if r % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Extrapolated and closed values of `∂^j T_{α,r}/∂x^j` at `(1, 0+)`.
#[derive(Clone, Debug)]
pub struct XDerivCheck {
    pub fd: Real,
    pub closed: Real,
    pub error_estimate: Real,
}

pub const XDERIV_MAX: u32 = 30;

pub fn t_xderiv_check(a: &AlphaParam, r: u32, j: u32) -> Result<XDerivCheck> {
    if j == 0 {
        return Err(Error::domain("t_xderiv_check needs j ≥ 1"));
    }
    if r + j > XDERIV_MAX {
        return Err(Error::CapExceeded {
            what: "r + j",
            value: (r + j) as usize,
            limit: XDERIV_MAX as usize,
        });
    }
    let prec = a.prec();
    // T_r(·, 0) = c·x^{−r−2}: analytic in the unit disc around x = 1.
    let plan = DerivativePlan {
        h0: 1.0 / (8.0 * j as f64),
        levels: 12,
    };
    let wp = derivative_precision(prec + guard_bits(r), j, &plan);
    let aw = a.with_prec(wp);
    let zero = Float::new(wp);
    let f = |x: &Real| Ok(t_kernel_unchecked(&aw, r, x, &zero));
    let (fd, err) = derivative(&f, &hp::one(wp), j, &plan)?;
    let ratio = Float::with_val(prec, factorial(r + j + 1)) / factorial(r + 1);
    let mut closed = ratio * t_kernel_at_origin(a, r);
    if j % 2 == 1 {
        closed = -closed;
    }
    Ok(XDerivCheck {
        fd: Float::with_val(prec, fd),
        closed,
        error_estimate: Float::with_val(prec, err),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(s: &str) -> AlphaParam {
        AlphaParam::parse(s, 256).unwrap()
    }

    #[test]
    fn order_zero_and_one() {
        let a = alpha("0.2");
        let (x, y) = (hp::real(256, 1.3), hp::real(256, 0.7));
        let k = kernel_unchecked(&a, &x, &y);
        assert!(hp::rel_diff(&t_kernel(&a, 0, &x, &y).unwrap(), &k) < 1e-70);
        let q = Float::with_val(256, &y + Float::with_val(256, &x * a.cos_pi_alpha()));
        let t1 = -(q * 2u32 * Float::with_val(256, k.square_ref()));
        assert!(hp::rel_diff(&t_kernel(&a, 1, &x, &y).unwrap(), &t1) < 1e-70);
    }

    #[test]
    fn boundary_values() {
        let a = alpha("0.37");
        let (one, zero) = (hp::one(256), hp::zero(256));
        for r in 0..=10 {
            let t = t_kernel_unchecked(&a, r, &one, &zero);
            let c = t_kernel_at_origin(&a, r);
            assert!(hp::rel_diff(&t, &c) < 1e-60, "r = {r}");
        }
    }

    #[test]
    fn x_derivative_closed_form() {
        let c = t_xderiv_check(&alpha("0.3"), 0, 1).unwrap();
        assert!(hp::rel_diff(&c.closed, &hp::real(256, -2.0)) < 1e-70);
        assert!(hp::rel_diff(&c.fd, &c.closed) < 1e-20);
        let c = t_xderiv_check(&alpha("1/2"), 1, 2).unwrap();
        assert!(Float::with_val(256, &c.fd - &c.closed).abs() < 1e-20);
        let c = t_xderiv_check(&alpha("0.15"), 2, 3).unwrap();
        assert!(hp::rel_diff(&c.fd, &c.closed) < 1e-20);
        assert!(t_xderiv_check(&alpha("0.3"), 20, 11).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = alpha("0.3");
        assert!(t_kernel(&a, 2, &hp::zero(64), &hp::one(64)).is_err());
        assert!(t_kernel(&a, 41, &hp::one(64), &hp::one(64)).is_err());
    }
}
