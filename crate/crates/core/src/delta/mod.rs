//! The derivative determinant
//! `Δ_α^n(x,y) = det[∂^{i+j}K_α/∂x^i∂y^j]_{0≤i,j<n}`, computed five ways,
//! with its closed forms at `(1, 0+)` and on the diagonal.

pub mod extrap;
mod lascoux;
mod partition;
mod schur;
mod tkernel;

pub use lascoux::{
    a_matrix, a_matrix_integer, a_sigma, a_sigma_minor, b_matrix, b_sigma, check_sigma,
    delta_lascoux, lascoux_polynomial,
};
pub use partition::{partitions_of, schur_dim, Partition};
pub use schur::{delta_schur, SchurEval, SchurMode};
pub use tkernel::{
    t_kernel, t_kernel_at_origin, t_xderiv_check, XDerivCheck, T_KERNEL_MAX_ORDER, XDERIV_MAX,
};

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer};
use serde::Serialize;

use crate::asm::group_by_stats;
use crate::chebyshev::{superfactorial, v_product, AlphaParam};
use crate::error::{Error, Result};
use crate::hp::{self, Complex, Real};
use crate::kernel::{det_kernel_matrix, kernel_unchecked, PointTuple};
use crate::linalg::{self, Matrix};
use extrap::{derivative, derivative_precision, observed_order, richardson, DerivativePlan};
use tkernel::t_kernel_unchecked;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Fd,
    Wronskian,
    Schur,
    Lascoux,
    Asm,
}

impl Route {
    pub const ALL: [Route; 5] = [
        Route::Fd,
        Route::Wronskian,
        Route::Schur,
        Route::Lascoux,
        Route::Asm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Fd => "fd",
            Route::Wronskian => "wronskian",
            Route::Schur => "schur",
            Route::Lascoux => "lascoux",
            Route::Asm => "asm",
        }
    }

    /// Routes whose only error is rounding or a rigorously bounded tail.
    pub fn is_exact(self) -> bool {
        matches!(self, Route::Schur | Route::Lascoux | Route::Asm)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown route {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RouteMeta {
    Fd {
        eps: Vec<f64>,
        observed_order: Option<f64>,
        assumed_order: u32,
        precision: u32,
    },
    Wronskian {
        h0: f64,
        levels: usize,
        precision: u32,
    },
    Schur {
        mode: SchurMode,
        truncation: u64,
        terms: u64,
    },
    Lascoux {
        precision: u32,
    },
    Asm {
        classes: usize,
        matrices: u64,
        imag_residue: f64,
    },
}

#[derive(Clone, Debug)]
pub struct RouteResult {
    pub value: Real,
    pub route: Route,
    pub error_estimate: Real,
    pub meta: RouteMeta,
}

pub const ASM_ROUTE_MAX_N: usize = 7;

fn check_args(n: usize, x: &Real, y: &Real) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if *x <= 0 || *y <= 0 {
        return Err(Error::domain("delta needs x, y > 0"));
    }
    Ok(())
}

fn sf_squared(n: usize) -> Integer {
    let sf = superfactorial(n as u32 - 1);
    Integer::from(sf.square_ref())
}

pub fn delta(a: &AlphaParam, n: usize, x: &Real, y: &Real, route: Route) -> Result<RouteResult> {
    check_args(n, x, y)?;
    match route {
        Route::Fd => delta_fd(a, n, x, y),
        Route::Wronskian => delta_wronskian(a, n, x, y),
        Route::Schur => {
            let s = delta_schur(a, n, x, y, SchurMode::Auto)?;
            Ok(RouteResult {
                value: s.value,
                route,
                error_estimate: s.error_estimate,
                meta: RouteMeta::Schur {
                    mode: s.mode,
                    truncation: s.truncation,
                    terms: s.terms,
                },
            })
        }
        Route::Lascoux => {
            let prec = a.prec().max(x.prec()).max(y.prec());
            let value = delta_lascoux(a, n, x, y);
            let err = Float::with_val(prec, value.abs_ref()) >> (prec as i32 - 8);
            Ok(RouteResult {
                value,
                route,
                error_estimate: err,
                meta: RouteMeta::Lascoux {
                    precision: prec + 32 + 4 * n as u32,
                },
            })
        }
        Route::Asm => delta_asm(a, n, x, y),
    }
}

/// `sf(n−1)² D(X_ε, Y_ε) / (V_{X_ε} V_{Y_ε})` on centred progressions
/// `x + (i − (n−1)/2)ε`, at `ε_j = 2^{−8−4j}·min(x,y)`, extrapolated to ε = 0.
fn delta_fd(a: &AlphaParam, n: usize, x: &Real, y: &Real) -> Result<RouteResult> {
    let prec = a.prec().max(x.prec()).max(y.prec());
    const LEVELS: u32 = 7;
    let scale = if x < y { x.clone() } else { y.clone() };
    let sf2 = sf_squared(n);
    let mut values = Vec::with_capacity(LEVELS as usize);
    let mut eps_used = Vec::with_capacity(LEVELS as usize);
    let mut top_prec = prec;
    for j in 0..LEVELS {
        let bits = 8 + 4 * j;
        // The determinant is O(ε^{n(n−1)}) against O(1) entries.
        let wp = prec + 64 + (n * n.saturating_sub(1)) as u32 * bits;
        top_prec = wp;
        let eps = Float::with_val(wp, &scale) >> bits as i32;
        eps_used.push(eps.to_f64());
        let progression = |c: &Real| -> Result<PointTuple> {
            let pts = (0..n)
                .map(|i| {
                    let off = Float::with_val(wp, &eps * (i as f64 - (n as f64 - 1.0) / 2.0));
                    Float::with_val(wp, c + off)
                })
                .collect();
            PointTuple::new(pts)
        };
        let xs = progression(x)?;
        let ys = progression(y)?;
        let d = det_kernel_matrix(&a.with_prec(wp), &xs, &ys)?;
        let v = Float::with_val(wp, xs.vandermonde() * ys.vandermonde());
        values.push(d / v * &sf2);
    }
    let observed = observed_order(&values, 16.0);
    // Centred progressions make the expansion even in ε; the observed order
    // decides, falling back to 2 when the ladder is already converged.
    let (order, step) = match observed {
        Some(p) if (p - 1.0).abs() < 0.5 => (1, 1),
        _ => (2, 2),
    };
    let (value, err) = richardson(&values, 16.0, order, step);
    Ok(RouteResult {
        value: Float::with_val(prec, value),
        route: Route::Fd,
        error_estimate: Float::with_val(prec, err),
        meta: RouteMeta::Fd {
            eps: eps_used,
            observed_order: observed,
            assumed_order: order,
            precision: top_prec,
        },
    })
}

/// `det[∂_x^i T_{α,j}(x,y)]` with x-derivatives from extrapolated central
/// differences; entry errors are propagated through the cofactors.
fn delta_wronskian(a: &AlphaParam, n: usize, x: &Real, y: &Real) -> Result<RouteResult> {
    let prec = a.prec().max(x.prec()).max(y.prec());
    // The nearest complex singularity in x lies at distance 1/sqrt(K).
    let radius = Float::with_val(64, kernel_unchecked(a, x, y).recip_sqrt()).to_f64();
    let m_max = n.saturating_sub(1).max(1) as u32;
    let plan = DerivativePlan {
        h0: radius / (8.0 * m_max as f64),
        levels: 10,
    };
    let wp = derivative_precision(prec + 32 + 3 * n as u32, m_max, &plan);
    let aw = a.with_prec(wp);
    let xw = Float::with_val(wp, x);
    let yw = Float::with_val(wp, y);
    let mut w: Matrix<Real> = vec![Vec::with_capacity(n); n];
    let mut e: Matrix<Real> = vec![Vec::with_capacity(n); n];
    for (i, (wrow, erow)) in w.iter_mut().zip(e.iter_mut()).enumerate() {
        for j in 0..n {
            let f = |t: &Real| Ok(t_kernel_unchecked(&aw, j as u32, t, &yw));
            let (v, err) = derivative(&f, &xw, i as u32, &plan)?;
            wrow.push(v);
            erow.push(err);
        }
    }
    let value = linalg::det(w.clone());
    let err = cofactor_error(&w, &e);
    Ok(RouteResult {
        value: Float::with_val(prec, value),
        route: Route::Wronskian,
        error_estimate: Float::with_val(prec, err),
        meta: RouteMeta::Wronskian {
            h0: plan.h0,
            levels: plan.levels,
            precision: wp,
        },
    })
}

/// First-order bound `Σ_ij |err_ij| |cof_ij|` on the determinant error.
fn cofactor_error(m: &Matrix<Real>, err: &Matrix<Real>) -> Real {
    let n = m.len();
    let prec = m[0][0].prec();
    if n == 1 {
        return err[0][0].clone();
    }
    let mut total = Float::new(prec);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&t| t != i).collect();
            let cols: Vec<usize> = (0..n).filter(|&t| t != j).collect();
            let cof = linalg::det(linalg::submatrix(m, &rows, &cols)).abs();
            total += cof * &err[i][j];
        }
    }
    total
}

/// `PMix = 4 sin²(πα) xy` and `QCx = e^{iπα/2} x + e^{−iπα/2} y`.
pub fn pmix_qcx(a: &AlphaParam, x: &Real, y: &Real) -> (Real, Complex) {
    let prec = a.prec();
    let s2 = Float::with_val(prec, a.sin_pi_alpha().square_ref());
    let pmix = s2 * 4u32 * Float::with_val(prec, x * y);
    let w = a.omega();
    let q = &w.scale(x) + &w.conj().scale(y);
    (pmix, q)
}

/// `Σ_A PMix^μ QCx^J QCx̄^{n(n−1)−2I}` from the `(μ, ν)` classes, with
/// `J = 2ν` and `I = ν + μ`. Returns the sum and `Σ |term|`.
fn asm_bracket(
    a: &AlphaParam,
    n: usize,
    x: &Real,
    y: &Real,
) -> Result<(Complex, Real, usize, u64)> {
    let g = group_by_stats(n)?;
    let prec = a.prec();
    let (pmix, q) = pmix_qcx(a, x, y);
    let top = (n * (n - 1)) as u32;
    let mut q_pows = Vec::with_capacity(top as usize + 1);
    let mut cur = Complex::one(prec);
    for _ in 0..=top {
        q_pows.push(cur.clone());
        cur = &cur * &q;
    }
    let mut sum = Complex::zero(prec);
    let mut abs_sum = Float::new(prec);
    for (&(mu, nu), &count) in &g.counts {
        let bar_exp = top - 2 * nu - 2 * mu;
        let t = &q_pows[2 * nu as usize] * &q_pows[bar_exp as usize].conj();
        let weight = Float::with_val(prec, hp::powi(&pmix, mu)) * count;
        let term = t.scale(&weight);
        abs_sum += term.abs();
        sum = &sum + &term;
    }
    Ok((sum, abs_sum, g.counts.len(), g.total()))
}

fn delta_asm(a: &AlphaParam, n: usize, x: &Real, y: &Real) -> Result<RouteResult> {
    if n > ASM_ROUTE_MAX_N {
        return Err(Error::CapExceeded {
            what: "asm route size",
            value: n,
            limit: ASM_ROUTE_MAX_N,
        });
    }
    let prec = a.prec().max(x.prec()).max(y.prec());
    let mut wp = prec + 64;
    for _ in 0..4 {
        let aw = a.with_prec(wp);
        let xw = Float::with_val(wp, x);
        let yw = Float::with_val(wp, y);
        let (sum, abs_sum, classes, matrices) = asm_bracket(&aw, n, &xw, &yw)?;
        let re_abs = Float::with_val(wp, sum.re.abs_ref());
        // Bits lost to cancellation between the classes.
        let lost = if re_abs.is_zero() {
            wp
        } else {
            Float::with_val(64, &abs_sum / &re_abs)
                .log2()
                .to_f64()
                .max(0.0)
                .ceil() as u32
        };
        if lost + prec + 32 > wp && wp < 8 * prec {
            wp = prec + lost + 96;
            continue;
        }
        let k = kernel_unchecked(&aw, &xw, &yw);
        let pref = Float::with_val(wp, hp::powi(&k, (n * n) as u32)) * sf_squared(n);
        let value = Float::with_val(wp, &sum.re * &pref);
        let imag = Float::with_val(wp, sum.im.abs_ref()) * &pref;
        let limit = Float::with_val(wp, value.abs_ref()) >> (prec as i32 / 2);
        if imag > limit {
            return Err(Error::NonConvergence(format!(
                "asm sum has imaginary residue {imag:e} against real part {value:e}"
            )));
        }
        return Ok(RouteResult {
            value: Float::with_val(prec, &value),
            route: Route::Asm,
            error_estimate: Float::with_val(prec, &imag),
            meta: RouteMeta::Asm {
                classes,
                matrices,
                imag_residue: imag.to_f64(),
            },
        });
    }
    Err(Error::NonConvergence(
        "asm sum cancels beyond the precision budget".into(),
    ))
}

/// `Δ_α^n(1, 0+) = sf(n−1)² U_1 U_2 ⋯ U_n`.
pub fn delta_at_origin(a: &AlphaParam, n: usize) -> Result<Real> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    Ok(v_product(a, n as u32)? * sf_squared(n))
}

/// `Δ_α^n(x,x) = sf(n−1)² (2x cos(πα/2))^{−n(n+1)} Σ_k N_k (4 sin²(πα/2))^k`,
/// `N_k` the number of ASMs with k entries equal to −1.
pub fn delta_diagonal(a: &AlphaParam, n: usize, x: &Real) -> Result<Real> {
    if n == 0 || *x <= 0 {
        return Err(Error::domain("delta_diagonal needs n ≥ 1 and x > 0"));
    }
    if n > ASM_ROUTE_MAX_N {
        return Err(Error::CapExceeded {
            what: "diagonal formula size",
            value: n,
            limit: ASM_ROUTE_MAX_N,
        });
    }
    let prec = a.prec().max(x.prec());
    let g = group_by_stats(n)?;
    let w = a.omega();
    let ratio = Float::with_val(prec, w.im.square_ref()) * 4u32;
    let mut sum = Float::new(prec);
    let mut by_mu = std::collections::BTreeMap::<u32, u64>::new();
    for (&(mu, _), &c) in &g.counts {
        *by_mu.entry(mu).or_insert(0) += c;
    }
    for (mu, c) in by_mu {
        sum += Float::with_val(prec, hp::powi(&ratio, mu)) * c;
    }
    let base = Float::with_val(prec, x * &w.re) * 2u32;
    let den = Float::with_val(prec, hp::powi(&base, (n * (n + 1)) as u32));
    Ok(sum * sf_squared(n) / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(s: &str) -> AlphaParam {
        AlphaParam::parse(s, 256).unwrap()
    }

    fn half_closed(x: f64, y: f64) -> Real {
        let (x, y) = (hp::real(256, x), hp::real(256, y));
        let s = Float::with_val(256, x.square_ref()) + Float::with_val(256, y.square_ref());
        Float::with_val(256, &x * &y) * 4u32 / hp::powi(&s, 4)
    }

    #[test]
    fn every_route_at_n1_is_the_kernel() {
        let a = alpha("0.3");
        let (x, y) = (hp::real(256, 0.8), hp::real(256, 1.7));
        let k = kernel_unchecked(&a, &x, &y);
        for r in Route::ALL {
            let d = delta(&a, 1, &x, &y, r).unwrap();
            assert!(hp::rel_diff(&d.value, &k) < 1e-30, "{r}");
        }
    }

    #[test]
    fn every_route_at_half_n2() {
        let a = alpha("1/2");
        let (x, y) = (hp::real(256, 0.6), hp::real(256, 1.3));
        let expected = half_closed(0.6, 1.3);
        for r in Route::ALL {
            let d = delta(&a, 2, &x, &y, r).unwrap();
            let tol = if r.is_exact() { 1e-60 } else { 1e-12 };
            assert!(hp::rel_diff(&d.value, &expected) < tol, "{r}: {}", d.value);
        }
    }

    #[test]
    fn origin_and_diagonal() {
        let a = alpha("0.3");
        let d2 = delta_at_origin(&a, 2).unwrap();
        let c = Float::with_val(256, a.cos_pi_alpha() * 2u32);
        assert!(hp::rel_diff(&d2, &c) < 1e-70);
        assert!(delta_at_origin(&alpha("1/3"), 3).unwrap().is_zero());

        let x = hp::real(256, 0.9);
        let diag = delta_diagonal(&alpha("1/2"), 2, &x).unwrap();
        let expected = Float::with_val(256, hp::powi(&x, 6)).recip() / 4u32;
        assert!(hp::rel_diff(&diag, &expected) < 1e-70);
        let diag1 = delta_diagonal(&a, 1, &x).unwrap();
        assert!(hp::rel_diff(&diag1, &kernel_unchecked(&a, &x, &x)) < 1e-70);
    }

    #[test]
    fn route_names_round_trip() {
        for r in Route::ALL {
            assert_eq!(r.name().parse::<Route>().unwrap(), r);
        }
        assert!("taylor".parse::<Route>().is_err());
    }
}
