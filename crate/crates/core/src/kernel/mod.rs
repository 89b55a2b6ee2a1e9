//! The kernel `K_α(x,y) = 1/(x² + 2cos(πα)xy + y²)` and the classical
//! determinant identities around it.

mod logistic;
mod scan;

pub use logistic::{eval_logistic, logistic_mgf_check, MgfCheck};
pub use scan::{tp_scan, OrderSummary, ScanMode, TpReport, TpScanConfig};

use rug::Float;

use crate::chebyshev::AlphaParam;
use crate::error::{Error, Result};
use crate::hp::{self, Real};
use crate::linalg::{self, Matrix};

/// Strictly increasing tuple of positive reals.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTuple(Vec<Real>);

impl PointTuple {
    pub fn new(values: Vec<Real>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("point tuple must be non-empty"));
        }
        if values[0] <= 0 {
            return Err(Error::domain("points must be positive"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("points must be strictly increasing"));
        }
        Ok(PointTuple(values))
    }

    pub fn from_f64(prec: u32, values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| hp::real(prec, v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Real] {
        &self.0
    }

    pub fn prec(&self) -> u32 {
        self.0
            .iter()
            .map(Float::prec)
            .max()
            .unwrap_or(hp::DEFAULT_PRECISION)
    }

    /// Same points rounded to another precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        PointTuple(self.0.iter().map(|v| Float::with_val(prec, v)).collect())
    }

    /// `∏_{i<j} (v_j − v_i)`.
    pub fn vandermonde(&self) -> Real {
        let prec = self.prec();
        let mut acc = hp::one(prec);
        for (i, vi) in self.0.iter().enumerate() {
            for vj in &self.0[i + 1..] {
                acc *= Float::with_val(prec, vj - vi);
            }
        }
        acc
    }
}

fn same_len(x: &PointTuple, y: &PointTuple) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.len())
}

/// `x² + 2cos(πα)xy + y²` at the given precision; no domain check.
pub(crate) fn kernel_denominator(a: &AlphaParam, x: &Real, y: &Real, prec: u32) -> Real {
    let xy = Float::with_val(prec, x * y);
    let cross = Float::with_val(prec, a.cos_pi_alpha() * 2u32) * xy;
    Float::with_val(prec, x.square_ref()) + Float::with_val(prec, y.square_ref()) + cross
}

/// `K_α(x,y)` without the positivity check; used on boundaries such as y = 0.
pub(crate) fn kernel_unchecked(a: &AlphaParam, x: &Real, y: &Real) -> Real {
    let prec = a.prec().max(x.prec()).max(y.prec());
    let d = kernel_denominator(a, x, y, prec);
    Float::with_val(prec, d.recip_ref())
}

pub fn eval_kernel(a: &AlphaParam, x: &Real, y: &Real) -> Result<Real> {
    if *x <= 0 || *y <= 0 {
        return Err(Error::domain("kernel arguments must be positive"));
    }
    Ok(kernel_unchecked(a, x, y))
}

pub fn kernel_matrix(a: &AlphaParam, x: &PointTuple, y: &PointTuple) -> Matrix<Real> {
    x.values()
        .iter()
        .map(|xi| {
            y.values()
                .iter()
                .map(|yj| kernel_unchecked(a, xi, yj))
                .collect()
        })
        .collect()
}

/// `D_α^n(X,Y) = det[K_α(x_i, y_j)]`.
pub fn det_kernel_matrix(a: &AlphaParam, x: &PointTuple, y: &PointTuple) -> Result<Real> {
    same_len(x, y)?;
    Ok(linalg::det(kernel_matrix(a, x, y)))
}

/// Cauchy's double alternant, the closed form of `det[1/(x_i² + y_j²)]`.
pub fn cauchy_double_alternant(x: &PointTuple, y: &PointTuple) -> Result<Real> {
    let n = same_len(x, y)?;
    let prec = x.prec().max(y.prec());
    let xs: Vec<Real> = x
        .values()
        .iter()
        .map(|v| Float::with_val(prec, v.square_ref()))
        .collect();
    let ys: Vec<Real> = y
        .values()
        .iter()
        .map(|v| Float::with_val(prec, v.square_ref()))
        .collect();
    let mut num = hp::one(prec);
    for i in 0..n {
        for j in i + 1..n {
            num *= Float::with_val(prec, &ys[j] - &ys[i]);
            num *= Float::with_val(prec, &xs[j] - &xs[i]);
        }
    }
    let mut den = hp::one(prec);
    for xi in &xs {
        for yj in &ys {
            den *= Float::with_val(prec, xi + yj);
        }
    }
    Ok(num / den)
}

pub const PERMANENT_MAX: usize = 20;

/// Permanent by inclusion–exclusion over column subsets.
pub fn permanent(m: &Matrix<Real>) -> Result<Real> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::domain("permanent needs a non-empty square matrix"));
    }
    if n > PERMANENT_MAX {
        return Err(Error::CapExceeded {
            what: "permanent size",
            value: n,
            limit: PERMANENT_MAX,
        });
    }
    Ok(linalg::permanent(m))
}

/// Both sides of Borchardt's identity
/// `det[1/(x_i+y_j)²] = det[1/(x_i+y_j)] · perm[1/(x_i+y_j)]`.
#[derive(Clone, Debug)]
pub struct BorchardtCheck {
    pub lhs: Real,
    pub rhs: Real,
}

pub const BORCHARDT_MAX: usize = 12;

pub fn borchardt_check(x: &PointTuple, y: &PointTuple) -> Result<BorchardtCheck> {
    let n = same_len(x, y)?;
    if n > BORCHARDT_MAX {
        return Err(Error::CapExceeded {
            what: "borchardt size",
            value: n,
            limit: BORCHARDT_MAX,
        });
    }
    let prec = x.prec().max(y.prec());
    let cauchy: Matrix<Real> = x
        .values()
        .iter()
        .map(|xi| {
            y.values()
                .iter()
                .map(|yj| Float::with_val(prec, xi + yj).recip())
                .collect()
        })
        .collect();
    let squared: Matrix<Real> = cauchy
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| Float::with_val(prec, v.square_ref()))
                .collect()
        })
        .collect();
    let lhs = linalg::det(squared);
    let rhs = linalg::det(cauchy.clone()) * linalg::permanent(&cauchy);
    Ok(BorchardtCheck { lhs, rhs })
}

/// `det[K_α(x_i, x_j)]`, positive for every α by positive-definiteness.
pub fn gram_determinant(a: &AlphaParam, x: &PointTuple) -> Real {
    linalg::det(kernel_matrix(a, x, x))
}

/// Gram determinant recomputed at increasing precision until two successive
/// evaluations agree in sign and to `2^-32` relative; returns the value and
/// the precision that settled it.
pub fn gram_determinant_escalated(a: &AlphaParam, x: &PointTuple) -> (Real, u32) {
    let mut prec = a.prec().max(x.prec());
    let mut prev = gram_determinant(&a.with_prec(prec), &x.with_prec(prec));
    for _ in 0..6 {
        let next_prec = prec * 2;
        let next = gram_determinant(&a.with_prec(next_prec), &x.with_prec(next_prec));
        let agree = prev.is_sign_negative() == next.is_sign_negative()
            && hp::rel_diff(&prev, &next) < hp::real(64, 2f64.powi(-32));
        prec = next_prec;
        prev = next;
        if agree {
            break;
        }
    }
    (prev, prec)
}
