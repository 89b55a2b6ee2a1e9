pub mod asm;
pub mod cheb;
pub mod conj;
pub mod delta;
pub mod kernel;
pub mod logistic;

use tplab_core::hp::{self, Complex, Real};
use tplab_core::kernel::PointTuple;
use tplab_core::AlphaParam;

use crate::error::CliError;
use crate::Ctx;

pub type Res<T> = Result<T, CliError>;

pub fn alpha(ctx: &Ctx, s: &str) -> Res<AlphaParam> {
    Ok(AlphaParam::parse(s, ctx.prec)?)
}

pub fn real(ctx: &Ctx, s: &str) -> Res<Real> {
    Ok(hp::parse_real(ctx.prec, s)?)
}

/// Comma-separated, strictly increasing positive values.
pub fn tuple(ctx: &Ctx, s: &str) -> Res<PointTuple> {
    let vals = s
        .split(',')
        .map(|v| real(ctx, v))
        .collect::<Res<Vec<_>>>()?;
    Ok(PointTuple::new(vals)?)
}

pub fn complex(ctx: &Ctx, re: &str, im: &str) -> Res<Complex> {
    Ok(Complex::new(real(ctx, re)?, real(ctx, im)?))
}

pub fn rel(a: &Real, b: &Real) -> Real {
    hp::rel_diff(a, b)
}
