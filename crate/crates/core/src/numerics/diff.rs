//! Finite-difference derivatives with respect to a real parameter.
//!
//! Central differences at steps `h` and `h/2` combined by one Richardson
//! level. Near a domain boundary a forward (or backward) second-order stencil
//! is used instead and the result is flagged as one-sided.

use rug::Float;

use super::precision::{PrecisionContext, Real};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    Central,
    Forward,
    Backward,
}

#[derive(Clone, Debug)]
pub struct Derivative {
    pub value: Real,
    /// Difference between the extrapolated and the finer raw estimate.
    pub err: Real,
    pub step: Real,
    pub stencil: Stencil,
}

impl Derivative {
    pub fn one_sided(&self) -> bool {
        self.stencil != Stencil::Central
    }
}

/// Base step `10^(-digits/(order+2))`; `10^(-digits/3)` for first derivatives.
pub fn fd_step(order: u32, ctx: &PrecisionContext) -> Real {
    let e = (ctx.digits() as f64 / (order as f64 + 2.0)).round() as i32;
    ctx.pow10(-e)
}

/// Accuracy bound for a derivative of the given order when `g` is known to
/// relative accuracy `g_accuracy` and has magnitude about `scale`:
/// `10·max(h^3, g_accuracy/h^order)·scale`.
pub fn fd_bound(order: u32, g_accuracy: &Real, scale: &Real, ctx: &PrecisionContext) -> Real {
    let p = ctx.prec();
    let h = fd_step(order, ctx);
    let trunc = Float::with_val(p, rug::ops::Pow::pow(&h, 3u32));
    let noise = Float::with_val(p, g_accuracy / Float::with_val(p, rug::ops::Pow::pow(&h, order)));
    let s = Float::with_val(p, scale.abs_ref());
    trunc.max(&noise) * s * 10u32
}

fn central(order: u32, g: &dyn Fn(&Real) -> Result<Real>, at: &Real, h: &Real) -> Result<Real> {
    let p = at.prec();
    let at_k = |k: i32| Float::with_val(p, at + Float::with_val(p, h * k));
    Ok(match order {
        1 => (g(&at_k(1))? - g(&at_k(-1))?) / Float::with_val(p, h * 2u32),
        2 => {
            (g(&at_k(1))? - Float::with_val(p, g(at)? * 2u32) + g(&at_k(-1))?)
                / Float::with_val(p, h.square_ref())
        }
        3 => {
            let num = g(&at_k(2))? - Float::with_val(p, g(&at_k(1))? * 2u32) + Float::with_val(p, g(&at_k(-1))? * 2u32)
                - g(&at_k(-2))?;
            num / Float::with_val(p, rug::ops::Pow::pow(h, 3u32)) / 2u32
        }
        _ => unreachable!("order checked by caller"),
    })
}

/// Second-order one-sided first derivative; `dir` is `+1` or `-1`.
fn one_sided(g: &dyn Fn(&Real) -> Result<Real>, at: &Real, h: &Real, dir: i32) -> Result<Real> {
    let p = at.prec();
    let step = Float::with_val(p, h * dir);
    let f0 = g(at)?;
    let f1 = g(&Float::with_val(p, at + &step))?;
    let f2 = g(&Float::with_val(p, at + Float::with_val(p, &step * 2u32)))?;
    let num = Float::with_val(p, &f1 * 4u32) - Float::with_val(p, &f0 * 3u32) - f2;
    Ok(num / Float::with_val(p, &step * 2u32))
}

fn richardson(coarse: Real, fine: Real, h: Real, stencil: Stencil) -> Derivative {
    let p = fine.prec();
    let value = (Float::with_val(p, &fine * 4u32) - &coarse) / 3u32;
    let err = Float::with_val(p, &value - &fine).abs();
    Derivative {
        value,
        err,
        step: h,
        stencil,
    }
}

/// Derivative of order 1–3 at an interior point.
pub fn nth_derivative<F>(g: F, at: &Real, order: u32, ctx: &PrecisionContext) -> Result<Derivative>
where
    F: Fn(&Real) -> Result<Real>,
{
    if !(1..=3).contains(&order) {
        return Err(Error::Domain(format!("derivative order {order} not supported")));
    }
    let at = ctx.lift(at);
    let h = fd_step(order, ctx);
    let h2 = Float::with_val(ctx.prec(), &h / 2u32);
    let coarse = central(order, &g, &at, &h)?;
    let fine = central(order, &g, &at, &h2)?;
    Ok(richardson(coarse, fine, h, Stencil::Central))
}

/// First derivative with the standard step `10^(-digits/3)`.
pub fn param_derivative<F>(g: F, at: &Real, ctx: &PrecisionContext) -> Result<Derivative>
where
    F: Fn(&Real) -> Result<Real>,
{
    nth_derivative(g, at, 1, ctx)
}

/// First derivative on a parameter range `[lower, upper]`; switches to a
/// one-sided stencil when the central one would leave the range.
pub fn param_derivative_bounded<F>(
    g: F,
    at: &Real,
    lower: Option<&Real>,
    upper: Option<&Real>,
    ctx: &PrecisionContext,
) -> Result<Derivative>
where
    F: Fn(&Real) -> Result<Real>,
{
    let p = ctx.prec();
    let at = ctx.lift(at);
    let h = fd_step(1, ctx);
    let low_ok = lower.is_none_or(|l| Float::with_val(p, &at - &h) > *l);
    let high_ok = upper.is_none_or(|u| Float::with_val(p, &at + &h) < *u);
    if low_ok && high_ok {
        return param_derivative(g, &at, ctx);
    }
    let dir = if !low_ok {
        if upper.is_some_and(|u| Float::with_val(p, &at + Float::with_val(p, &h * 2u32)) > *u) {
            return Err(Error::Domain("parameter range narrower than the difference stencil".into()));
        }
        1
    } else {
        -1
    };
    let h2 = Float::with_val(p, &h / 2u32);
    let coarse = one_sided(&g, &at, &h, dir)?;
    let fine = one_sided(&g, &at, &h2, dir)?;
    let stencil = if dir > 0 { Stencil::Forward } else { Stencil::Backward };
    Ok(richardson(coarse, fine, h, stencil))
}

/// Derivative along the direction `(dx, dy)` of a function of two parameters.
pub fn directional_derivative<F>(
    g: F,
    at: (&Real, &Real),
    dir: (i32, i32),
    ctx: &PrecisionContext,
) -> Result<Derivative>
where
    F: Fn(&Real, &Real) -> Result<Real>,
{
    let p = ctx.prec();
    let (x0, y0) = (ctx.lift(at.0), ctx.lift(at.1));
    param_derivative(
        |s| {
            let x = Float::with_val(p, &x0 + Float::with_val(p, s * dir.0));
            let y = Float::with_val(p, &y0 + Float::with_val(p, s * dir.1));
            g(&x, &y)
        },
        &ctx.zero(),
        ctx,
    )
}
