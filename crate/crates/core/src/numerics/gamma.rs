use rug::Float;

use super::precision::{PrecisionContext, Real};
use crate::error::{Error, Result};

fn is_pole(z: &Real) -> bool {
    z.is_integer() && *z <= 0
}

/// Euler's gamma function.
pub fn gamma_fn(z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if is_pole(z) {
        return Err(Error::GammaPole(ctx.format(z)));
    }
    Ok(Float::with_val(ctx.prec(), z).gamma())
}

/// `ln Γ(z)` for `z > 0`.
pub fn ln_gamma(z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if *z <= 0 {
        return Err(Error::Domain(format!(
            "ln_gamma needs a positive argument, got {}",
            ctx.format(z)
        )));
    }
    Ok(Float::with_val(ctx.prec(), z).ln_gamma())
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: &Real, n: usize, ctx: &PrecisionContext) -> Real {
    let mut acc = ctx.one();
    let mut term = ctx.lift(a);
    for _ in 0..n {
        acc *= &term;
        term += 1;
    }
    acc
}

pub fn factorial(n: usize, ctx: &PrecisionContext) -> Real {
    Float::with_val(ctx.prec(), Float::factorial(n as u32))
}
