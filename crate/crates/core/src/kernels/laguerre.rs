//! Classical Laguerre polynomials `L_n^a(y)`.

use rug::Float;

use crate::error::Result;
use crate::numerics::{gamma_fn, PrecisionContext, Real};

/// Coefficients of `y^k` in `L_n^a(y) = Σ_k (−1)^k C(n+a, n−k) y^k / k!`.
pub fn laguerre_coeffs(n: usize, a: &Real, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    let p = ctx.prec();
    let top = gamma_fn(&Float::with_val(p, a + (n as u32 + 1)), ctx)?;
    (0..=n)
        .map(|k| {
            let den = Float::with_val(p, Float::factorial((n - k) as u32))
                * gamma_fn(&Float::with_val(p, a + (k as u32 + 1)), ctx)?
                * Float::with_val(p, Float::factorial(k as u32));
            let c = Float::with_val(p, &top / den);
            Ok(if k % 2 == 1 { -c } else { c })
        })
        .collect()
}

/// Horner evaluation of a coefficient vector in ascending powers.
pub fn horner(coeffs: &[Real], y: &Real, ctx: &PrecisionContext) -> Real {
    let p = ctx.prec();
    coeffs
        .iter()
        .rev()
        .fold(ctx.zero(), |acc, c| Float::with_val(p, &acc * y) + c)
}

pub fn laguerre_eval(n: usize, a: &Real, y: &Real, ctx: &PrecisionContext) -> Result<Real> {
    Ok(horner(&laguerre_coeffs(n, a, ctx)?, y, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        let ctx = PrecisionContext::new(40).unwrap();
        let a = ctx.ratio(1, 2);
        let y = ctx.int(3);
        // L_1^a(y) = 1 + a − y, L_2^a(y) = ((a+1)(a+2) − 2(a+2)y + y²)/2
        let l1 = laguerre_eval(1, &a, &y, &ctx).unwrap();
        assert!(Float::with_val(ctx.prec(), l1 - ctx.ratio(-3, 2)).abs() < ctx.pow10(-35));
        let l2 = laguerre_eval(2, &a, &y, &ctx).unwrap();
        let want = (ctx.ratio(15, 4) - ctx.int(15) + ctx.int(9)) / 2;
        assert!(Float::with_val(ctx.prec(), l2 - want).abs() < ctx.pow10(-35));
    }
}
