//! Tricomi's confluent hypergeometric function `Ψ(a, b; z)` for `a > 0`.

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, integrate_semiline_vec, PrecisionContext, QuadratureSpec, Real};

/// `Ψ(a, b; z) = (1/Γ(a)) ∫₀^∞ e^{−zs} s^{a−1} (1+s)^{b−a−1} ds`.
pub fn tricomi_psi(a: &Real, b: &Real, z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    Ok(psi_batch(a, b, z, &[(0, 0)], ctx)?.swap_remove(0))
}

/// `Ψ(a + j, b + j − k; z)` for every `(j, k)` in `shifts`, from one vector
/// quadrature: the shifted integrands differ from the base one by
/// `s^j (1+s)^{−k}`.
pub fn psi_batch(
    a: &Real,
    b: &Real,
    z: &Real,
    shifts: &[(usize, usize)],
    ctx: &PrecisionContext,
) -> Result<Vec<Real>> {
    if *a <= 0 {
        return Err(Error::Domain("Ψ(a, b; z) is only supported for a > 0".into()));
    }
    if *z <= 0 {
        return Err(Error::Domain("Ψ(a, b; z) needs z > 0".into()));
    }
    if shifts.is_empty() {
        return Ok(Vec::new());
    }
    let p = ctx.prec();
    let a = ctx.lift(a);
    let z = ctx.lift(z);
    let pa = Float::with_val(p, &a - 1u32);
    let pb = Float::with_val(p, b - &a) - 1u32;
    let jmax = shifts.iter().map(|s| s.0).max().unwrap_or(0);
    let kmax = shifts.iter().map(|s| s.1).max().unwrap_or(0);
    let mut scale = Float::with_val(p, &a / &z);
    if scale > 1 {
        scale = Float::with_val(p, scale.sqrt_ref());
    }
    let spec = QuadratureSpec::tanh_sinh().with_scale(scale);
    let est = integrate_semiline_vec(
        |s, ln_s| {
            let ln_1s = Float::with_val(p, s.ln_1p_ref());
            let arg = Float::with_val(p, &pa * ln_s) + Float::with_val(p, &pb * &ln_1s) - Float::with_val(p, &z * s);
            let base = arg.exp();
            let inv_1s = Float::with_val(p, -&ln_1s).exp();
            let mut s_pow = Vec::with_capacity(jmax + 1);
            s_pow.push(Float::with_val(p, 1));
            for j in 1..=jmax {
                let next = Float::with_val(p, &s_pow[j - 1] * s);
                s_pow.push(next);
            }
            let mut inv_pow = Vec::with_capacity(kmax + 1);
            inv_pow.push(Float::with_val(p, 1));
            for k in 1..=kmax {
                let next = Float::with_val(p, &inv_pow[k - 1] * &inv_1s);
                inv_pow.push(next);
            }
            Ok(shifts
                .iter()
                .map(|&(j, k)| Float::with_val(p, &base * &s_pow[j]) * &inv_pow[k])
                .collect())
        },
        shifts.len(),
        &spec,
        ctx,
    )?;
    shifts
        .iter()
        .zip(est.values)
        .map(|(&(j, _), v)| Ok(v / gamma_fn(&Float::with_val(p, &a + j as u32), ctx)?))
        .collect()
}
