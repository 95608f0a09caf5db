//! The weight `ω(x) = x^α e^{−λx} ρ_ν(xt)` and its second-order ODE.

use rug::Float;

use super::rho::rho_ladder;
use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, Params, PrecisionContext, Real};
use crate::report::Check;

/// `ω`, `ω′` and `ω″` at one point, derivatives in closed form.
#[derive(Clone, Debug)]
pub struct WeightPoint {
    pub params: Params,
    pub x: Real,
    pub omega: Real,
    pub omega_d1: Real,
    pub omega_d2: Real,
}

/// Evaluates the weight. With `t = 0` the kernel factor is the constant `Γ(ν)`.
///
/// With `E = x^α e^{−λx}` and `R = ρ_ν(xt)`:
/// `E′ = (α/x − λ)E`, `E″ = ((α/x − λ)² − α/x²)E`, `R′ = −t ρ_{ν−1}(xt)`,
/// `R″ = t² ρ_{ν−2}(xt)`.
pub fn weight_eval(params: &Params, x: &Real, ctx: &PrecisionContext) -> Result<WeightPoint> {
    params.validate()?;
    if *x <= 0 {
        return Err(Error::Domain("the weight is evaluated at x > 0 only".into()));
    }
    let p = ctx.prec();
    let Params { alpha, nu, lambda, t } = params.lift(ctx);
    let x = ctx.lift(x);
    let (r0, r1, r2) = if t.is_zero() {
        (gamma_fn(&nu, ctx)?, ctx.zero(), ctx.zero())
    } else {
        let xt = Float::with_val(p, &x * &t);
        let ladder = rho_ladder(&nu, &xt, 3, ctx)?;
        let r1 = -Float::with_val(p, &t * &ladder[1]);
        let r2 = Float::with_val(p, t.square_ref()) * &ladder[2];
        (ladder[0].clone(), r1, r2)
    };
    let ln_e = Float::with_val(p, &alpha * Float::with_val(p, x.ln_ref())) - Float::with_val(p, &lambda * &x);
    let e = ln_e.exp();
    let g = Float::with_val(p, &alpha / &x) - &lambda;
    let e1 = Float::with_val(p, &g * &e);
    let e2 = (Float::with_val(p, g.square_ref()) - Float::with_val(p, &alpha / Float::with_val(p, x.square_ref())))
        * &e;
    let omega = Float::with_val(p, &e * &r0);
    let omega_d1 = Float::with_val(p, &e1 * &r0) + Float::with_val(p, &e * &r1);
    let omega_d2 = Float::with_val(p, &e2 * &r0) + Float::with_val(p, &e1 * &r1) * 2u32 + Float::with_val(p, &e * &r2);
    Ok(WeightPoint {
        params: params.clone(),
        x,
        omega,
        omega_d1,
        omega_d2,
    })
}

fn ode_residual(params: &Params, x: &Real, linear: &Real, ctx: &PrecisionContext) -> Result<Check> {
    let w = weight_eval(params, x, ctx)?;
    let p = ctx.prec();
    let Params { alpha, nu, lambda, .. } = params.lift(ctx);
    let x = ctx.lift(x);
    let am = Float::with_val(p, &alpha - Float::with_val(p, &lambda * &x));
    let c1 = Float::with_val(p, &am * 2u32) + &nu - 1u32;
    let c0 = Float::with_val(p, am.square_ref())
        + Float::with_val(p, &x * linear)
        + Float::with_val(p, &alpha * &nu);
    let terms = [
        Float::with_val(p, x.square_ref()) * &w.omega_d2,
        -(c1 * &x * &w.omega_d1),
        c0 * &w.omega,
    ];
    let residual = terms.iter().fold(ctx.zero(), |acc, t| acc + t);
    let scale = terms
        .iter()
        .map(|t| Float::with_val(p, t.abs_ref()))
        .fold(ctx.zero(), |m, t| m.max(&t));
    Ok(Check::new(residual, scale * ctx.tol()))
}

/// Residual of
/// `x²ω″ − (2(α−λx)+ν−1)xω′ + ((α−λx)² + x(λ(1−ν) − t) + αν)ω = 0`,
/// bounded by `tol · max |term|`. Needs `t > 0`.
pub fn weight_ode_residual(params: &Params, x: &Real, ctx: &PrecisionContext) -> Result<Check> {
    if params.t <= 0 {
        return Err(Error::Domain("the weight ODE is stated for t > 0".into()));
    }
    let p = ctx.prec();
    let lin = Float::with_val(p, &params.lambda * Float::with_val(p, 1 - &params.nu)) - &params.t;
    ode_residual(params, x, &lin, ctx)
}

/// Same equation with the coefficient `x(λ(1−ν) − 1)` in place of
/// `x(λ(1−ν) − t)`; it agrees with [`weight_ode_residual`] only at `t = 1`.
pub fn weight_ode_residual_unit_t(params: &Params, x: &Real, ctx: &PrecisionContext) -> Result<Check> {
    if params.t <= 0 {
        return Err(Error::Domain("the weight ODE is stated for t > 0".into()));
    }
    let p = ctx.prec();
    let lin = Float::with_val(p, &params.lambda * Float::with_val(p, 1 - &params.nu)) - 1u32;
    ode_residual(params, x, &lin, ctx)
}
