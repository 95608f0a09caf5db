//! Kernel-level functions: `ρ_ν`, Bessel functions, Tricomi's `Ψ`, the
//! weight and its ODE, and the integral identities of `ρ_ν`.

pub mod bessel;
pub mod laguerre;
pub mod psi;
pub mod rho;
pub mod weight;

use rug::Float;

pub use bessel::{bessel_j, bessel_modulus_sq, bessel_y, ismail_quotient_check, QuotientCheck};
pub use laguerre::{horner, laguerre_coeffs, laguerre_eval};
pub use psi::{psi_batch, tricomi_psi};
pub use rho::{
    bessel_k, kernel_point, rho_at_zero, rho_derivative_check, rho_eval, rho_ladder, rho_recurrence_residual,
    KernelPoint, Route,
};
pub use weight::{weight_eval, weight_ode_residual, weight_ode_residual_unit_t, WeightPoint};

use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, integrate_interval, integrate_semiline, integrate_semiline_vec, PrecisionContext, QuadratureSpec};
use crate::report::Check;
use crate::Real;

/// `((−1)^n x^n / n!) ρ_ν(x) = ∫₀^∞ y^{ν+n−1} e^{−y−x/y} L_n^ν(y) dy`.
///
/// The right side is assembled from the integrals of `y^{ν+n+k−1} e^{−y−x/y}`;
/// the bound is `10·tol` times the sum of their absolute contributions.
pub fn laguerre_product_check(nu: &Real, n: usize, x: &Real, ctx: &PrecisionContext) -> Result<Check> {
    if *x <= 0 {
        return Err(Error::Domain("x must be positive".into()));
    }
    let p = ctx.prec();
    let coeffs = laguerre_coeffs(n, nu, ctx)?;
    let base = Float::with_val(p, nu + n as u32) - 1u32;
    let x = ctx.lift(x);
    let spec = QuadratureSpec::tanh_sinh().with_scale(Float::with_val(p, x.sqrt_ref()));
    let est = integrate_semiline_vec(
        |y, ln_y| {
            let mut v = (Float::with_val(p, &base * ln_y) - y - Float::with_val(p, &x / y)).exp();
            let mut out = Vec::with_capacity(n + 1);
            for k in 0..=n {
                if k > 0 {
                    v *= y;
                }
                out.push(v.clone());
            }
            Ok(out)
        },
        n + 1,
        &spec,
        ctx,
    )?;
    let mut rhs = ctx.zero();
    let mut scale = ctx.zero();
    for (c, v) in coeffs.iter().zip(&est.values) {
        let term = Float::with_val(p, c * v);
        scale += Float::with_val(p, term.abs_ref());
        rhs += term;
    }
    let rho = rho_eval(nu, &x, ctx)?;
    let mut lhs = rho * Float::with_val(p, (&x).pow_ref_n(n)) / Float::with_val(p, Float::factorial(n as u32));
    if n % 2 == 1 {
        lhs = -lhs;
    }
    let scale = scale.max(&Float::with_val(p, lhs.abs_ref()));
    Ok(Check::compare(&lhs, &rhs, &scale, &(ctx.tol() * 10u32)))
}

trait PowN {
    fn pow_ref_n(self, n: usize) -> Real;
}

impl PowN for &Real {
    fn pow_ref_n(self, n: usize) -> Real {
        Float::with_val(self.prec(), rug::ops::Pow::pow(self, n as u32))
    }
}

/// `(I_−^a f)(x) = (1/Γ(a)) ∫_x^∞ (s−x)^{a−1} f(s) ds` applied to `f = ρ_b`.
///
/// For `a < 1` the piece over `[x, x+1]` is integrated as
/// `∫ u^{a−1}(f(x+u) − f(x)) du + f(x)/a`, which removes the strong endpoint
/// singularity.
pub fn fractional_integral_rho(a: &Real, b: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if *a <= 0 {
        return Err(Error::Domain("fractional order must be positive".into()));
    }
    let p = ctx.prec();
    let am1 = Float::with_val(p, a - 1u32);
    let x = ctx.lift(x);
    let power = |_u: &Real, ln_u: &Real| Float::with_val(p, &am1 * ln_u).exp();
    let total = if *a >= 1 {
        let scale = Float::with_val(p, x.sqrt_ref()).max(&ctx.one());
        integrate_semiline(
            |u, ln_u| Ok(power(u, ln_u) * rho_eval(b, &Float::with_val(p, &x + u), ctx)?),
            &QuadratureSpec::tanh_sinh().with_scale(scale),
            ctx,
        )?
        .value
    } else {
        let f0 = rho_eval(b, &x, ctx)?;
        let near = integrate_interval(
            |u| {
                let ln_u = Float::with_val(p, u.ln_ref());
                let df = rho_eval(b, &Float::with_val(p, &x + u), ctx)? - &f0;
                Ok(power(u, &ln_u) * df)
            },
            &ctx.zero(),
            &ctx.one(),
            &QuadratureSpec::tanh_sinh(),
            ctx,
        )?
        .value;
        let far = integrate_semiline(
            |v, _| {
                let u = Float::with_val(p, v + 1u32);
                let ln_u = Float::with_val(p, u.ln_ref());
                Ok(power(&u, &ln_u) * rho_eval(b, &Float::with_val(p, &x + &u), ctx)?)
            },
            &QuadratureSpec::tanh_sinh(),
            ctx,
        )?
        .value;
        near + far + Float::with_val(p, &f0 / a)
    };
    Ok(total / gamma_fn(a, ctx)?)
}

/// Residuals of `I_−^ν ρ_μ = ρ_{ν+μ}` and `I_−^μ ρ_ν = ρ_{ν+μ}` at `x`.
pub fn fractional_integral_check(nu: &Real, mu: &Real, x: &Real, ctx: &PrecisionContext) -> Result<[Check; 2]> {
    if *nu <= 0 || *mu <= 0 {
        return Err(Error::Domain("fractional orders must be positive".into()));
    }
    let p = ctx.prec();
    let target = rho_eval(&Float::with_val(p, nu + mu), x, ctx)?;
    let factor = ctx.tol() * 100u32;
    let left = fractional_integral_rho(nu, mu, x, ctx)?;
    let right = fractional_integral_rho(mu, nu, x, ctx)?;
    Ok([
        Check::compare(&left, &target, &target, &factor),
        Check::compare(&right, &target, &target, &factor),
    ])
}
