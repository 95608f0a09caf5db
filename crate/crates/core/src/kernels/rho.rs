//! The scaled Macdonald function `ρ_ν(x) = 2 x^{ν/2} K_ν(2√x)`.

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{
    fd_bound, gamma_fn, integrate_semiline, integrate_semiline_vec, nth_derivative, PrecisionContext,
    QuadratureSpec, Real,
};
use crate::report::Check;

/// How a value of `ρ_ν` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `∫ y^{ν-1} e^{-y-x/y} dy`.
    LaplaceIntegral,
    /// `2 x^{ν/2} K_ν(2√x)` with `K_ν(z) = ∫ e^{-z cosh s} cosh(νs) ds`.
    BesselK,
    /// Upward recurrence `ρ_{ν+1} = ν ρ_ν + x ρ_{ν-1}` from the fractional part of ν.
    Recurrence,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::LaplaceIntegral, Route::BesselK, Route::Recurrence];

    pub fn name(self) -> &'static str {
        match self {
            Route::LaplaceIntegral => "laplace-integral",
            Route::BesselK => "bessel-k",
            Route::Recurrence => "recurrence",
        }
    }
}

#[derive(Clone, Debug)]
pub struct KernelPoint {
    pub nu: Real,
    pub x: Real,
    pub value: Real,
    pub route: Route,
}

fn check_x(x: &Real) -> Result<()> {
    if *x <= 0 || !x.is_finite() {
        return Err(Error::Domain(format!("ρ_ν needs x > 0, got {}", x.to_f64())));
    }
    Ok(())
}

/// Above this argument the peak of `y ↦ e^{−y−x/y}` is too narrow on a
/// logarithmic scale and the integral is taken after `y = √x e^s`.
const LARGE_X: u32 = 256;

/// `[ρ_ν(x), ρ_{ν-1}(x), …]` with `depth` entries from one quadrature.
pub fn rho_ladder(nu: &Real, x: &Real, depth: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    check_x(x)?;
    if *x > LARGE_X {
        return rho_ladder_large(nu, x, depth, ctx);
    }
    let p = ctx.prec();
    let nu_m1 = Float::with_val(p, nu - 1u32);
    let x = ctx.lift(x);
    // Centre on the peak of y·(integrand), y² − νy − x = 0, which tracks √x for
    // large x and ν for small x.
    let nu_mid = Float::with_val(p, nu - (depth as f64 - 1.0) / 2.0);
    let disc = Float::with_val(p, nu_mid.square_ref()) + Float::with_val(p, &x * 4u32);
    let center = (disc.sqrt() + &nu_mid) / 2u32;
    let spec = QuadratureSpec::tanh_sinh().with_scale(center);
    let est = integrate_semiline_vec(
        |y, ln_y| {
            let arg = Float::with_val(p, &nu_m1 * ln_y) - y - Float::with_val(p, &x / y);
            let mut v = arg.exp();
            let mut out = Vec::with_capacity(depth);
            for k in 0..depth {
                if k > 0 {
                    v /= y;
                }
                out.push(v.clone());
            }
            Ok(out)
        },
        depth,
        &spec,
        ctx,
    )?;
    Ok(est.values)
}

/// `ρ_μ(x) = 2 x^{μ/2} e^{−z} ∫₀^∞ cosh(μs) e^{−2z sinh²(s/2)} ds` with
/// `z = 2√x`, which is the Laplace integral after `y = √x e^{±s}`.
fn rho_ladder_large(nu: &Real, x: &Real, depth: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    let p = ctx.prec();
    let sx = Float::with_val(p, x.sqrt_ref());
    let z = Float::with_val(p, &sx * 2u32);
    let orders: Vec<Real> = (0..depth).map(|k| Float::with_val(p, nu - k as u32)).collect();
    let peak = Float::with_val(p, Float::with_val(p, nu / &z).asinh_ref());
    let width = Float::with_val(p, 1 / Float::with_val(p, z.sqrt_ref()));
    let scale = Float::with_val(p, peak.hypot_ref(&width));
    let est = integrate_semiline_vec(
        |s, _| {
            let sh = Float::with_val(p, Float::with_val(p, s / 2u32).sinh_ref());
            let damp = Float::with_val(p, sh.square_ref()) * &z * 2u32;
            Ok(orders
                .iter()
                .map(|m| {
                    let ms = Float::with_val(p, m * s);
                    let a = Float::with_val(p, &ms - &damp).exp();
                    let b = (-ms - &damp).exp();
                    (a + b) / 2u32
                })
                .collect())
        },
        depth,
        &QuadratureSpec::tanh_sinh().with_scale(scale),
        ctx,
    )?;
    let ez = Float::with_val(p, -&z).exp();
    Ok(orders
        .iter()
        .zip(est.values)
        .map(|(m, v)| v * Float::with_val(p, rug::ops::Pow::pow(&sx, m)) * &ez * 2u32)
        .collect())
}

/// `ρ_ν(x)` from its Laplace-type integral; any real ν, `x > 0`.
pub fn rho_eval(nu: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    Ok(rho_ladder(nu, x, 1, ctx)?.swap_remove(0))
}

/// `K_ν(z)` for `z > 0`.
pub fn bessel_k(nu: &Real, z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if *z <= 0 {
        return Err(Error::Domain("K_ν needs a positive argument".into()));
    }
    let p = ctx.prec();
    let nu = ctx.lift(nu);
    let z = ctx.lift(z);
    let est = integrate_semiline(
        |s, _| {
            let c = Float::with_val(p, s.cosh_ref());
            let damp = Float::with_val(p, -Float::with_val(p, &z * &c)).exp();
            Ok(damp * Float::with_val(p, Float::with_val(p, &nu * s).cosh_ref()))
        },
        &QuadratureSpec::tanh_sinh(),
        ctx,
    )?;
    Ok(est.value)
}

fn rho_bessel(nu: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let p = ctx.prec();
    let sx = Float::with_val(p, x.sqrt_ref());
    let k = bessel_k(nu, &Float::with_val(p, &sx * 2u32), ctx)?;
    // 2 x^{ν/2} = 2 (√x)^ν
    let pw = Float::with_val(p, rug::ops::Pow::pow(&sx, nu));
    Ok(k * pw * 2u32)
}

fn rho_recurrence(nu: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let p = ctx.prec();
    let base = Float::with_val(p, nu.floor_ref());
    let frac = Float::with_val(p, nu - &base);
    let steps = base.to_f64() as i64;
    if steps < 1 {
        return rho_eval(nu, x, ctx);
    }
    let ladder = rho_ladder(&frac, x, 2, ctx)?;
    // ρ_{k+1} = k ρ_k + x ρ_{k-1}
    let (mut prev, mut cur) = (ladder[1].clone(), ladder[0].clone());
    let mut order = frac;
    for _ in 0..steps {
        let next = Float::with_val(p, &order * &cur) + Float::with_val(p, x * &prev);
        prev = std::mem::replace(&mut cur, next);
        order += 1u32;
    }
    Ok(cur)
}

pub fn kernel_point(nu: &Real, x: &Real, route: Route, ctx: &PrecisionContext) -> Result<KernelPoint> {
    check_x(x)?;
    let value = match route {
        Route::LaplaceIntegral => rho_eval(nu, x, ctx)?,
        Route::BesselK => rho_bessel(nu, x, ctx)?,
        Route::Recurrence => rho_recurrence(nu, x, ctx)?,
    };
    Ok(KernelPoint {
        nu: ctx.lift(nu),
        x: ctx.lift(x),
        value,
        route,
    })
}

/// `ρ_ν(0) = Γ(ν)` for ν > 0.
pub fn rho_at_zero(nu: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if *nu <= 0 {
        return Err(Error::Domain("ρ_ν(0) is finite only for ν > 0".into()));
    }
    gamma_fn(nu, ctx)
}

/// `ρ_{ν+1}(x) − ν ρ_ν(x) − x ρ_{ν−1}(x)` from three separate integrals,
/// bounded by `tol · ρ_{ν+1}(x)`.
pub fn rho_recurrence_residual(nu: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Check> {
    let p = ctx.prec();
    let up = rho_eval(&Float::with_val(p, nu + 1u32), x, ctx)?;
    let mid = rho_eval(nu, x, ctx)?;
    let down = rho_eval(&Float::with_val(p, nu - 1u32), x, ctx)?;
    let rhs = Float::with_val(p, nu * &mid) + Float::with_val(p, x * &down);
    Ok(Check::compare(&up, &rhs, &up, &ctx.tol()))
}

/// Finite-difference `d^n/dx^n ρ_ν(x)` against `(−1)^n ρ_{ν−n}(x)`, `n ∈ {1,2,3}`.
pub fn rho_derivative_check(nu: &Real, n: u32, x: &Real, ctx: &PrecisionContext) -> Result<Check> {
    check_x(x)?;
    let p = ctx.prec();
    let fd = nth_derivative(|s| rho_eval(nu, s, ctx), x, n, ctx)?;
    let mut expected = rho_eval(&Float::with_val(p, nu - n), x, ctx)?;
    if n % 2 == 1 {
        expected = -expected;
    }
    let scale = rho_eval(nu, x, ctx)?.max(&Float::with_val(p, expected.abs_ref()));
    let bound = fd_bound(n, &ctx.tol(), &scale, ctx);
    Ok(Check::new(fd.value - expected, bound))
}
