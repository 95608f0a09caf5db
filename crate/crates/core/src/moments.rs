//! Moments `I_n = ∫₀^∞ x^{n+α} e^{−λx} ρ_ν(xt) dx` of the weight.
//!
//! With `λ, t > 0` the closed form is
//! `I_n = λ^{−ν−α−n−1} t^ν Γ(n+ν+α+1) Γ(n+α+1) Ψ(1+n+α+ν, 1+ν; t/λ)`;
//! the boundary cases `t = 0` and `λ = 0` reduce to products of gamma values.

use rug::Float;

use crate::error::{Error, Result};
use crate::kernels::{psi_batch, rho_eval};
use crate::numerics::linalg::{cholesky, Matrix};
use crate::numerics::{gamma_fn, integrate_semiline_vec, ln_gamma, Params, PrecisionContext, QuadratureSpec, Real};

/// Largest table depth accepted by [`build_moment_table`].
pub const MAX_TABLE_DEGREE: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentSource {
    ClosedForm,
    Quadrature,
    /// `λ = 0`: `t^{−(n+α+1)} Γ(n+α+1) Γ(n+α+ν+1)`.
    MellinLambda0,
    /// `t = 0`: `Γ(ν) Γ(n+α+1) λ^{−(n+α+1)}`.
    GammaT0,
}

impl MomentSource {
    pub fn name(self) -> &'static str {
        match self {
            MomentSource::ClosedForm => "closed-form",
            MomentSource::Quadrature => "quadrature",
            MomentSource::MellinLambda0 => "mellin-lambda0",
            MomentSource::GammaT0 => "gamma-t0",
        }
    }
}

/// `μ_0 … μ_{2N}` at one parameter point.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub params: Params,
    pub n_max: usize,
    pub mu: Vec<Real>,
    pub source: MomentSource,
    /// Precision the table was built at (after any escalation).
    pub ctx: PrecisionContext,
}

impl MomentTable {
    /// `[μ_{i+j+shift}]` for `0 ≤ i, j ≤ n`.
    pub fn hankel(&self, n: usize, shift: usize) -> Matrix {
        hankel(&self.mu, n, shift)
    }
}

pub fn hankel(mu: &[Real], n: usize, shift: usize) -> Matrix {
    (0..=n).map(|i| (0..=n).map(|j| mu[i + j + shift].clone()).collect()).collect()
}

fn source_for(params: &Params) -> MomentSource {
    if params.t.is_zero() {
        MomentSource::GammaT0
    } else if params.lambda.is_zero() {
        MomentSource::MellinLambda0
    } else {
        MomentSource::ClosedForm
    }
}

/// `I_0 … I_{count−1}` from whichever exact formula applies.
pub fn moments_exact(params: &Params, count: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    params.validate()?;
    let p = ctx.prec();
    let Params { alpha, nu, lambda, t } = params.lift(ctx);
    match source_for(params) {
        MomentSource::GammaT0 => {
            let g = gamma_fn(&nu, ctx)?;
            let ln_l = Float::with_val(p, lambda.ln_ref());
            (0..count)
                .map(|n| {
                    let s = Float::with_val(p, &alpha + (n as u32 + 1));
                    let ln = ln_gamma(&s, ctx)? - Float::with_val(p, &s * &ln_l);
                    Ok(ln.exp() * &g)
                })
                .collect()
        }
        MomentSource::MellinLambda0 => {
            let ln_t = Float::with_val(p, t.ln_ref());
            (0..count)
                .map(|n| {
                    let s = Float::with_val(p, &alpha + (n as u32 + 1));
                    let ln = ln_gamma(&s, ctx)? + ln_gamma(&Float::with_val(p, &s + &nu), ctx)?
                        - Float::with_val(p, &s * &ln_t);
                    Ok(ln.exp())
                })
                .collect()
        }
        _ => {
            let z = Float::with_val(p, &t / &lambda);
            let a0 = Float::with_val(p, &alpha + &nu) + 1u32;
            let b = Float::with_val(p, &nu + 1u32);
            let shifts: Vec<(usize, usize)> = (0..count).map(|n| (n, n)).collect();
            let psi = psi_batch(&a0, &b, &z, &shifts, ctx)?;
            let ln_l = Float::with_val(p, lambda.ln_ref());
            let ln_t = Float::with_val(p, t.ln_ref());
            psi.into_iter()
                .enumerate()
                .map(|(n, psi)| {
                    let s = Float::with_val(p, &alpha + (n as u32 + 1));
                    let ln = ln_gamma(&Float::with_val(p, &s + &nu), ctx)? + ln_gamma(&s, ctx)?
                        + Float::with_val(p, &nu * &ln_t)
                        - Float::with_val(p, Float::with_val(p, &s + &nu) * &ln_l);
                    Ok(ln.exp() * psi)
                })
                .collect()
        }
    }
}

/// `I_n` through the Tricomi closed form; needs `λ, t > 0`.
pub fn moment_closed_form(n: usize, params: &Params, ctx: &PrecisionContext) -> Result<Real> {
    if params.lambda <= 0 || params.t <= 0 {
        return Err(Error::Domain("the Tricomi closed form needs λ > 0 and t > 0".into()));
    }
    Ok(moments_exact(params, n + 1, ctx)?.swap_remove(n))
}

/// `I_0 … I_{count−1}` by direct quadrature of `x^{n+α} e^{−λx} ρ_ν(xt)`,
/// evaluating `ρ_ν` by its own integral at every node.
pub fn moments_quadrature(params: &Params, count: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    params.validate()?;
    let p = ctx.prec();
    let Params { alpha, nu, lambda, t } = params.lift(ctx);
    // The inner integrals must be tighter than the outer tolerance, or their
    // noise stalls the outer refinement.
    let inner = ctx.clone().with_tol_digits((ctx.tol_digits() + 8).min(ctx.digits() - 10))?;
    let kernel_const = if t.is_zero() { Some(gamma_fn(&nu, ctx)?) } else { None };
    // The bulk of x^{k} e^{−λx − 2√(xt)} sits near r², λr² + √t r = k.
    let k = Float::with_val(p, &alpha + ((count as u32).saturating_sub(1) / 2 + 1));
    let st = Float::with_val(p, t.sqrt_ref());
    let r = if lambda.is_zero() {
        Float::with_val(p, &k / &st)
    } else {
        let disc = Float::with_val(p, st.square_ref()) + Float::with_val(p, &lambda * &k) * 4u32;
        (disc.sqrt() - &st) / Float::with_val(p, &lambda * 2u32)
    };
    let scale = Float::with_val(p, r.square_ref()).max(&ctx.pow10(-3));
    let est = integrate_semiline_vec(
        |x, ln_x| {
            let rho = match &kernel_const {
                Some(g) => g.clone(),
                None => rho_eval(&nu, &Float::with_val(p, x * &t), &inner)?,
            };
            let mut v = (Float::with_val(p, &alpha * ln_x) - Float::with_val(p, &lambda * x)).exp() * rho;
            let mut out = Vec::with_capacity(count);
            for n in 0..count {
                if n > 0 {
                    v *= x;
                }
                out.push(v.clone());
            }
            Ok(out)
        },
        count,
        &QuadratureSpec::tanh_sinh().with_scale(scale),
        ctx,
    )?;
    Ok(est.values)
}

pub fn moment_quadrature(n: usize, params: &Params, ctx: &PrecisionContext) -> Result<Real> {
    Ok(moments_quadrature(params, n + 1, ctx)?.swap_remove(n))
}

/// `μ_0 … μ_{2N}` with positivity and Hankel positive-definiteness checked;
/// escalates precision when the Cholesky test fails.
pub fn build_moment_table(params: &Params, n_max: usize, ctx: &PrecisionContext) -> Result<MomentTable> {
    if n_max > MAX_TABLE_DEGREE {
        return Err(Error::Capacity(format!(
            "moment tables are limited to degree {MAX_TABLE_DEGREE}, asked for {n_max}"
        )));
    }
    let mut ctx = ctx.clone();
    loop {
        let mu = moments_exact(params, 2 * n_max + 1, &ctx)?;
        if let Some(k) = mu.iter().position(|m| *m <= 0) {
            return Err(Error::Domain(format!("moment μ_{k} is not positive at {params}")));
        }
        let shifted_ok = n_max == 0 || cholesky(&hankel(&mu, n_max - 1, 1), &ctx).is_ok();
        match cholesky(&hankel(&mu, n_max, 0), &ctx) {
            Ok(_) if shifted_ok => {
                return Ok(MomentTable {
                    params: params.lift(&ctx),
                    n_max,
                    mu,
                    source: source_for(params),
                    ctx,
                })
            }
            failure => match ctx.escalate() {
                Some(up) => ctx = up,
                None => {
                    return Err(failure.err().unwrap_or(Error::NotPositiveDefinite {
                        order: n_max,
                        digits: ctx.digits(),
                    }))
                }
            },
        }
    }
}

/// `∫₀^∞ u^{c−1} e^{−u} (λu+t)^{−d} du` for `c > 0`.
///
/// With `z = t/λ` this is `λ^{−d} z^{c−d} Γ(c) Ψ(c, c+1−d; z)`; for `λ = 0`
/// it is `Γ(c) t^{−d}` and for `t = 0` it is `λ^{−d} Γ(c−d)` (needs `c > d`).
pub fn aux_integral(c: &Real, d: &Real, lambda: &Real, t: &Real, ctx: &PrecisionContext) -> Result<Real> {
    Ok(aux_integral_grid(c, d, lambda, t, &[(0, 0)], ctx)?.swap_remove(0))
}

/// [`aux_integral`] at `(c + j, d + k)` for each `(j, k)`, from one quadrature.
pub fn aux_integral_grid(
    c: &Real,
    d: &Real,
    lambda: &Real,
    t: &Real,
    shifts: &[(usize, usize)],
    ctx: &PrecisionContext,
) -> Result<Vec<Real>> {
    let p = ctx.prec();
    if *c <= 0 {
        return Err(Error::Domain("the auxiliary integral needs c > 0".into()));
    }
    if *lambda < 0 || *t < 0 || (lambda.is_zero() && t.is_zero()) {
        return Err(Error::Domain("the auxiliary integral needs λ, t ≥ 0, not both zero".into()));
    }
    let cj = |j: usize| Float::with_val(p, c + j as u32);
    let dk = |k: usize| Float::with_val(p, d + k as u32);
    if lambda.is_zero() {
        let ln_t = Float::with_val(p, t.ln_ref());
        return shifts
            .iter()
            .map(|&(j, k)| Ok((ln_gamma(&cj(j), ctx)? - Float::with_val(p, &dk(k) * &ln_t)).exp()))
            .collect();
    }
    if t.is_zero() {
        let ln_l = Float::with_val(p, lambda.ln_ref());
        return shifts
            .iter()
            .map(|&(j, k)| {
                let e = Float::with_val(p, &cj(j) - &dk(k));
                if e <= 0 {
                    return Err(Error::Domain("at t = 0 the auxiliary integral needs c > d".into()));
                }
                Ok(gamma_fn(&e, ctx)? * (-Float::with_val(p, &dk(k) * &ln_l)).exp())
            })
            .collect();
    }
    let z = Float::with_val(p, t / lambda);
    let b = Float::with_val(p, c - d) + 1u32;
    let psi = psi_batch(c, &b, &z, shifts, ctx)?;
    let ln_l = Float::with_val(p, lambda.ln_ref());
    let ln_z = Float::with_val(p, z.ln_ref());
    shifts
        .iter()
        .zip(psi)
        .map(|(&(j, k), psi)| {
            let (c, d) = (cj(j), dk(k));
            let ln = ln_gamma(&c, ctx)? - Float::with_val(p, &d * &ln_l) + Float::with_val(p, &c - &d) * &ln_z;
            Ok(ln.exp() * psi)
        })
        .collect()
}

/// [`aux_integral`] by direct quadrature.
pub fn aux_integral_quadrature(
    c: &Real,
    d: &Real,
    lambda: &Real,
    t: &Real,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let p = ctx.prec();
    let cm1 = Float::with_val(p, c - 1u32);
    let est = crate::numerics::integrate_semiline(
        |u, ln_u| {
            let base = Float::with_val(p, lambda * u) + t;
            let ln = Float::with_val(p, &cm1 * ln_u) - u - Float::with_val(p, d * Float::with_val(p, base.ln_ref()));
            Ok(ln.exp())
        },
        &QuadratureSpec::tanh_sinh().with_scale(Float::with_val(p, c.abs_ref()).max(&ctx.one())),
        ctx,
    )?;
    Ok(est.value)
}
