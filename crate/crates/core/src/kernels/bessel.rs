//! Bessel functions of the first and second kind at modest precision, and the
//! quotient `ρ_ν/ρ_{ν+1}` as an integral over `1/(J² + Y²)`.
//!
//! Only the modulus `J_μ² + Y_μ²` is needed, so for large arguments its
//! non-oscillatory asymptotic series is used instead of `J` and `Y`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::rho::rho_ladder;
use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, integrate_semiline, PrecisionContext, QuadratureSpec, Real};

/// Argument above which the asymptotic modulus series is used.
pub const MODULUS_SWITCH: u32 = 12;
/// Working digits for the quotient check.
pub const ISMAIL_DIGITS: u32 = 30;
/// Relative agreement demanded by the quotient check.
pub const ISMAIL_TOL: f64 = 1e-6;

/// `J_μ(z)` by its ascending series; `μ` must not be a negative integer.
pub fn bessel_j(mu: &Real, z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let p = ctx.prec();
    let half = Float::with_val(p, z / 2u32);
    let q = -Float::with_val(p, half.square_ref());
    let g = gamma_fn(&Float::with_val(p, mu + 1u32), ctx)?;
    let mut term = Float::with_val(p, half.pow(mu)) / g;
    let mut sum = term.clone();
    let eps = ctx.eps();
    for k in 1u32..10_000 {
        let den = Float::with_val(p, mu + k) * k;
        term *= &q;
        term /= den;
        sum += &term;
        if k as f64 > z.to_f64() && Float::with_val(p, term.abs_ref()) <= Float::with_val(p, sum.abs_ref()) * &eps {
            return Ok(sum);
        }
    }
    Err(Error::Domain("Bessel J series did not converge".into()))
}

fn digamma_int(m: u32, ctx: &PrecisionContext) -> Real {
    // ψ(m) = −γ + Σ_{k<m} 1/k
    let mut s = -Float::with_val(ctx.prec(), Constant::Euler);
    for k in 1..m {
        s += Float::with_val(ctx.prec(), 1) / k;
    }
    s
}

/// `Y_μ(z)`; non-integer orders by the reflection formula, integer orders by
/// the logarithmic series.
pub fn bessel_y(mu: &Real, z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let p = ctx.prec();
    let pi = ctx.pi();
    if !mu.is_integer() {
        let ang = Float::with_val(p, mu * &pi);
        let (s, c) = ang.sin_cos(Float::new(p));
        let jp = bessel_j(mu, z, ctx)?;
        let jm = bessel_j(&Float::with_val(p, -mu), z, ctx)?;
        return Ok((jp * c - jm) / s);
    }
    let n_signed = mu.to_f64() as i64;
    let n = n_signed.unsigned_abs() as u32;
    let half = Float::with_val(p, z / 2u32);
    let ln_half = Float::with_val(p, half.ln_ref());
    let jn = bessel_j(&ctx.int(n as i64), z, ctx)?;
    let mut y = Float::with_val(p, &jn * &ln_half) * 2u32;
    // finite part: Σ_{k<n} (n−k−1)!/k! (z/2)^{2k−n}
    let mut fin = ctx.zero();
    for k in 0..n {
        let f = Float::with_val(p, Float::factorial(n - k - 1)) / Float::with_val(p, Float::factorial(k));
        fin += f * Float::with_val(p, (&half).pow(2 * k as i32 - n as i32));
    }
    y -= fin;
    // Σ_k (ψ(k+1) + ψ(n+k+1)) (−z²/4)^k / (k!(n+k)!) (z/2)^n
    let q = -Float::with_val(p, half.square_ref());
    let mut term = Float::with_val(p, (&half).pow(n)) / Float::with_val(p, Float::factorial(n));
    let mut psi_a = digamma_int(1, ctx);
    let mut psi_b = digamma_int(n + 1, ctx);
    let mut series = Float::with_val(p, &psi_a + &psi_b) * &term;
    let eps = ctx.eps();
    for k in 1u32..10_000 {
        term *= &q;
        term /= Float::with_val(p, k) * (n + k);
        psi_a += Float::with_val(p, 1) / k;
        psi_b += Float::with_val(p, 1) / (n + k);
        let add = Float::with_val(p, &psi_a + &psi_b) * &term;
        series += &add;
        if k as f64 > z.to_f64() && Float::with_val(p, add.abs_ref()) <= Float::with_val(p, series.abs_ref()) * &eps {
            y -= series;
            let y = y / pi;
            // Y_{−n} = (−1)^n Y_n
            return Ok(if n_signed < 0 && n % 2 == 1 { -y } else { y });
        }
    }
    Err(Error::Domain("Bessel Y series did not converge".into()))
}

/// `J_μ(z)² + Y_μ(z)²`.
pub fn bessel_modulus_sq(mu: &Real, z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let p = ctx.prec();
    if *z >= MODULUS_SWITCH {
        let m = Float::with_val(p, mu.square_ref()) * 4u32;
        let z2 = Float::with_val(p, z * 2u32).square();
        let mut c = ctx.one();
        let mut sum = ctx.one();
        let eps = ctx.eps();
        for k in 1u32..200 {
            let odd = Float::with_val(p, 2 * k - 1).square();
            let next = Float::with_val(p, &c * (2 * k - 1)) / (2 * k) * Float::with_val(p, &m - &odd) / &z2;
            if next.is_zero() {
                break;
            }
            if Float::with_val(p, next.abs_ref()) > Float::with_val(p, c.abs_ref()) && k > 1 {
                break;
            }
            sum += &next;
            c = next;
            if Float::with_val(p, c.abs_ref()) <= eps {
                break;
            }
        }
        let pref = Float::with_val(p, 2u32) / (ctx.pi() * z);
        return Ok(pref * sum);
    }
    let j = bessel_j(mu, z, ctx)?;
    let y = bessel_y(mu, z, ctx)?;
    Ok(j.square() + y.square())
}

/// Both sides of `ρ_ν(x)/ρ_{ν+1}(x) = (1/π²) ∫₀^∞ dy / (y (x+y) (J²_{ν+1} + Y²_{ν+1})(2√y))`.
#[derive(Clone, Debug)]
pub struct QuotientCheck {
    pub lhs: Real,
    pub rhs: Real,
}

impl QuotientCheck {
    pub fn relative_gap(&self) -> f64 {
        let d = Float::with_val(self.lhs.prec(), &self.lhs - &self.rhs).abs() / Float::with_val(self.lhs.prec(), self.lhs.abs_ref());
        d.to_f64()
    }

    pub fn pass(&self) -> bool {
        self.relative_gap() <= ISMAIL_TOL
    }
}

/// Evaluates both sides at [`ISMAIL_DIGITS`] digits.
pub fn ismail_quotient_check(nu: &Real, x: &Real) -> Result<QuotientCheck> {
    if *nu < 0 || *x <= 0 {
        return Err(Error::Domain("the quotient check needs ν ≥ 0 and x > 0".into()));
    }
    let ctx = PrecisionContext::oracle(ISMAIL_DIGITS, 12)?;
    let p = ctx.prec();
    let nu = ctx.lift(nu);
    let x = ctx.lift(x);
    let ladder = rho_ladder(&Float::with_val(p, &nu + 1u32), &x, 2, &ctx)?;
    let lhs = Float::with_val(p, &ladder[1] / &ladder[0]);
    let order = Float::with_val(p, &nu + 1u32);
    let spec = QuadratureSpec::tanh_sinh().with_levels(3, 11);
    let est = integrate_semiline(
        |y, _| {
            let z = Float::with_val(p, y.sqrt_ref()) * 2u32;
            let m = bessel_modulus_sq(&order, &z, &ctx)?;
            let den = Float::with_val(p, &x + y) * y * m;
            Ok(den.recip())
        },
        &spec,
        &ctx,
    )?;
    let pi2 = ctx.pi().square();
    Ok(QuotientCheck {
        lhs,
        rhs: est.value / pi2,
    })
}
