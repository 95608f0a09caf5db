//! Composition orthogonality: `P_n(θ/t)` with `θ = y D y` acting on the base
//! function `Γ(1+α) y^α (λy+t)^{−α−1}`, integrated against `y^ν e^{−y}`.
//!
//! The algebra is exact on the family `y^{α+j} (λy+t)^{−(α+1+k)}`: exponents
//! are stored as integer offsets `(j, k)` and only coefficients are rounded.
//! Since `θ` multiplies `(1/y) e^{−xt/y}` by `xt`, the composition integral of
//! `P_n(θ/t) θ^m` equals `t^m ∫ P_n x^m ω dx`.

use std::collections::BTreeMap;

use rug::Float;

use crate::calculus::table_accuracy;
use crate::error::{Error, Result};
use crate::kernels::laguerre_coeffs;
use crate::moments::aux_integral_grid;
use crate::numerics::{factorial, gamma_fn, integrate_semiline, Params, PrecisionContext, QuadratureSpec, Real};
use crate::opoly::{build_recurrence, RecurrenceTable};
use crate::report::{Check, IdentityReport};

/// Largest degree accepted by [`composition_orthogonality_check`].
pub const MAX_OPERATOR_DEGREE: usize = 10;

/// `Σ c · y^{α+j} (λy+t)^{−(α+1+k)}`, at most one term per `(j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TermSum {
    pub params: Params,
    pub terms: BTreeMap<(usize, usize), Real>,
}

impl TermSum {
    pub fn zero(params: &Params) -> Self {
        Self {
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `Γ(1+α) y^α (λy+t)^{−(α+1)}`.
    pub fn base(params: &Params, ctx: &PrecisionContext) -> Result<Self> {
        let mut s = Self::zero(params);
        s.add((0, 0), gamma_fn(&(ctx.lift(&params.alpha) + 1u32), ctx)?);
        Ok(s)
    }

    pub fn add(&mut self, key: (usize, usize), c: Real) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn scaled(&self, c: &Real) -> Self {
        let mut out = Self::zero(&self.params);
        for (&key, v) in &self.terms {
            out.add(key, Float::with_val(v.prec(), v * c));
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&key, v) in &other.terms {
            out.add(key, v.clone());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, y: &Real, ctx: &PrecisionContext) -> Real {
        let p = ctx.prec();
        let Params { alpha, lambda, t, .. } = self.params.lift(ctx);
        let ln_y = Float::with_val(p, y.ln_ref());
        let ln_base = (Float::with_val(p, &lambda * y) + &t).ln();
        self.terms.iter().fold(ctx.zero(), |acc, (&(j, k), c)| {
            let e = Float::with_val(p, &alpha + j as u32) * &ln_y
                - Float::with_val(p, &alpha + (k as u32 + 1)) * &ln_base;
            acc + e.exp() * c
        })
    }
}

/// `θ f = y d/dy (y f)`, exactly on the term family:
/// `c y^p (λy+t)^{−q} ↦ c(p+1) y^{p+1}(λy+t)^{−q} − cqλ y^{p+2}(λy+t)^{−q−1}`.
pub fn theta_apply(s: &TermSum) -> TermSum {
    let Params { alpha, lambda, .. } = &s.params;
    let mut out = TermSum::zero(&s.params);
    for (&(j, k), c) in &s.terms {
        let p = c.prec();
        let up = Float::with_val(p, alpha + (j as u32 + 1));
        out.add((j + 1, k), Float::with_val(p, c * &up));
        if !lambda.is_zero() {
            let q = Float::with_val(p, alpha + (k as u32 + 1));
            out.add((j + 2, k + 1), -(Float::with_val(p, c * &q) * lambda));
        }
    }
    out
}

/// Coefficients of `P_n(θ/t)` as a polynomial in `θ`: `c_{n,k}/t^k`.
#[derive(Clone, Debug)]
pub struct OperatorPolynomial {
    pub coeffs: Vec<Real>,
}

impl OperatorPolynomial {
    pub fn new(table: &RecurrenceTable, n: usize) -> Result<Self> {
        let t = &table.params.t;
        if t.is_zero() {
            return Err(Error::Domain("the operator polynomial needs t > 0".into()));
        }
        if n >= table.len() {
            return Err(Error::Domain(format!("degree {n} exceeds the table")));
        }
        let p = table.ctx.prec();
        let mut tk = table.ctx.one();
        let coeffs = table.coeffs[n]
            .iter()
            .map(|c| {
                let v = Float::with_val(p, c / &tk);
                tk *= t;
                v
            })
            .collect();
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner in `θ`: `(…(c_n θS + c_{n−1}S)…)`.
    pub fn apply(&self, s: &TermSum) -> TermSum {
        let mut acc = s.scaled(&self.coeffs[self.degree()]);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = theta_apply(&acc).plus(&s.scaled(c));
        }
        acc
    }
}

/// `∫₀^∞ y^ν e^{−y} s(y) dy` term by term through the Tricomi closed form
/// (elementary Γ values when `λ = 0`), with the sum of absolute term values.
pub fn term_integral(s: &TermSum, nu: &Real, ctx: &PrecisionContext) -> Result<(Real, Real)> {
    let mut out = term_integrals(&[s], nu, ctx)?;
    Ok(out.swap_remove(0))
}

fn term_integrals(sums: &[&TermSum], nu: &Real, ctx: &PrecisionContext) -> Result<Vec<(Real, Real)>> {
    let Some(first) = sums.first() else {
        return Ok(Vec::new());
    };
    let p = ctx.prec();
    let Params { alpha, lambda, t, .. } = first.params.lift(ctx);
    let mut keys: Vec<(usize, usize)> = sums.iter().flat_map(|s| s.terms.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let c = Float::with_val(p, nu + &alpha) + 1u32;
    let d = Float::with_val(p, &alpha + 1u32);
    let values = aux_integral_grid(&c, &d, &lambda, &t, &keys, ctx)?;
    let lookup: BTreeMap<_, _> = keys.into_iter().zip(values).collect();
    Ok(sums
        .iter()
        .map(|s| {
            let mut sum = ctx.zero();
            let mut mag = ctx.zero();
            for (key, coef) in &s.terms {
                let term = Float::with_val(p, coef * &lookup[key]);
                mag += Float::with_val(p, term.abs_ref());
                sum += term;
            }
            (sum, mag)
        })
        .collect())
}

/// `θ^m {y^ν e^{−y}} = m! y^{ν+m} e^{−y} L_m^ν(y)`, checked at each point with
/// `θ` applied exactly on the family `y^{ν+i} e^{−y}`.
pub fn rodrigues_check(nu: &Real, m: usize, y_points: &[Real], ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let p = ctx.prec();
    let nu = ctx.lift(nu);
    // coefficient of y^{ν+i} e^{−y}
    let mut family = vec![ctx.one()];
    for _ in 0..m {
        let mut next = vec![ctx.zero(); family.len() + 2];
        for (i, c) in family.iter().enumerate() {
            next[i + 1] += Float::with_val(p, c * Float::with_val(p, &nu + (i as u32 + 1)));
            next[i + 2] -= c;
        }
        family = next;
    }
    let lag = laguerre_coeffs(m, &nu, ctx)?;
    let fact = factorial(m, ctx);
    y_points
        .iter()
        .map(|y| {
            if *y <= 0 {
                return Err(Error::Domain("the Rodrigues check needs y > 0".into()));
            }
            let y = ctx.lift(y);
            let common = (Float::with_val(p, &nu * Float::with_val(p, y.ln_ref())) - &y).exp();
            let mut lhs = ctx.zero();
            let mut mag = ctx.zero();
            let mut yi = ctx.one();
            for c in &family {
                let term = Float::with_val(p, c * &yi) * &common;
                mag += Float::with_val(p, term.abs_ref());
                lhs += term;
                yi *= &y;
            }
            let ym = Float::with_val(p, rug::ops::Pow::pow(&y, m as u32));
            let rhs = crate::kernels::horner(&lag, &y, ctx) * &fact * ym * &common;
            Ok(Check::compare(&lhs, &rhs, &mag, &(ctx.tol() * 10u32)))
        })
        .collect()
}

/// `(1/y) ∫₀^∞ e^{−x(λ+t/y)} x^α dx = Γ(1+α) y^α/(λy+t)^{α+1}` by quadrature.
pub fn base_function_check(params: &Params, y_points: &[Real], ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let p = ctx.prec();
    let params = params.lift(ctx);
    let base = TermSum::base(&params, ctx)?;
    let alpha = params.alpha.clone();
    y_points
        .iter()
        .map(|y| {
            let y = ctx.lift(y);
            let rate = Float::with_val(p, &params.t / &y) + &params.lambda;
            if rate <= 0 {
                return Err(Error::Domain("the base function needs λy + t > 0".into()));
            }
            let est = integrate_semiline(
                |x, ln_x| Ok((Float::with_val(p, &alpha * ln_x) - Float::with_val(p, &rate * x)).exp()),
                &QuadratureSpec::tanh_sinh().with_scale(Float::with_val(p, 1 / &rate)),
                ctx,
            )?;
            let lhs = est.value / &y;
            let rhs = base.eval(&y, ctx);
            Ok(Check::compare(&lhs, &rhs, &rhs, &(ctx.tol() * 10u32)))
        })
        .collect()
}

/// Composition integrals `∫ y^ν e^{−y} P_n(θ/t) θ^m{base} dy` for
/// `m = 0 … n`: zero for `m < n`, `t^n/a_n` for `m = n`, and `t^m ∫P_n x^m ω`
/// from the moments for every `m`.
pub fn composition_orthogonality_check(params: &Params, n: usize, ctx: &PrecisionContext) -> Result<IdentityReport> {
    if n > MAX_OPERATOR_DEGREE {
        return Err(Error::Capacity(format!(
            "operator polynomials are limited to degree {MAX_OPERATOR_DEGREE}"
        )));
    }
    if params.t <= 0 {
        return Err(Error::Domain("composition orthogonality needs t > 0".into()));
    }
    let table = build_recurrence(params, n, ctx)?;
    composition_report(&table, n)
}

/// [`composition_orthogonality_check`] on an existing table.
pub fn composition_report(table: &RecurrenceTable, n: usize) -> Result<IdentityReport> {
    let ctx = &table.ctx;
    let p = ctx.prec();
    let params = &table.params;
    let op = OperatorPolynomial::new(table, n)?;
    let mut sums = Vec::with_capacity(n + 1);
    let mut s = TermSum::base(params, ctx)?;
    for _ in 0..=n {
        sums.push(op.apply(&s));
        s = theta_apply(&s);
    }
    let refs: Vec<&TermSum> = sums.iter().collect();
    let integrals = term_integrals(&refs, &params.nu, ctx)?;
    let acc = table_accuracy(table) * 10u32;
    let mut r = IdentityReport::new("composition", Some(params));
    let mut tm = ctx.one();
    for (m, (value, mag)) in integrals.into_iter().enumerate() {
        let (moment, moment_mag) = table.integral(&table.coeffs[n], m);
        let via_moments = Float::with_val(p, &moment * &tm);
        if m < n {
            r.push(
                "∫ y^ν e^{−y} P_n(θ/t) θ^m{base} dy = 0",
                Some(n),
                Some(m),
                &Check::new(value.clone(), Float::with_val(p, &mag * &acc)),
            );
        } else {
            let want = Float::with_val(p, &tm / table.a(n));
            let scale = mag.clone().max(&want);
            r.push(
                "∫ y^ν e^{−y} P_n(θ/t) θ^n{base} dy = t^n/a_n",
                Some(n),
                Some(m),
                &Check::compare(&value, &want, &scale, &acc),
            );
        }
        let scale = mag + moment_mag * &tm;
        r.push(
            "composition integral = t^m ∫P_n x^m ω",
            Some(n),
            Some(m),
            &Check::compare(&value, &via_moments, &scale, &acc),
        );
        tm *= &params.t;
    }
    Ok(r)
}
