//! Parameter calculus of the recurrence data.
//!
//! Derivatives in `λ` and `t` are central differences (with one Richardson
//! step) over tables rebuilt at shifted parameters; the identities are then
//! checked coefficientwise. Bounds are explicit: a table entry is trusted to
//! relative accuracy `tol · κ`, where `κ` is the largest cancellation factor
//! `Σ|c_i c_j μ_{i+j}|` met in the orthonormality sums, and a difference
//! quotient of such entries to `10·max(h³, tol·κ/h)` times their size.

use std::cell::RefCell;

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::kernels::laguerre_coeffs;
use crate::moments::moments_quadrature;
use crate::numerics::linalg::solve;
use crate::numerics::{
    factorial, fd_step, gauss_legendre, integrate_interval_vec, Params, PrecisionContext, QuadratureSpec, Real,
};
use crate::opoly::{build_recurrence, eval_poly, moment_identity_checks, normalization_integrals, RecurrenceTable};
use crate::report::{Check, IdentityReport};

fn abs(x: &Real) -> Real {
    Float::with_val(x.prec(), x.abs_ref())
}

/// Offsets `−h, +h, −h/2, +h/2` as (sign, divisor).
const OFFSETS: [(i32, u32); 4] = [(-1, 1), (1, 1), (-1, 2), (1, 2)];

/// Tables at a centre point and at shifted `λ` and `t`, for central
/// differences of any table quantity. An axis is absent when the parameter is
/// too close to zero for a central stencil.
#[derive(Clone, Debug)]
pub struct ParamGridTables {
    pub center: RecurrenceTable,
    /// The table at `(2λ, 2t)`, for the homogeneity laws.
    pub doubled: RecurrenceTable,
    pub step: Real,
    pub lambda_axis: Option<Vec<RecurrenceTable>>,
    pub t_axis: Option<Vec<RecurrenceTable>>,
    /// Relative accuracy assumed for every table entry.
    pub accuracy: Real,
}

/// A derivative of a vector of table quantities, with the magnitude of the
/// quantities themselves (which sets the rounding noise of the quotient).
#[derive(Clone, Debug)]
pub struct Deriv {
    pub value: Vec<Real>,
    pub base: Vec<Real>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Lambda,
    T,
}

/// `tol · max_n Σ|c_i c_j μ_{i+j}|` over the polynomials of a table.
pub fn table_accuracy(table: &RecurrenceTable) -> Real {
    let amp = table
        .coeffs
        .iter()
        .map(|c| table.pairing(c, c, 0).1)
        .fold(table.ctx.one(), |m, a| m.max(&a));
    amp * table.ctx.tol()
}

impl ParamGridTables {
    pub fn build(center: &Params, n_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        Self::with_step(center, n_max, &fd_step(1, ctx), ctx)
    }

    pub fn with_step(center: &Params, n_max: usize, step: &Real, ctx: &PrecisionContext) -> Result<Self> {
        let p = ctx.prec();
        let center = center.lift(ctx);
        let step = ctx.lift(step);
        let table = build_recurrence(&center, n_max, ctx)?;
        let room = Float::with_val(p, &step * 2u32);
        let axis = |value: &Real, set: &dyn Fn(Real) -> Result<Params>| -> Result<Option<Vec<RecurrenceTable>>> {
            if *value <= room {
                return Ok(None);
            }
            OFFSETS
                .iter()
                .map(|&(s, d)| {
                    let v = Float::with_val(p, value + Float::with_val(p, &step * s) / d);
                    build_recurrence(&set(v)?, n_max, ctx)
                })
                .collect::<Result<Vec<_>>>()
                .map(Some)
        };
        let lambda_axis = axis(&center.lambda, &|v| center.with_lambda(v))?;
        let t_axis = axis(&center.t, &|v| center.with_t(v))?;
        let doubled = build_recurrence(
            &Params::new(
                center.alpha.clone(),
                center.nu.clone(),
                Float::with_val(p, &center.lambda * 2u32),
                Float::with_val(p, &center.t * 2u32),
            )?,
            n_max,
            ctx,
        )?;
        let accuracy = std::iter::once(&table)
            .chain(lambda_axis.iter().flatten())
            .chain(t_axis.iter().flatten())
            .map(table_accuracy)
            .fold(ctx.zero(), |m, a| m.max(&a));
        Ok(Self {
            center: table,
            doubled,
            step,
            lambda_axis,
            t_axis,
            accuracy,
        })
    }

    pub fn params(&self) -> &Params {
        &self.center.params
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.center.ctx
    }

    fn axis(&self, axis: Axis) -> Result<&[RecurrenceTable]> {
        let (tabs, name) = match axis {
            Axis::Lambda => (&self.lambda_axis, "λ"),
            Axis::T => (&self.t_axis, "t"),
        };
        tabs.as_deref()
            .ok_or_else(|| Error::Domain(format!("{name} is too close to zero for a central difference")))
    }

    /// Raw central difference with step `h` (or `h/2` when `fine`).
    pub fn central(&self, axis: Axis, fine: bool, f: impl Fn(&RecurrenceTable) -> Vec<Real>) -> Result<Vec<Real>> {
        let tabs = self.axis(axis)?;
        let p = self.ctx().prec();
        let (lo, hi, div) = if fine { (&tabs[2], &tabs[3], 1u32) } else { (&tabs[0], &tabs[1], 2u32) };
        let width = Float::with_val(p, &self.step * div);
        Ok(f(hi).iter().zip(f(lo)).map(|(a, b)| Float::with_val(p, a - b) / &width).collect())
    }

    /// Richardson-extrapolated derivative of `f` along an axis.
    pub fn derivative(&self, axis: Axis, f: impl Fn(&RecurrenceTable) -> Vec<Real>) -> Result<Deriv> {
        let coarse = self.central(axis, false, &f)?;
        let fine = self.central(axis, true, &f)?;
        let value = coarse
            .into_iter()
            .zip(fine)
            .map(|(c, f)| (f * 4u32 - c) / 3u32)
            .collect();
        let base = f(&self.center).iter().map(abs).collect();
        Ok(Deriv { value, base })
    }

    /// Bound on the extrapolated difference quotient of a quantity of size one.
    fn fd_noise(&self) -> Real {
        let p = self.ctx().prec();
        let h3 = Float::with_val(p, (&self.step).pow(3u32));
        let noise = Float::with_val(p, &self.accuracy / &self.step);
        h3.max(&noise) * 10u32
    }

    /// Adds `coef · (λ∂_λ + sign·t∂_t) f` to `terms`, skipping a direction whose
    /// multiplier vanishes.
    fn add_euler(
        &self,
        terms: &mut Terms,
        coef: &Real,
        sign: i32,
        f: impl Fn(&RecurrenceTable) -> Vec<Real>,
    ) -> Result<()> {
        let p = self.ctx().prec();
        let Params { lambda, t, .. } = self.params();
        if !lambda.is_zero() {
            terms.derived(&Float::with_val(p, coef * lambda), &self.derivative(Axis::Lambda, &f)?);
        }
        if !t.is_zero() {
            let c = Float::with_val(p, coef * t) * sign;
            terms.derived(&c, &self.derivative(Axis::T, &f)?);
        }
        Ok(())
    }

    /// Adds `coef · t (∂_t − ∂_λ) f`, the derivative along `λ + t = const`.
    fn add_path(&self, terms: &mut Terms, coef: &Real, f: impl Fn(&RecurrenceTable) -> Vec<Real>) -> Result<()> {
        let p = self.ctx().prec();
        let ct = Float::with_val(p, coef * &self.params().t);
        terms.derived(&ct, &self.derivative(Axis::T, &f)?);
        terms.derived(&-ct, &self.derivative(Axis::Lambda, &f)?);
        Ok(())
    }
}

/// Running coefficientwise sum of identity terms with the magnitudes that
/// determine its error bound.
struct Terms {
    value: Vec<Real>,
    /// Size of quantities entering through difference quotients.
    fd: Vec<Real>,
    /// Size of the remaining terms.
    plain: Vec<Real>,
}

impl Terms {
    fn new(len: usize, ctx: &PrecisionContext) -> Self {
        Self {
            value: vec![ctx.zero(); len],
            fd: vec![ctx.zero(); len],
            plain: vec![ctx.zero(); len],
        }
    }

    fn scalar(ctx: &PrecisionContext) -> Self {
        Self::new(1, ctx)
    }

    fn plain(&mut self, coef: &Real, v: &[Real]) {
        for (k, x) in v.iter().enumerate() {
            let term = Float::with_val(x.prec(), coef * x);
            self.plain[k] += abs(&term);
            self.value[k] += term;
        }
    }

    fn constant(&mut self, c: &Real) {
        self.plain(c, &[Float::with_val(c.prec(), 1)]);
    }

    fn derived(&mut self, coef: &Real, d: &Deriv) {
        for (k, (v, b)) in d.value.iter().zip(&d.base).enumerate() {
            self.value[k] += Float::with_val(v.prec(), coef * v);
            self.fd[k] += abs(coef) * b;
        }
    }

    /// `coef · d · v` for a scalar derivative `d`.
    fn scaled(&mut self, coef: &Real, d: &Deriv, v: &[Real]) {
        let (dv, base) = (&d.value[0], &d.base[0]);
        for (k, x) in v.iter().enumerate() {
            let c = Float::with_val(x.prec(), coef * x);
            self.value[k] += Float::with_val(x.prec(), &c * dv);
            self.fd[k] += abs(&c) * base;
        }
    }

    fn bounds(&self, grid: &ParamGridTables) -> Vec<Real> {
        let noise = grid.fd_noise();
        let plain = Float::with_val(grid.ctx().prec(), &grid.accuracy * 10u32);
        self.fd
            .iter()
            .zip(&self.plain)
            .map(|(f, q)| Float::with_val(f.prec(), f * &noise) + Float::with_val(q.prec(), q * &plain))
            .collect()
    }

    /// The coefficient with the largest residual-to-bound ratio.
    fn check(&self, grid: &ParamGridTables) -> Check {
        self.value
            .iter()
            .zip(self.bounds(grid))
            .map(|(v, b)| Check::new(v.clone(), b))
            .max_by(|a, b| a.ratio().partial_cmp(&b.ratio()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("at least one coefficient")
    }
}

fn need_degree(grid: &ParamGridTables, n: usize) -> Result<()> {
    if n > grid.center.n_max {
        return Err(Error::Domain(format!(
            "degree {n} exceeds the grid tables (built to {})",
            grid.center.n_max
        )));
    }
    Ok(())
}

fn x_derivative(c: &[Real]) -> Vec<Real> {
    c.iter().enumerate().map(|(k, v)| Float::with_val(v.prec(), v * k as u32)).collect()
}

fn sq(x: &Real) -> Real {
    Float::with_val(x.prec(), x.square_ref())
}

fn lambda_derivative_terms(grid: &ParamGridTables, n: usize) -> Result<Terms> {
    let tab = &grid.center;
    let ctx = grid.ctx();
    let p = ctx.prec();
    let mut s = Terms::new(n + 1, ctx);
    s.derived(&ctx.one(), &grid.derivative(Axis::Lambda, |t| t.coeffs[n].clone())?);
    let da = grid.derivative(Axis::Lambda, |t| vec![t.a(n).clone()])?;
    s.scaled(&-Float::with_val(p, 1 / tab.a(n)), &da, &tab.coeffs[n]);
    if n > 0 {
        s.plain(&-tab.big_a[n].clone(), &tab.coeffs[n - 1]);
    }
    Ok(s)
}

/// `∂_λP_n = (∂_λa_n/a_n)P_n + A_nP_{n−1}`, coefficientwise.
pub fn lambda_derivative_report(grid: &ParamGridTables, n: usize) -> Result<IdentityReport> {
    need_degree(grid, n)?;
    let s = lambda_derivative_terms(grid, n)?;
    let mut r = IdentityReport::new("lambda-derivative", Some(grid.params()));
    r.push("∂_λP_n = (∂_λa_n/a_n)P_n + A_nP_{n−1}", Some(n), None, &s.check(grid));
    Ok(r)
}

fn t_derivative_terms(grid: &ParamGridTables, n: usize) -> Result<Terms> {
    let tab = &grid.center;
    let ctx = grid.ctx();
    let p = ctx.prec();
    let Params { lambda, t, .. } = grid.params();
    let mut s = Terms::new(n + 1, ctx);
    s.derived(t, &grid.derivative(Axis::T, |tb| tb.coeffs[n].clone())?);
    s.plain(&-ctx.one(), &x_derivative(&tab.coeffs[n]));
    let da = grid.derivative(Axis::T, |tb| vec![tb.a(n).clone()])?;
    s.scaled(&-Float::with_val(p, t / tab.a(n)), &da, &tab.coeffs[n]);
    s.plain(&ctx.int(n as i64), &tab.coeffs[n]);
    if n > 0 {
        s.plain(&Float::with_val(p, lambda * &tab.big_a[n]), &tab.coeffs[n - 1]);
    }
    Ok(s)
}

/// `(t∂_t − x∂_x)P_n = (t∂_ta_n/a_n − n)P_n − λA_nP_{n−1}`, coefficientwise.
pub fn t_derivative_report(grid: &ParamGridTables, n: usize) -> Result<IdentityReport> {
    need_degree(grid, n)?;
    let s = t_derivative_terms(grid, n)?;
    let mut r = IdentityReport::new("t-derivative", Some(grid.params()));
    r.push("(t∂_t − x∂_x)P_n = (t∂_ta_n/a_n − n)P_n − λA_nP_{n−1}", Some(n), None, &s.check(grid));
    Ok(r)
}

fn homogeneity_terms(grid: &ParamGridTables, n: usize) -> Result<Terms> {
    let tab = &grid.center;
    let ctx = grid.ctx();
    let mut s = Terms::new(n + 1, ctx);
    grid.add_euler(&mut s, &ctx.one(), 1, |t| t.coeffs[n].clone())?;
    s.plain(&-ctx.one(), &x_derivative(&tab.coeffs[n]));
    let half_a1 = Float::with_val(ctx.prec(), &grid.params().alpha + 1u32) / 2u32;
    s.plain(&-half_a1, &tab.coeffs[n]);
    Ok(s)
}

/// Coefficient residual vectors of the `λ`-derivative, `t`-derivative and
/// homogeneity identities of `P_n`.
#[derive(Clone, Debug)]
pub struct FlowResiduals {
    pub lambda: Vec<Real>,
    pub t: Vec<Real>,
    pub homogeneity: Vec<Real>,
}

pub fn flow_residuals(grid: &ParamGridTables, n: usize) -> Result<FlowResiduals> {
    need_degree(grid, n)?;
    Ok(FlowResiduals {
        lambda: lambda_derivative_terms(grid, n)?.value,
        t: t_derivative_terms(grid, n)?.value,
        homogeneity: homogeneity_terms(grid, n)?.value,
    })
}

/// `(λ∂_λ + t∂_t − x∂_x)P_n = ((α+1)/2) P_n` and
/// `(λ∂_λ + t∂_t)b_n = (n + (α−1)/2) b_n`, with the exact scaling laws
/// `P_n(x; 2λ, 2t) = 2^{(α+1)/2} P_n(2x; λ, t)` and
/// `b_n(2λ, 2t) = 2^{n+(α−1)/2} b_n(λ, t)` that integrate them.
pub fn homogeneity_report(grid: &ParamGridTables, n: usize) -> Result<IdentityReport> {
    need_degree(grid, n)?;
    let tab = &grid.center;
    let ctx = grid.ctx();
    let p = ctx.prec();
    let alpha = &grid.params().alpha;
    let mut r = IdentityReport::new("homogeneity", Some(grid.params()));
    let s = homogeneity_terms(grid, n)?;
    let half_a1 = Float::with_val(p, alpha + 1u32) / 2u32;
    r.push("(λ∂_λ + t∂_t − x∂_x)P_n = ((α+1)/2)P_n", Some(n), None, &s.check(grid));

    let two = ctx.int(2);
    let plain_tol = Float::with_val(p, &grid.accuracy * 10u32);
    let worst = tab.coeffs[n]
        .iter()
        .zip(&grid.doubled.coeffs[n])
        .enumerate()
        .map(|(k, (c, d))| {
            // coefficient of x^k scales by 2^{(α+1)/2 + k}
            let e = Float::with_val(p, &half_a1 + k as u32);
            let want = Float::with_val(p, two.clone().pow(&e)) * c;
            Check::compare(d, &want, &want, &plain_tol)
        })
        .max_by(|a, b| a.ratio().partial_cmp(&b.ratio()).unwrap_or(std::cmp::Ordering::Equal))
        .expect("non-empty");
    r.push("P_n(x; 2λ, 2t) = 2^{(α+1)/2} P_n(2x; λ, t)", Some(n), None, &worst);

    if n == 0 {
        r.note("n = 0: b_0 ≡ 0, the sub-leading law is empty");
        return Ok(r);
    }
    let mut s = Terms::scalar(ctx);
    grid.add_euler(&mut s, &ctx.one(), 1, |t| vec![t.b(n)])?;
    let e = Float::with_val(p, alpha - 1u32) / 2u32 + n as u32;
    s.plain(&-e.clone(), &[tab.b(n)]);
    r.push("(λ∂_λ + t∂_t)b_n = (n + (α−1)/2)b_n", Some(n), None, &s.check(grid));
    let want = Float::with_val(p, two.pow(&e)) * tab.b(n);
    r.push(
        "b_n(2λ, 2t) = 2^{n+(α−1)/2} b_n(λ, t)",
        Some(n),
        None,
        &Check::compare(&grid.doubled.b(n), &want, &want, &plain_tol),
    );
    Ok(r)
}

/// Differential relations of `b_n/a_n` and `B_n`:
/// `∂_λ(b_n/a_n) = A_n²`, `∂_t(t b_n/a_n) = −λA_n²`, `(λ∂_λ + t∂_t)B_n + B_n = 0`,
/// `(λ∂_λ − t∂_t)(b_n/a_n) − b_n/a_n = 2λA_n²`,
/// `(λ∂_λ − t∂_t)B_n − B_n = 2λ(A_n² − A_{n+1}²)`, and `B_n(2λ, 2t) = B_n/2`.
pub fn coefficient_flow_report(grid: &ParamGridTables, n: usize) -> Result<IdentityReport> {
    need_degree(grid, n)?;
    let tab = &grid.center;
    let ctx = grid.ctx();
    let p = ctx.prec();
    let Params { lambda, t, .. } = grid.params();
    let mut r = IdentityReport::new("coefficient-flows", Some(grid.params()));
    let ba = |tb: &RecurrenceTable| vec![Float::with_val(p, tb.b(n) / tb.a(n))];
    let bb = |tb: &RecurrenceTable| vec![tb.big_b[n].clone()];
    let f = ba(tab);
    let a2 = sq(&tab.big_a[n]);
    let a2_next = sq(&tab.big_a[n + 1]);
    let two_lambda = Float::with_val(p, lambda * 2u32);

    if n > 0 {
        let mut s = Terms::scalar(ctx);
        s.derived(&ctx.one(), &grid.derivative(Axis::Lambda, ba)?);
        s.constant(&-a2.clone());
        r.push("∂_λ(b_n/a_n) = A_n²", Some(n), None, &s.check(grid));

        let mut s = Terms::scalar(ctx);
        s.plain(&ctx.one(), &f);
        if !t.is_zero() {
            s.derived(t, &grid.derivative(Axis::T, ba)?);
        }
        s.constant(&Float::with_val(p, lambda * &a2));
        r.push("∂_t(t b_n/a_n) = −λA_n²", Some(n), None, &s.check(grid));

        let mut s = Terms::scalar(ctx);
        grid.add_euler(&mut s, &ctx.one(), -1, ba)?;
        s.plain(&-ctx.one(), &f);
        s.constant(&-Float::with_val(p, &two_lambda * &a2));
        r.push("(λ∂_λ − t∂_t)(b_n/a_n) − b_n/a_n = 2λA_n²", Some(n), None, &s.check(grid));
    }

    let mut s = Terms::scalar(ctx);
    grid.add_euler(&mut s, &ctx.one(), 1, bb)?;
    s.constant(&tab.big_b[n]);
    r.push("(λ∂_λ + t∂_t)B_n + B_n = 0", Some(n), None, &s.check(grid));

    let mut s = Terms::scalar(ctx);
    grid.add_euler(&mut s, &ctx.one(), -1, bb)?;
    s.constant(&-tab.big_b[n].clone());
    s.constant(&-Float::with_val(p, &two_lambda * Float::with_val(p, &a2 - &a2_next)));
    r.push("(λ∂_λ − t∂_t)B_n − B_n = 2λ(A_n² − A_{n+1}²)", Some(n), None, &s.check(grid));

    let half = Float::with_val(p, &tab.big_b[n] / 2u32);
    let tol = Float::with_val(p, &grid.accuracy * 10u32);
    r.push(
        "B_n(2λ, 2t) = B_n(λ, t)/2",
        Some(n),
        None,
        &Check::compare(&grid.doubled.big_b[n], &half, &half, &tol),
    );
    Ok(r)
}

/// Identities of the leading coefficient: `B_n = 2∂_λa_n/a_n`,
/// `2t∂_ta_n/a_n = 2n+α+1−λB_n`, `(λ∂_λ + t∂_t)a_n = (n+(α+1)/2)a_n`,
/// `(λ∂_λ + t∂_t)A_n + A_n = 0`, and the scaling law of `a_n`.
pub fn leading_coefficient_report(grid: &ParamGridTables, n: usize) -> Result<IdentityReport> {
    need_degree(grid, n)?;
    let tab = &grid.center;
    let ctx = grid.ctx();
    let p = ctx.prec();
    let Params { alpha, lambda, t, .. } = grid.params();
    let mut r = IdentityReport::new("leading-coefficient", Some(grid.params()));
    let a = |tb: &RecurrenceTable| vec![tb.a(n).clone()];
    let inv_a = Float::with_val(p, 1 / tab.a(n));
    let one = [ctx.one()];

    let mut s = Terms::scalar(ctx);
    s.constant(&tab.big_b[n]);
    s.scaled(&-Float::with_val(p, &inv_a * 2u32), &grid.derivative(Axis::Lambda, a)?, &one);
    r.push("B_n = 2∂_λa_n/a_n", Some(n), None, &s.check(grid));

    let mut s = Terms::scalar(ctx);
    if !t.is_zero() {
        s.scaled(&(Float::with_val(p, t * &inv_a) * 2u32), &grid.derivative(Axis::T, a)?, &one);
    }
    s.constant(&-(Float::with_val(p, alpha + (2 * n as u32 + 1))));
    s.constant(&Float::with_val(p, lambda * &tab.big_b[n]));
    r.push("2t∂_ta_n/a_n = 2n + α + 1 − λB_n", Some(n), None, &s.check(grid));

    let e = Float::with_val(p, alpha + 1u32) / 2u32 + n as u32;
    let mut s = Terms::scalar(ctx);
    grid.add_euler(&mut s, &ctx.one(), 1, a)?;
    s.constant(&-Float::with_val(p, &e * tab.a(n)));
    r.push("(λ∂_λ + t∂_t)a_n = (n + (α+1)/2)a_n", Some(n), None, &s.check(grid));

    if n > 0 {
        let mut s = Terms::scalar(ctx);
        grid.add_euler(&mut s, &ctx.one(), 1, |tb| vec![tb.big_a[n].clone()])?;
        s.constant(&tab.big_a[n]);
        r.push("(λ∂_λ + t∂_t)A_n + A_n = 0", Some(n), None, &s.check(grid));
    }

    let want = Float::with_val(p, ctx.int(2).pow(&e)) * tab.a(n);
    let tol = Float::with_val(p, &grid.accuracy * 10u32);
    r.push(
        "a_n(2λ, 2t) = 2^{n+(α+1)/2} a_n(λ, t)",
        Some(n),
        None,
        &Check::compare(grid.doubled.a(n), &want, &want, &tol),
    );
    Ok(r)
}

/// Exact moment identities of `P_n`: `∫P_n x^{n+j} dμ` for `j = 0, 1, 2`
/// and the second/third moments of `P_n²`.
pub fn moment_identity_report(table: &RecurrenceTable, n: usize) -> Result<IdentityReport> {
    let mut r = IdentityReport::new("moment-identities", Some(&table.params));
    let norms = normalization_integrals(table, n)?;
    let names = [
        "∫P_n x^n = 1/a_n",
        "∫P_n x^{n+1} = −b_{n+1}/(a_{n+1}a_n)",
        "∫P_n x^{n+2} = b_{n+2}b_{n+1}/(a_{n+2}a_{n+1}a_n) − d_{n+2}/(a_{n+2}a_n)",
    ];
    for (name, chk) in names.iter().zip(&norms.checks) {
        r.push(name, Some(n), None, chk);
    }
    if n >= 1 && n < table.n_max {
        for (name, chk) in moment_identity_checks(table, n)? {
            r.push(name, Some(n), None, &chk);
        }
    } else {
        r.note(format!("n = {n}: the P_n² moment identities need 1 ≤ n < N"));
    }
    Ok(r)
}

/// At `t = 0`: `d/dx P_n(x; λ, 0) = √(nλ) P_{n−1}^{α+1}(x; λ, 0)`, where the
/// right-hand family is built for the weight with `α+1`. Coefficientwise for
/// `1 ≤ n ≤ N`.
pub fn laguerre_derivative_report(params: &Params, n_max: usize, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let p = ctx.prec();
    let base = params.with_t(ctx.zero())?;
    let shifted = Params::new(
        Float::with_val(p, &base.alpha + 1u32),
        base.nu.clone(),
        base.lambda.clone(),
        base.t.clone(),
    )?;
    let table = build_recurrence(&base, n_max, ctx)?;
    let up = build_recurrence(&shifted, n_max, ctx)?;
    let tol = Float::with_val(p, table_accuracy(&table).max(&table_accuracy(&up))) * 10u32;
    let mut r = IdentityReport::new("laguerre-derivative", Some(&base));
    for n in 1..=n_max {
        let c = Float::with_val(p, &base.lambda * n as u32).sqrt();
        let mut worst = Check::new(ctx.zero(), ctx.zero());
        for k in 1..=n {
            let lhs = Float::with_val(p, &table.coeffs[n][k] * k as u32);
            let rhs = Float::with_val(p, &c * &up.coeffs[n - 1][k - 1]);
            let chk = Check::compare(&lhs, &rhs, &abs(&lhs).max(&abs(&rhs)), &tol);
            if k == 1 || chk.ratio() > worst.ratio() {
                worst = chk;
            }
        }
        r.push("d/dx P_n(x; λ, 0) = √(nλ) P^{α+1}_{n−1}(x; λ, 0)", Some(n), None, &worst);
    }
    Ok(r)
}

/// `∫P_n² ρ_{ν+1}(xt) e^{−λx} x^α dx = 2n+α+ν+1 − λB_n` and
/// `∫P_n² ρ_{ν+1}(xt) e^{−λx} x^{α+1} dx = (α+2n+2+ν)B_n − λ(A²_{n+1}+B_n²+A_n²) − 2b_n/a_n`.
///
/// The shifted-order moments are integrated directly at the precision of
/// `quad`, with `ρ_{ν+1}` evaluated at every node.
pub fn shifted_kernel_report(table: &RecurrenceTable, n: usize, quad: &PrecisionContext) -> Result<IdentityReport> {
    if n > table.n_max {
        return Err(Error::Domain(format!("degree {n} exceeds the table")));
    }
    let Params { alpha, nu, lambda, t } = &table.params;
    if t.is_zero() {
        return Err(Error::Domain("the shifted-kernel integrals need t > 0".into()));
    }
    let ctx = &table.ctx;
    let p = ctx.prec();
    let shifted = Params::new(alpha.clone(), Float::with_val(p, nu + 1u32), lambda.clone(), t.clone())?;
    let raw = moments_quadrature(&shifted, 2 * n + 2, quad)?;
    let moments: Vec<Real> = raw.iter().map(|m| ctx.lift(m)).collect();
    let c = &table.coeffs[n];
    let pair = |shift: usize| {
        let mut sum = ctx.zero();
        let mut mag = ctx.zero();
        for (i, ci) in c.iter().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                let term = Float::with_val(p, ci * cj) * &moments[i + j + shift];
                mag += abs(&term);
                sum += term;
            }
        }
        (sum, mag)
    };
    let qtol = Float::with_val(p, quad.tol() * 10u32);
    let tol = Float::with_val(p, table_accuracy(table) * 10u32);
    let bn = &table.big_b[n];
    let mut r = IdentityReport::new("shifted-kernel", Some(&table.params));

    let (lhs, mag) = pair(0);
    let lb = Float::with_val(p, lambda * bn);
    let rhs = Float::with_val(p, alpha + nu) + (2 * n as u32 + 1) - &lb;
    let bound = Float::with_val(p, &mag * &qtol) + (abs(&rhs) + abs(&lb)) * &tol;
    r.push(
        "∫P_n² ρ_{ν+1}(xt) x^α e^{−λx} = 2n + α + ν + 1 − λB_n",
        Some(n),
        None,
        &Check::new(lhs - &rhs, bound),
    );

    let (lhs, mag) = pair(1);
    let sigma = sq(&table.big_a[n + 1]) + sq(bn) + sq(&table.big_a[n]);
    let terms = [
        Float::with_val(p, alpha + nu) * bn + Float::with_val(p, bn * (2 * n as u32 + 2)),
        -Float::with_val(p, lambda * &sigma),
        -(Float::with_val(p, table.b(n) / table.a(n)) * 2u32),
    ];
    let rhs = terms.iter().fold(ctx.zero(), |acc, x| acc + x);
    let scale = terms.iter().fold(ctx.zero(), |acc, x| acc + abs(x));
    let bound = Float::with_val(p, &mag * &qtol) + scale * &tol;
    r.push(
        "∫P_n² ρ_{ν+1}(xt) x^{α+1} e^{−λx} = (α+2n+2+ν)B_n − λ(A²_{n+1}+B²_n+A²_n) − 2b_n/a_n",
        Some(n),
        None,
        &Check::new(lhs - &rhs, bound),
    );
    Ok(r)
}

/// Separation factor demanded between the first non-vanishing integral and
/// the level of the vanishing ones.
pub const QUASI_SEPARATION: u32 = 1000;

fn quasi_entries(grid: &ParamGridTables, n: usize, path: bool, r: &mut IdentityReport) -> Result<()> {
    let tab = &grid.center;
    let ctx = grid.ctx();
    let p = ctx.prec();
    let mut s = Terms::new(n + 1, ctx);
    if path {
        grid.add_path(&mut s, &ctx.one(), |tb| tb.coeffs[n].clone())?;
    } else {
        s.derived(&grid.params().t, &grid.derivative(Axis::T, |tb| tb.coeffs[n].clone())?);
    }
    s.plain(&-ctx.one(), &x_derivative(&tab.coeffs[n]));
    let errs = s.bounds(grid);
    let (label, target) = if path {
        ("(t d/dt − x∂_x)P_n", -Float::with_val(p, 1 / tab.a(n)))
    } else {
        ("(t∂_t − x∂_x)P_n", -Float::with_val(p, &grid.params().lambda / tab.a(n)))
    };
    let tol = ctx.tol() * 10u32;
    let mut zero_level = ctx.zero();
    for m in 0..n {
        let (v, mag) = tab.integral(&s.value, m);
        let spread = errs
            .iter()
            .enumerate()
            .fold(ctx.zero(), |acc, (k, e)| acc + Float::with_val(p, e * &tab.mu[k + m]));
        let bound = spread + mag * &tol;
        if m + 1 < n {
            zero_level = zero_level.max(&bound).max(&abs(&v));
            r.push(&format!("∫ {label} x^m ω = 0"), Some(n), Some(m), &Check::new(v, bound));
        } else {
            let bound = bound + abs(&target) * &grid.accuracy * 10u32;
            r.push(
                &format!("∫ {label} x^{{n−1}} ω = {}/a_n", if path { "−1" } else { "−λ" }),
                Some(n),
                Some(m),
                &Check::compare(&v, &target, &ctx.one(), &bound),
            );
            // pass iff 10³ · (zero level) ≤ |∫ … x^{n−1}|
            r.push(
                &format!("|∫ {label} x^{{n−1}} ω| ≥ 10³ × zero level"),
                Some(n),
                Some(m),
                &Check::new(zero_level.clone() * QUASI_SEPARATION, abs(&v)),
            );
        }
    }
    Ok(())
}

/// `Q_n = (t∂_t − x∂_x)P_n` is orthogonal to `x^m`, `m ≤ n−2`, and not to
/// `x^{n−1}`.
pub fn quasi_orthogonality_report(grid: &ParamGridTables, n: usize) -> Result<IdentityReport> {
    need_degree(grid, n)?;
    let params = grid.params();
    if n < 2 || params.t.is_zero() || params.lambda.is_zero() {
        return Err(Error::Domain("quasi-orthogonality needs n ≥ 2, λ > 0 and t > 0".into()));
    }
    let mut r = IdentityReport::new("quasi-orthogonality", Some(params));
    quasi_entries(grid, n, false, &mut r)?;
    Ok(r)
}

/// The one-parameter family `(λ, t) = (1−t, t)`, `0 < t < 1`, with the total
/// derivative `d/dt = ∂_t − ∂_λ`:
/// `(t d/dt − x∂_x)P_n = (t (da_n/dt)/a_n − n)P_n − A_nP_{n−1}`,
/// `d/dt(t b_n/a_n) = −A_n²`, `d/dt(tB_n) = A²_{n+1} − A²_n`,
/// quasi-orthogonality of `(t d/dt − x∂_x)P_n`, and agreement of the path
/// tables near `t = 0` and `t = 1` with the `t = 0` and `λ = 0` tables.
pub fn path_report(alpha: &Real, nu: &Real, t: &Real, n_max: usize, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let p = ctx.prec();
    if *t <= 0 || *t >= 1 {
        return Err(Error::Domain("the path parameter must lie in (0, 1)".into()));
    }
    let center = Params::new(ctx.lift(alpha), ctx.lift(nu), Float::with_val(p, 1 - t), ctx.lift(t))?;
    let grid = ParamGridTables::build(&center, n_max, ctx)?;
    let tab = &grid.center;
    let t = &grid.params().t;
    let mut r = IdentityReport::new("path", Some(grid.params()));
    for n in 0..=n_max {
        let mut s = Terms::new(n + 1, ctx);
        grid.add_path(&mut s, &ctx.one(), |tb| tb.coeffs[n].clone())?;
        s.plain(&-ctx.one(), &x_derivative(&tab.coeffs[n]));
        let mut da = Terms::scalar(ctx);
        grid.add_path(&mut da, &ctx.one(), |tb| vec![tb.a(n).clone()])?;
        // −(t da/dt / a_n) P_n as a difference-quotient term
        let d = Deriv {
            value: da.value.clone(),
            base: vec![Float::with_val(p, t * 2u32) * tab.a(n)],
        };
        s.scaled(&-Float::with_val(p, 1 / tab.a(n)), &d, &tab.coeffs[n]);
        s.plain(&ctx.int(n as i64), &tab.coeffs[n]);
        if n > 0 {
            s.plain(&tab.big_a[n], &tab.coeffs[n - 1]);
        }
        r.push("(t d/dt − x∂_x)P_n = (t (da_n/dt)/a_n − n)P_n − A_nP_{n−1}", Some(n), None, &s.check(&grid));

        if n > 0 {
            let ba = |tb: &RecurrenceTable| vec![Float::with_val(p, tb.b(n) / tb.a(n))];
            let mut s = Terms::scalar(ctx);
            s.plain(&ctx.one(), &ba(tab));
            grid.add_path(&mut s, &ctx.one(), ba)?;
            s.constant(&sq(&tab.big_a[n]));
            r.push("d/dt(t b_n/a_n) = −A_n²", Some(n), None, &s.check(&grid));
        }

        let mut s = Terms::scalar(ctx);
        s.constant(&tab.big_b[n]);
        grid.add_path(&mut s, &ctx.one(), |tb| vec![tb.big_b[n].clone()])?;
        s.constant(&-sq(&tab.big_a[n + 1]));
        s.constant(&sq(&tab.big_a[n]));
        r.push("d/dt(t B_n) = A²_{n+1} − A²_n", Some(n), None, &s.check(&grid));

        if n >= 2 {
            quasi_entries(&grid, n, true, &mut r)?;
        }
    }
    path_endpoints(&center, n_max, ctx, &mut r)?;
    Ok(r)
}

/// Offset from the ends of the path used by the endpoint comparison.
pub const PATH_END_OFFSET: i32 = -30;

fn path_endpoints(center: &Params, n_max: usize, ctx: &PrecisionContext, r: &mut IdentityReport) -> Result<()> {
    let p = ctx.prec();
    let eps = ctx.pow10(PATH_END_OFFSET);
    let near_one = Float::with_val(p, 1 - &eps);
    let Params { alpha, nu, .. } = center;
    let point = |l: &Real, t: &Real| Params::new(alpha.clone(), nu.clone(), l.clone(), t.clone());
    let mut ends = Vec::new();
    if nu.is_zero() {
        r.note("ν = 0: no t = 0 table, the t → 0 end is not compared");
    } else {
        // the leading corrections near t = 0 are O(t) and O(t^ν)
        let order = nu.clone().min(&ctx.one());
        let slack = Float::with_val(p, (&eps).pow(&order)) * 100u32;
        ends.push(("t → 0", point(&near_one, &eps)?, point(&ctx.one(), &ctx.zero())?, slack));
    }
    ends.push(("t → 1", point(&eps, &near_one)?, point(&ctx.zero(), &ctx.one())?, eps.clone() * 100u32));
    for (label, near, end, slack) in ends {
        let a = build_recurrence(&near, n_max, ctx)?;
        let b = build_recurrence(&end, n_max, ctx)?;
        let tol = ctx.pow10(-15) + slack;
        for n in 0..=n_max {
            let pairs = [
                ("a_n", a.a(n).clone(), b.a(n).clone()),
                ("B_n", a.big_b[n].clone(), b.big_b[n].clone()),
                ("A_{n+1}", a.big_a[n + 1].clone(), b.big_a[n + 1].clone()),
            ];
            for (name, x, y) in pairs {
                r.push(&format!("path end {label}: {name}"), Some(n), None, &Check::compare(&x, &y, &y, &tol));
            }
        }
    }
    Ok(())
}

/// Settings of the parameter-integral reconstructions of `P_n`.
#[derive(Clone, Debug)]
pub struct ReconstructionConfig {
    /// Working digits of the tables along the integration path.
    pub digits: u32,
    /// Initial Gauss panels for the `λ` integral.
    pub panels: usize,
    pub points: usize,
    pub max_panels: usize,
    /// Relative agreement of two successive panel doublings.
    pub agreement: f64,
    /// Relative tolerance of the reconstruction against the direct value.
    pub tol: f64,
    /// Digits of the `t` integral's convergence test.
    pub quad_tol_digits: u32,
    /// The `t` integrand is frozen below `t · 10^{cutoff}`.
    pub cutoff: i32,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self {
            digits: 50,
            panels: 8,
            points: 8,
            max_panels: 256,
            agreement: 1e-10,
            tol: 1e-8,
            quad_tol_digits: 12,
            cutoff: -30,
        }
    }
}

/// Reconstructed and directly evaluated `P_n(x)` at a set of points.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub params: Params,
    pub n: usize,
    pub xs: Vec<Real>,
    pub direct: Vec<Real>,
    pub rebuilt: Vec<Real>,
    /// Sum of the absolute values of the reconstruction's parts.
    pub scale: Vec<Real>,
    /// Panels (λ integral) or quadrature level (t integral) used.
    pub resolution: usize,
}

impl Reconstruction {
    pub fn report(&self, id: &str, label: &str, tol: f64) -> IdentityReport {
        let mut r = IdentityReport::new(id, Some(&self.params));
        for ((d, b), s) in self.direct.iter().zip(&self.rebuilt).zip(&self.scale) {
            let p = d.prec();
            let scale = s.clone().max(&abs(d));
            r.push(label, Some(self.n), None, &Check::compare(b, d, &scale, &Float::with_val(p, tol)));
        }
        r
    }

    pub fn max_relative_error(&self) -> f64 {
        self.direct
            .iter()
            .zip(&self.rebuilt)
            .zip(&self.scale)
            .map(|((d, b), s)| (Float::with_val(d.prec(), d - b).abs() / s.clone().max(&abs(d))).to_f64())
            .fold(0.0, f64::max)
    }
}

/// Weights `W` with `∫_{−1}^{s_i} q(s) ds = Σ_j W_ij q(s_j)` for every
/// polynomial `q` of degree below `m`: `W = Q V^{−1}`, `V_jk = s_j^k`,
/// `Q_ik = ∫_{−1}^{s_i} s^k ds`.
fn partial_weights(nodes: &[Real], ctx: &PrecisionContext) -> Result<Vec<Vec<Real>>> {
    let p = ctx.prec();
    let m = nodes.len();
    let vt: Vec<Vec<Real>> = (0..m)
        .map(|k| nodes.iter().map(|s| Float::with_val(p, s.pow(k as u32))).collect())
        .collect();
    nodes
        .iter()
        .map(|s| {
            let q: Vec<Real> = (0..m)
                .map(|k| {
                    let up = Float::with_val(p, s.pow(k as u32 + 1));
                    let low = if k % 2 == 0 { 1 } else { -1 };
                    (up + low) / (k as u32 + 1)
                })
                .collect();
            solve(&vt, &q, ctx)
        })
        .collect()
}

fn values_at(table: &RecurrenceTable, n: usize, xs: &[Real]) -> Result<Vec<Real>> {
    xs.iter().map(|x| eval_poly(table, n, x)).collect()
}

fn lambda_pass(center: &Params, n: usize, xs: &[Real], panels: usize, points: usize, ctx: &PrecisionContext) -> Result<(Vec<Real>, Vec<Real>)> {
    let p = ctx.prec();
    let (gx, gw) = gauss_legendre(points, ctx);
    let partial = partial_weights(&gx, ctx)?;
    let half = Float::with_val(p, &center.lambda / (2 * panels) as u32);
    let mut edge = ctx.zero();
    // (weight, ∫₀^ξ B_n, A_n(ξ), P_{n−1}(x; ξ))
    let mut nodes = Vec::with_capacity(panels * points);
    for k in 0..panels {
        let mid = Float::with_val(p, &half * (2 * k + 1) as u32);
        let mut bs = Vec::with_capacity(points);
        let mut rest = Vec::with_capacity(points);
        for s in &gx {
            let xi = Float::with_val(p, &mid + Float::with_val(p, &half * s));
            let tab = build_recurrence(&center.with_lambda(xi)?, n, ctx)?;
            bs.push(tab.big_b[n].clone());
            let prev = if n == 0 { vec![ctx.zero(); xs.len()] } else { values_at(&tab, n - 1, xs)? };
            rest.push((tab.big_a[n].clone(), prev));
        }
        for (i, (an, prev)) in rest.into_iter().enumerate() {
            let inner = partial[i].iter().zip(&bs).fold(ctx.zero(), |acc, (w, b)| acc + Float::with_val(p, w * b));
            let cum = Float::with_val(p, &edge + inner * &half);
            nodes.push((Float::with_val(p, &half * &gw[i]), cum, an, prev));
        }
        edge += gw.iter().zip(&bs).fold(ctx.zero(), |acc, (w, b)| acc + Float::with_val(p, w * b)) * &half;
    }
    let end = build_recurrence(&center.with_lambda(ctx.zero())?, n, ctx)?;
    let start_vals = values_at(&end, n, xs)?;
    let growth = Float::with_val(p, &edge / 2u32).exp();
    let mut rebuilt = Vec::with_capacity(xs.len());
    let mut scale = Vec::with_capacity(xs.len());
    for (i, p0) in start_vals.iter().enumerate() {
        let mut integral = ctx.zero();
        for (w, cum, an, prev) in &nodes {
            let f = Float::with_val(p, Float::with_val(p, &edge - cum) / 2u32).exp();
            integral += f * w * an * &prev[i];
        }
        let boundary = Float::with_val(p, &growth * p0);
        scale.push(abs(&integral) + abs(&boundary));
        rebuilt.push(integral + boundary);
    }
    Ok((rebuilt, scale))
}

/// `P_n(x; λ, t) = ∫₀^λ e^{½∫_ξ^λ B_n(y,t)dy} A_n(ξ,t) P_{n−1}(x; ξ, t) dξ + e^{½∫₀^λ B_n(y,t)dy} P_n(x; 0, t)`.
///
/// Composite Gauss–Legendre in `ξ`; the inner integrals come from the same
/// nodes through the interpolatory partial-integration weights. Panels are
/// doubled until two passes agree to `cfg.agreement`.
pub fn lambda_reconstruction(center: &Params, n: usize, xs: &[Real], cfg: &ReconstructionConfig) -> Result<Reconstruction> {
    let ctx = PrecisionContext::new(cfg.digits)?;
    let center = center.lift(&ctx);
    if center.t.is_zero() {
        return Err(Error::Domain("the λ reconstruction needs t > 0".into()));
    }
    let xs: Vec<Real> = xs.iter().map(|x| ctx.lift(x)).collect();
    let direct = values_at(&build_recurrence(&center, n, &ctx)?, n, &xs)?;
    if center.lambda.is_zero() {
        let scale = direct.iter().map(abs).collect();
        return Ok(Reconstruction {
            params: center,
            n,
            rebuilt: direct.clone(),
            direct,
            xs,
            scale,
            resolution: 0,
        });
    }
    let mut panels = cfg.panels;
    let (mut prev, _) = lambda_pass(&center, n, &xs, panels, cfg.points, &ctx)?;
    loop {
        let next_panels = panels * 2;
        let (next, scale) = lambda_pass(&center, n, &xs, next_panels, cfg.points, &ctx)?;
        let change = next
            .iter()
            .zip(&prev)
            .zip(&scale)
            .map(|((a, b), s)| (Float::with_val(ctx.prec(), a - b).abs() / s).to_f64())
            .fold(0.0, f64::max);
        if change <= cfg.agreement {
            return Ok(Reconstruction {
                params: center,
                n,
                xs,
                direct,
                rebuilt: next,
                scale,
                resolution: next_panels,
            });
        }
        if next_panels >= cfg.max_panels {
            return Err(Error::Capacity(format!(
                "λ reconstruction still changing by {change:.2e} at {next_panels} panels"
            )));
        }
        panels = next_panels;
        prev = next;
    }
}

/// Monic `π_n(x) = (−1)^n n! λ^{−n} L_n^α(λx)`, orthogonal for `x^α e^{−λx}`.
fn monic_laguerre(n: usize, alpha: &Real, lambda: &Real, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    let p = ctx.prec();
    let mut c = laguerre_coeffs(n, alpha, ctx)?;
    let mut f = factorial(n, ctx) / Float::with_val(p, lambda.pow(n as u32));
    if n % 2 == 1 {
        f = -f;
    }
    let mut lk = ctx.one();
    for ck in c.iter_mut() {
        *ck *= Float::with_val(p, &f * &lk);
        lk *= lambda;
    }
    Ok(c)
}

/// `P_n(x; λ, t) = a_n(λ,t) [∫₀^t (x∂_xP_n − nP_n − λA_nP_{n−1})(x; λ, y) dy/(y a_n(λ,y)) + π_n(x)]`
/// with `π_n` the monic Laguerre polynomial for `x^α e^{−λx}`.
///
/// The integrand is `∂_y(P_n/a_n)`, integrable at `y = 0` (like `y^{ν−1}` for
/// `ν < 1`); tanh-sinh quadrature is used and the integrand is frozen below
/// `t·10^{cutoff}`, where table rounding would otherwise dominate.
pub fn t_reconstruction(center: &Params, n: usize, xs: &[Real], cfg: &ReconstructionConfig) -> Result<Reconstruction> {
    let ctx = PrecisionContext::new(cfg.digits)?;
    let p = ctx.prec();
    let center = center.lift(&ctx);
    if center.lambda.is_zero() || center.nu.is_zero() {
        return Err(Error::Domain("the t reconstruction needs λ > 0 and ν > 0".into()));
    }
    let xs: Vec<Real> = xs.iter().map(|x| ctx.lift(x)).collect();
    let table = build_recurrence(&center, n, &ctx)?;
    let direct = values_at(&table, n, &xs)?;
    let monic = monic_laguerre(n, &center.alpha, &center.lambda, &ctx)?;
    let pi_n: Vec<Real> = xs.iter().map(|x| crate::kernels::horner(&monic, x, &ctx)).collect();
    let (integral, level) = if center.t.is_zero() {
        (vec![ctx.zero(); xs.len()], 0)
    } else {
        let quad = ctx.clone().with_tol_digits(cfg.quad_tol_digits)?;
        let floor = Float::with_val(p, &center.t * ctx.pow10(cfg.cutoff));
        let frozen: RefCell<Option<Vec<Real>>> = RefCell::new(None);
        let integrand = |y: &Real| -> Result<Vec<Real>> {
            let tab = build_recurrence(&center.with_t(y.clone())?, n, &ctx)?;
            let an = tab.a(n);
            let lam_a = Float::with_val(p, &center.lambda * &tab.big_a[n]);
            let dy = Float::with_val(p, y * an);
            xs.iter()
                .map(|x| {
                    let pn = eval_poly(&tab, n, x)?;
                    let dpn = crate::opoly::eval_derivative(&tab, n, x)?;
                    let mut v = Float::with_val(p, x * &dpn) - Float::with_val(p, &pn * n as u32);
                    if n > 0 {
                        v -= Float::with_val(p, &lam_a * eval_poly(&tab, n - 1, x)?);
                    }
                    Ok(v / &dy)
                })
                .collect()
        };
        let est = integrate_interval_vec(
            |y| {
                if *y > floor {
                    return integrand(y);
                }
                if let Some(v) = frozen.borrow().as_ref() {
                    return Ok(v.clone());
                }
                let v = integrand(&floor)?;
                *frozen.borrow_mut() = Some(v.clone());
                Ok(v)
            },
            &ctx.zero(),
            &center.t,
            xs.len(),
            &QuadratureSpec::tanh_sinh(),
            &quad,
        )?;
        (est.values, est.level as usize)
    };
    let an = table.a(n);
    let rebuilt = integral.iter().zip(&pi_n).map(|(i, q)| Float::with_val(p, i + q) * an).collect();
    let scale = integral.iter().zip(&pi_n).map(|(i, q)| (abs(i) + abs(q)) * abs(an)).collect();
    Ok(Reconstruction {
        params: center,
        n,
        xs,
        direct,
        rebuilt,
        scale,
        resolution: level,
    })
}
