//! Double-exponential quadrature on `(0, ∞)` and on finite intervals, plus
//! composite Gauss–Legendre rules.
//!
//! The semi-infinite rule maps `u = c·e^s` and then `s = (π/2) sinh τ`, so an
//! algebraic singularity at the origin and exponential decay at infinity both
//! turn into double-exponential decay in `τ`. The trapezoid rule in `τ` is
//! refined by halving the step; each level only evaluates the new odd nodes.
//! The integrand is never evaluated at the endpoints.

use std::sync::OnceLock;

use rug::Float;

use super::precision::{format_real, PrecisionContext, Real};
use crate::error::{Error, Result};

const H0_LOG2: u32 = 1;
const EXP_SINH_TAU_CAP: f64 = 6.5;
const TANH_SINH_TAU_CAP: f64 = 6.0;
const LEVELS: usize = 12;
const NEGLIGIBLE_RUN: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Double-exponential: exp-sinh on `(0, ∞)`, tanh-sinh on finite pieces.
    TanhSinh,
    /// Composite Gauss–Legendre on panels, doubling the panel count. On the
    /// semi-line the domain is truncated at the last split point.
    TruncatedCompositeGauss { panels: usize, points: usize },
}

/// How to integrate: scheme, refinement limits, centring and split points.
#[derive(Clone, Debug)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Location of the bulk of the integrand; the map is centred there.
    pub scale: Option<Real>,
    /// Positive break points; finite pieces use tanh-sinh, the last piece
    /// extends to infinity.
    pub splits: Vec<Real>,
    pub min_level: u32,
    pub max_level: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::TanhSinh,
            scale: None,
            splits: Vec::new(),
            min_level: 3,
            max_level: 10,
        }
    }
}

impl QuadratureSpec {
    pub fn tanh_sinh() -> Self {
        Self::default()
    }

    pub fn composite_gauss(panels: usize, points: usize) -> Self {
        Self {
            scheme: Scheme::TruncatedCompositeGauss { panels, points },
            max_level: 6,
            ..Self::default()
        }
    }

    pub fn with_scale(mut self, scale: Real) -> Self {
        self.scale = Some(scale);
        self
    }

    pub fn with_splits(mut self, splits: Vec<Real>) -> Self {
        self.splits = splits;
        self
    }

    pub fn with_levels(mut self, min_level: u32, max_level: u32) -> Self {
        self.min_level = min_level;
        self.max_level = max_level.min(LEVELS as u32 - 1);
        self
    }
}

/// Scalar result with the change between the last two refinement levels.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: Real,
    pub err: Real,
    pub level: u32,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct VecEstimate {
    pub values: Vec<Real>,
    pub errs: Vec<Real>,
    pub level: u32,
    pub evaluations: usize,
}

impl VecEstimate {
    fn into_scalar(mut self) -> Estimate {
        Estimate {
            value: self.values.swap_remove(0),
            err: self.errs.swap_remove(0),
            level: self.level,
            evaluations: self.evaluations,
        }
    }
}

struct ExpSinhNode {
    s: Real,
    e: Real,
    e_inv: Real,
    wc: Real,
}

struct TanhSinhNode {
    /// `1 - tanh((π/2) sinh τ)`, the scaled distance to the endpoint.
    q: Real,
    /// `(π/2) cosh τ / cosh²((π/2) sinh τ)`.
    wc: Real,
}

/// Node tables per refinement level, built lazily for one binary precision.
pub(crate) struct NodeCache {
    prec: u32,
    exp_sinh: Vec<OnceLock<Vec<ExpSinhNode>>>,
    tanh_sinh: Vec<OnceLock<Vec<TanhSinhNode>>>,
}

impl NodeCache {
    pub(crate) fn new(prec: u32) -> Self {
        Self {
            prec,
            exp_sinh: (0..LEVELS).map(|_| OnceLock::new()).collect(),
            tanh_sinh: (0..LEVELS).map(|_| OnceLock::new()).collect(),
        }
    }

    fn step(&self, level: u32) -> Real {
        Float::with_val(self.prec, 1) >> (H0_LOG2 + level)
    }

    /// Indices `j` with `τ = j·h` that are new at `level`, in increasing order.
    fn indices(level: u32, cap: f64) -> impl Iterator<Item = u64> {
        let per_unit = 1u64 << (H0_LOG2 + level);
        let last = (cap * per_unit as f64).floor() as u64;
        let (start, stride) = if level == 0 { (0, 1) } else { (1, 2) };
        (start..=last).step_by(stride)
    }

    fn exp_sinh(&self, level: u32) -> &[ExpSinhNode] {
        self.exp_sinh[level as usize].get_or_init(|| {
            let p = self.prec;
            let half_pi = Float::with_val(p, rug::float::Constant::Pi) / 2;
            let h = self.step(level);
            Self::indices(level, EXP_SINH_TAU_CAP)
                .map(|j| {
                    let tau = Float::with_val(p, &h * j);
                    let (sh, ch) = tau.sinh_cosh(Float::new(p));
                    let s = Float::with_val(p, &half_pi * &sh);
                    let e = Float::with_val(p, s.exp_ref());
                    let e_inv = Float::with_val(p, 1 / &e);
                    let wc = Float::with_val(p, &half_pi * &ch);
                    ExpSinhNode { s, e, e_inv, wc }
                })
                .collect()
        })
    }

    fn tanh_sinh(&self, level: u32) -> &[TanhSinhNode] {
        self.tanh_sinh[level as usize].get_or_init(|| {
            let p = self.prec;
            let half_pi = Float::with_val(p, rug::float::Constant::Pi) / 2;
            let h = self.step(level);
            Self::indices(level, TANH_SINH_TAU_CAP)
                .map(|j| {
                    let tau = Float::with_val(p, &h * j);
                    let (sh, ch) = tau.sinh_cosh(Float::new(p));
                    let s = Float::with_val(p, &half_pi * &sh);
                    // 1 - tanh s = 2 / (1 + e^{2s})
                    let e2 = Float::with_val(p, Float::with_val(p, &s * 2).exp_ref());
                    let q = Float::with_val(p, 2 / Float::with_val(p, &e2 + 1));
                    let cosh_s = Float::with_val(p, s.cosh_ref());
                    let wc = Float::with_val(p, &half_pi * &ch) / cosh_s.square();
                    TanhSinhNode { q, wc }
                })
                .collect()
        })
    }
}

fn check_finite(v: &[Real]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("integrand returned a non-finite value".into()));
    }
    Ok(())
}

fn negligible(term: &[Real], sum: &[Real], eps: &Real) -> bool {
    term.iter().zip(sum).all(|(t, s)| {
        t.is_zero() || {
            let bound = Float::with_val(t.prec(), s.abs_ref()) * eps;
            Float::with_val(t.prec(), t.abs_ref()) <= bound
        }
    })
}

fn accumulate(acc: &mut [Real], term: &[Real]) {
    for (a, t) in acc.iter_mut().zip(term) {
        *a += t;
    }
}

/// Level-refinement driver shared by the double-exponential rules.
///
/// `eval(level, node_index, side)` returns the weighted term for one node
/// (side `+1` or `-1`; the centre node is asked once with side `+1`).
fn de_refine<F>(
    ctx: &PrecisionContext,
    spec: &QuadratureSpec,
    dim: usize,
    nodes_at: impl Fn(u32) -> usize,
    center_first: bool,
    mut eval: F,
) -> Result<VecEstimate>
where
    F: FnMut(u32, usize, i32) -> Result<Vec<Real>>,
{
    let p = ctx.prec();
    let eps = ctx.eps();
    let tol = ctx.tol();
    let mut evaluations = 0usize;
    let zero = || vec![Float::new(p); dim];

    // Level 0 walks outwards until the terms become negligible; that fixes the
    // truncation range for every later level.
    let mut sum = zero();
    let n0 = nodes_at(0);
    let first = if center_first {
        let t = eval(0, 0, 1)?;
        check_finite(&t)?;
        evaluations += 1;
        accumulate(&mut sum, &t);
        1
    } else {
        0
    };
    let mut reach = [0usize; 2];
    for (side_idx, side) in [1i32, -1].into_iter().enumerate() {
        let mut run = 0;
        for idx in first..n0 {
            let t = eval(0, idx, side)?;
            check_finite(&t)?;
            evaluations += 1;
            accumulate(&mut sum, &t);
            reach[side_idx] = idx;
            if negligible(&t, &sum, &eps) {
                run += 1;
                if run >= NEGLIGIBLE_RUN {
                    break;
                }
            } else {
                run = 0;
            }
        }
    }
    let cache = ctx.nodes();
    let mut estimate: Vec<Real> = sum.iter().map(|s| Float::with_val(p, s * &cache.step(0))).collect();
    let mut errs = zero();

    for level in 1..=spec.max_level.min(LEVELS as u32 - 1) {
        let h = cache.step(level);
        let ratio = 1usize << level;
        let mut new_sum = zero();
        let count = nodes_at(level);
        for (side_idx, side) in [1i32, -1].into_iter().enumerate() {
            // Node `idx` at this level sits at τ = (2·idx + 1)·h; stay within
            // one coarse step beyond the level-0 reach.
            let limit = (reach[side_idx] + 1) * ratio;
            for idx in 0..count {
                if 2 * idx + 1 > limit {
                    break;
                }
                let t = eval(level, idx, side)?;
                check_finite(&t)?;
                evaluations += 1;
                accumulate(&mut new_sum, &t);
            }
        }
        let mut converged = level >= spec.min_level;
        let mut next = Vec::with_capacity(dim);
        for i in 0..dim {
            let v = Float::with_val(p, &estimate[i] / 2) + Float::with_val(p, &new_sum[i] * &h);
            let change = Float::with_val(p, &v - &estimate[i]).abs();
            let bound = Float::with_val(p, v.abs_ref()) * &tol;
            if change > bound {
                converged = false;
            }
            errs[i] = change;
            next.push(v);
        }
        let previous = std::mem::replace(&mut estimate, next);
        if converged {
            return Ok(VecEstimate {
                values: estimate,
                errs,
                level,
                evaluations,
            });
        }
        if level == spec.max_level {
            let rel = Float::with_val(p, &errs[0] / Float::with_val(p, estimate[0].abs_ref()));
            return Err(Error::NonConvergence {
                level,
                last: format_real(&estimate[0], 20),
                previous: format_real(&previous[0], 20),
                change: format_real(&rel, 3),
            });
        }
    }
    unreachable!("max_level is at least one")
}

fn exp_sinh_vec<F>(
    f: &F,
    shift: Option<&Real>,
    scale: &Real,
    dim: usize,
    spec: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<VecEstimate>
where
    F: Fn(&Real, &Real) -> Result<Vec<Real>>,
{
    let p = ctx.prec();
    let cache = ctx.nodes();
    let ln_scale = Float::with_val(p, scale.ln_ref());
    de_refine(
        ctx,
        spec,
        dim,
        |level| cache.exp_sinh(level).len(),
        true,
        |level, idx, side| {
            let node = &cache.exp_sinh(level)[idx];
            let (e, ln_rel) = if side > 0 {
                (&node.e, Float::with_val(p, &ln_scale + &node.s))
            } else {
                (&node.e_inv, Float::with_val(p, &ln_scale - &node.s))
            };
            let offset = Float::with_val(p, scale * e);
            let w = Float::with_val(p, &offset * &node.wc);
            let (u, ln_u) = match shift {
                None => (offset, ln_rel),
                Some(a) => {
                    let u = Float::with_val(p, a + &offset);
                    let l = Float::with_val(p, u.ln_ref());
                    (u, l)
                }
            };
            let mut vals = f(&u, &ln_u)?;
            for v in vals.iter_mut() {
                *v *= &w;
            }
            Ok(vals)
        },
    )
}

fn tanh_sinh_vec<F>(
    f: &F,
    a: &Real,
    b: &Real,
    dim: usize,
    spec: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<VecEstimate>
where
    F: Fn(&Real) -> Result<Vec<Real>>,
{
    let p = ctx.prec();
    let cache = ctx.nodes();
    let half = Float::with_val(p, b - a) / 2;
    de_refine(
        ctx,
        spec,
        dim,
        |level| cache.tanh_sinh(level).len(),
        true,
        |level, idx, side| {
            let node = &cache.tanh_sinh(level)[idx];
            let d = Float::with_val(p, &half * &node.q);
            let x = if side > 0 {
                Float::with_val(p, b - &d)
            } else {
                Float::with_val(p, a + &d)
            };
            let w = Float::with_val(p, &half * &node.wc);
            let mut vals = f(&x)?;
            for v in vals.iter_mut() {
                *v *= &w;
            }
            Ok(vals)
        },
    )
}

fn default_scale(spec: &QuadratureSpec, ctx: &PrecisionContext) -> Real {
    spec.scale.clone().map(|s| ctx.lift(&s)).unwrap_or_else(|| ctx.one())
}

/// Integrates a vector-valued `f` over `(0, ∞)`.
///
/// `f` receives `(u, ln u)`; the logarithm comes for free from the map and
/// saves a transcendental call per node for power-law factors. Convergence is
/// declared when every component changes by at most `ctx.tol()` relative
/// between two levels.
pub fn integrate_semiline_vec<F>(
    f: F,
    dim: usize,
    spec: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<VecEstimate>
where
    F: Fn(&Real, &Real) -> Result<Vec<Real>>,
{
    if let Some(s) = &spec.scale {
        if *s <= 0 {
            return Err(Error::Domain("quadrature scale must be positive".into()));
        }
    }
    let mut splits: Vec<Real> = spec.splits.iter().map(|s| ctx.lift(s)).collect();
    if splits.iter().any(|s| *s <= 0) {
        return Err(Error::Domain("split points must be positive".into()));
    }
    splits.sort_by(|a, b| a.partial_cmp(b).expect("finite split points"));
    splits.dedup();

    match &spec.scheme {
        Scheme::TanhSinh => {
            if splits.is_empty() {
                return exp_sinh_vec(&f, None, &default_scale(spec, ctx), dim, spec, ctx);
            }
            let with_log = |x: &Real| {
                let l = Float::with_val(x.prec(), x.ln_ref());
                f(x, &l)
            };
            let mut total: Option<VecEstimate> = None;
            let mut left = ctx.zero();
            for s in &splits {
                let piece = tanh_sinh_vec(&with_log, &left, s, dim, spec, ctx)?;
                total = Some(merge(total, piece));
                left = s.clone();
            }
            let tail_scale = spec.scale.clone().map(|s| ctx.lift(&s)).unwrap_or_else(|| left.clone());
            let tail = exp_sinh_vec(&f, Some(&left), &tail_scale, dim, spec, ctx)?;
            Ok(merge(total, tail))
        }
        Scheme::TruncatedCompositeGauss { panels, points } => {
            let end = splits
                .last()
                .cloned()
                .ok_or_else(|| Error::Domain("truncated Gauss needs a cut-off split point".into()))?;
            let with_log = |x: &Real| {
                let l = Float::with_val(x.prec(), x.ln_ref());
                f(x, &l)
            };
            composite_gauss_vec(&with_log, &ctx.zero(), &end, *panels, *points, dim, spec, ctx)
        }
    }
}

fn merge(acc: Option<VecEstimate>, piece: VecEstimate) -> VecEstimate {
    match acc {
        None => piece,
        Some(mut acc) => {
            for (a, v) in acc.values.iter_mut().zip(&piece.values) {
                *a += v;
            }
            for (a, v) in acc.errs.iter_mut().zip(&piece.errs) {
                *a += v;
            }
            acc.level = acc.level.max(piece.level);
            acc.evaluations += piece.evaluations;
            acc
        }
    }
}

/// Scalar version of [`integrate_semiline_vec`].
pub fn integrate_semiline<F>(f: F, spec: &QuadratureSpec, ctx: &PrecisionContext) -> Result<Estimate>
where
    F: Fn(&Real, &Real) -> Result<Real>,
{
    integrate_semiline_vec(|u, l| Ok(vec![f(u, l)?]), 1, spec, ctx).map(VecEstimate::into_scalar)
}

/// Integrates a vector-valued `f` over `[a, b]`.
pub fn integrate_interval_vec<F>(
    f: F,
    a: &Real,
    b: &Real,
    dim: usize,
    spec: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<VecEstimate>
where
    F: Fn(&Real) -> Result<Vec<Real>>,
{
    if a >= b {
        return Err(Error::Domain("integration interval must have a < b".into()));
    }
    match &spec.scheme {
        Scheme::TanhSinh => tanh_sinh_vec(&f, a, b, dim, spec, ctx),
        Scheme::TruncatedCompositeGauss { panels, points } => {
            composite_gauss_vec(&f, a, b, *panels, *points, dim, spec, ctx)
        }
    }
}

pub fn integrate_interval<F>(
    f: F,
    a: &Real,
    b: &Real,
    spec: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<Estimate>
where
    F: Fn(&Real) -> Result<Real>,
{
    integrate_interval_vec(|x| Ok(vec![f(x)?]), a, b, 1, spec, ctx).map(VecEstimate::into_scalar)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(m: usize, ctx: &PrecisionContext) -> (Vec<Real>, Vec<Real>) {
    let p = ctx.prec();
    let eps = ctx.eps();
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut x = Float::with_val(p, guess);
        let mut deriv = ctx.one();
        for _ in 0..200 {
            let (pm, dpm) = legendre_with_derivative(m, &x);
            let dx = Float::with_val(p, &pm / &dpm);
            x -= &dx;
            deriv = dpm;
            if Float::with_val(p, dx.abs_ref()) <= eps {
                let (_, d) = legendre_with_derivative(m, &x);
                deriv = d;
                break;
            }
        }
        let one_minus_x2 = Float::with_val(p, 1 - Float::with_val(p, x.square_ref()));
        let w = Float::with_val(p, 2 / (one_minus_x2 * deriv.square()));
        nodes.push(x);
        weights.push(w);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: &Real) -> (Real, Real) {
    let p = x.prec();
    let mut prev = Float::with_val(p, 1);
    let mut cur = Float::with_val(p, x);
    if m == 0 {
        return (prev, Float::new(p));
    }
    for k in 1..m {
        let next = (Float::with_val(p, x * &cur) * (2 * k + 1) as u32 - Float::with_val(p, &prev * k as u32))
            / (k + 1) as u32;
        prev = std::mem::replace(&mut cur, next);
    }
    // P'_m = m (x P_m - P_{m-1}) / (x^2 - 1)
    let num = (Float::with_val(p, x * &cur) - &prev) * m as u32;
    let den = Float::with_val(p, x.square_ref()) - 1u32;
    (cur, num / den)
}

#[allow(clippy::too_many_arguments)]
fn composite_gauss_vec<F>(
    f: &F,
    a: &Real,
    b: &Real,
    panels: usize,
    points: usize,
    dim: usize,
    spec: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<VecEstimate>
where
    F: Fn(&Real) -> Result<Vec<Real>>,
{
    let p = ctx.prec();
    let tol = ctx.tol();
    let (gx, gw) = gauss_legendre(points, ctx);
    let mut evaluations = 0;
    let mut run = |panels: usize| -> Result<Vec<Real>> {
        let width = Float::with_val(p, b - a) / panels as u32;
        let half = Float::with_val(p, &width / 2);
        let mut acc = vec![Float::new(p); dim];
        for k in 0..panels {
            let mid = Float::with_val(p, a + Float::with_val(p, &width * k as u32)) + &half;
            for (x, w) in gx.iter().zip(&gw) {
                let node = Float::with_val(p, &mid + Float::with_val(p, &half * x));
                let vals = f(&node)?;
                check_finite(&vals)?;
                evaluations += 1;
                let scale = Float::with_val(p, &half * w);
                for (s, v) in acc.iter_mut().zip(vals) {
                    *s += v * &scale;
                }
            }
        }
        Ok(acc)
    };
    let mut count = panels.max(1);
    let mut previous = run(count)?;
    for level in 1..=spec.max_level {
        count *= 2;
        let current = run(count)?;
        // every level compares two refinements, so no minimum level applies
        let mut converged = true;
        let mut errs = Vec::with_capacity(dim);
        for (c, q) in current.iter().zip(&previous) {
            let change = Float::with_val(p, c - q).abs();
            if change > Float::with_val(p, c.abs_ref()) * &tol {
                converged = false;
            }
            errs.push(change);
        }
        if converged {
            return Ok(VecEstimate {
                values: current,
                errs,
                level,
                evaluations,
            });
        }
        if level == spec.max_level {
            return Err(Error::NonConvergence {
                level,
                last: format_real(&current[0], 20),
                previous: format_real(&previous[0], 20),
                change: format_real(&errs[0], 3),
            });
        }
        previous = current;
    }
    unreachable!("max_level is at least one")
}

/// Nodes and weights of the composite Gauss–Legendre rule on `[a, b]`.
pub fn composite_gauss_rule(
    a: &Real,
    b: &Real,
    panels: usize,
    points: usize,
    ctx: &PrecisionContext,
) -> Vec<(Real, Real)> {
    let p = ctx.prec();
    let (gx, gw) = gauss_legendre(points, ctx);
    let width = Float::with_val(p, b - a) / panels as u32;
    let half = Float::with_val(p, &width / 2);
    let mut out = Vec::with_capacity(panels * points);
    for k in 0..panels {
        let mid = Float::with_val(p, a + Float::with_val(p, &width * k as u32)) + &half;
        for (x, w) in gx.iter().zip(&gw) {
            out.push((
                Float::with_val(p, &mid + Float::with_val(p, &half * x)),
                Float::with_val(p, &half * w),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: &Real, b: &Real) -> Real {
        Float::with_val(a.prec(), a - b).abs() / Float::with_val(a.prec(), b.abs_ref())
    }

    #[test]
    fn exponential_integrates_to_one() {
        let ctx = PrecisionContext::new(60).unwrap();
        let est = integrate_semiline(
            |u, _| Ok(Float::with_val(u.prec(), -u).exp()),
            &QuadratureSpec::tanh_sinh(),
            &ctx,
        )
        .unwrap();
        assert!(rel(&est.value, &ctx.one()) < ctx.tol());
        assert!(est.err <= ctx.tol());
    }

    #[test]
    fn endpoint_singularity_gives_sqrt_pi() {
        let ctx = PrecisionContext::new(80).unwrap();
        let est = integrate_semiline(
            |u, ln_u| {
                let p = u.prec();
                Ok((Float::with_val(p, ln_u * -0.5f64) - u).exp())
            },
            &QuadratureSpec::tanh_sinh(),
            &ctx,
        )
        .unwrap();
        assert!(rel(&est.value, &ctx.pi().sqrt()) < ctx.tol());
    }

    #[test]
    fn algebraic_decay() {
        // ∫ du / (1+u)^2 = 1
        let ctx = PrecisionContext::new(40).unwrap().with_tol_digits(25).unwrap();
        let est = integrate_semiline(
            |u, _| Ok(Float::with_val(u.prec(), u + 1u32).square().recip()),
            &QuadratureSpec::tanh_sinh(),
            &ctx,
        )
        .unwrap();
        assert!(rel(&est.value, &ctx.one()) < ctx.tol());
    }

    #[test]
    fn split_points_agree_with_plain_rule() {
        let ctx = PrecisionContext::new(50).unwrap();
        let f = |u: &Real, ln_u: &Real| {
            let p = u.prec();
            Ok((Float::with_val(p, ln_u * 1.5f64) - u).exp())
        };
        let plain = integrate_semiline(f, &QuadratureSpec::tanh_sinh(), &ctx).unwrap();
        let split = integrate_semiline(
            f,
            &QuadratureSpec::tanh_sinh().with_splits(vec![ctx.one(), ctx.int(4)]),
            &ctx,
        )
        .unwrap();
        assert!(rel(&plain.value, &split.value) < ctx.tol());
    }

    #[test]
    fn successive_levels_within_error_estimate() {
        let ctx = PrecisionContext::new(40).unwrap();
        let f = |u: &Real, ln_u: &Real| {
            let p = u.prec();
            Ok((Float::with_val(p, ln_u * 0.25f64) - u - Float::with_val(p, 1 / u)).exp())
        };
        let coarse = integrate_semiline(f, &QuadratureSpec::tanh_sinh().with_levels(3, 10), &ctx).unwrap();
        let fine = integrate_semiline(
            f,
            &QuadratureSpec::tanh_sinh().with_levels(coarse.level + 1, 11),
            &ctx,
        )
        .unwrap();
        let d = Float::with_val(ctx.prec(), &coarse.value - &fine.value).abs();
        assert!(d <= coarse.err.clone() + Float::with_val(ctx.prec(), coarse.value.abs_ref()) * ctx.eps() * 100);
        assert!(fine.evaluations > coarse.evaluations);
    }

    #[test]
    fn finite_interval_rules() {
        let ctx = PrecisionContext::new(50).unwrap();
        // ∫_0^1 x^{-1/2} dx = 2
        let est = integrate_interval(
            |x| Ok(Float::with_val(x.prec(), x.sqrt_ref()).recip()),
            &ctx.zero(),
            &ctx.one(),
            &QuadratureSpec::tanh_sinh(),
            &ctx,
        )
        .unwrap();
        assert!(rel(&est.value, &ctx.int(2)) < ctx.tol());
        // ∫_0^2 e^x dx = e^2 - 1 with composite Gauss
        let est = integrate_interval(
            |x| Ok(Float::with_val(x.prec(), x.exp_ref())),
            &ctx.zero(),
            &ctx.int(2),
            &QuadratureSpec::composite_gauss(4, 10),
            &ctx,
        )
        .unwrap();
        let expected = ctx.int(2).exp() - 1u32;
        assert!(rel(&est.value, &expected) < ctx.tol());
    }

    #[test]
    fn gauss_legendre_is_exact_for_low_degree() {
        let ctx = PrecisionContext::new(50).unwrap();
        let (x, w) = gauss_legendre(6, &ctx);
        for k in 0..12u32 {
            let s = x
                .iter()
                .zip(&w)
                .fold(ctx.zero(), |acc, (x, w)| acc + Float::with_val(ctx.prec(), rug::ops::Pow::pow(x, k)) * w);
            let exact = if k % 2 == 1 { ctx.zero() } else { ctx.ratio(2, k as i64 + 1) };
            let d = Float::with_val(ctx.prec(), &s - &exact).abs();
            assert!(d < ctx.pow10(-45), "degree {k}");
        }
    }

    #[test]
    fn nonconvergence_reports_levels() {
        let ctx = PrecisionContext::new(40).unwrap();
        // Oscillatory integrand that the rule can not resolve at low levels.
        let err = integrate_semiline(
            |u, _| Ok(Float::with_val(u.prec(), u * 50u32).sin() / Float::with_val(u.prec(), u + 1u32)),
            &QuadratureSpec::tanh_sinh().with_levels(1, 2),
            &ctx,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { level: 2, .. }));
    }
}
