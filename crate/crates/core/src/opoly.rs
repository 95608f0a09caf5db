//! Orthonormal polynomials `P_n(x; λ, t)` from the Hankel moment matrix.
//!
//! With `H = L Lᵀ` the rows of `L^{-1}` are the coefficient vectors of the
//! orthonormal polynomials, each with a positive leading coefficient. All
//! weighted integrals of polynomials are evaluated exactly as combinations of
//! moments.

use rug::Float;

use crate::error::{Error, Result};
use crate::moments::{build_moment_table, MomentSource};
use crate::numerics::linalg::{cholesky, invert_lower, tridiagonal_eigen};
use crate::numerics::{Params, PrecisionContext, Real};
use crate::report::Check;

/// Recurrence data for degrees `0..=n_max`, with one extra degree of
/// polynomials so that `A_{N+1}` and `B_N` are available.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub params: Params,
    pub n_max: usize,
    pub ctx: PrecisionContext,
    pub source: MomentSource,
    /// `μ_0 … μ_{2N+2}`.
    pub mu: Vec<Real>,
    /// Ascending coefficients of `P_0 … P_{N+1}`.
    pub coeffs: Vec<Vec<Real>>,
    /// `A_0 = 0, A_1 … A_{N+1}` with `A_n = a_{n−1}/a_n`.
    pub big_a: Vec<Real>,
    /// `B_0 … B_N` with `B_n = b_n/a_n − b_{n+1}/a_{n+1}`.
    pub big_b: Vec<Real>,
}

impl RecurrenceTable {
    /// Leading coefficient `a_n`.
    pub fn a(&self, n: usize) -> &Real {
        &self.coeffs[n][n]
    }

    /// Coefficient of `x^{n−1}` (zero for `n = 0`).
    pub fn b(&self, n: usize) -> Real {
        self.sub_leading(n, 1)
    }

    /// Coefficient of `x^{n−2}` (zero for `n < 2`).
    pub fn d(&self, n: usize) -> Real {
        self.sub_leading(n, 2)
    }

    /// Constant term `a_{n,0}`.
    pub fn constant_term(&self, n: usize) -> &Real {
        &self.coeffs[n][0]
    }

    fn sub_leading(&self, n: usize, k: usize) -> Real {
        if n < k {
            self.ctx.zero()
        } else {
            self.coeffs[n][n - k].clone()
        }
    }

    /// Number of polynomials held (`N + 2`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `∫ p(x) q(x) x^m dμ` for coefficient vectors `p`, `q`, together with the
    /// sum of the absolute values of the contributing terms.
    pub fn pairing(&self, p: &[Real], q: &[Real], m: usize) -> (Real, Real) {
        let prec = self.ctx.prec();
        let mut sum = self.ctx.zero();
        let mut mag = self.ctx.zero();
        for (i, pi) in p.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, qj) in q.iter().enumerate() {
                let term = Float::with_val(prec, pi * qj) * &self.mu[i + j + m];
                mag += Float::with_val(prec, term.abs_ref());
                sum += term;
            }
        }
        (sum, mag)
    }

    /// `∫ p(x) x^m dμ` and the magnitude of its terms.
    pub fn integral(&self, p: &[Real], m: usize) -> (Real, Real) {
        let one = [self.ctx.one()];
        self.pairing(p, &one, m)
    }
}

/// Builds `P_0 … P_{N+1}` and the recurrence coefficients.
pub fn build_recurrence(params: &Params, n_max: usize, ctx: &PrecisionContext) -> Result<RecurrenceTable> {
    let table = build_moment_table(params, n_max + 1, ctx)?;
    let ctx = table.ctx.clone();
    let p = ctx.prec();
    let l = cholesky(&table.hankel(n_max + 1, 0), &ctx)?;
    let inv = invert_lower(&l, &ctx);
    let coeffs: Vec<Vec<Real>> = inv.into_iter().enumerate().map(|(n, row)| row[..=n].to_vec()).collect();
    let lead = |n: usize| &coeffs[n][n];
    let ratio_b = |n: usize| -> Real {
        if n == 0 {
            ctx.zero()
        } else {
            Float::with_val(p, &coeffs[n][n - 1] / lead(n))
        }
    };
    let mut big_a = vec![ctx.zero()];
    for n in 1..=n_max + 1 {
        big_a.push(Float::with_val(p, lead(n - 1) / lead(n)));
    }
    let big_b = (0..=n_max).map(|n| ratio_b(n) - ratio_b(n + 1)).collect();
    Ok(RecurrenceTable {
        params: table.params,
        n_max,
        source: table.source,
        mu: table.mu,
        coeffs,
        big_a,
        big_b,
        ctx,
    })
}

fn check_degree(table: &RecurrenceTable, n: usize) -> Result<()> {
    if n >= table.len() {
        return Err(Error::Domain(format!(
            "degree {n} exceeds the table (holds degrees up to {})",
            table.len() - 1
        )));
    }
    Ok(())
}

/// `P_0(x) … P_n(x)` by the three-term recurrence.
pub fn eval_all(table: &RecurrenceTable, n: usize, x: &Real) -> Result<Vec<Real>> {
    check_degree(table, n)?;
    let p = table.ctx.prec();
    let x = table.ctx.lift(x);
    let mut out = vec![table.a(0).clone()];
    for k in 0..n {
        let mut next = Float::with_val(p, &x - &table.big_b[k]) * &out[k];
        if k > 0 {
            next -= Float::with_val(p, &table.big_a[k] * &out[k - 1]);
        }
        out.push(next / &table.big_a[k + 1]);
    }
    Ok(out)
}

/// `P_n(x)` by the three-term recurrence.
pub fn eval_poly(table: &RecurrenceTable, n: usize, x: &Real) -> Result<Real> {
    Ok(eval_all(table, n, x)?.swap_remove(n))
}

/// `P_n(x)` from the coefficient vector.
pub fn eval_coeffs(table: &RecurrenceTable, n: usize, x: &Real) -> Result<Real> {
    check_degree(table, n)?;
    Ok(crate::kernels::horner(&table.coeffs[n], x, &table.ctx))
}

/// `P_n′(x)` from the coefficient vector.
pub fn eval_derivative(table: &RecurrenceTable, n: usize, x: &Real) -> Result<Real> {
    check_degree(table, n)?;
    let d = poly_derivative(&table.coeffs[n], &table.ctx);
    Ok(crate::kernels::horner(&d, x, &table.ctx))
}

pub fn poly_derivative(c: &[Real], ctx: &PrecisionContext) -> Vec<Real> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| Float::with_val(ctx.prec(), v * k as u32))
        .collect()
}

/// Both sides of the Christoffel–Darboux formula
/// `Σ_{k≤n} P_k(x)P_k(y) = A_{n+1}(P_{n+1}(x)P_n(y) − P_n(x)P_{n+1}(y))/(x−y)`.
///
/// When `|x − y| < 10^{−digits/2}` the quotient is replaced by its confluent
/// limit `A_{n+1}(P′_{n+1}(x)P_n(x) − P′_n(x)P_{n+1}(x))`.
pub fn christoffel_darboux(table: &RecurrenceTable, n: usize, x: &Real, y: &Real) -> Result<(Real, Real)> {
    check_degree(table, n + 1)?;
    let ctx = &table.ctx;
    let p = ctx.prec();
    let px = eval_all(table, n + 1, x)?;
    let py = eval_all(table, n + 1, y)?;
    let sum = (0..=n).fold(ctx.zero(), |acc, k| acc + Float::with_val(p, &px[k] * &py[k]));
    let gap = Float::with_val(p, x - y);
    let threshold = ctx.pow10(-(ctx.digits() as i32) / 2);
    let quotient = if Float::with_val(p, gap.abs_ref()) < threshold {
        let d1 = eval_derivative(table, n + 1, x)?;
        let d0 = eval_derivative(table, n, x)?;
        (Float::with_val(p, &d1 * &px[n]) - Float::with_val(p, &d0 * &px[n + 1])) * &table.big_a[n + 1]
    } else {
        (Float::with_val(p, &px[n + 1] * &py[n]) - Float::with_val(p, &px[n] * &py[n + 1])) * &table.big_a[n + 1] / gap
    };
    Ok((sum, quotient))
}

#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
    pub degree: usize,
}

impl GaussRule {
    /// `Σ w_i f(x_i)`.
    pub fn apply(&self, f: impl Fn(&Real) -> Real) -> Real {
        let p = self.nodes.first().map_or(64, |x| x.prec());
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Float::new(p), |acc, (x, w)| acc + f(x) * w)
    }
}

/// `N`-point Gauss rule from the Jacobi matrix `tridiag(A_k, B_k, A_k)`.
pub fn gauss_rule(table: &RecurrenceTable, n: usize) -> Result<GaussRule> {
    if n == 0 || n > table.n_max + 1 {
        return Err(Error::Domain(format!(
            "a Gauss rule needs 1 ≤ N ≤ {}, got {n}",
            table.n_max + 1
        )));
    }
    let ctx = &table.ctx;
    let diag = &table.big_b[..n];
    let off = &table.big_a[1..n];
    let (nodes, first) = tridiagonal_eigen(diag, off, ctx)?;
    let weights = first
        .into_iter()
        .map(|v| Float::with_val(ctx.prec(), v.square_ref()) * &table.mu[0])
        .collect();
    Ok(GaussRule { nodes, weights, degree: n })
}

/// `∫P_n x^{n+j} dμ` for `j = 0, 1, 2` next to their predicted values
/// `1/a_n`, `−b_{n+1}/(a_{n+1}a_n)` and
/// `b_{n+2}b_{n+1}/(a_{n+2}a_{n+1}a_n) − d_{n+2}/(a_{n+2}a_n)`.
#[derive(Clone, Debug)]
pub struct NormalizationIntegrals {
    pub n: usize,
    pub computed: [Real; 3],
    pub predicted: [Real; 3],
    pub checks: [Check; 3],
}

pub fn normalization_integrals(table: &RecurrenceTable, n: usize) -> Result<NormalizationIntegrals> {
    check_degree(table, n + 2)?;
    let ctx = &table.ctx;
    let p = ctx.prec();
    let tol = ctx.tol();
    let (an, an1, an2) = (table.a(n), table.a(n + 1), table.a(n + 2));
    let predicted = [
        Float::with_val(p, 1 / an),
        -Float::with_val(p, table.b(n + 1) / Float::with_val(p, an1 * an)),
        Float::with_val(p, table.b(n + 2) * table.b(n + 1)) / Float::with_val(p, an2 * an1) / an
            - Float::with_val(p, table.d(n + 2) / Float::with_val(p, an2 * an)),
    ];
    let mut computed = Vec::with_capacity(3);
    let mut checks = Vec::with_capacity(3);
    for (j, want) in predicted.iter().enumerate() {
        let (v, mag) = table.integral(&table.coeffs[n], n + j);
        checks.push(Check::compare(&v, want, &mag, &tol));
        computed.push(v);
    }
    Ok(NormalizationIntegrals {
        n,
        computed: computed.try_into().expect("three entries"),
        predicted,
        checks: checks.try_into().expect("three entries"),
    })
}

/// `max_{m,n≤N} |∫P_mP_n dμ − δ_{mn}|` relative to the magnitude of the
/// moment combination.
pub fn orthonormality_check(table: &RecurrenceTable) -> Vec<(usize, usize, Check)> {
    let ctx = &table.ctx;
    let mut out = Vec::new();
    for m in 0..=table.n_max {
        for n in 0..=m {
            let (v, mag) = table.pairing(&table.coeffs[m], &table.coeffs[n], 0);
            let target = if m == n { ctx.one() } else { ctx.zero() };
            out.push((m, n, Check::compare(&v, &target, &mag, &ctx.tol())));
        }
    }
    out
}

/// Coefficientwise `x P_n − A_{n+1}P_{n+1} − B_n P_n − A_n P_{n−1}`; the
/// returned check carries the largest coefficient residual.
pub fn three_term_check(table: &RecurrenceTable, n: usize) -> Result<Check> {
    check_degree(table, n + 1)?;
    let ctx = &table.ctx;
    let p = ctx.prec();
    let mut resid = vec![ctx.zero(); n + 2];
    let mut mag = vec![ctx.zero(); n + 2];
    let mut add = |k: usize, v: Real| {
        mag[k] += Float::with_val(p, v.abs_ref());
        resid[k] += v;
    };
    for (k, c) in table.coeffs[n].iter().enumerate() {
        add(k + 1, c.clone());
        add(k, -Float::with_val(p, &table.big_b[n] * c));
    }
    for (k, c) in table.coeffs[n + 1].iter().enumerate() {
        add(k, -Float::with_val(p, &table.big_a[n + 1] * c));
    }
    if n > 0 {
        for (k, c) in table.coeffs[n - 1].iter().enumerate() {
            add(k, -Float::with_val(p, &table.big_a[n] * c));
        }
    }
    Ok(worst(resid, mag, &ctx.tol()))
}

fn worst(resid: Vec<Real>, mag: Vec<Real>, tol: &Real) -> Check {
    resid
        .into_iter()
        .zip(mag)
        .map(|(r, m)| Check::new(r, m * tol))
        .max_by(|a, b| a.ratio().partial_cmp(&b.ratio()).unwrap_or(std::cmp::Ordering::Equal))
        .expect("non-empty")
}

/// Second- and third-moment identities of `P_n²` at degree `n`:
/// `∫P_n² x² dμ = A²_{n+1} + B²_n + A²_n`,
/// `∫P_n² x³ dμ = A²_{n+1}(B_{n+1} + 2B_n) + A²_n B_{n−1} + (2A²_n + B²_n)B_n`,
/// `d_n/a_n − d_{n+2}/a_{n+2} − (b_{n+1}/a_{n+1})(B_n + B_{n+1}) = A²_{n+1} + B²_n + A²_n`.
pub fn moment_identity_checks(table: &RecurrenceTable, n: usize) -> Result<[(&'static str, Check); 3]> {
    if n == 0 || n + 1 > table.n_max {
        return Err(Error::Domain(format!(
            "the moment identities need 1 ≤ n ≤ {}",
            table.n_max.saturating_sub(1)
        )));
    }
    let ctx = &table.ctx;
    let p = ctx.prec();
    let tol = ctx.tol();
    let sq = |x: &Real| Float::with_val(p, x.square_ref());
    let (a_n, a_n1) = (&table.big_a[n], &table.big_a[n + 1]);
    let (b_m, b_n, b_n1) = (&table.big_b[n - 1], &table.big_b[n], &table.big_b[n + 1]);
    let sigma = sq(a_n1) + sq(b_n) + sq(a_n);

    let c = &table.coeffs[n];
    let (x2, mag2) = table.pairing(c, c, 2);
    let mag2 = mag2.max(&sigma);
    let first = Check::compare(&x2, &sigma, &mag2, &tol);

    let (x3, mag3) = table.pairing(c, c, 3);
    let rhs3 = sq(a_n1) * Float::with_val(p, b_n1 + Float::with_val(p, b_n * 2u32))
        + sq(a_n) * b_m
        + (sq(a_n) * 2u32 + sq(b_n)) * b_n;
    let second = Check::compare(&x3, &rhs3, &mag3.max(&Float::with_val(p, rhs3.abs_ref())), &tol);

    let ratio = |num: Real, n: usize| Float::with_val(p, num / table.a(n));
    let terms = [
        ratio(table.d(n), n),
        -ratio(table.d(n + 2), n + 2),
        -(ratio(table.b(n + 1), n + 1) * Float::with_val(p, b_n + b_n1)),
    ];
    let lhs = terms.iter().fold(ctx.zero(), |acc, t| acc + t);
    let mag = terms
        .iter()
        .fold(sigma.clone(), |m, t| m.max(&Float::with_val(p, t.abs_ref())));
    let third = Check::compare(&lhs, &sigma, &mag, &tol);
    Ok([
        ("∫P_n² x² = A²_{n+1} + B²_n + A²_n", first),
        ("∫P_n² x³ moment identity", second),
        ("d_n/a_n − d_{n+2}/a_{n+2} − (b_{n+1}/a_{n+1})(B_n + B_{n+1}) = A²_{n+1} + B²_n + A²_n", third),
    ])
}
