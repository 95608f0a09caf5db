//! Verification suites: named groups of identity reports at one parameter
//! point.

use std::cell::OnceCell;
use std::fmt;

use clap::ValueEnum;
use macpoly_core::calculus::{
    coefficient_flow_report, homogeneity_report, laguerre_derivative_report, lambda_derivative_report,
    lambda_reconstruction, leading_coefficient_report, moment_identity_report, path_report,
    quasi_orthogonality_report, shifted_kernel_report, t_derivative_report, t_reconstruction, ParamGridTables,
    ReconstructionConfig,
};
use macpoly_core::composition::{composition_report, MAX_OPERATOR_DEGREE};
use macpoly_core::kernels::{
    fractional_integral_check, ismail_quotient_check, kernel_point, laguerre_product_check, rho_derivative_check,
    rho_recurrence_residual, weight_ode_residual, Route,
};
use macpoly_core::moments::{moments_exact, moments_quadrature};
use macpoly_core::opoly::{build_recurrence, christoffel_darboux, orthonormality_check, three_term_check, RecurrenceTable};
use macpoly_core::{Check, Error, IdentityReport, Params, PrecisionContext, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// ρ_ν routes, recurrence and derivatives, Ismail quotient, Laguerre
    /// product, fractional integrals, moments and recurrence data.
    Kernel,
    /// Second-order ODE of the weight.
    Lemma1,
    /// Moment identities of P_n and the ρ_{ν+1} integrals.
    Lemma2,
    /// λ- and t-derivatives of P_n.
    Thm2,
    /// Leading-coefficient laws.
    Thm3,
    /// Flows of the recurrence coefficients.
    Cor1,
    /// Homogeneity of P_n and b_n.
    Cor3,
    /// Reconstruction of P_n from λ and t integrals.
    Thm4,
    /// Composition orthogonality under θ = yDy.
    Thm5,
    /// Quasi-orthogonality of (t∂_t − x∂_x)P_n and the t = 0 derivative law.
    Quasi,
    /// The path (λ, t) = (1−t, t).
    Section4,
    All,
}

impl Suite {
    pub const EACH: [Suite; 11] = [
        Suite::Kernel,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Thm2,
        Suite::Thm3,
        Suite::Cor1,
        Suite::Cor3,
        Suite::Thm4,
        Suite::Thm5,
        Suite::Quasi,
        Suite::Section4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::Cor1 => "cor1",
            Suite::Cor3 => "cor3",
            Suite::Thm4 => "thm4",
            Suite::Thm5 => "thm5",
            Suite::Quasi => "quasi",
            Suite::Section4 => "section4",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One identity report tagged with the suite that produced it.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub report: IdentityReport,
}

/// Sample points for pointwise checks.
const X_POINTS: [(i64, i64); 3] = [(1, 2), (1, 1), (2, 1)];
const KERNEL_X: [(i64, i64); 3] = [(1, 2), (1, 1), (4, 1)];
/// Digits of the quadrature-based kernel checks.
const KERNEL_DIGITS: u32 = 50;
/// Context of the ρ_{ν+1} integrals.
const SHIFTED_KERNEL_CTX: (u32, u32) = (45, 30);
const MOMENT_ORACLE_CTX: (u32, u32) = (50, 34);
const FRACTIONAL_CTX: (u32, u32) = (40, 28);
/// Highest degree of the reconstructions.
const RECONSTRUCTION_MAX_N: usize = 3;
const PATH_T: (i64, i64) = (1, 2);

/// Parameter point, depth and precision shared by the suites of one run;
/// tables are built on first use.
pub struct Session {
    pub params: Params,
    pub n: usize,
    pub ctx: PrecisionContext,
    table: OnceCell<RecurrenceTable>,
    grid: OnceCell<ParamGridTables>,
}

impl Session {
    pub fn new(params: Params, n: usize, ctx: PrecisionContext) -> Self {
        Self {
            params: params.lift(&ctx),
            n,
            ctx,
            table: OnceCell::new(),
            grid: OnceCell::new(),
        }
    }

    /// Table of depth `N + 1`, enough for the moment identities up to `N`.
    fn table(&self) -> Result<&RecurrenceTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let t = build_recurrence(&self.params, self.n + 1, &self.ctx)?;
        Ok(self.table.get_or_init(|| t))
    }

    fn grid(&self) -> Result<&ParamGridTables> {
        if let Some(g) = self.grid.get() {
            return Ok(g);
        }
        let g = ParamGridTables::build(&self.params, self.n, &self.ctx)?;
        Ok(self.grid.get_or_init(|| g))
    }

    fn ratio(&self, (p, q): (i64, i64)) -> macpoly_core::Real {
        self.ctx.ratio(p, q)
    }

    pub fn run(&self, suite: Suite) -> Result<Vec<SuiteReport>> {
        let suites: Vec<Suite> = match suite {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        };
        let mut out = Vec::new();
        for s in suites {
            for report in self.run_one(s)? {
                out.push(SuiteReport { suite: s, report });
            }
        }
        Ok(out)
    }

    fn run_one(&self, suite: Suite) -> Result<Vec<IdentityReport>> {
        let mut reports = Vec::new();
        let mut add = |id: &str, r: Result<IdentityReport>| -> Result<()> {
            reports.push(skip_on_domain(id, &self.params, r)?);
            Ok(())
        };
        let n = self.n;
        match suite {
            Suite::Kernel => {
                add("rho", self.rho_report())?;
                add("ismail-quotient", self.ismail_report())?;
                add("laguerre-product", self.laguerre_product_report())?;
                add("fractional-integral", self.fractional_report())?;
                add("moments", self.moment_report())?;
                add("recurrence", self.recurrence_report())?;
            }
            Suite::Lemma1 => add("weight-ode", self.weight_ode_report())?,
            Suite::Lemma2 => {
                for k in 0..=n {
                    add("moment-identities", self.table().and_then(|t| moment_identity_report(t, k)))?;
                }
                let quad = PrecisionContext::oracle(SHIFTED_KERNEL_CTX.0, SHIFTED_KERNEL_CTX.1)?;
                for k in 0..=n {
                    add("shifted-kernel", self.table().and_then(|t| shifted_kernel_report(t, k, &quad)))?;
                }
            }
            Suite::Thm2 => {
                for k in 0..=n {
                    add("lambda-derivative", self.grid().and_then(|g| lambda_derivative_report(g, k)))?;
                }
                for k in 0..=n {
                    add("t-derivative", self.grid().and_then(|g| t_derivative_report(g, k)))?;
                }
            }
            Suite::Thm3 => {
                for k in 0..=n {
                    add("leading-coefficient", self.grid().and_then(|g| leading_coefficient_report(g, k)))?;
                }
            }
            Suite::Cor1 => {
                for k in 0..=n {
                    add("coefficient-flows", self.grid().and_then(|g| coefficient_flow_report(g, k)))?;
                }
            }
            Suite::Cor3 => {
                for k in 0..=n {
                    add("homogeneity", self.grid().and_then(|g| homogeneity_report(g, k)))?;
                }
            }
            Suite::Thm4 => {
                let cfg = ReconstructionConfig::default();
                let xs: Vec<_> = X_POINTS.iter().map(|&r| self.ratio(r)).collect();
                let label_l = "P_n = E(0,λ)P_n(x;0,t) + ∫₀^λ E(ξ,λ)A_n P_{n−1}(x;ξ,t) dξ";
                let label_t = "P_n = a_n(t)[∫₀^t (xP′−nP−λA_nP_{n−1})/(y a_n(y)) dy + π_n(x)]";
                for k in 0..=n.min(RECONSTRUCTION_MAX_N) {
                    let r = lambda_reconstruction(&self.params, k, &xs, &cfg)
                        .map(|rec| rec.report("lambda-reconstruction", label_l, cfg.tol));
                    add("lambda-reconstruction", r)?;
                }
                for k in 0..=n.min(RECONSTRUCTION_MAX_N) {
                    let r = t_reconstruction(&self.params, k, &xs, &cfg)
                        .map(|rec| rec.report("t-reconstruction", label_t, cfg.tol));
                    add("t-reconstruction", r)?;
                }
            }
            Suite::Thm5 => {
                if n > MAX_OPERATOR_DEGREE {
                    return Err(Error::Capacity(format!(
                        "composition checks stop at degree {MAX_OPERATOR_DEGREE}"
                    )));
                }
                for k in 0..=n {
                    add("composition", self.table().and_then(|t| composition_report(t, k)))?;
                }
            }
            Suite::Quasi => {
                for k in 2..=n.max(1) {
                    add("quasi-orthogonality", self.grid().and_then(|g| quasi_orthogonality_report(g, k)))?;
                }
                add(
                    "laguerre-derivative",
                    laguerre_derivative_report(&self.params, n, &self.ctx),
                )?;
            }
            Suite::Section4 => {
                let r = path_report(&self.params.alpha, &self.params.nu, &self.ratio(PATH_T), n, &self.ctx);
                add("path", r)?;
            }
            Suite::All => unreachable!("expanded by run"),
        }
        Ok(reports)
    }

    fn kernel_ctx(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.ctx.digits().min(KERNEL_DIGITS))
    }

    fn rho_report(&self) -> Result<IdentityReport> {
        let ctx = self.kernel_ctx()?;
        let nu = ctx.lift(&self.params.nu);
        let tol = ctx.tol() * 10u32;
        let mut r = IdentityReport::new("rho", None);
        for &x in &KERNEL_X {
            let x = ctx.ratio(x.0, x.1);
            let base = kernel_point(&nu, &x, Route::LaplaceIntegral, &ctx)?.value;
            for route in [Route::BesselK, Route::Recurrence] {
                let v = kernel_point(&nu, &x, route, &ctx)?.value;
                let name = format!("ρ_ν by {} = ρ_ν by {}", route.name(), Route::LaplaceIntegral.name());
                r.push(&name, None, None, &Check::compare(&v, &base, &base, &tol));
            }
            r.push(
                "ρ_{ν+1} = νρ_ν + xρ_{ν−1}",
                None,
                None,
                &rho_recurrence_residual(&nu, &x, &ctx)?,
            );
        }
        let one = ctx.one();
        for order in 1..=3u32 {
            r.push(
                "d^n/dx^n ρ_ν = (−1)^n ρ_{ν−n}",
                Some(order as usize),
                None,
                &rho_derivative_check(&nu, order, &one, &ctx)?,
            );
        }
        Ok(r)
    }

    fn ismail_report(&self) -> Result<IdentityReport> {
        let mut r = IdentityReport::new("ismail-quotient", None);
        let ctx = self.kernel_ctx()?;
        let tol = ctx.real(macpoly_core::kernels::bessel::ISMAIL_TOL);
        for &x in &KERNEL_X {
            let q = ismail_quotient_check(&self.params.nu, &ctx.ratio(x.0, x.1))?;
            r.push(
                "ρ_ν/ρ_{ν+1} = π^{−2}∫ dy/(y(x+y)(J²+Y²)_{ν+1}(2√y))",
                None,
                None,
                &Check::compare(&q.lhs, &q.rhs, &q.lhs, &tol),
            );
        }
        Ok(r)
    }

    fn laguerre_product_report(&self) -> Result<IdentityReport> {
        let ctx = self.kernel_ctx()?;
        let nu = ctx.lift(&self.params.nu);
        if nu <= 0 {
            return Err(Error::Domain("the Laguerre product formula needs ν > 0".into()));
        }
        let mut r = IdentityReport::new("laguerre-product", None);
        for k in 0..=4 {
            r.push(
                "((−1)^n x^n/n!) ρ_ν(x) = ∫ y^{ν+n−1} e^{−y−x/y} L_n^ν(y) dy",
                Some(k),
                None,
                &laguerre_product_check(&nu, k, &ctx.one(), &ctx)?,
            );
        }
        Ok(r)
    }

    fn fractional_report(&self) -> Result<IdentityReport> {
        let ctx = PrecisionContext::oracle(FRACTIONAL_CTX.0, FRACTIONAL_CTX.1)?;
        let nu = ctx.lift(&self.params.nu);
        if nu <= 0 {
            return Err(Error::Domain("the fractional integrals need ν > 0".into()));
        }
        let mut r = IdentityReport::new("fractional-integral", None);
        let [left, right] = fractional_integral_check(&nu, &ctx.ratio(1, 2), &ctx.one(), &ctx)?;
        r.push("I_−^ν ρ_μ = ρ_{ν+μ}, μ = 1/2", None, None, &left);
        r.push("I_−^μ ρ_ν = ρ_{ν+μ}, μ = 1/2", None, None, &right);
        Ok(r)
    }

    fn moment_report(&self) -> Result<IdentityReport> {
        let ctx = PrecisionContext::oracle(MOMENT_ORACLE_CTX.0, MOMENT_ORACLE_CTX.1)?;
        let params = self.params.lift(&ctx);
        let count = 2 * self.n + 1;
        let exact = moments_exact(&self.params, count, &self.ctx)?;
        let quad = moments_quadrature(&params, count, &ctx)?;
        let tol = ctx.tol() * 10u32;
        let mut r = IdentityReport::new("moments", Some(&self.params));
        for (k, (e, q)) in exact.iter().zip(&quad).enumerate() {
            let e = ctx.lift(e);
            r.push("closed-form μ_n = quadrature μ_n", Some(k), None, &Check::compare(&e, q, q, &tol));
        }
        Ok(r)
    }

    fn recurrence_report(&self) -> Result<IdentityReport> {
        let table = self.table()?;
        let mut r = IdentityReport::new("recurrence", Some(&self.params));
        for (m, k, chk) in orthonormality_check(table) {
            if m <= self.n {
                r.push("∫P_mP_n ω = δ_{mn}", Some(m), Some(k), &chk);
            }
        }
        for k in 0..=self.n {
            r.push(
                "xP_n = A_{n+1}P_{n+1} + B_nP_n + A_nP_{n−1}",
                Some(k),
                None,
                &three_term_check(table, k)?,
            );
        }
        let (x, y) = (self.ratio((1, 2)), self.ratio((2, 1)));
        let tol = self.ctx.tol() * 10u32;
        for k in 0..=self.n {
            let (sum, quotient) = christoffel_darboux(table, k, &x, &y)?;
            r.push(
                "Σ_{k≤n} P_k(x)P_k(y) = A_{n+1}(P_{n+1}(x)P_n(y) − P_n(x)P_{n+1}(y))/(x−y)",
                Some(k),
                None,
                &Check::compare(&sum, &quotient, &sum.clone().abs().max(&self.ctx.one()), &tol),
            );
        }
        Ok(r)
    }

    fn weight_ode_report(&self) -> Result<IdentityReport> {
        if self.params.t <= 0 {
            return Err(Error::Domain("the weight ODE is stated for t > 0".into()));
        }
        let ctx = &self.ctx;
        let p = &self.params;
        let two = ctx.int(2);
        let points = [
            p.clone(),
            p.with_lambda(ctx.lift(&p.lambda) + 1u32)?,
            p.with_t(ctx.lift(&p.t) * &two)?,
        ];
        let mut r = IdentityReport::new("weight-ode", Some(p));
        for q in &points {
            for &x in &X_POINTS {
                r.push(
                    "x²ω″ − (2(α−λx)+ν−1)xω′ + ((α−λx)² + x(λ(1−ν)−t) + αν)ω = 0",
                    None,
                    None,
                    &weight_ode_residual(q, &self.ratio(x), ctx)?,
                );
            }
        }
        Ok(r)
    }
}

/// A precondition failure becomes an empty report with a note; anything else
/// is passed on.
fn skip_on_domain(id: &str, params: &Params, r: Result<IdentityReport>) -> Result<IdentityReport> {
    match r {
        Ok(r) => Ok(r),
        Err(Error::Domain(why)) => {
            let mut r = IdentityReport::new(id, Some(params));
            r.note(format!("skipped: {why}"));
            Ok(r)
        }
        Err(e) => Err(e),
    }
}
