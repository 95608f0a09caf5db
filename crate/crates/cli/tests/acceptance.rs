//! Acceptance criteria: one PASS/FAIL line each, non-zero exit on any FAIL.

use std::process::{Command, ExitCode};

use macpoly_core::calculus::{
    coefficient_flow_report, homogeneity_report, lambda_derivative_report, lambda_reconstruction,
    leading_coefficient_report, moment_identity_report, path_report, quasi_orthogonality_report,
    shifted_kernel_report, t_derivative_report, t_reconstruction, ParamGridTables, ReconstructionConfig,
};
use macpoly_core::composition::{term_integral, theta_apply, OperatorPolynomial, TermSum};
use macpoly_core::kernels::{ismail_quotient_check, weight_ode_residual, weight_ode_residual_unit_t};
use macpoly_core::moments::{moments_exact, moments_quadrature};
use macpoly_core::numerics::gamma_fn;
use macpoly_core::opoly::build_recurrence;
use macpoly_core::{IdentityReport, Params, PrecisionContext, Real, Result};
use rug::ops::Pow;

type Outcome = Result<(bool, String)>;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(120).unwrap()
}

fn params(s: (&str, &str, &str, &str), ctx: &PrecisionContext) -> Params {
    Params::parse(s.0, s.1, s.2, s.3, ctx).unwrap()
}

const GENERIC: (&str, &str, &str, &str) = ("1/2", "3/2", "1", "1");

fn abs_diff(a: &Real, b: &Real) -> Real {
    (a.clone() - b).abs()
}

fn rel_diff(a: &Real, b: &Real) -> Real {
    abs_diff(a, b) / b.clone().abs()
}

fn e(x: &Real) -> String {
    format!("{:.2e}", x.to_f64())
}

/// Largest residual and largest tolerance over reports, and whether all pass.
fn summary<'a>(reports: impl IntoIterator<Item = &'a IdentityReport>) -> (bool, f64, f64, usize) {
    let (mut pass, mut res, mut tol, mut count) = (true, 0f64, 0f64, 0);
    for r in reports {
        for en in &r.entries {
            pass &= en.pass;
            res = res.max(en.value.to_f64());
            tol = tol.max(en.tol.to_f64());
            count += 1;
        }
    }
    (pass && count > 0, res, tol, count)
}

fn orthonormality() -> Outcome {
    let c = ctx();
    let table = build_recurrence(&params(GENERIC, &c), 8, &c)?;
    let mut worst = c.zero();
    for m in 0..=8 {
        for n in 0..=m {
            let (v, _) = table.pairing(&table.coeffs[m], &table.coeffs[n], 0);
            let target = if m == n { c.one() } else { c.zero() };
            worst = worst.max(&abs_diff(&v, &target));
        }
    }
    Ok((worst <= c.pow10(-40), format!("max |∫P_mP_n ω − δ_mn| = {} (m, n ≤ 8)", e(&worst))))
}

fn laguerre_limit() -> Outcome {
    let c = ctx();
    let table = build_recurrence(&params(("0", "1", "1", "0"), &c), 6, &c)?;
    let mut worst = c.zero();
    for n in 0..=6 {
        worst = worst.max(&abs_diff(&table.big_b[n], &c.int(2 * n as i64 + 1)));
        worst = worst.max(&abs_diff(&table.big_a[n].clone().abs(), &c.int(n as i64)));
    }
    // Γ(ν)Γ(1+α) = 1 here
    let a0 = abs_diff(table.a(0), &c.one());
    let ok = worst <= c.pow10(-40) && a0 <= c.pow10(-40);
    Ok((ok, format!("max |B_n − (2n+1)|, ||A_n| − n| = {} (n ≤ 6); |a_0 − 1/√(Γ(ν)Γ(1+α))| = {}", e(&worst), e(&a0))))
}

fn prudnikov_limit() -> Outcome {
    let c = ctx();
    let mut worst = c.zero();
    for q in [("1/2", "3/2", "0", "1"), ("0", "1", "0", "2"), ("3/2", "1/3", "0", "1/2")] {
        let p = params(q, &c);
        let mu = moments_exact(&p, 17, &c)?;
        for (n, m) in mu.iter().enumerate() {
            let s = p.alpha.clone() + (n as u32 + 1);
            let want = gamma_fn(&s, &c)? * gamma_fn(&(s.clone() + &p.nu), &c)? / p.t.clone().pow(&s);
            worst = worst.max(&rel_diff(m, &want));
        }
    }
    Ok((worst <= c.pow10(-40), format!("max relative gap {} (n ≤ 16, three points)", e(&worst))))
}

fn moment_cross_oracle() -> Outcome {
    let c = ctx();
    let oracle = PrecisionContext::oracle(50, 34)?;
    let mut worst = oracle.zero();
    for q in [GENERIC, ("0", "1", "2", "1/2"), ("3/2", "1/2", "1/2", "3")] {
        let exact = moments_exact(&params(q, &c), 9, &c)?;
        let quad = moments_quadrature(&params(q, &oracle), 9, &oracle)?;
        for (x, y) in exact.iter().zip(&quad) {
            worst = worst.max(&rel_diff(&oracle.lift(x), y));
        }
    }
    Ok((worst <= oracle.pow10(-30), format!("max relative gap closed form vs quadrature {} (n ≤ 8)", e(&worst))))
}

fn weight_ode() -> Outcome {
    let c = ctx();
    let mut worst = 0f64;
    let mut ok = true;
    let mut off_unit = true;
    for q in [GENERIC, ("0", "1", "2", "1/2"), ("3/2", "1/2", "1/2", "3")] {
        let p = params(q, &c);
        for x in [c.ratio(1, 2), c.one(), c.int(3)] {
            let chk = weight_ode_residual(&p, &x, &c)?;
            // bound = tol · term scale
            let scale = chk.bound.clone() / c.tol();
            let r = (chk.residual.clone().abs() / &scale).to_f64();
            ok &= r <= 1e-30;
            worst = worst.max(r);
            if p.t != 1 {
                off_unit &= !weight_ode_residual_unit_t(&p, &x, &c)?.pass();
            }
        }
    }
    Ok((
        ok,
        format!(
            "max residual/term scale {worst:.2e} on 3×3 grid; coefficient x(λ(1−ν)−1) fails off t = 1: {off_unit}"
        ),
    ))
}

fn parameter_derivatives() -> Outcome {
    let c = ctx();
    let grid = ParamGridTables::build(&params(GENERIC, &c), 4, &c)?;
    let mut reports = Vec::new();
    for n in 0..=4 {
        reports.push(lambda_derivative_report(&grid, n)?);
        reports.push(t_derivative_report(&grid, n)?);
        reports.push(leading_coefficient_report(&grid, n)?);
        reports.push(coefficient_flow_report(&grid, n)?);
        reports.push(homogeneity_report(&grid, n)?);
    }
    let (pass, res, tol, count) = summary(&reports);
    let ok = pass && res <= 1e-25;
    Ok((
        ok,
        format!("{count} residuals, max {res:.2e}, FD-limited bound ≤ {tol:.2e} (h = {}), n ≤ 4", e(&grid.step)),
    ))
}

fn moment_identities() -> Outcome {
    let c = ctx();
    let table = build_recurrence(&params(GENERIC, &c), 5, &c)?;
    let quad = PrecisionContext::oracle(45, 30)?;
    let exact: Vec<_> = (0..=4).map(|n| moment_identity_report(&table, n)).collect::<Result<_>>()?;
    let shifted: Vec<_> = (0..=4).map(|n| shifted_kernel_report(&table, n, &quad)).collect::<Result<_>>()?;
    let (p1, r1, _, n1) = summary(&exact);
    let (p2, r2, _, n2) = summary(&shifted);
    let ok = p1 && p2 && r1 <= 1e-40 && r2 <= 1e-25;
    Ok((
        ok,
        format!("moment identities: {n1} residuals, max {r1:.2e}; ρ_{{ν+1}} integrals: {n2} residuals, max {r2:.2e}"),
    ))
}

fn quasi_orthogonality() -> Outcome {
    let c = ctx();
    let grid = ParamGridTables::build(&params(GENERIC, &c), 4, &c)?;
    let mut reports: Vec<_> = (2..=4).map(|n| quasi_orthogonality_report(&grid, n)).collect::<Result<_>>()?;
    let mut path = path_report(&c.ratio(1, 2), &c.ratio(3, 2), &c.ratio(1, 2), 4, &c)?;
    path.entries.retain(|e| e.identity.starts_with('∫') || e.identity.starts_with('|'));
    reports.push(path);
    let (pass, _, _, count) = summary(&reports);
    // Zero integrals are measured against |∫ Q_n x^{n−1} ω|, which the
    // separation entry carries as its bound. Demanding ≤ 10^{−20}·scale for
    // the zeros and a 10³ gap gives 10^{−23}.
    let mut ok = pass;
    let mut worst = 0f64;
    for r in &reports {
        for n in 2..=4 {
            let of_n = || r.entries.iter().filter(move |e| e.n == Some(n));
            let Some(scale) = of_n().find(|e| e.identity.starts_with('|')).map(|e| e.tol.to_f64()) else {
                continue;
            };
            for z in of_n().filter(|e| e.identity.ends_with("ω = 0")) {
                let q = z.value.to_f64() / scale;
                worst = worst.max(q);
                ok &= q <= 1e-23;
            }
        }
    }
    Ok((
        ok,
        format!("{count} entries; max zero-integral / first non-zero integral = {worst:.2e}, separation ≥ 10³"),
    ))
}

fn reconstructions() -> Outcome {
    let c = ctx();
    let p = params(GENERIC, &c);
    let cfg = ReconstructionConfig::default();
    let xs = [c.ratio(1, 2), c.one(), c.int(2)];
    let (mut wl, mut wt) = (0f64, 0f64);
    for n in 0..=3 {
        wl = wl.max(lambda_reconstruction(&p, n, &xs, &cfg)?.max_relative_error());
        wt = wt.max(t_reconstruction(&p, n, &xs, &cfg)?.max_relative_error());
    }
    Ok((
        wl <= 1e-8 && wt <= 1e-8,
        format!("max relative error: λ integral {wl:.2e}, t integral {wt:.2e} (x ∈ {{1/2, 1, 2}}, n ≤ 3)"),
    ))
}

fn composition() -> Outcome {
    let c = ctx();
    let p = params(GENERIC, &c);
    let table = build_recurrence(&p, 6, &c)?;
    let (mut zero, mut value) = (c.zero(), c.zero());
    for n in 0..=6 {
        let op = OperatorPolynomial::new(&table, n)?;
        let mut s = TermSum::base(&p, &c)?;
        for m in 0..=n {
            let (v, mag) = term_integral(&op.apply(&s), &p.nu, &c)?;
            if m < n {
                zero = zero.max(&(v.abs() / mag));
            } else {
                // t = 1, so t^n/a_n = 1/a_n
                let want = c.one() / table.a(n);
                value = value.max(&rel_diff(&v, &want));
            }
            s = theta_apply(&s);
        }
    }
    let ok = zero <= c.pow10(-30) && value <= c.pow10(-30);
    Ok((ok, format!("m < n: max |I|/scale {}; m = n: max relative gap to 1/a_n {} (n ≤ 6)", e(&zero), e(&value))))
}

fn ismail() -> Outcome {
    let c = PrecisionContext::new(40)?;
    let mut worst = 0f64;
    for nu in [c.zero(), c.ratio(1, 2), c.one()] {
        for x in [c.ratio(1, 2), c.one(), c.int(4)] {
            worst = worst.max(ismail_quotient_check(&nu, &x)?.relative_gap());
        }
    }
    Ok((worst <= 1e-6, format!("max relative gap {worst:.2e} on {{0, 1/2, 1}} × {{1/2, 1, 4}}")))
}

fn toda_path() -> Outcome {
    let c = ctx();
    let r = path_report(&c.ratio(1, 2), &c.ratio(3, 2), &c.ratio(1, 2), 3, &c)?;
    let pick = |pred: &dyn Fn(&str) -> bool| {
        let mut rep = IdentityReport::new("path", None);
        rep.entries = r.entries.iter().filter(|e| pred(&e.identity)).cloned().collect();
        rep
    };
    let toda = pick(&|s| s.starts_with("d/dt"));
    let ends = pick(&|s| s.starts_with("path end"));
    let (p1, r1, _, n1) = summary([&toda]);
    let (p2, r2, _, n2) = summary([&ends]);
    let ok = p1 && p2 && r1 <= 1e-25 && r.pass();
    Ok((
        ok,
        format!("{n1} Toda residuals, max {r1:.2e}; {n2} endpoint comparisons, max gap {r2:.2e}; all path entries pass: {}", r.pass()),
    ))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_macpoly"))
            .args(["verify", "--suite", "all"])
            .env_remove("MACPOLY_DIGITS")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = same && a.status.success() && b.status.success();
    Ok((
        ok,
        format!(
            "two `verify --suite all` runs: {} bytes, identical: {same}, exit codes {:?}/{:?}",
            a.stdout.len(),
            a.status.code(),
            b.status.code()
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("orthonormality", orthonormality),
        ("Laguerre limit t = 0", laguerre_limit),
        ("Prudnikov limit λ = 0", prudnikov_limit),
        ("moment closed form vs quadrature", moment_cross_oracle),
        ("weight ODE", weight_ode),
        ("parameter-derivative identities", parameter_derivatives),
        ("moment and ρ_{ν+1} integral identities", moment_identities),
        ("quasi-orthogonality", quasi_orthogonality),
        ("reconstruction from parameter integrals", reconstructions),
        ("composition orthogonality", composition),
        ("Ismail quotient", ismail),
        ("Toda equations on the path λ = 1 − t", toda_path),
        ("determinism of verify reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = match f() {
            Ok(v) => v,
            Err(err) => (false, format!("error: {err}")),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
