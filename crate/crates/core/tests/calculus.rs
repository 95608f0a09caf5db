use macpoly_core::calculus::*;
use macpoly_core::opoly::{build_recurrence, eval_poly};
use macpoly_core::{IdentityReport, Params, PrecisionContext, Real};
use proptest::prelude::*;
use rug::Float;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(120).unwrap()
}

fn params(s: (&str, &str, &str, &str), ctx: &PrecisionContext) -> Params {
    Params::parse(s.0, s.1, s.2, s.3, ctx).unwrap()
}

fn assert_pass(r: &IdentityReport) {
    for e in &r.entries {
        assert!(e.pass, "{}: {}", r.id, e.describe());
    }
    assert!(!r.entries.is_empty(), "{} has no entries", r.id);
}

fn rel(a: &Real, b: &Real) -> f64 {
    (Float::with_val(a.prec(), a - b).abs() / Float::with_val(b.prec(), b.abs_ref())).to_f64()
}

#[test]
fn derivative_identities_at_generic_point() {
    let c = ctx();
    let grid = ParamGridTables::build(&params(("1/2", "3/2", "1", "1"), &c), 4, &c).unwrap();
    for n in 0..=4 {
        assert_pass(&lambda_derivative_report(&grid, n).unwrap());
        assert_pass(&t_derivative_report(&grid, n).unwrap());
        assert_pass(&homogeneity_report(&grid, n).unwrap());
        assert_pass(&coefficient_flow_report(&grid, n).unwrap());
        assert_pass(&leading_coefficient_report(&grid, n).unwrap());
    }
    // the bound is FD-limited and far below 1e-25
    let worst = lambda_derivative_report(&grid, 4).unwrap().entries[0].tol.to_f64();
    assert!(worst < 1e-25);
}

#[test]
fn lambda_derivative_other_point() {
    let c = ctx();
    let grid = ParamGridTables::build(&params(("0", "1", "2", "1"), &c), 3, &c).unwrap();
    assert_pass(&lambda_derivative_report(&grid, 3).unwrap());
}

#[test]
fn laguerre_end_in_closed_form() {
    // t = 0, α = 0, λ = 1, ν = 1: P_1 = λ^{1/2}(λx − 1), so ∂_λP_1 = (3/2)λ^{1/2}x − (1/2)λ^{−1/2}.
    let c = ctx();
    let grid = ParamGridTables::build(&params(("0", "1", "1", "0"), &c), 3, &c).unwrap();
    assert!(grid.t_axis.is_none());
    let d = grid.derivative(Axis::Lambda, |t| t.coeffs[1].clone()).unwrap();
    assert!(rel(&d.value[0], &c.ratio(-1, 2)) < 1e-50);
    assert!(rel(&d.value[1], &c.ratio(3, 2)) < 1e-50);
    for n in 1..=3 {
        assert_pass(&lambda_derivative_report(&grid, n).unwrap());
        // ∂_λ(b_n/a_n) = A_n² = n(n+α)/λ², and 2n+α+1−λB_n = 0
        assert_pass(&coefficient_flow_report(&grid, n).unwrap());
        assert_pass(&leading_coefficient_report(&grid, n).unwrap());
        let db = grid
            .derivative(Axis::Lambda, |t| vec![Float::with_val(c.prec(), t.b(n) / t.a(n))])
            .unwrap();
        assert!(rel(&db.value[0], &c.int((n * n) as i64)) < 1e-50);
    }
}

#[test]
fn t_derivative_without_lambda() {
    let c = ctx();
    let grid = ParamGridTables::build(&params(("0", "1", "0", "1"), &c), 2, &c).unwrap();
    assert!(grid.lambda_axis.is_none());
    assert_pass(&t_derivative_report(&grid, 2).unwrap());
    assert_pass(&homogeneity_report(&grid, 2).unwrap());
    assert!(lambda_derivative_report(&grid, 2).is_err());
}

#[test]
fn flows_combine_into_homogeneity() {
    // λ·(λ-identity) + (t-identity) − (homogeneity) = −((λ∂_λ+t∂_t)a_n/a_n − n − (α+1)/2) P_n
    let c = ctx();
    let p = c.prec();
    let grid = ParamGridTables::build(&params(("1/2", "3/2", "1", "1"), &c), 3, &c).unwrap();
    let n = 3;
    let r = flow_residuals(&grid, n).unwrap();
    for k in 0..=n {
        let combo = Float::with_val(p, &r.lambda[k] * &grid.params().lambda) + &r.t[k] - &r.homogeneity[k];
        assert!(combo.abs() < c.pow10(-80), "coefficient {k}");
    }
}

#[test]
fn scaling_laws_at_half_and_double() {
    let c = ctx();
    let p = c.prec();
    let base = params(("1/2", "3/2", "1", "1"), &c);
    let tab = build_recurrence(&base, 3, &c).unwrap();
    for (num, den) in [(1, 2), (2, 1)] {
        let s = c.ratio(num, den);
        let scaled = Params::new(
            base.alpha.clone(),
            base.nu.clone(),
            Float::with_val(p, &base.lambda * &s),
            Float::with_val(p, &base.t * &s),
        )
        .unwrap();
        let st = build_recurrence(&scaled, 3, &c).unwrap();
        for n in 1..=3 {
            let ea = Float::with_val(p, &base.alpha + 1u32) / 2u32 + n as u32;
            let eb = Float::with_val(p, &base.alpha - 1u32) / 2u32 + n as u32;
            let pa = Float::with_val(p, rug::ops::Pow::pow(&s, &ea));
            let pb = Float::with_val(p, rug::ops::Pow::pow(&s, &eb));
            assert!(rel(st.a(n), &(pa * tab.a(n))) < 1e-90);
            assert!(rel(&st.b(n), &(pb * tab.b(n))) < 1e-90);
            assert!(rel(&st.big_b[n], &Float::with_val(p, &tab.big_b[n] / &s)) < 1e-90);
            assert!(rel(&st.big_a[n], &Float::with_val(p, &tab.big_a[n] / &s)) < 1e-90);
        }
    }
}

#[test]
fn sub_leading_law_is_empty_at_degree_zero() {
    let c = ctx();
    let grid = ParamGridTables::build(&params(("1/2", "3/2", "1", "1"), &c), 1, &c).unwrap();
    let r = homogeneity_report(&grid, 0).unwrap();
    assert_pass(&r);
    assert_eq!(r.notes.len(), 1);
    assert!(!r.entries.iter().any(|e| e.identity.contains("b_n")));
    assert_pass(&homogeneity_report(&grid, 1).unwrap());
}

#[test]
fn central_differences_converge_at_second_order() {
    let c = PrecisionContext::new(60).unwrap();
    let p = c.prec();
    let step = c.pow10(-3);
    let grid = ParamGridTables::with_step(&params(("1/2", "3/2", "1", "1"), &c), 2, &step, &c).unwrap();
    let n = 2;
    let a = |t: &macpoly_core::opoly::RecurrenceTable| vec![t.a(n).clone()];
    let resid = |fine: bool| {
        let d = grid.central(Axis::Lambda, fine, a).unwrap().remove(0);
        // B_n − 2∂_λa_n/a_n
        let v = Float::with_val(p, &grid.center.big_b[n]) - d * 2u32 / grid.center.a(n);
        v.abs().to_f64()
    };
    let ratio = resid(false) / resid(true);
    assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn shifted_kernel_integrals() {
    let c = ctx();
    let quad = PrecisionContext::oracle(45, 30).unwrap();
    let tab = build_recurrence(&params(("1/2", "3/2", "1", "1"), &c), 2, &c).unwrap();
    for n in [0, 2] {
        let r = shifted_kernel_report(&tab, n, &quad).unwrap();
        assert_pass(&r);
        assert!(r.entries.iter().all(|e| e.tol.to_f64() < 1e-25));
    }
    // λ = 0: ∫P_1² ρ_2(x) x^0 dx = 2 + 0 + 1 + 1
    let tab = build_recurrence(&params(("0", "1", "0", "1"), &c), 1, &c).unwrap();
    assert_pass(&shifted_kernel_report(&tab, 1, &quad).unwrap());
}

#[test]
fn quasi_orthogonality() {
    let c = ctx();
    let grid = ParamGridTables::build(&params(("1/2", "3/2", "1", "1"), &c), 2, &c).unwrap();
    let r = quasi_orthogonality_report(&grid, 2).unwrap();
    assert_pass(&r);
    assert_eq!(r.entries.iter().filter(|e| e.m == Some(1)).count(), 2);
    let grid = ParamGridTables::build(&params(("0", "1", "1", "1"), &c), 3, &c).unwrap();
    assert_pass(&quasi_orthogonality_report(&grid, 3).unwrap());
    assert!(quasi_orthogonality_report(&grid, 1).is_err());
}

#[test]
fn lambda_reconstruction_examples() {
    let c = ctx();
    let cfg = ReconstructionConfig::default();
    let center = params(("1/2", "3/2", "1", "1"), &c);
    let r = lambda_reconstruction(&center, 1, &[c.one()], &cfg).unwrap();
    assert_pass(&r.report("lambda-reconstruction", "P_n from its λ flow", cfg.tol));
    let r = lambda_reconstruction(&center, 2, &[c.ratio(1, 2), c.int(2)], &cfg).unwrap();
    assert!(r.max_relative_error() < 1e-8);
    // λ = 0: the integral is empty and the λ = 0 table is returned
    let r = lambda_reconstruction(&params(("1/2", "3/2", "0", "1"), &c), 2, &[c.one()], &cfg).unwrap();
    assert_eq!(r.max_relative_error(), 0.0);
}

#[test]
fn t_reconstruction_examples() {
    let c = ctx();
    let cfg = ReconstructionConfig::default();
    let r = t_reconstruction(&params(("1/2", "3/2", "1", "1"), &c), 1, &[c.one()], &cfg).unwrap();
    assert!(r.max_relative_error() < 1e-8);
    // degree 0 is the constant a_0(λ, t)
    let r = t_reconstruction(&params(("1/2", "3/2", "1", "1"), &c), 0, &[c.int(3)], &cfg).unwrap();
    assert!(r.max_relative_error() < 1e-30);
    // t = 0: only the Laguerre term remains
    let r = t_reconstruction(&params(("1/2", "3/2", "1", "0"), &c), 3, &[c.one(), c.int(2)], &cfg).unwrap();
    assert!(r.max_relative_error() < 1e-30);
    // ν < 1: the integrand is singular at y = 0 but integrable
    let r = t_reconstruction(&params(("0", "1/2", "1", "2"), &c), 2, &[c.one()], &cfg).unwrap();
    assert!(r.max_relative_error() < 1e-8, "{}", r.max_relative_error());
}

#[test]
fn path_family() {
    let c = ctx();
    let r = path_report(&c.ratio(1, 2), &c.ratio(3, 2), &c.ratio(1, 2), 3, &c).unwrap();
    assert_pass(&r);
    assert!(r.entries.iter().any(|e| e.identity.contains("t → 0")));
    assert!(r.entries.iter().any(|e| e.identity.contains("t → 1")));
    assert!(path_report(&c.ratio(1, 2), &c.ratio(3, 2), &c.one(), 3, &c).is_err());
}

#[test]
fn path_tables_match_direct_evaluation() {
    // the path point (1−t, t) is an ordinary parameter point
    let c = ctx();
    let direct = build_recurrence(&params(("1/2", "3/2", "3/4", "1/4"), &c), 2, &c).unwrap();
    let x = c.ratio(7, 5);
    let v = eval_poly(&direct, 2, &x).unwrap();
    let grid = ParamGridTables::build(&params(("1/2", "3/2", "3/4", "1/4"), &c), 2, &c).unwrap();
    assert!(rel(&eval_poly(&grid.center, 2, &x).unwrap(), &v) < 1e-100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn leading_coefficient_scaling(alpha in -0.5f64..2.0, nu in 0.2f64..3.0, lambda in 0.2f64..3.0, t in 0.2f64..3.0, s in 0.3f64..3.0) {
        let c = PrecisionContext::new(40).unwrap();
        let p = c.prec();
        let base = Params::new(c.real(alpha), c.real(nu), c.real(lambda), c.real(t)).unwrap();
        let sc = c.real(s);
        let scaled = Params::new(c.real(alpha), c.real(nu), c.real(lambda) * &sc, c.real(t) * &sc).unwrap();
        let a = build_recurrence(&base, 2, &c).unwrap();
        let b = build_recurrence(&scaled, 2, &c).unwrap();
        for n in 0..=2 {
            let e = Float::with_val(p, c.real(alpha) + 1u32) / 2u32 + n as u32;
            let want = Float::with_val(p, rug::ops::Pow::pow(&sc, &e)) * a.a(n);
            prop_assert!(rel(b.a(n), &want) < 1e-15);
            let want_b = Float::with_val(p, &a.big_b[n] / &sc);
            prop_assert!(rel(&b.big_b[n], &want_b) < 1e-15);
        }
    }
}

#[test]
fn laguerre_end_derivative_law() {
    let c = PrecisionContext::new(60).unwrap();
    for q in [("0", "1", "1", "1"), ("1/2", "3/2", "2", "0"), ("3/2", "1/2", "1/3", "1")] {
        let r = laguerre_derivative_report(&params(q, &c), 5, &c).unwrap();
        assert_eq!(r.entries.len(), 5);
        assert_pass(&r);
    }
}
