use macpoly_core::moments::*;
use macpoly_core::numerics::linalg::cholesky;
use macpoly_core::{Params, PrecisionContext, Real};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

fn rel(a: &Real, b: &Real) -> f64 {
    (Float::with_val(a.prec(), a - b) / b).to_f64().abs()
}

fn params(s: (&str, &str, &str, &str), ctx: &PrecisionContext) -> Params {
    Params::parse(s.0, s.1, s.2, s.3, ctx).unwrap()
}

#[test]
fn closed_form_matches_quadrature() {
    let ctx = PrecisionContext::new(120).unwrap();
    let oracle = PrecisionContext::oracle(50, 34).unwrap();
    for pt in [("1/2", "3/2", "1", "1"), ("0", "1", "1", "1"), ("1", "0.3", "2", "0.5")] {
        let p = params(pt, &ctx);
        let exact = moments_exact(&p, 9, &ctx).unwrap();
        let quad = moments_quadrature(&p, 9, &oracle).unwrap();
        for (n, (e, q)) in exact.iter().zip(&quad).enumerate() {
            let r = rel(&Float::with_val(oracle.prec(), e), q);
            assert!(r < 10.0 * oracle.tol().to_f64(), "{pt:?} n={n}: {r:e}");
        }
    }
}

#[test]
fn closed_form_examples() {
    let ctx = PrecisionContext::new(60).unwrap();
    // (0,1,1,1), n=0: Γ(2)Γ(1)Ψ(2,2;1) = Ψ(2,2;1)
    let p = params(("0", "1", "1", "1"), &ctx);
    let v = moment_closed_form(0, &p, &ctx).unwrap();
    let psi = macpoly_core::kernels::tricomi_psi(&ctx.int(2), &ctx.int(2), &ctx.one(), &ctx).unwrap();
    assert!(rel(&v, &psi) < 1e-38);
    assert!(moment_closed_form(0, &params(("0", "1", "1", "0"), &ctx), &ctx).is_err());
}

#[test]
fn boundary_cases() {
    let ctx = PrecisionContext::new(60).unwrap();
    let t0 = params(("0", "1", "2", "0"), &ctx);
    assert!(rel(&moments_exact(&t0, 1, &ctx).unwrap()[0], &ctx.ratio(1, 2)) < 1e-38);
    assert!(rel(&moment_quadrature(0, &t0, &ctx).unwrap(), &ctx.ratio(1, 2)) < 1e-38);
    let l0 = params(("0", "1", "0", "1"), &ctx);
    assert!(rel(&moments_exact(&l0, 1, &ctx).unwrap()[0], &ctx.one()) < 1e-38);
    let oracle = PrecisionContext::oracle(40, 28).unwrap();
    let q = moments_quadrature(&params(("0", "1", "0", "1"), &oracle), 4, &oracle).unwrap();
    let e = moments_exact(&params(("0", "1", "0", "1"), &oracle), 4, &oracle).unwrap();
    for (a, b) in q.iter().zip(&e) {
        assert!(rel(a, b) < 1e-27);
    }
}

#[test]
fn scaling_law() {
    let ctx = PrecisionContext::new(80).unwrap();
    let p = params(("1/2", "3/2", "1", "1"), &ctx);
    let q = params(("1/2", "3/2", "2", "2"), &ctx);
    let a = moments_exact(&p, 9, &ctx).unwrap();
    let b = moments_exact(&q, 9, &ctx).unwrap();
    for n in 0..9 {
        let e = Float::with_val(ctx.prec(), &p.alpha + (n as u32 + 1));
        let factor = Float::with_val(ctx.prec(), ctx.int(2).pow(-e));
        assert!(rel(&b[n], &(a[n].clone() * factor)) < 10.0 * ctx.tol().to_f64());
    }
}

#[test]
fn tables_are_positive_definite() {
    let ctx = PrecisionContext::new(120).unwrap();
    let p = params(("1/2", "3/2", "1", "1"), &ctx);
    let tab = build_moment_table(&p, 8, &ctx).unwrap();
    assert_eq!(tab.mu.len(), 17);
    assert!(cholesky(&tab.hankel(8, 0), &ctx).is_ok());
    assert_eq!(tab.source, MomentSource::ClosedForm);
    let one = build_moment_table(&p, 0, &ctx).unwrap();
    assert!(one.mu.len() == 1 && one.mu[0] > 0);
    let t0 = build_moment_table(&params(("0", "2", "3", "0"), &ctx), 4, &ctx).unwrap();
    assert_eq!(t0.source, MomentSource::GammaT0);
    for (n, m) in t0.mu.iter().enumerate() {
        // Γ(2) n! 3^{-(n+1)}
        let want = Float::with_val(ctx.prec(), Float::factorial(n as u32)) / Float::with_val(ctx.prec(), 3u32).pow(n as u32 + 1);
        assert!(rel(m, &want) < 1e-95);
    }
    assert!(build_moment_table(&p, 25, &ctx).is_err());
}

#[test]
fn aux_integral_matches_quadrature() {
    let ctx = PrecisionContext::new(60).unwrap();
    for (c, d, l, t) in [("2.5", "1.5", "1", "1"), ("1.25", "3", "0.5", "2"), ("3", "1", "0", "2"), ("4", "1.5", "2", "0")] {
        let c = ctx.parse(c).unwrap();
        let d = ctx.parse(d).unwrap();
        let l = ctx.parse(l).unwrap();
        let t = ctx.parse(t).unwrap();
        let a = aux_integral(&c, &d, &l, &t, &ctx).unwrap();
        let q = aux_integral_quadrature(&c, &d, &l, &t, &ctx).unwrap();
        assert!(rel(&a, &q) < 1e-38);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn moments_are_log_convex(alpha in -0.9f64..2.0, nu in 0.0f64..3.0, lambda in 0.1f64..3.0, t in 0.1f64..3.0) {
        let ctx = PrecisionContext::new(40).unwrap();
        let p = Params::new(ctx.real(alpha), ctx.real(nu), ctx.real(lambda), ctx.real(t)).unwrap();
        let mu = moments_exact(&p, 10, &ctx).unwrap();
        for k in 1..9 {
            let lhs = Float::with_val(ctx.prec(), mu[k].square_ref());
            let rhs = Float::with_val(ctx.prec(), &mu[k - 1] * &mu[k + 1]);
            prop_assert!(lhs <= rhs);
        }
    }
}
