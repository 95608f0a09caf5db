use macpoly_core::composition::*;
use macpoly_core::kernels::laguerre_coeffs;
use macpoly_core::moments::{aux_integral_quadrature, moments_exact};
use macpoly_core::opoly::build_recurrence;
use macpoly_core::{IdentityReport, Params, PrecisionContext, Real};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(80).unwrap()
}

fn params(s: (&str, &str, &str, &str), ctx: &PrecisionContext) -> Params {
    Params::parse(s.0, s.1, s.2, s.3, ctx).unwrap()
}

fn close(a: &Real, b: &Real, tol: f64) -> bool {
    let d = Float::with_val(a.prec(), a - b).abs().to_f64();
    d <= tol * b.to_f64().abs().max(1.0)
}

fn assert_pass(r: &IdentityReport) {
    assert!(!r.entries.is_empty());
    for e in &r.entries {
        assert!(e.pass, "{}: {}", r.id, e.describe());
    }
}

#[test]
fn theta_on_base_term() {
    let c = ctx();
    let p = params(("1/2", "3/2", "2", "1"), &c);
    let mut s = TermSum::zero(&p);
    s.add((0, 0), c.one());
    let img = theta_apply(&s);
    assert_eq!(img.len(), 2);
    let a1 = c.ratio(3, 2);
    assert!(close(&img.terms[&(1, 0)], &a1, 1e-70));
    assert!(close(&img.terms[&(2, 1)], &(a1 * -2i32), 1e-70));
}

#[test]
fn theta_degenerate_lambda_zero() {
    // α = 0, λ = 0: θ[1/t] = y/t
    let c = ctx();
    let p = params(("0", "1", "0", "3"), &c);
    let mut s = TermSum::zero(&p);
    s.add((0, 0), c.one());
    let img = theta_apply(&s);
    assert_eq!(img.terms.keys().copied().collect::<Vec<_>>(), vec![(1, 0)]);
    let y = c.ratio(5, 7);
    let want = Float::with_val(c.prec(), &y / 3u32);
    assert!(close(&img.eval(&y, &c), &want, 1e-70));
}

#[test]
fn theta_squared_by_hand() {
    // α = 0: θ[1/(λy+t)] = ty/(λy+t)², θ²[…] = t y (2t − … ) — expand:
    // y d/dy (t y²/(λy+t)²) = 2ty²/(λy+t)² − 2λty³/(λy+t)³
    let c = ctx();
    let p = params(("0", "1", "3/2", "2/3"), &c);
    let mut s = TermSum::zero(&p);
    s.add((0, 0), c.one());
    let two = theta_apply(&theta_apply(&s));
    for y in [c.ratio(1, 3), c.one(), c.int(4)] {
        let pr = c.prec();
        let (l, t) = (c.ratio(3, 2), c.ratio(2, 3));
        let base = Float::with_val(pr, &l * &y) + &t;
        let y2 = Float::with_val(pr, y.square_ref());
        let want = Float::with_val(pr, &t * &y2) * 2u32 / Float::with_val(pr, base.square_ref())
            - Float::with_val(pr, &l * &t) * 2u32 * Float::with_val(pr, &y2 * &y) / Float::with_val(pr, (&base).pow(3u32));
        assert!(close(&two.eval(&y, &c), &want, 1e-70));
    }
}

#[test]
fn rodrigues_examples() {
    let c = ctx();
    let ys = [c.ratio(1, 4), c.one(), c.int(3)];
    for nu in [c.one(), c.ratio(1, 2), c.ratio(7, 3)] {
        for m in 0..=4 {
            for chk in rodrigues_check(&nu, m, &ys, &c).unwrap() {
                assert!(chk.pass(), "ν={} m={m}", nu.to_f64());
            }
        }
    }
    // m = 2, ν = 1, y = 1: L_2^1(1) = 3 − 3 + 1/2 = 1/2, both sides = 2·e^{−1}·1/2
    let lag = laguerre_coeffs(2, &c.one(), &c).unwrap();
    let l21 = lag.iter().fold(c.zero(), |acc, v| acc + v);
    assert!(close(&l21, &c.ratio(1, 2), 1e-70));
    assert!(rodrigues_check(&c.one(), 2, &[c.one()], &c).unwrap()[0].pass());
    assert!(rodrigues_check(&c.one(), 1, &[c.zero()], &c).is_err());
}

#[test]
fn base_function_examples() {
    let c = ctx();
    let p = params(("0", "1", "1", "1"), &c);
    let base = TermSum::base(&p, &c).unwrap();
    assert!(close(&base.eval(&c.one(), &c), &c.ratio(1, 2), 1e-70));
    assert!(base_function_check(&p, &[c.one()], &c).unwrap()[0].pass());

    let p = params(("1/2", "1", "1", "1"), &c);
    let base = TermSum::base(&p, &c).unwrap();
    let pr = c.prec();
    let want = c.pi().sqrt() / 2u32 * Float::with_val(pr, c.int(2).sqrt_ref())
        / Float::with_val(pr, c.int(3).pow(c.ratio(3, 2)));
    assert!(close(&base.eval(&c.int(2), &c), &want, 1e-70));

    for q in [("1/2", "1", "1", "1"), ("3/2", "1", "0", "2"), ("0", "1", "2", "1/5")] {
        let p = params(q, &c);
        for chk in base_function_check(&p, &[c.ratio(1, 3), c.int(2), c.int(9)], &c).unwrap() {
            assert!(chk.pass(), "{q:?}");
        }
    }
}

#[test]
fn term_integral_examples() {
    let c = ctx();
    let pr = c.prec();
    // base term reproduces μ_0
    let p = params(("1/2", "3/2", "1", "1"), &c);
    let (v, _) = term_integral(&TermSum::base(&p, &c).unwrap(), &p.nu, &c).unwrap();
    let mu = moments_exact(&p, 1, &c).unwrap();
    assert!(close(&v, &mu[0], 1e-60));

    // λ = 0: Γ(ν+α+j+1) t^{−(α+1+k)}
    let p = params(("1/2", "3/2", "0", "2"), &c);
    let mut s = TermSum::zero(&p);
    s.add((2, 1), c.one());
    let (v, _) = term_integral(&s, &p.nu, &c).unwrap();
    let want = Float::with_val(pr, c.int(5).gamma_ref()) / Float::with_val(pr, c.int(2).pow(c.ratio(5, 2)));
    assert!(close(&v, &want, 1e-70));

    // single term against quadrature
    let p = params(("1/2", "3/2", "1", "1"), &c);
    let mut s = TermSum::zero(&p);
    s.add((2, 1), c.one());
    let (v, _) = term_integral(&s, &p.nu, &c).unwrap();
    let q = aux_integral_quadrature(&c.int(5), &c.ratio(5, 2), &c.one(), &c.one(), &c).unwrap();
    assert!(close(&v, &q, 1e-55));
}

#[test]
fn composition_examples() {
    let c = ctx();
    let p = params(("1/2", "3/2", "1", "1"), &c);
    for n in 0..=3 {
        let r = composition_orthogonality_check(&p, n, &c).unwrap();
        assert_pass(&r);
        assert_eq!(r.entries.len(), 2 * (n + 1));
    }
    // m = n value at t = 1 is 1/a_n
    let table = build_recurrence(&p, 2, &c).unwrap();
    let op = OperatorPolynomial::new(&table, 2).unwrap();
    let mut s = TermSum::base(&p, &c).unwrap();
    s = theta_apply(&theta_apply(&s));
    let (v, _) = term_integral(&op.apply(&s), &p.nu, &c).unwrap();
    let want = Float::with_val(c.prec(), 1 / table.a(2));
    assert!(close(&v, &want, 1e-50));
}

#[test]
fn composition_value_scales_with_t() {
    let c = ctx();
    let p = params(("1/2", "3/2", "1", "5/2"), &c);
    let table = build_recurrence(&p, 2, &c).unwrap();
    let op = OperatorPolynomial::new(&table, 2).unwrap();
    let s = theta_apply(&theta_apply(&TermSum::base(&p, &c).unwrap()));
    let (v, _) = term_integral(&op.apply(&s), &p.nu, &c).unwrap();
    let pr = c.prec();
    let want = Float::with_val(pr, c.ratio(5, 2).square_ref()) / table.a(2);
    assert!(close(&v, &want, 1e-50));
}

#[test]
fn master_property_over_degrees() {
    let c = ctx();
    for q in [("0", "1", "1", "1"), ("1/2", "1/2", "2", "1/3"), ("1", "2", "0", "1")] {
        let p = params(q, &c);
        let r = composition_orthogonality_check(&p, 6, &c).unwrap();
        assert_pass(&r);
    }
}

#[test]
fn operator_polynomial_shape() {
    let c = ctx();
    let p = params(("1/2", "3/2", "1", "2"), &c);
    let table = build_recurrence(&p, 4, &c).unwrap();
    let op = OperatorPolynomial::new(&table, 4).unwrap();
    assert_eq!(op.degree(), 4);
    let want = Float::with_val(c.prec(), table.a(4) / 16u32);
    assert!(close(&op.coeffs[4], &want, 1e-70));
}

#[test]
fn composition_limits() {
    let c = ctx();
    let p = params(("1/2", "3/2", "1", "1"), &c);
    assert!(composition_orthogonality_check(&p, MAX_OPERATOR_DEGREE + 1, &c).is_err());
    let p0 = params(("1/2", "3/2", "1", "0"), &c);
    assert!(composition_orthogonality_check(&p0, 1, &c).is_err());
}

fn sum_strategy() -> impl Strategy<Value = Vec<(usize, usize, i32)>> {
    proptest::collection::vec((0usize..5, 0usize..3, -9i32..10), 0..6)
}

fn build(p: &Params, raw: &[(usize, usize, i32)], c: &PrecisionContext) -> TermSum {
    let mut s = TermSum::zero(p);
    for &(j, k, v) in raw {
        s.add((j, k), c.int(v as i64));
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn theta_is_linear(a in sum_strategy(), b in sum_strategy(), lam in 0u32..4) {
        let c = PrecisionContext::new(40).unwrap();
        let p = Params::new(c.ratio(1, 3), c.one(), c.int(lam as i64), c.ratio(3, 2)).unwrap();
        let (s1, s2) = (build(&p, &a, &c), build(&p, &b, &c));
        let lhs = theta_apply(&s1.plus(&s2));
        let rhs = theta_apply(&s1).plus(&theta_apply(&s2));
        prop_assert_eq!(lhs.terms.keys().collect::<Vec<_>>(), rhs.terms.keys().collect::<Vec<_>>());
        for (k, v) in &lhs.terms {
            let d = Float::with_val(c.prec(), v - &rhs.terms[k]).abs();
            prop_assert!(d.to_f64() <= 1e-30 * v.to_f64().abs().max(1.0));
        }
        for v in lhs.terms.values() {
            prop_assert!(!v.is_zero());
        }
    }

    #[test]
    fn term_count_bound(m in 0usize..9, a in 0u32..4, lam in 0u32..3) {
        let c = PrecisionContext::new(40).unwrap();
        let p = Params::new(c.ratio(a as i64, 2), c.one(), c.int(lam as i64), c.one()).unwrap();
        let mut s = TermSum::base(&p, &c).unwrap();
        for _ in 0..m {
            s = theta_apply(&s);
        }
        prop_assert!(s.len() <= (m + 1) * (m + 2) / 2);
        for &(j, k) in s.terms.keys() {
            prop_assert!(j <= 2 * m && k <= m);
        }
    }
}
