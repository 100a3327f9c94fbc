use diffeolin::parse::parse_expr;
use diffeolin::{Atom, FunctionExpr, Polynomial, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=9).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn atom() -> impl Strategy<Value = Atom> {
    (any::<bool>(), 0u32..=5).prop_map(|(abs, d)| if abs { Atom::abs_mono(d) } else { Atom::mono(d) })
}

fn expr() -> impl Strategy<Value = FunctionExpr> {
    prop::collection::vec((atom(), rational()), 0..5).prop_map(FunctionExpr::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(f in expr(), g in expr(), h in expr()) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f - &f, FunctionExpr::zero());
        prop_assert_eq!(&f * &FunctionExpr::constant(Rational::from_integer(1.into())), f.clone());
    }

    #[test]
    fn canonical_form_has_no_zero_coefficients(f in expr(), g in expr()) {
        for e in [&f + &g, &f * &g, &f - &g] {
            prop_assert!(e.terms().all(|(_, c)| *c != Rational::from_integer(0.into())));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in expr(), g in expr(), ts in prop::collection::vec(rational(), 49)) {
        let zero = Rational::from_integer(0.into());
        let mut points = vec![zero];
        for t in ts {
            points.push(-t.clone());
            points.push(t);
        }
        prop_assert!(points.len() >= 99);
        for t in &points {
            prop_assert_eq!((&f * &g).eval(t), f.eval(t) * g.eval(t));
            prop_assert_eq!((&f + &g).eval(t), f.eval(t) + g.eval(t));
        }
    }

    #[test]
    fn residue_is_linear(f in expr(), g in expr(), a in rational(), b in rational()) {
        let lhs = (&f.scale(&a) + &g.scale(&b)).singular_residue();
        let rhs = f.singular_residue().scale(&a).add(&g.singular_residue().scale(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn smooth_iff_residue_vanishes(f in expr()) {
        prop_assert_eq!(f.is_smooth(), f.singular_residue().is_zero());
        prop_assert_eq!(FunctionExpr::from_parts(&f.smooth_part(), &f.singular_residue()), f);
    }

    #[test]
    fn compose_scale_matches_evaluation(f in expr(), c in rational(), t in rational()) {
        prop_assert_eq!(f.compose_scale(&c).eval(&t), f.eval(&(&c * &t)));
    }

    #[test]
    fn printed_form_reparses(f in expr()) {
        let text = f.to_string();
        prop_assert_eq!(parse_expr(&text).unwrap(), f, "{}", text);
    }
}

#[test]
fn addition_examples() {
    let p = |s: &str| parse_expr(s).unwrap();
    assert_eq!(&p("abs(x)") + &p("x"), p("abs(x) + x"));
    assert_eq!(&p("2*abs(x)") + &p("-2*abs(x)"), FunctionExpr::zero());
    assert_eq!(&p("x^2 + abs(x)*x") + &p("x^2"), p("2*x^2 + abs(x)*x"));
}

#[test]
fn multiplication_examples() {
    let p = |s: &str| parse_expr(s).unwrap();
    assert_eq!(&p("abs(x)") * &p("abs(x)"), p("x^2"));
    assert_eq!(&p("abs(x)") * &p("x"), FunctionExpr::abs_x_pow(1));
    assert_eq!(&p("x + abs(x)") * &p("x - abs(x)"), FunctionExpr::zero());
}

#[test]
fn residue_and_smoothness_examples() {
    let p = |s: &str| parse_expr(s).unwrap();
    let r = |e: &str| p(e).singular_residue();
    assert!(r("3*x^5").is_zero());
    assert_eq!(r("2*abs(x) + x^2"), Polynomial::monomial(0, Rational::from_integer(2.into())));
    assert_eq!(r("abs(x)*(x + abs(x))"), Polynomial::monomial(1, Rational::from_integer(1.into())));
    assert!(p("x^3").is_smooth());
    assert!(!p("abs(x)").is_smooth());
    assert!(p("abs(x)*abs(x)").is_smooth());
}

#[test]
fn compose_scale_examples() {
    let p = |s: &str| parse_expr(s).unwrap();
    let c = |n: i64| Rational::from_integer(n.into());
    assert_eq!(p("abs(x)").compose_scale(&c(-2)), p("2*abs(x)"));
    assert_eq!(p("x^2").compose_scale(&c(3)), p("9*x^2"));
    assert_eq!(p("abs(x)*x").compose_scale(&c(-1)), p("-abs(x)*x"));
}
