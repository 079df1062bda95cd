use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn at(src: &str, z: Complex64) -> Complex64 {
    ComplexExpr::parse(src).unwrap().eval(z).unwrap()
}

fn squash(s: &str) -> String {
    s.chars().filter(|ch| !ch.is_whitespace()).collect()
}

const CORPUS: [&str; 50] = [
    "z",
    "1",
    "i",
    "pi",
    "2.5",
    "1e-3",
    "z + 1",
    "z - 1",
    "1 - z^2",
    "(1 - z^2)",
    "i*(1+z^2)",
    "2*z",
    "z*z*z",
    "z^3 - 3*z",
    "1/z",
    "1/z^2",
    "(z+1)/(z-1)",
    "z^2*(z+1)/(z-1)",
    "i*(z^2-1)/(2*z^2)",
    "1 - (z - 1)",
    "1 - (2 - (3 - z))",
    "1 / (2 / z)",
    "(1/2)*(1/z - z)",
    "(i/2)*(1/z + z)",
    "0 - sin(z)",
    "cos(z)",
    "0 - i",
    "exp(i*z)",
    "exp(z)^2",
    "log(z)",
    "sqrt(z)",
    "sqrt(1 + z^2)",
    "sinh(z)*cosh(z)",
    "cosh(z)^2 - sinh(z)^2",
    "sin(cos(z))",
    "(z^2)^3",
    "(2*z)^2",
    "(z + i)^4 / (z - i)^2",
    "z/(z*z)",
    "z - z - z",
    "z / z / z",
    "(z - (z - z))",
    "pi*z/2",
    "exp(2*pi*i*z)",
    "log(1 + z) - log(1 - z)",
    "3.25e2*z",
    "((((z))))",
    "1 + 2 * 3 - 4 / 5",
    "sin(z)^2 + cos(z)^2",
    "(z - 1)^2 / (2*z^4) - (z + 1)^2 / 2",
];

#[test]
fn spec_evaluation_examples() {
    assert!((at("cos(z)", c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
    assert!((at("(1 - z^2)", c(0.0, 1.0)) - c(2.0, 0.0)).norm() < 1e-15);
    assert!((at("exp(i*z)", c(PI, 0.0)) - c(-1.0, 0.0)).norm() < 1e-15);
    assert!((at("1/z", c(2.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
}

#[test]
fn principal_branches() {
    assert!((at("log(z)", c(-1.0, 1e-300)) - c(0.0, PI)).norm() < 1e-14);
    assert!((at("sqrt(z)", c(-4.0, 0.0)) - c(0.0, 2.0)).norm() < 1e-14);
    assert!((at("sqrt(z)", c(-4.0, -0.0)) - c(0.0, -2.0)).norm() < 1e-14);
}

#[test]
fn declared_singularity_is_refused() {
    let e = ComplexExpr::parse_with_singularities("1/z", &[c(0.0, 0.0)]).unwrap();
    assert!(matches!(e.eval(c(1e-13, 0.0)), Err(Error::SingularityHit { .. })));
    assert!(e.eval(c(1e-6, 0.0)).is_ok());
}

#[test]
fn undeclared_pole_is_non_finite() {
    let e = ComplexExpr::parse("1/z").unwrap();
    assert!(matches!(e.eval(c(0.0, 0.0)), Err(Error::NonFinite { .. })));
}

#[test]
fn parse_errors_carry_position_and_expectations() {
    let err = |src: &str| match ComplexExpr::parse(src) {
        Err(Error::Parse(p)) => p,
        other => panic!("expected parse error for {src:?}, got {other:?}"),
    };
    let p = err("-z");
    assert_eq!((p.line, p.column), (1, 1));
    assert!(p.expected.iter().any(|e| e.contains("number")));

    let p = err("2z");
    assert_eq!((p.line, p.column), (1, 2));

    let p = err("z^1.5");
    assert_eq!(p.column, 3);

    let p = err("z +\n  foo(z)");
    assert_eq!((p.line, p.column), (2, 3));
    assert!(p.expected.iter().any(|e| e == "sqrt"));

    let p = err("sin(z");
    assert!(p.expected.iter().any(|e| e.contains(')')));

    err("");
    err("(z))");
}

#[test]
fn derivative_examples() {
    let d = ComplexExpr::parse("z^2").unwrap().differentiate();
    assert_eq!(squash(&d.to_source()), "2*z");
    let d = ComplexExpr::parse("cos(z)").unwrap().differentiate();
    assert!(d.eval(c(0.0, 0.0)).unwrap().norm() < 1e-15);
    let d = ComplexExpr::parse("i*(1+z^2)").unwrap().differentiate();
    assert_eq!(squash(&d.to_source()), "2*i*z");
}

#[test]
fn round_trip_over_corpus() {
    for src in CORPUS {
        let e = ComplexExpr::parse(src).unwrap();
        let printed = e.to_source();
        let again = ComplexExpr::parse(&printed).unwrap_or_else(|err| panic!("{src:?} printed as {printed:?}: {err}"));
        assert_eq!(again.node(), e.node(), "tree changed for {src:?} via {printed:?}");
        assert_eq!(again.to_source(), printed);
    }
}

#[test]
fn derivatives_print_and_reparse() {
    for src in CORPUS {
        let d = ComplexExpr::parse(src).unwrap().differentiate();
        let printed = d.to_source();
        let again =
            ComplexExpr::parse(&printed).unwrap_or_else(|err| panic!("d/dz {src:?} printed as {printed:?}: {err}"));
        assert_eq!(again.to_source(), printed);
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> Complex64 {
    // stay off the branch cut and away from ±1, 0, ±i
    loop {
        let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let bad = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
        if bad.iter().all(|b| (z - b).norm() > 0.4) && z.im.abs() > 0.1 {
            return z;
        }
    }
}

#[test]
fn derivative_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = c(1.5, -0.25);
    let (e1, e2) = ("sin(z)*z^2", "exp(z)/(z-1)");
    let combo = ComplexExpr::parse(&format!("(1.5 - 0.25*i)*({e1}) + {e2}"))
        .unwrap()
        .differentiate();
    let d1 = ComplexExpr::parse(e1).unwrap().differentiate();
    let d2 = ComplexExpr::parse(e2).unwrap().differentiate();
    for _ in 0..100 {
        let z = random_point(&mut rng);
        let lhs = combo.eval(z).unwrap();
        let rhs = a * d1.eval(z).unwrap() + d2.eval(z).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }
}

#[test]
fn derivative_matches_central_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-5;
    for src in CORPUS {
        let e = ComplexExpr::parse(src).unwrap();
        let d = e.differentiate();
        for _ in 0..100 {
            let z = random_point(&mut rng);
            let fd = (e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h);
            let exact = d.eval(z).unwrap();
            let scale = exact.norm().max(e.eval(z).unwrap().norm()).max(1.0);
            assert!((fd - exact).norm() <= 1e-8 * scale, "{src} at {z}: fd {fd} vs {exact}");
        }
    }
}

#[test]
fn cauchy_riemann_witness() {
    let h = 1e-5;
    for src in CORPUS {
        let e = ComplexExpr::parse(src).unwrap();
        for k in 0..9 {
            let z = c(0.4 + 0.2 * (k % 3) as f64, 0.5 + 0.2 * (k / 3) as f64);
            let fx = (e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h);
            let fy = (e.eval(z + c(0.0, h)).unwrap() - e.eval(z - c(0.0, h)).unwrap()) / (2.0 * h);
            let dzbar = 0.5 * (fx + c(0.0, 1.0) * fy);
            assert!(dzbar.norm() < 1e-6, "{src} at {z}: |d/dzbar| = {}", dzbar.norm());
        }
    }
}

#[test]
fn nullity_examples() {
    let samples: Vec<_> = (0..20).map(|k| c(0.3 * k as f64 - 3.0, 0.7)).collect();
    let enneper = ComplexExprVec::parse(&["1 - z^2", "i*(1 + z^2)", "2*z"], &[]).unwrap();
    let r = enneper.nullity_check(&samples).unwrap();
    assert!(r.null);
    assert!(r.max_residual < 1e-12);

    let helicatenoid = ComplexExprVec::parse(&["0 - sin(z)", "cos(z)", "0 - i"], &[]).unwrap();
    assert!(helicatenoid.nullity_check(&samples).unwrap().null);

    let constant = ComplexExprVec::parse(&["1", "0", "0"], &[]).unwrap();
    let r = constant.nullity_check(&samples).unwrap();
    assert!(!r.null);
    assert_eq!(r.max_residual, 1.0);
}

#[test]
fn nullity_rejects_short_vectors_and_singular_samples() {
    assert!(ComplexExprVec::parse(&["z", "z"], &[]).is_err());
    let v = ComplexExprVec::parse(&["1/z", "i/z", "0"], &[c(0.0, 0.0)]).unwrap();
    assert!(matches!(
        v.nullity_check(&[c(0.0, 0.0)]),
        Err(Error::SingularityHit { .. })
    ));
}

fn arb_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("z".to_string()),
        Just("i".to_string()),
        Just("pi".to_string()),
        (0u32..100).prop_map(|n| format!("{}", n as f64 / 4.0)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) / ({b})")),
            (inner.clone(), 0u32..4).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.prop_map(|a| format!("exp({a})")),
        ]
    })
}

proptest! {
    #[test]
    fn printed_form_is_a_fixed_point(src in arb_expr()) {
        let e = ComplexExpr::parse(&src).unwrap();
        let printed = e.to_source();
        let again = ComplexExpr::parse(&printed).unwrap();
        prop_assert_eq!(again.node(), e.node());
        prop_assert_eq!(again.to_source(), printed);
    }
}
