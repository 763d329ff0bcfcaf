//! Worked inequality examples with values frozen from the reference
//! quadrature in `common` (cross-checked against an arbitrary-precision
//! computation when they were recorded).

// frozen values keep all 17 significant digits
#![allow(clippy::excessive_precision)]

mod common;

use std::f64::consts::E;

use hadafrac::inequality::{
    BoundingQuadruple, ConstantBounds, HolderPair, InequalityChecker, InequalityReport,
};
use hadafrac::{EvalPoint, PositiveReal, RealFunction};

fn pr(v: f64) -> PositiveReal {
    PositiveReal::new(v).unwrap()
}

fn tp(v: f64) -> EvalPoint {
    EvalPoint::new(v).unwrap()
}

fn f(text: &str) -> RealFunction {
    RealFunction::parse(text).unwrap()
}

fn c(v: f64) -> RealFunction {
    RealFunction::Constant(v)
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    ((got - want) / want).abs() < tol
}

#[track_caller]
fn assert_report(r: &InequalityReport, lhs: f64, bound: f64) {
    assert!(r.pass, "{r:?}");
    assert!(close(r.lhs, lhs, 1e-10), "lhs {} vs frozen {lhs}", r.lhs);
    assert!(
        close(r.bound, bound, 1e-10),
        "bound {} vs frozen {bound}",
        r.bound
    );
    assert!(r.margin > 0.0);
    assert!((r.ratio - lhs / bound).abs() < 1e-10);
}

// Frozen reference values, `(lhs, bound)`.
const T31: (f64, f64) = (5.381_220_096_832_740_3e1, 6.284_260_137_795_354_2e1);
const T32: (f64, f64) = (2.701_890_578_583_291_4e1, 2.796_432_932_992_362_6e1);
const T33: (f64, f64) = (1.243_051_687_327_142_4, 2.796_866_296_486_072_2);
const P31_LHS: f64 = 1.039_940_828_402_366_4;
const P32_LHS: f64 = 1.005_931_784_478_497_4;
const P33: (f64, f64) = (2.048_635_065_593_411_4e1, 4.716_624_918_459_250_2e1);
// The lhs is 1/Gamma(3/2), which is exactly 2/sqrt(pi).
const T34_P3: (f64, f64) = (std::f64::consts::FRAC_2_SQRT_PI, 1.244_873_885_770_263_7);
const T34_LOG: (f64, f64) = (1.228_220_107_724_326_2, 2.188_430_550_337_321_4);
const YOUNG: (f64, f64) = (8.573_633_496_770_298_7e-1, 1.365_120_896_752_365_4);
const POWMEAN: (f64, f64) = (6.736_856_432_476_833_4, 7.359_015_454_481_306_2);

#[test]
fn frozen_values_match_the_reference_quadrature() {
    use common::hadamard_ln as h;
    let x = |s: f64| 1.0 + s;
    let y = |s: f64| 2.0 - 0.5 * s;
    let lhs = h(|s| 3.0 * x(s) * x(s), 0.75, E) * h(|s| 2.0 * y(s) * y(s), 0.75, E);
    let mid = h(|s| 5.5 * x(s) * y(s), 0.75, E);
    assert!(close(lhs, T31.0, 1e-13) && close(0.25 * mid * mid, T31.1, 1e-13));

    let x = |s: f64| 1.0 + 0.5 * s;
    let y = |s: f64| 2.0 - 0.5 * s;
    let xy = h(|s| x(s) * y(s), 1.0, E);
    assert!(close(
        h(|s| x(s) * x(s), 1.0, E) * h(|s| y(s) * y(s), 1.0, E) / (xy * xy),
        P31_LHS,
        1e-13
    ));

    let lhs = h(|s: f64| (s + 1.0).powf(2.5), 0.7, 4.0);
    let bound = 2f64.powf(1.5) * h(|s: f64| s.powf(2.5) + 1.0, 0.7, 4.0);
    assert!(close(lhs, POWMEAN.0, 1e-13) && close(bound, POWMEAN.1, 1e-13));
}

#[test]
fn polya_szego_single_worked_example() {
    let env = BoundingQuadruple::constant(1.0, 2.0, 1.5, 2.0);
    let r = InequalityChecker::default()
        .polya_szego_single(&f("1 + ln(x)"), &f("2 - 0.5*ln(x)"), &env, pr(0.75), tp(E))
        .unwrap();
    assert_report(&r, T31.0, T31.1);
    assert!(r.ratio < 1.0);
}

#[test]
fn polya_szego_double_worked_example() {
    let env = BoundingQuadruple::constant(1.0, 1.0 + 0.5 * 3f64.ln(), 1.5, 1.5);
    let r = InequalityChecker::default()
        .polya_szego_double(
            &f("1 + 0.5*ln(x)"),
            &c(1.5),
            &env,
            pr(0.4),
            pr(0.9),
            tp(3.0),
        )
        .unwrap();
    assert_report(&r, T32.0, T32.1);
}

#[test]
fn product_bound_worked_example() {
    let x = "(2 - exp(-ln(x)))";
    let y = "(1 + ln(x)^2)";
    let env = BoundingQuadruple::new(
        f(&format!("0.8*{x}")),
        f(&format!("1.2*{x}")),
        f(&format!("0.8*{y}")),
        f(&format!("1.2*{y}")),
    );
    let r = InequalityChecker::default()
        .product_bound(&f(x), &f(y), &env, pr(0.6), pr(1.2), tp(2.0))
        .unwrap();
    assert_report(&r, T33.0, T33.1);
}

#[test]
fn constant_polya_szego_worked_examples() {
    let checker = InequalityChecker::default();
    let cb = ConstantBounds::new(1.0, 1.5, 1.5, 2.0).unwrap();
    let r = checker
        .constant_polya_szego(
            &f("1 + ln(x)*0.5"),
            &f("2 - ln(x)*0.5"),
            &cb,
            pr(1.0),
            tp(E),
        )
        .unwrap();
    assert_report(&r, P31_LHS, 1.125);

    let cb = ConstantBounds::new(1.0, 2.0, 1.0, 3.0).unwrap();
    let r = checker
        .constant_polya_szego(&c(1.5), &c(2.0), &cb, pr(0.5), tp(E))
        .unwrap();
    let bound = 0.25 * ((1.0f64 / 6.0).sqrt() + 6f64.sqrt()).powi(2);
    assert!(
        (r.lhs - 1.0).abs() < 1e-12 && (r.bound - bound).abs() < 1e-12,
        "{r:?}"
    );
}

#[test]
fn constant_polya_szego_two_order_worked_example() {
    let cb = ConstantBounds::new(1.0, 1.25, 1.0, 1.0).unwrap();
    let r = InequalityChecker::default()
        .constant_polya_szego_two_order(
            &f("1 + 0.25*ln(x)^2"),
            &c(1.0),
            &cb,
            pr(0.5),
            pr(0.5),
            tp(E),
        )
        .unwrap();
    assert_report(&r, P32_LHS, 1.0125);
}

#[test]
fn ratio_bound_constant_worked_example() {
    let cb = ConstantBounds::new(1.0, 2.0, 2.0, 3.0).unwrap();
    let r = InequalityChecker::default()
        .ratio_bound_constant(
            &f("1 + ln(x)"),
            &f("3 - ln(x)"),
            &cb,
            pr(0.5),
            pr(1.0),
            tp(E),
        )
        .unwrap();
    assert_report(&r, P33.0, P33.1);
}

#[test]
fn minkowsky_related_worked_examples() {
    let checker = InequalityChecker::default();
    let r = checker
        .minkowsky_related(
            &c(1.0),
            &c(1.0),
            HolderPair::new(2.0, 2.0).unwrap(),
            0.5,
            2.0,
            pr(1.0),
            tp(E),
        )
        .unwrap();
    assert!(
        (r.lhs - 1.0).abs() < 1e-12 && (r.bound - 16.0 / 9.0).abs() < 1e-12,
        "{r:?}"
    );

    let r = checker
        .minkowsky_related(
            &c(1.0),
            &c(1.0),
            HolderPair::new(3.0, 1.5).unwrap(),
            0.9,
            1.1,
            pr(0.5),
            tp(E),
        )
        .unwrap();
    assert_report(&r, T34_P3.0, T34_P3.1);

    let r = checker
        .minkowsky_related(
            &f("1 + 0.1*ln(x)"),
            &c(1.0),
            HolderPair::new(2.0, 2.0).unwrap(),
            0.5,
            2.0,
            pr(0.8),
            tp(3.0),
        )
        .unwrap();
    assert_report(&r, T34_LOG.0, T34_LOG.1);
}

#[test]
fn young_worked_example() {
    let r = InequalityChecker::default()
        .young_pointwise_check(
            &f("ln(x) + 1"),
            &f("exp(-ln(x))"),
            HolderPair::new(3.0, 1.5).unwrap(),
            pr(0.5),
            tp(2.0),
        )
        .unwrap();
    assert_report(&r, YOUNG.0, YOUNG.1);
}

#[test]
fn power_mean_worked_example() {
    let r = InequalityChecker::default()
        .power_mean_check(&f("ln(x)"), &c(1.0), 2.5, pr(0.7), tp(4.0))
        .unwrap();
    assert_report(&r, POWMEAN.0, POWMEAN.1);
}
