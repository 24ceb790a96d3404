use meijer::moments::{
    cor27_residual, hyper_transform, mixed_moment, mixed_moment_by_quadrature, moment_mk_alt, summation_lhs,
    summation_series, transform_at_zero, transform_by_quadrature, KernelSpec,
};
use meijer::quad::QuadOptions;
use meijer::{GHatSpec, ParamVectors};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn spec(a: &[f64], b: &[f64], n: usize) -> GHatSpec {
    GHatSpec::new(ParamVectors::real(a, b).unwrap(), n)
}

fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * (1.0 + y.norm())
}

#[test]
fn moments_match_quadrature() {
    let opts = QuadOptions::with_tol(1e-12);
    for (a, b, n) in [
        (vec![1.3, 0.7], vec![2.1, 1.9], 0),
        (vec![1.3, 0.7], vec![2.1, 1.9], 2),
        (vec![0.4], vec![1.25], 1),
        (vec![-0.3, 1.1], vec![1.4, 2.2], 1),
    ] {
        let s = spec(&a, &b, n);
        for (k, r) in [(0, 0), (1, 0), (3, 0), (0, 2), (2, 1)] {
            let exact = mixed_moment(&s, k, r).unwrap();
            let quad = mixed_moment_by_quadrature(&s, k, r, &opts).unwrap();
            assert!(close(quad.value, exact, 1e-9), "{a:?} {b:?} n={n} k={k} r={r}: {} vs {exact}", quad.value);
        }
    }
}

#[test]
fn negative_a_needs_larger_order() {
    assert!(mixed_moment(&spec(&[-1.5, 1.0], &[1.0, 2.0], 0), 0, 0).is_err());
    assert!(mixed_moment(&spec(&[-1.5, 1.0], &[1.0, 2.0], 2), 0, 0).is_ok());
}

#[test]
fn value_at_zero_is_the_zeroth_moment() {
    let s = spec(&[0.8, 1.6], &[1.9, 2.4], 3);
    let m0 = mixed_moment(&s, 0, 0).unwrap();
    assert!(close(transform_at_zero(&s.params, 3).unwrap(), m0, 1e-14));
    let laplace = hyper_transform(&s, &KernelSpec::laplace(0.0).unwrap(), 1e-15).unwrap();
    assert!(close(laplace.value, m0, 1e-14));
}

#[test]
fn transforms_match_quadrature() {
    let s = spec(&[0.9, 1.7], &[1.6, 2.8], 1);
    let opts = QuadOptions::with_tol(1e-12);
    for kernel in [
        KernelSpec::laplace(2.5).unwrap(),
        KernelSpec::stieltjes(0.75, 0.6).unwrap(),
        KernelSpec::bessel(1.5, 3.0).unwrap(),
    ] {
        let series = hyper_transform(&s, &kernel, 1e-15).unwrap();
        let quad = transform_by_quadrature(&s, &kernel, &opts).unwrap();
        assert!(close(series.value, quad.value, 1e-9), "{kernel:?}: {} vs {}", series.value, quad.value);
    }
}

#[test]
fn summation_recovers_the_log_series() {
    // 2F1(1, 1; 2; -z) = ln(1 + z)/z
    let z = 0.6;
    let v = summation_series(&[c(1.0)], &[c(2.0)], &[c(1.0)], &[], c(z), 1e-15).unwrap();
    assert!((v.value.re - (1.0 + z).ln() / z).abs() < 1e-13);
}

fn real_set() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((0.2f64..3.0, 0.05f64..2.0), 1..=3)
        .prop_map(|v| (v.iter().map(|x| x.0).collect(), v.iter().map(|x| x.0 + x.1).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_moments_are_differences((a, b) in real_set(), n in 0usize..4, k in 0usize..5) {
        let s = spec(&a, &b, n);
        let m = |k| mixed_moment(&s, k, 0).unwrap();
        let d1 = m(k) - m(k + 1);
        let d2 = m(k) - 2.0 * m(k + 1) + m(k + 2);
        prop_assert!(close(mixed_moment(&s, k, 1).unwrap(), d1, 1e-10));
        prop_assert!(close(mixed_moment(&s, k, 2).unwrap(), d2, 1e-10));
    }

    #[test]
    fn two_moment_formulas_agree((a, b) in real_set(), n in 0usize..5, k in 0usize..6) {
        let s = spec(&a, &b, n);
        let scale = 1.0 + moment_mk_alt(&s, k).unwrap().norm();
        prop_assert!(cor27_residual(&s, k).unwrap() <= 1e-10 * scale);
    }

    #[test]
    fn summation_matches_power_series(
        (a, b) in real_set(),
        c1 in 0.2f64..2.0,
        d1 in 0.5f64..3.0,
        z in -0.4f64..0.8,
    ) {
        let (a, b): (Vec<_>, Vec<_>) = (a.iter().map(|&x| c(x)).collect(), b.iter().map(|&x| c(x)).collect());
        let lhs = summation_lhs(&a, &b, &[c(c1)], &[c(d1)], c(z)).unwrap();
        let rhs = summation_series(&a, &b, &[c(c1)], &[c(d1)], c(z), 1e-15).unwrap();
        prop_assert!(close(rhs.value, lhs.value, 1e-10), "{} vs {}", rhs.value, lhs.value);
    }
}
