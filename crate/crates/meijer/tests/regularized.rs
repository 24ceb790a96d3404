use std::sync::Arc;

use meijer::hypergeom::hyp;
use meijer::moments::{KernelKind, KernelSpec};
use meijer::regularized::*;
use meijer::{Error, ParamVectors};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn spec(a: &[f64], b: &[f64], n: Option<usize>) -> RegFunctionalSpec {
    RegFunctionalSpec::new(ParamVectors::real(a, b).unwrap(), n).unwrap()
}

#[test]
fn plain_integral_when_density_is_one() {
    let r = g1_action(&spec(&[1.0], &[2.0], Some(0)), &Exponential(c(1.0))).unwrap();
    assert!((r.value.re - (std::f64::consts::E - 1.0)).abs() < 1e-12, "{}", r.value);
}

#[test]
fn order_independence() {
    let cases: &[(&[f64], &[f64])] = &[(&[1.0], &[2.0]), (&[-0.5, 1.2], &[0.3, 2.0]), (&[0.7, 1.9], &[0.4, 1.1]), (&[-1.3], &[0.4])];
    for &(a, b) in cases {
        let base = spec(a, b, None);
        for phi in [&Exponential(c(-0.7)) as &dyn SmoothFunction, &Cosine::new(2.5)] {
            let v0 = g1_action(&base, phi).unwrap().value;
            let v2 = g1_action(&base.with_n(base.n + 2).unwrap(), phi).unwrap().value;
            assert!((v0 - v2).norm() < 1e-8, "{a:?} {b:?}: {v0} vs {v2}");
        }
    }
}

#[test]
fn stieltjes_with_negative_parameter() {
    let s = spec(&[-0.5], &[1.0], None);
    assert!(s.n >= 1);
    let k = KernelSpec::stieltjes(2.0, 0.5).unwrap();
    let r = g1_kernel(&s, &k).unwrap();
    let want = hyp(&[c(2.0), c(-0.5)], &[c(1.0)], c(-0.5)).unwrap().value;
    assert!((r.value - want).norm() < 1e-9, "{} vs {want}", r.value);
}

#[test]
fn laplace_kernel() {
    let r = g1_kernel(&spec(&[1.0], &[2.0], None), &KernelSpec::laplace(1.0).unwrap()).unwrap();
    assert!((r.value.re - (1.0 - (-1f64).exp())).abs() < 1e-12);
}

#[test]
fn kernel_at_zero_is_one() {
    let s = spec(&[-0.3, 0.8], &[1.4, 0.2], None);
    for k in [KernelSpec::laplace(0.0).unwrap(), KernelSpec::stieltjes(1.5, 0.0).unwrap(), KernelSpec::bessel(0.5, 0.0).unwrap()] {
        let r = g1_kernel(&s, &k).unwrap();
        assert!((r.value - 1.0).norm() < 1e-10, "{}", r.value);
    }
}

#[test]
fn branch_cut_rejected() {
    let s = spec(&[1.0], &[2.0], None);
    let k = KernelSpec::stieltjes(1.0, -2.0).unwrap();
    assert!(matches!(g1_kernel(&s, &k), Err(Error::BranchCut(_))));
}

#[test]
fn analytic_continuation_outside_series_disk() {
    let s = spec(&[0.6], &[1.7], None);
    let k = KernelSpec::stieltjes(1.0, 2.0).unwrap();
    let r = g1_kernel(&s, &k).unwrap();
    // 2F1(1, 0.6; 1.7; -2) by Pfaff: (1+z)^{-1} 2F1(1, 1.1; 1.7; z/(1+z))
    let want = hyp(&[c(1.0), c(1.1)], &[c(1.7)], c(2.0 / 3.0)).unwrap().value / 3.0;
    assert!((r.value - want).norm() < 1e-9, "{} vs {want}", r.value);
}

#[test]
fn decomposition_laplace() {
    let s = spec(&[1.0], &[2.0], None);
    let r = decomposition_check(&s, &KernelSpec::laplace(1.0).unwrap(), 1).unwrap();
    assert_eq!(r.eta, 0);
    assert!(r.residual < 1e-9, "{r:?}");
    let r0 = decomposition_check(&s, &KernelSpec::laplace(0.0).unwrap(), 1).unwrap();
    assert!(r0.residual < 1e-14);
}

#[test]
fn decomposition_all_three_kernels() {
    let s = spec(&[1.0, 0.5], &[1.6, 0.9], None);
    for k in [KernelSpec::laplace(2.0).unwrap(), KernelSpec::stieltjes(1.3, 0.7).unwrap(), KernelSpec::bessel(0.5, 3.0).unwrap()] {
        let r = decomposition_check(&s, &k, 2).unwrap();
        assert!(r.residual < 1e-9, "{k:?}: {r:?}");
        assert!(r.min_density >= -1e-12);
    }
}

#[test]
fn decomposition_reports_sign_change() {
    let s = spec(&[1.0, 3.0], &[0.6, 2.0], None);
    let k = KernelSpec::laplace(1.0).unwrap();
    assert!(matches!(decomposition_check(&s, &k, 2), Err(Error::PositivityViolation { .. })));
    assert!(decomposition_check(&s, &k, 5).unwrap().residual < 1e-9);
}

#[test]
fn gb1_constant_function() {
    let s = spec(&[0.8, 1.3], &[1.1, 2.4], Some(1));
    let r = gb1_action(&s, &Polynomial(vec![c(1.0)])).unwrap();
    let g = |v: &[f64]| v.iter().map(|&x| meijer::gamma::gamma(c(x)).unwrap()).product::<Complex64>();
    let want = g(&[0.8, 1.3]) / g(&[1.1, 2.4]) / 2.0;
    assert!((r.value - want).norm() < 1e-10, "{} vs {want}", r.value);
}

#[test]
fn gb1_sinc_case() {
    for n in 0..=2 {
        let s = spec(&[1.0, 0.5], &[1.0, 1.5], Some(n));
        for z in [1.0, 2.0, 5.0, 10.0] {
            let r = gb1_action(&s, &Cosine::new(z)).unwrap();
            assert!((r.value.re - z.sin() / z).abs() < 1e-8, "n={n} z={z}: {}", r.value);
        }
    }
}

#[test]
fn gb1_order_independence() {
    let cases: &[(&[f64], &[f64])] = &[(&[0.7, 1.3], &[0.9, 0.6]), (&[0.4], &[1.3]), (&[1.2, 0.5, 2.0], &[1.0, 1.0, 1.1])];
    for &(a, b) in cases {
        let base = spec(a, b, None);
        for phi in [&Exponential(c(-0.8)) as &dyn SmoothFunction, &Cosine::new(3.0)] {
            let v0 = gb1_action(&base, phi).unwrap().value;
            let v1 = gb1_action(&base.with_n(base.n + 1).unwrap(), phi).unwrap().value;
            assert!((v0 - v1).norm() < 1e-7, "{a:?} {b:?}: {v0} vs {v1}");
        }
    }
}

#[test]
fn gb1_needs_positive_a() {
    let s = spec(&[-0.5], &[1.0], None);
    assert!(matches!(gb1_action(&s, &Cosine::new(1.0)), Err(Error::Admissibility { .. })));
}

#[test]
fn besselrep_sinc() {
    for n in [1, 2] {
        let r = besselrep_series(&[1.0], &[1.0, 1.5], 2.0, n).unwrap();
        assert!((r.value.re - 2f64.sin() / 2.0).abs() < 1e-8, "n={n}: {}", r.value);
    }
    let r = besselrep_series(&[1.0], &[1.0, 1.5], 0.0, 1).unwrap();
    assert_eq!(r.value.re, 1.0);
}

#[test]
fn besselrep_matches_series() {
    let cases: &[(&[f64], &[f64])] = &[(&[1.3], &[1.1, 2.2]), (&[0.6], &[1.7, 0.9])];
    for &(ah, b) in cases {
        for z in [1.0, 5.0, 10.0] {
            let want = bessel_type_direct(ah, b, z).unwrap().value;
            let got = besselrep_series(ah, b, z, 1).unwrap().value;
            assert!((got - want).norm() < 1e-8, "{ah:?} {b:?} z={z}: {got} vs {want}");
        }
    }
}

fn admissible_real() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=2).prop_flat_map(|p| (prop::collection::vec(-1.8f64..2.5, p), prop::collection::vec(0.2f64..3.0, p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linearity((a, b) in admissible_real(), w1 in -2.0f64..2.0, w2 in -2.0f64..2.0, z in 0.5f64..4.0) {
        let s = RegFunctionalSpec::new(ParamVectors::real(&a, &b).unwrap(), None).unwrap();
        let f1: Arc<dyn SmoothFunction> = Arc::new(Exponential(c(-1.0)));
        let f2: Arc<dyn SmoothFunction> = Arc::new(Cosine::new(z));
        let combo = Combination(vec![(c(w1), f1.clone()), (c(w2), f2.clone())]);
        let lhs = g1_action(&s, &combo).unwrap();
        let rhs = w1 * g1_action(&s, f1.as_ref()).unwrap().value + w2 * g1_action(&s, f2.as_ref()).unwrap().value;
        let scale = lhs.value.norm().max(w1.abs() + w2.abs()).max(1.0);
        prop_assert!((lhs.value - rhs).norm() <= 1e-12 * scale, "{} vs {}", lhs.value, rhs);
    }

    #[test]
    fn finite_part_extends_integral(a in prop::collection::vec(0.2f64..2.0, 2), d in prop::collection::vec(0.1f64..1.5, 2)) {
        let b: Vec<f64> = a.iter().zip(&d).map(|(x, y)| x + y).collect();
        let params = ParamVectors::real(&a, &b).unwrap();
        let phi = Cosine::new(1.7);
        let v0 = g1_action(&RegFunctionalSpec::new(params.clone(), Some(0)).unwrap(), &phi).unwrap().value;
        let v2 = g1_action(&RegFunctionalSpec::new(params, Some(2)).unwrap(), &phi).unwrap().value;
        prop_assert!((v0 - v2).norm() < 1e-8, "{} vs {}", v0, v2);
    }

    #[test]
    fn kernel_action_is_augmented_function((a, b) in admissible_real(), z in -0.8f64..0.8, sigma in 0.3f64..2.0, kind in 0usize..3) {
        let params = ParamVectors::real(&a, &b).unwrap();
        let s = RegFunctionalSpec::new(params.clone(), None).unwrap();
        let kernel = match kind {
            0 => KernelSpec::laplace(z).unwrap(),
            1 => KernelSpec::stieltjes(sigma, z).unwrap(),
            _ => KernelSpec::new(KernelKind::GeneralHypergeom { c: vec![c(sigma), c(0.7)], d: vec![c(1.9)] }, c(z)).unwrap(),
        };
        let got = g1_kernel(&s, &kernel).unwrap();
        let want = augmented_series(&params, &kernel).unwrap();
        prop_assert!((got.value - want.value).norm() < 1e-8 * want.value.norm().max(1.0), "{} vs {}", got.value, want.value);
    }
}
