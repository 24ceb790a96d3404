use std::f64::consts::PI;

use meijer::ghat::eval_ghat;
use meijer::positivity::{
    default_x_grid, find_zeros_thm42, monotonicity_check, p_alpha_member, positivity_scan_thm43, stabilization_n,
    supermajorization, thm42_f, v_min,
};
use meijer::{GHatSpec, ParamVectors};
use proptest::prelude::*;

#[test]
fn sinc_case_zeros() {
    // â = (1), b = (1, 3/2): F(z) = sin z / z, so the zeros solve tan z = z
    let scan = find_zeros_thm42(&[1.0], &[1.0, 1.5], 3.0 * PI).unwrap();
    assert!(scan.hypotheses_hold);
    let roots: Vec<f64> = scan.zeros.iter().map(|z| z.root).collect();
    assert_eq!(roots.len(), 2, "{roots:?}");
    assert!((roots[0] - 4.493409457909064).abs() < 1e-9);
    assert!((roots[1] - 7.725251836937707).abs() < 1e-9);
    assert!(scan.zeros.iter().all(|z| z.simple));
    assert_eq!(scan.extra_zeros(), 0);
    let z = 2.0;
    assert!((thm42_f(&[1.0], &[1.0, 1.5], z).unwrap() - (z.sin() / z - z.cos())).abs() < 1e-13);
}

#[test]
fn one_zero_per_period_beyond_three_pi() {
    let scan = find_zeros_thm42(&[1.0], &[1.0, 1.5], 6.0 * PI).unwrap();
    for k in 1..6 {
        assert_eq!(scan.count_in(k as f64 * PI, (k + 1) as f64 * PI), 1, "interval {k}");
    }
    assert_eq!(scan.count_in(0.0, PI), 0);
    assert!((scan.zeros[2].root - 10.904121659428899).abs() < 1e-9);
}

#[test]
fn positive_parameters_stabilize_immediately() {
    let s = stabilization_n(&ParamVectors::real(&[0.5, 1.0], &[1.0, 1.5]).unwrap(), 40).unwrap();
    assert_eq!(s.n, 0);
    assert!(s.min_value > 0.0);
}

#[test]
fn one_negative_parameter_stabilizes() {
    let p = ParamVectors::real(&[-0.4, 1.2], &[1.5, 2.0]).unwrap();
    let s = stabilization_n(&p, 40).unwrap();
    assert!(s.n >= p.min_admissible_n());
    for (i, &eta) in s.eta.iter().enumerate() {
        let spec = GHatSpec::new(p.clone(), s.n + i);
        let sign = if eta == 0 { 1.0 } else { -1.0 };
        for t in [0.01, 0.3, 0.7, 0.99] {
            assert!(sign * ghat_re(&spec, t) > 0.0, "n={} t={t}", s.n + i);
        }
    }
}

fn ghat_re(spec: &GHatSpec, t: f64) -> f64 {
    eval_ghat(spec, t).unwrap().value.re
}

#[test]
fn monotone_example() {
    let m = monotonicity_check(&[0.8, 1.0], &[1.2, 1.5], 0.2, 1.5, 200).unwrap();
    assert!(m.positive && m.increasing, "{m:?}");
    assert!(monotonicity_check(&[0.5], &[1.0], 0.2, 0.9, 50).is_err());
}

#[test]
fn p_alpha_region() {
    assert!(p_alpha_member(1.0, 1.5, 2.0));
    assert!(p_alpha_member(0.25, 0.5, 10.0));
    assert!(!p_alpha_member(1.0, 1.4, 100.0));
    assert!(!p_alpha_member(1.0, 1.6, 1.6));
}

#[test]
fn positivity_inside_the_region() {
    let grid = default_x_grid();
    let inside = positivity_scan_thm43(1.0, 1.5, 2.0, &[0.7], &[1.1], &grid).unwrap();
    assert!(inside.in_theorem);
    assert!(inside.min_value >= -1e-12, "{inside:?}");
    // 0F1(; 1/2; x) = cosh(2√x), which is cos(2√|x|) for x < 0: not in the region
    let bessel = positivity_scan_thm43(0.5, 0.5, 0.5, &[], &[], &grid).unwrap();
    assert!(!bessel.in_theorem);
    assert!(bessel.min_value < 0.0);
}

fn positive_set() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((0.1f64..3.0, 0.0f64..1.5), 1..=4)
        .prop_map(|v| (v.iter().map(|x| x.0).collect(), v.iter().map(|x| x.0 + x.1).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn supermajorization_implies_nonnegative_v((a, b) in positive_set(), shuffle in any::<u64>()) {
        let mut b = b;
        let len = b.len();
        b.rotate_left((shuffle as usize) % len);
        prop_assume!(supermajorization(&a, &b));
        let (m, _) = v_min(&ParamVectors::real(&a, &b).unwrap(), 2000).unwrap();
        prop_assert!(m >= -1e-12, "v_min = {m}");
    }

    #[test]
    fn componentwise_order_is_supermajorization((a, b) in positive_set()) {
        prop_assert!(supermajorization(&a, &b));
    }
}
