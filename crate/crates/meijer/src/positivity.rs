//! Sign and positivity results: the `v`-function test, weak
//! supermajorization, the `P_α` region, the empirical sign-stabilization
//! order of `Ĝ_n`, the monotonicity lemma, and zero/positivity scans for
//! Bessel-type hypergeometric functions.
//!
//! Every certificate here is numeric (a grid plus local refinement), never a
//! proof; reports carry the grid size used.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::{gamma_vec, rgamma};
use crate::ghat::{origin_sign_info, GHatEvaluator};
use crate::hypergeom::{hyp, pfq_derivative, HypergeomSpec};
use crate::quad::{tanh_sinh_fallible, QuadOptions};
use crate::types::{GHatSpec, ParamVectors};

/// Largest order tried by [`stabilization_n`].
pub const SEARCH_CAP: usize = 64;

fn real_parts(params: &ParamVectors) -> Result<(Vec<f64>, Vec<f64>)> {
    if !params.is_real() {
        return Err(Error::InvalidParams("real parameters required".into()));
    }
    Ok((params.a().iter().map(|z| z.re).collect(), params.b().iter().map(|z| z.re).collect()))
}

fn v_fn(a: &[f64], b: &[f64], t: f64) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| t.powf(x) - t.powf(y)).sum()
}

/// Minimum of `v(t) = Σ (t^{a_j} - t^{b_j})` over `[0, 1]`: a grid of `grid`
/// points, then ternary search around the best grid point.
/// Returns `(min, argmin)`.
pub fn v_min(params: &ParamVectors, grid: usize) -> Result<(f64, f64)> {
    let (a, b) = real_parts(params)?;
    if a.iter().chain(&b).any(|&x| x <= 0.0) {
        return Err(Error::InvalidParams("v-function test needs positive parameters".into()));
    }
    let grid = grid.max(3);
    let h = 1.0 / (grid - 1) as f64;
    let (mut best_t, mut best) = (0.0, 0.0);
    for i in 0..grid {
        let t = i as f64 * h;
        let v = v_fn(&a, &b, t);
        if v < best {
            best = v;
            best_t = t;
        }
    }
    let (mut lo, mut hi) = ((best_t - h).max(0.0), (best_t + h).min(1.0));
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if v_fn(&a, &b, m1) <= v_fn(&a, &b, m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t = 0.5 * (lo + hi);
    let v = v_fn(&a, &b, t);
    Ok(if v < best { (v, t) } else { (best, best_t) })
}

/// Weak supermajorization `b ≺^W a`: with both sorted ascending,
/// `Σ_{i≤k} a_i ≤ Σ_{i≤k} b_i` for every `k`.
pub fn supermajorization(a: &[f64], b: &[f64]) -> bool {
    if a.len() != b.len() || a.iter().chain(b).any(|&x| !(x > 0.0)) {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut sa, mut sb) = (0.0, 0.0);
    a.iter().zip(&b).all(|(&x, &y)| {
        sa += x;
        sb += y;
        sa <= sb
    })
}

/// `(β₁, β₂) ∈ P_α`, the convex hull of `(α_m, ∞)`, `(α_m, α_M)`,
/// `(α_M, α_m)`, `(∞, α_m)` with `α_m = min(2α, α+½)`, `α_M = max(2α, α+½)`.
pub fn p_alpha_member(alpha: f64, beta1: f64, beta2: f64) -> bool {
    if !(alpha > 0.0 && beta1 > 0.0 && beta2 > 0.0) {
        return false;
    }
    let a_min = (2.0 * alpha).min(alpha + 0.5);
    let a_max = (2.0 * alpha).max(alpha + 0.5);
    beta1 >= a_min && beta2 >= a_min && beta1 + beta2 >= a_min + a_max
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stabilization {
    /// Smallest order from which `(-1)^η Ĝ_n/Γ(a)` was positive on the grid
    /// for `n`, `n+1`, `n+2`.
    pub n: usize,
    /// `η` for each of the three confirming orders.
    pub eta: [u8; 3],
    pub grid: usize,
    /// Smallest `(-1)^η Ĝ_N(t)/Γ(a)` seen on the grid at the returned order.
    pub min_value: f64,
}

/// `Some(min)` if `(-1)^η Ĝ_n/Γ(a)` is positive at every grid point, where
/// positive means larger than ten times its error estimate.
fn positive_on_grid(spec: &GHatSpec, grid: usize) -> Result<Option<(u8, f64)>> {
    let eta = origin_sign_info(spec)?.eta()?;
    let s = if eta == 0 { 1.0 } else { -1.0 };
    let ev = GHatEvaluator::new(spec);
    let mut min = f64::INFINITY;
    for i in 1..=grid {
        let t = i as f64 / (grid + 1) as f64;
        let r = ev.eval(t)?;
        let v = s * r.value.re;
        if !(v > 10.0 * r.abs_err) {
            return Ok(None);
        }
        min = min.min(v);
    }
    Ok(Some((eta, min)))
}

/// Heuristic for the order `N` beyond which `Ĝ_n` keeps one sign on
/// `(0, 1)`: the smallest admissible `n` whose sign-normalized values are
/// positive on a grid for `n`, `n + 1` and `n + 2`. No formula for `N` is
/// known; this is an empirical answer.
pub fn stabilization_n(params: &ParamVectors, grid: usize) -> Result<Stabilization> {
    real_parts(params)?;
    let grid = grid.max(1);
    let start = params.min_admissible_n();
    let mut verdicts: Vec<Option<(u8, f64)>> = Vec::new();
    for n in start..=SEARCH_CAP + 2 {
        verdicts.push(positive_on_grid(&GHatSpec::new(params.clone(), n), grid)?);
        let k = verdicts.len();
        if k >= 3 {
            if let (Some(x), Some(y), Some(z)) = (verdicts[k - 3], verdicts[k - 2], verdicts[k - 1]) {
                return Ok(Stabilization { n: n - 2, eta: [x.0, y.0, z.0], grid, min_value: x.1 });
            }
        }
    }
    Err(Error::SearchCap(SEARCH_CAP))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monotonicity {
    pub positive: bool,
    pub increasing: bool,
    pub min_value: f64,
    /// Smallest forward difference quotient on the grid.
    pub min_slope: f64,
    pub grid: usize,
}

/// Checks that `x ↦ G^{p,1}_{p+1,p+1}(x | β, b; a, α)` is positive and
/// increasing on `(0, 1)` using
/// `x^α/Γ(γ) ∫_0^x (x-t)^{γ-1} G^{p,0}_{p,p}(t | b-β; a-β) dt`, `γ = β - α`.
///
/// The hypotheses `α ≥ 0`, `γ ≥ 1`, `a > β - 1` and `v_{a,b} ≥ 0` are checked
/// first; failure is reported as [`Error::HypothesisFailed`].
pub fn monotonicity_check(a: &[f64], b: &[f64], alpha: f64, beta: f64, grid: usize) -> Result<Monotonicity> {
    let gamma = beta - alpha;
    if alpha < 0.0 {
        return Err(Error::HypothesisFailed(format!("α = {alpha} < 0")));
    }
    if gamma < 1.0 {
        return Err(Error::HypothesisFailed(format!("β - α = {gamma} < 1")));
    }
    if let Some(&x) = a.iter().find(|&&x| x <= beta - 1.0) {
        return Err(Error::HypothesisFailed(format!("a component {x} ≤ β - 1")));
    }
    let params = ParamVectors::real(a, b)?;
    let (vmin, at) = v_min(&params, 2000)?;
    if vmin < -1e-12 {
        return Err(Error::HypothesisFailed(format!("v_(a,b) = {vmin:e} < 0 at t = {at}")));
    }
    // G^{p,0}(t | b-β; a-β) is G_0 for the shifted pair (a-β+1, b-β+1)
    let shifted = params.shifted(Complex64::new(1.0 - beta, 0.0));
    let gamma_a = gamma_vec(shifted.a())?;
    let ev = GHatEvaluator::new(&GHatSpec::new(shifted, 0));
    let rg = rgamma(Complex64::new(gamma, 0.0)).re;
    let opts = QuadOptions::with_tol(1e-12);
    let value = |x: f64| -> Result<f64> {
        let xc = 1.0 - x;
        let r = tanh_sinh_fallible(
            |u, uc| {
                let t = x * u;
                if t < f64::MIN_POSITIVE {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                Ok(gamma_a * ev.eval_split(t, xc + x * uc)?.value * uc.powf(gamma - 1.0))
            },
            &opts,
        )?;
        Ok(x.powf(alpha + gamma) * rg * r.value.re)
    };
    let grid = grid.max(2);
    let mut prev: Option<(f64, f64)> = None;
    let mut min_value = f64::INFINITY;
    let mut min_slope = f64::INFINITY;
    for i in 1..=grid {
        let x = i as f64 / (grid + 1) as f64;
        let v = value(x)?;
        min_value = min_value.min(v);
        if let Some((px, pv)) = prev {
            min_slope = min_slope.min((v - pv) / (x - px));
        }
        prev = Some((x, v));
    }
    Ok(Monotonicity {
        positive: min_value > 0.0,
        increasing: min_slope >= -1e-10,
        min_value,
        min_slope,
        grid,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroReport {
    /// The interval `(kπ, (k+1)π)` containing the root.
    pub interval: (f64, f64),
    pub root: f64,
    pub derivative_at_root: f64,
    pub simple: bool,
    /// Zeros found outside `(π, 2π) ∪ (2π, 3π)` in the whole scan.
    pub scan_extra_zeros: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroScan {
    pub zeros: Vec<ZeroReport>,
    /// Whether `â, b > 0` and `v_{(â,½), b} ≥ 0` held on the certificate grid;
    /// when false the scan still runs but lies outside the theorem.
    pub hypotheses_hold: bool,
    pub hypothesis_note: Option<String>,
    pub scan_lo: f64,
    pub scan_hi: f64,
    pub step: f64,
    pub certificate_grid: usize,
}

impl ZeroScan {
    pub fn extra_zeros(&self) -> usize {
        self.zeros.first().map_or(0, |z| z.scan_extra_zeros)
    }

    /// Roots inside `(lo, hi)`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.zeros.iter().filter(|z| z.root > lo && z.root < hi).count()
    }
}

pub const ZERO_SCAN_START: f64 = 0.05;
pub const ZERO_SCAN_STEP: f64 = PI / 200.0;
const CERTIFICATE_GRID: usize = 2000;

fn bessel_params(a_hat: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    (c(a_hat), c(b))
}

/// `f(z) = {p-1}F_p(â; b; -z²/4) - cos z`.
pub fn thm42_f(a_hat: &[f64], b: &[f64], z: f64) -> Result<f64> {
    let (u, l) = bessel_params(a_hat, b);
    Ok(hyp(&u, &l, Complex64::new(-z * z / 4.0, 0.0))?.value.re - z.cos())
}

/// `f'(z) = -(z/2) F'(-z²/4) + sin z`.
pub fn thm42_fprime(a_hat: &[f64], b: &[f64], z: f64) -> Result<f64> {
    let (u, l) = bessel_params(a_hat, b);
    let d = pfq_derivative(&HypergeomSpec::new(u, l, Complex64::new(-z * z / 4.0, 0.0)), 1)?;
    Ok(-0.5 * z * d.value.re + z.sin())
}

fn thm42_hypotheses(a_hat: &[f64], b: &[f64]) -> Option<String> {
    if a_hat.len() + 1 != b.len() {
        return Some(format!("need |b| = |â| + 1, got {} and {}", b.len(), a_hat.len()));
    }
    if a_hat.iter().chain(b).any(|&x| !(x > 0.0)) {
        return Some("â and b must be positive".into());
    }
    let mut a = a_hat.to_vec();
    a.push(0.5);
    if supermajorization(&a, b) {
        return None;
    }
    match ParamVectors::real(&a, b).and_then(|p| v_min(&p, CERTIFICATE_GRID)) {
        Ok((v, _)) if v >= -1e-12 => None,
        Ok((v, t)) => Some(format!("v_(a,b) = {v:e} < 0 at t = {t}")),
        Err(e) => Some(e.to_string()),
    }
}

/// Real zeros of `{p-1}F_p(â; b; -z²/4) - cos z` on `(0.05, scan_hi]`:
/// sign changes on a grid of step `π/200`, each refined by bisection to
/// `1e-12`.
pub fn find_zeros_thm42(a_hat: &[f64], b: &[f64], scan_hi: f64) -> Result<ZeroScan> {
    let note = thm42_hypotheses(a_hat, b);
    let f = |z: f64| thm42_f(a_hat, b, z);
    let mut roots = Vec::new();
    let mut z0 = ZERO_SCAN_START;
    let mut f0 = f(z0)?;
    let steps = ((scan_hi - ZERO_SCAN_START) / ZERO_SCAN_STEP).ceil() as usize;
    for i in 1..=steps {
        let z1 = (ZERO_SCAN_START + i as f64 * ZERO_SCAN_STEP).min(scan_hi);
        let f1 = f(z1)?;
        if f1 == 0.0 {
            roots.push(z1);
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            let (mut lo, mut hi, mut flo) = (z0, z1, f0);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        z0 = z1;
        f0 = f1;
    }
    let predicted = |z: f64| (z > PI && z < 2.0 * PI) || (z > 2.0 * PI && z < 3.0 * PI);
    let extra = roots.iter().filter(|&&z| !predicted(z)).count();
    let zeros = roots
        .into_iter()
        .map(|root| {
            let k = (root / PI).floor();
            let d = thm42_fprime(a_hat, b, root)?;
            Ok(ZeroReport {
                interval: (k * PI, (k + 1.0) * PI),
                root,
                derivative_at_root: d,
                simple: d.abs() > 1e-8,
                scan_extra_zeros: extra,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZeroScan {
        zeros,
        hypotheses_hold: note.is_none(),
        hypothesis_note: note,
        scan_lo: ZERO_SCAN_START,
        scan_hi,
        step: ZERO_SCAN_STEP,
        certificate_grid: CERTIFICATE_GRID,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityScan {
    pub min_value: f64,
    pub argmin: f64,
    /// `(β₁, β₂) ∈ P_α` and `v_{a,b} ≥ 0` (with `a > 0`) on the certificate grid.
    pub in_theorem: bool,
    pub points: usize,
}

/// The default grid: 500 points on `[-400, 50]`.
pub fn default_x_grid() -> Vec<f64> {
    (0..500).map(|i| -400.0 + 450.0 * i as f64 / 499.0).collect()
}

/// Minimum of `{p}F_{p+1}(α, a; β₁, β₂, b; x)` over `x_grid`.
pub fn positivity_scan_thm43(alpha: f64, beta1: f64, beta2: f64, a: &[f64], b: &[f64], x_grid: &[f64]) -> Result<PositivityScan> {
    if a.len() != b.len() {
        return Err(Error::InvalidParams("a and b must have equal length".into()));
    }
    let mut in_theorem = p_alpha_member(alpha, beta1, beta2);
    if in_theorem && !a.is_empty() {
        in_theorem = a.iter().all(|&x| x > 0.0)
            && b.iter().all(|&x| x > 0.0)
            && v_min(&ParamVectors::real(a, b)?, CERTIFICATE_GRID)?.0 >= -1e-12;
    }
    let upper: Vec<Complex64> = std::iter::once(alpha).chain(a.iter().copied()).map(|x| Complex64::new(x, 0.0)).collect();
    let lower: Vec<Complex64> = [beta1, beta2].into_iter().chain(b.iter().copied()).map(|x| Complex64::new(x, 0.0)).collect();
    let mut min_value = f64::INFINITY;
    let mut argmin = f64::NAN;
    for &x in x_grid {
        let v = hyp(&upper, &lower, Complex64::new(x, 0.0))?.value.re;
        if v < min_value {
            min_value = v;
            argmin = x;
        }
    }
    Ok(PositivityScan { min_value, argmin, in_theorem, points: x_grid.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_function() {
        let p = ParamVectors::real(&[0.5, 1.0], &[1.0, 1.5]).unwrap();
        assert!(v_min(&p, 2000).unwrap().0 >= 0.0);
        let q = ParamVectors::real(&[2.0], &[1.0]).unwrap();
        let (m, t) = v_min(&q, 200).unwrap();
        assert!((m + 0.25).abs() < 1e-12 && (t - 0.5).abs() < 1e-6);
        assert_eq!(v_min(&ParamVectors::real(&[0.7], &[0.7]).unwrap(), 50).unwrap().0, 0.0);
    }

    #[test]
    fn majorization() {
        assert!(supermajorization(&[0.5, 1.0], &[1.0, 1.5]));
        assert!(supermajorization(&[0.5, 1.0], &[0.5, 1.0]));
        assert!(!supermajorization(&[2.0], &[1.0]));
    }

    #[test]
    fn p_alpha() {
        assert!(p_alpha_member(0.5, 1.0, 1.0));
        assert!(!p_alpha_member(0.5, 0.99, 3.0));
        assert!(p_alpha_member(1.0, 1.5, 2.0));
        assert!(!p_alpha_member(1.0, 1.6, 1.6));
    }
}
