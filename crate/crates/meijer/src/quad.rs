//! Tanh–sinh (double-exponential) quadrature on `(0, 1)`.
//!
//! Nodes cluster doubly exponentially at both endpoints, so algebraic
//! endpoint singularities such as `t^{a-1}` or `(1-t)^{ψ-1}` need no special
//! treatment. Integrands receive both `t` and `1 - t`; the latter is exact
//! for the nodes near one, which matters when the integrand is singular
//! there.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::rfactorial;
use crate::ghat::GHatEvaluator;
use crate::types::{Accumulator, EvalResult, GHatSpec, Method};

const T_MAX: f64 = 6.1;
const MAX_LEVEL: usize = 12;
const MIN_LEVEL: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Target for `|I_L - I_{L-1}|` relative to `∫|f|`.
    pub tol: f64,
    pub max_level: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { tol: 1e-11, max_level: MAX_LEVEL }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions { tol, ..Self::default() }
    }
}

// (distance to the nearer endpoint, weight) for every node first
// introduced at each level, t >= 0 only (the rule is symmetric).
fn node_table() -> &'static Vec<Vec<(f64, f64)>> {
    static TABLE: OnceLock<Vec<Vec<(f64, f64)>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let node = |t: f64| {
            let e = (PI * t.sinh()).exp();
            let xs = 1.0 / (1.0 + e);
            let w = PI * t.cosh() * xs * (1.0 - xs);
            (xs, w)
        };
        let mut levels = Vec::with_capacity(MAX_LEVEL + 1);
        levels.push((0..=T_MAX as usize).map(|k| node(k as f64)).filter(|n| n.0 > 0.0).collect());
        for level in 1..=MAX_LEVEL {
            let h = 0.5f64.powi(level as i32);
            let count = (T_MAX / h) as usize;
            levels.push(
                (1..=count)
                    .step_by(2)
                    .map(|k| node(k as f64 * h))
                    .filter(|n| n.0 > 0.0)
                    .collect(),
            );
        }
        levels
    })
}

/// An integrand on `(0, 1)` with optional endpoint exponents
/// (`f ~ t^{e0}` at 0, `f ~ (1-t)^{e1}` at 1) used to reject
/// non-integrable input up front.
pub struct Integrand<'a> {
    f: Box<dyn Fn(f64, f64) -> Complex64 + Sync + 'a>,
    hints: Option<(f64, f64)>,
}

impl<'a> Integrand<'a> {
    /// `f(t, 1 - t)`.
    pub fn new(f: impl Fn(f64, f64) -> Complex64 + Sync + 'a) -> Self {
        Integrand { f: Box::new(f), hints: None }
    }

    pub fn with_hints(mut self, at_zero: f64, at_one: f64) -> Self {
        self.hints = Some((at_zero, at_one));
        self
    }
}

/// `∫_0^1 f`.
pub fn integrate01(f: &Integrand<'_>, tol: f64) -> Result<EvalResult> {
    if let Some((e0, e1)) = f.hints {
        if e0 <= -1.0 || e1 <= -1.0 {
            return Err(Error::Domain(format!("integrand not integrable: endpoint exponents {e0}, {e1}")));
        }
    }
    if tol < 1e-13 {
        return Err(Error::Domain(format!("quadrature tolerance {tol:e} below 1e-13")));
    }
    tanh_sinh(|t, tc| (f.f)(t, tc), &QuadOptions::with_tol(tol))
}

/// Core rule: `∫_0^1 f(t, 1-t) dt`.
pub fn tanh_sinh<F>(f: F, opts: &QuadOptions) -> Result<EvalResult>
where
    F: Fn(f64, f64) -> Complex64,
{
    let table = node_table();
    let max_level = opts.max_level.min(MAX_LEVEL);
    let mut sum = Accumulator::new();
    let mut abs_sum = 0.0;
    let mut count = 0usize;
    let mut previous: Option<Complex64> = None;
    let eval = |xs: f64| -> Result<(Complex64, f64)> {
        let mut s = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        for (t, tc) in [(xs, 1.0 - xs), (1.0 - xs, xs)] {
            let v = f(t, tc);
            if v.re.is_finite() && v.im.is_finite() {
                s += v;
                a += v.norm();
            } else if xs > 1e-30 {
                return Err(Error::NonFinite(format!("integrand at t = {t}")));
            }
        }
        Ok((s, a))
    };
    for level in 0..=max_level {
        let h = 0.5f64.powi(level as i32);
        for (i, &(xs, w)) in table[level].iter().enumerate() {
            if level == 0 && i == 0 {
                // the centre node t = 1/2 appears once
                let v = f(0.5, 0.5);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite("integrand at t = 0.5".into()));
                }
                sum.add(v * w);
                abs_sum += v.norm() * w;
                count += 1;
                continue;
            }
            let (v, a) = eval(xs)?;
            sum.add(v * w);
            abs_sum += a * w;
            count += 2;
        }
        let estimate = sum.value() * h;
        let l1 = abs_sum * h;
        if let Some(prev) = previous {
            let diff = (estimate - prev).norm();
            if level >= MIN_LEVEL && diff <= opts.tol * l1.max(f64::MIN_POSITIVE) {
                let err = diff + 4.0 * f64::EPSILON * l1;
                return Ok(EvalResult::new(estimate, err, count, Method::Quadrature));
            }
            if level == max_level {
                return Err(Error::NonConvergence { terms: count, partial: estimate.norm(), last: diff });
            }
        }
        previous = Some(estimate);
    }
    unreachable!("loop returns at the last level")
}

/// `∫_lo^hi f(t, t - lo, hi - t) dt` by an affine map onto `(0, 1)`.
pub fn integrate_interval<F>(f: F, lo: f64, hi: f64, opts: &QuadOptions) -> Result<EvalResult>
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    let len = hi - lo;
    if len == 0.0 {
        return Ok(EvalResult::exact(Complex64::new(0.0, 0.0), Method::Quadrature));
    }
    let r = tanh_sinh(|s, sc| f(lo + len * s, len * s, len * sc), opts)?;
    Ok(r.scale(Complex64::new(len, 0.0)))
}

/// [`tanh_sinh`] for a fallible integrand: the first evaluation error
/// aborts the integral and is returned.
pub fn tanh_sinh_fallible<F>(f: F, opts: &QuadOptions) -> Result<EvalResult>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let r = tanh_sinh(
        |t, tc| {
            if failure.borrow().is_some() {
                return Complex64::new(0.0, 0.0);
            }
            match f(t, tc) {
                Ok(v) => v,
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        opts,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}

/// Riemann–Liouville primitive
/// `(1/(n-m-1)!) ∫_0^x Ĝ_m(t)/Γ(a) (x-t)^{n-m-1} dt`, an evaluation of
/// `Ĝ_n(x)/Γ(a)` that is independent of the series routes.
pub fn fractional_primitive(spec: &GHatSpec, m: usize, x: f64) -> Result<EvalResult> {
    fractional_primitive_with(spec, m, x, &QuadOptions::default())
}

pub fn fractional_primitive_with(spec: &GHatSpec, m: usize, x: f64, opts: &QuadOptions) -> Result<EvalResult> {
    let n = spec.n;
    if m >= n {
        return Err(Error::Admissibility { n, reason: format!("need n > m = {m}") });
    }
    if m as f64 + spec.params.a_min() <= 0.0 {
        return Err(Error::Admissibility { n, reason: format!("need m + min Re a > 0 (m = {m})") });
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("x = {x} outside (0, 1]")));
    }
    let k = n - m - 1;
    let inner = GHatEvaluator::new(&GHatSpec::new(spec.params.clone(), m));
    // t = x u; with x = 1 the complement of the argument is exactly 1 - u
    let r = tanh_sinh_fallible(
        |u, uc| {
            let t = x * u;
            let tc = if x == 1.0 { uc } else { 1.0 - t };
            Ok(inner.eval_split(t, tc)?.value * uc.powi(k as i32))
        },
        opts,
    )?;
    Ok(r.scale(Complex64::new(x.powi(k as i32 + 1) * rfactorial(k), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constant() {
        let r = integrate01(&Integrand::new(|_, _| c(1.0)), 1e-12).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_sqrt() {
        let r = integrate01(&Integrand::new(|t, _| c(t.powf(-0.5))).with_hints(-0.5, 0.0), 1e-12).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn t_exp() {
        let r = integrate01(&Integrand::new(|t, _| c(t * (-t).exp())), 1e-12).unwrap();
        assert!((r.value.re - (1.0 - 2.0 / std::f64::consts::E)).abs() < 1e-14);
    }

    #[test]
    fn singular_at_one_uses_complement() {
        let r = tanh_sinh(|_, tc| c(tc.powf(-0.9)), &QuadOptions::with_tol(1e-10)).unwrap();
        assert!((r.value.re - 10.0).abs() < 1e-8, "{}", r.value.re);
    }

    #[test]
    fn rejects_bad_hints() {
        assert!(integrate01(&Integrand::new(|t, _| c(1.0 / t)).with_hints(-1.0, 0.0), 1e-10).is_err());
    }

    #[test]
    fn interval() {
        let r = integrate_interval(|t, _, _| c(t * t), 1.0, 3.0, &QuadOptions::default()).unwrap();
        assert!((r.value.re - 26.0 / 3.0).abs() < 1e-12);
    }
}
