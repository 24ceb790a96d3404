//! Generalized hypergeometric series `uFs(upper; lower; z)`.
//!
//! Terms are summed with a compensated accumulator. When the accumulated
//! magnitude `Σ|t_k|` dwarfs the result (alternating terminating sums at
//! argument one, entire series at large negative argument) the series is
//! re-summed in exact dyadic arithmetic, see [`crate::exact`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::exact_series;
use crate::gamma::pochhammer_vec;
use crate::types::{exact_nonpositive_integer, Accumulator, EvalResult, Method};

const EPS: f64 = f64::EPSILON;

/// Cancellation factor `Σ|t_k| / |Σ t_k|` beyond which the exact path runs.
const CANCELLATION_LIMIT: f64 = 16.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomSpec {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub argument: Complex64,
}

impl HypergeomSpec {
    pub fn new(upper: Vec<Complex64>, lower: Vec<Complex64>, argument: Complex64) -> Self {
        HypergeomSpec { upper, lower, argument }
    }

    pub fn class(&self) -> SeriesClass {
        if let Some(n) = self.terminating_index() {
            return SeriesClass::Terminating(n);
        }
        let (u, s) = (self.upper.len(), self.lower.len());
        if u <= s {
            SeriesClass::Entire
        } else if u == s + 1 {
            SeriesClass::UnitDisk
        } else {
            SeriesClass::Divergent
        }
    }

    fn terminating_index(&self) -> Option<usize> {
        self.upper.iter().filter_map(|&u| exact_nonpositive_integer(u)).min()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesClass {
    /// Last nonzero term index.
    Terminating(usize),
    Entire,
    UnitDisk,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// Relative size below which a term counts as negligible.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { tol: 1e-16, max_terms: 100_000 }
    }
}

/// `uFs(upper; lower; z)` with default options.
pub fn pfq(spec: &HypergeomSpec) -> Result<EvalResult> {
    pfq_with(spec, &SeriesOptions::default())
}

/// Convenience wrapper around [`pfq`].
pub fn hyp(upper: &[Complex64], lower: &[Complex64], z: Complex64) -> Result<EvalResult> {
    pfq(&HypergeomSpec::new(upper.to_vec(), lower.to_vec(), z))
}

/// `{p+1}F_p(-k, a; b; 1)`, the terminating unit-argument sum that appears in
/// every moment formula.
pub fn hyp_unit_terminating(k: usize, a: &[Complex64], b: &[Complex64]) -> Result<EvalResult> {
    let mut upper = Vec::with_capacity(a.len() + 1);
    upper.push(Complex64::new(-(k as f64), 0.0));
    upper.extend_from_slice(a);
    hyp(&upper, b, Complex64::new(1.0, 0.0))
}

pub fn pfq_with(spec: &HypergeomSpec, opts: &SeriesOptions) -> Result<EvalResult> {
    let z = spec.argument;
    if spec.upper.iter().chain(&spec.lower).chain(std::iter::once(&z)).any(|w| !w.re.is_finite() || !w.im.is_finite()) {
        return Err(Error::NonFinite("hypergeometric parameters".into()));
    }
    let class = spec.class();
    for &l in &spec.lower {
        if let Some(pole) = exact_nonpositive_integer(l) {
            match class {
                SeriesClass::Terminating(n) if n <= pole => {}
                _ => return Err(Error::LowerPole { value: l }),
            }
        }
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::exact(Complex64::new(1.0, 0.0), Method::PowerSeries));
    }
    match class {
        SeriesClass::Terminating(n) => terminating(spec, n),
        SeriesClass::Divergent => Err(Error::Divergent { upper: spec.upper.len(), lower: spec.lower.len() }),
        SeriesClass::Entire => direct(spec, opts),
        SeriesClass::UnitDisk => {
            let r = z.norm();
            if r > 1.0 {
                return Err(Error::OutsideDomain(z));
            }
            if r > 0.95 && z.re < 0.5 {
                return pfaff_route(spec, opts);
            }
            if r == 1.0 {
                let excess: Complex64 =
                    spec.lower.iter().sum::<Complex64>() - spec.upper.iter().sum::<Complex64>();
                if excess.re <= 0.0 {
                    return Err(Error::OutsideDomain(z));
                }
            }
            direct(spec, opts)
        }
    }
}

fn term_ratio(spec: &HypergeomSpec, k: usize) -> Complex64 {
    let kf = k as f64;
    let mut num = spec.argument;
    for &u in &spec.upper {
        num *= u + kf;
    }
    let mut den = Complex64::new(kf + 1.0, 0.0);
    for &l in &spec.lower {
        den *= l + kf;
    }
    num / den
}

fn rounding_scale(spec: &HypergeomSpec) -> f64 {
    (spec.upper.len() + spec.lower.len() + 2) as f64 * EPS
}

fn terminating(spec: &HypergeomSpec, n: usize) -> Result<EvalResult> {
    let mut acc = Accumulator::new();
    let mut weighted = 0.0;
    let mut t = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        acc.add(t);
        weighted += (k + 1) as f64 * t.norm();
        if k < n {
            t *= term_ratio(spec, k);
        }
    }
    let s = acc.value();
    if !(s.re.is_finite() && s.im.is_finite()) || acc.l1() > CANCELLATION_LIMIT * s.norm() {
        if let Some(ex) = exact_series(&spec.upper, &spec.lower, spec.argument, Some(n), 0, 0) {
            return Ok(EvalResult::new(ex.value, 2.0 * EPS * ex.value.norm(), n + 1, Method::Terminating));
        }
    }
    Ok(EvalResult::new(s, rounding_scale(spec) * weighted, n + 1, Method::Terminating))
}

fn direct(spec: &HypergeomSpec, opts: &SeriesOptions) -> Result<EvalResult> {
    let mut acc = Accumulator::new();
    let mut weighted = 0.0;
    let mut t = Complex64::new(1.0, 0.0);
    let mut small = 0usize;
    let mut k = 0usize;
    loop {
        if k >= opts.max_terms {
            return Err(Error::NonConvergence { terms: k, partial: acc.value().norm(), last: t.norm() });
        }
        acc.add(t);
        weighted += (k + 1) as f64 * t.norm();
        let ratio = term_ratio(spec, k);
        let next = t * ratio;
        k += 1;
        let s = acc.value();
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::NonFinite(format!("series overflow after {k} terms")));
        }
        if t.norm() <= opts.tol * s.norm() {
            small += 1;
        } else {
            small = 0;
        }
        let rho = ratio.norm();
        if (small >= 3 && rho < 1.0) || next == Complex64::new(0.0, 0.0) {
            let dropped = next.norm();
            let rho_next = term_ratio(spec, k).norm();
            let tail = if rho_next < 1.0 { dropped / (1.0 - rho_next) } else { dropped * k as f64 };
            let trunc = (10.0 * dropped).max(tail);
            if acc.l1() > CANCELLATION_LIMIT * s.norm() {
                if let Some(ex) = exact_series(&spec.upper, &spec.lower, spec.argument, None, k, 4 * k + 200) {
                    let trunc = (10.0 * ex.last_term).max(if ex.tail_ratio < 1.0 {
                        ex.last_term / (1.0 - ex.tail_ratio)
                    } else {
                        ex.last_term * ex.terms as f64
                    });
                    return Ok(EvalResult::new(
                        ex.value,
                        trunc + 2.0 * EPS * ex.value.norm(),
                        ex.terms,
                        Method::PowerSeries,
                    ));
                }
            }
            return Ok(EvalResult::new(s, trunc + rounding_scale(spec) * weighted, k, Method::PowerSeries));
        }
        t = next;
    }
}

// Near the unit circle with Re z < 1/2:
//   F(c, a; b; z) = (1-z)^{-c} Σ_j (c)_j/j! w^j F(-j, a; b; 1),  w = z/(z-1),
// which converges geometrically because |w| < 1 there.
fn pfaff_route(spec: &HypergeomSpec, opts: &SeriesOptions) -> Result<EvalResult> {
    let z = spec.argument;
    let c = spec.upper[0];
    let rest = &spec.upper[1..];
    let w = z / (z - 1.0);
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Accumulator::new();
    let mut err = 0.0;
    let mut coef = one;
    let mut small = 0usize;
    let mut count = 0usize;
    let mut j = 0usize;
    loop {
        if j >= opts.max_terms {
            return Err(Error::NonConvergence { terms: j, partial: acc.value().norm(), last: coef.norm() });
        }
        let inner = hyp_unit_terminating(j, rest, &spec.lower)?;
        count += inner.count;
        let term = coef * inner.value;
        acc.add(term);
        err += coef.norm() * inner.abs_err;
        let s = acc.value();
        if term.norm() <= opts.tol * s.norm() {
            small += 1;
        } else {
            small = 0;
        }
        coef *= (c + j as f64) / (j as f64 + 1.0) * w;
        j += 1;
        if small >= 3 {
            let rho = w.norm();
            let tail = term.norm() * rho / (1.0 - rho);
            let scale = (one - z).powc(-c);
            let value = s * scale;
            let abs_err = (err + (10.0 * term.norm()).max(tail) + rounding_scale(spec) * acc.l1()) * scale.norm();
            return Ok(EvalResult::new(value, abs_err, count, Method::PowerSeries));
        }
    }
}

/// `d^order/dz^order uFs(upper; lower; z)` via shifted parameters.
pub fn pfq_derivative(spec: &HypergeomSpec, order: usize) -> Result<EvalResult> {
    if order > 8 {
        return Err(Error::Domain(format!("derivative order {order} exceeds 8")));
    }
    if order == 0 {
        return pfq(spec);
    }
    if let SeriesClass::Terminating(n) = spec.class() {
        if order > n {
            return Ok(EvalResult::exact(Complex64::new(0.0, 0.0), Method::Terminating));
        }
    }
    let coef = pochhammer_vec(&spec.upper, order) / pochhammer_vec(&spec.lower, order);
    let r = order as f64;
    let shifted = HypergeomSpec::new(
        spec.upper.iter().map(|u| u + r).collect(),
        spec.lower.iter().map(|l| l + r).collect(),
        spec.argument,
    );
    Ok(pfq(&shifted)?.scale(coef))
}
