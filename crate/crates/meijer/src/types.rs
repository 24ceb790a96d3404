//! Parameter vectors, evaluation results and the compensated accumulator
//! shared by every evaluator in the crate.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used to decide that a parameter (or a parameter difference)
/// sits on an integer.
pub const INTEGER_TOL: f64 = 1e-10;

/// The pair `(a, b)` of the integral `∫ G^{p,0}_{p,p}(t | b-1; a-1) φ(t) dt`.
///
/// Every public entry point takes parameters in this convention and applies
/// the shift by one internally.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVectors {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl ParamVectors {
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidParams(format!(
                "need equal nonzero lengths, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if a.iter().chain(&b).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("parameter vector".into()));
        }
        Ok(ParamVectors { a, b })
    }

    pub fn real(a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(
            a.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            b.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    /// `min_j Re a_j`.
    pub fn a_min(&self) -> f64 {
        self.a.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    /// The parametric excess `ψ = Σ (b_j - a_j)`.
    pub fn psi(&self) -> Complex64 {
        self.b.iter().sum::<Complex64>() - self.a.iter().sum::<Complex64>()
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().chain(&self.b).all(|z| z.im == 0.0)
    }

    /// Both vectors shifted by `d`.
    pub fn shifted(&self, d: Complex64) -> Self {
        ParamVectors {
            a: self.a.iter().map(|z| z + d).collect(),
            b: self.b.iter().map(|z| z + d).collect(),
        }
    }

    /// `Some(m)` when `ψ = -m` for an integer `m ≥ 0` (within [`INTEGER_TOL`]).
    pub fn psi_nonpositive_integer(&self) -> Option<usize> {
        nonpositive_integer(self.psi())
    }

    /// Smallest order `n` admitted by the regularizations:
    /// `n > -min(a_min, Re ψ)`.
    pub fn min_admissible_n(&self) -> usize {
        let bound = -self.a_min().min(self.psi().re);
        if bound < 0.0 {
            0
        } else {
            bound.floor() as usize + 1
        }
    }
}

impl fmt::Display for ParamVectors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Complex64]| {
            v.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(",")
        };
        write!(f, "a=({}) b=({})", show(&self.a), show(&self.b))
    }
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}j", z.re, z.im)
    } else {
        format!("{}+{}j", z.re, z.im)
    }
}

/// One function `Ĝ_n` of the family: parameters plus the order `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GHatSpec {
    pub params: ParamVectors,
    pub n: usize,
}

impl GHatSpec {
    pub fn new(params: ParamVectors, n: usize) -> Self {
        GHatSpec { params, n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Terminating,
    PowerSeries,
    UnitySeries,
    OriginSeries,
    Quadrature,
    EpsilonSplit,
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Terminating => "terminating",
            Method::PowerSeries => "power-series",
            Method::UnitySeries => "unity-series",
            Method::OriginSeries => "origin-series",
            Method::Quadrature => "quadrature",
            Method::EpsilonSplit => "epsilon-split",
            Method::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value together with an absolute error estimate and the amount of work
/// (series terms or quadrature nodes) spent on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_err: f64,
    pub count: usize,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: Complex64, abs_err: f64, count: usize, method: Method) -> Self {
        EvalResult { value, abs_err: abs_err.max(0.0), count: count.max(1), method }
    }

    pub fn exact(value: Complex64, method: Method) -> Self {
        Self::new(value, 0.0, 1, method)
    }

    pub fn scale(self, c: Complex64) -> Self {
        EvalResult { value: self.value * c, abs_err: self.abs_err * c.norm(), ..self }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// Neumaier-compensated complex accumulator that also tracks `Σ|term|`,
/// the scale against which rounding and cancellation are judged.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: Complex64,
    comp: Complex64,
    l1: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        self.sum.re = two_sum(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, x.im, &mut self.comp.im);
        self.l1 += x.norm();
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }
}

fn two_sum(s: f64, x: f64, comp: &mut f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *comp += (s - t) + x;
    } else {
        *comp += (x - t) + s;
    }
    t
}

/// `Some(m)` if `z` is within [`INTEGER_TOL`] of `-m`, `m ∈ ℕ₀`.
pub fn nonpositive_integer(z: Complex64) -> Option<usize> {
    let r = z.re.round();
    if r <= 0.0 && (z.re - r).abs() < INTEGER_TOL && z.im.abs() < INTEGER_TOL {
        Some((-r) as usize)
    } else {
        None
    }
}

/// Exact test used by the series code: `z ∈ {0, -1, -2, ...}` bit for bit.
pub(crate) fn exact_nonpositive_integer(z: Complex64) -> Option<usize> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() && z.re > -1e15 {
        Some((-z.re) as usize)
    } else {
        None
    }
}

/// `Some(k)` if `z` is within [`INTEGER_TOL`] of the integer `k`.
pub fn near_integer(z: Complex64) -> Option<i64> {
    let r = z.re.round();
    if (z.re - r).abs() < INTEGER_TOL && z.im.abs() < INTEGER_TOL {
        Some(r as i64)
    } else {
        None
    }
}
