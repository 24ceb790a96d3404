//! Closed-form moments of `Ĝ_n`, its hypergeometric transforms and the
//! summation formula they imply. All results carry the `÷Γ(a)` convention.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::{binomial, factorial, pochhammer_vec, rfactorial, rgamma_vec};
use crate::ghat::GHatEvaluator;
use crate::hypergeom::{hyp, hyp_unit_terminating};
use crate::quad::{tanh_sinh_fallible, QuadOptions};
use crate::types::{exact_nonpositive_integer, Accumulator, EvalResult, GHatSpec, Method, ParamVectors};

/// `{p+1}F_p(-N, a; b; 1) / Γ(b)`, finite even where `Γ(b)` has poles.
pub fn unit_sum_over_gamma(big_n: usize, a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    if b.iter().all(|&z| exact_nonpositive_integer(z).is_none()) {
        return Ok(hyp_unit_terminating(big_n, a, b)?.value * rgamma_vec(b));
    }
    let mut acc = Accumulator::new();
    let mut coef = Complex64::new(1.0, 0.0);
    for i in 0..=big_n {
        if i > 0 {
            coef *= -((big_n - i + 1) as f64) * a.iter().map(|&z| z + (i - 1) as f64).product::<Complex64>() / i as f64;
        }
        let shifted: Vec<Complex64> = b.iter().map(|&z| z + i as f64).collect();
        acc.add(coef * rgamma_vec(&shifted));
    }
    Ok(acc.value())
}

fn check_admissible(spec: &GHatSpec) -> Result<()> {
    let need = spec.params.min_admissible_n();
    if spec.n < need {
        return Err(Error::Admissibility {
            n: spec.n,
            reason: format!("need n > -min(Re ψ, min Re a), i.e. n ≥ {need}"),
        });
    }
    Ok(())
}

/// `∫_0^1 t^k (1-t)^r Ĝ_n(t) dt / Γ(a)`.
///
/// `r = 0` gives the power moments `m_k`, `k = 0` the moments `m̂_r` about
/// one. As a double sequence this equals `(-1)^r Δ^r m_k` (forward
/// differences in `k`) and `(-1)^k Δ^k m̂_r`.
pub fn mixed_moment(spec: &GHatSpec, k: usize, r: usize) -> Result<Complex64> {
    check_admissible(spec)?;
    let (a, b, n) = (spec.params.a(), spec.params.b(), spec.n);
    let mut acc = Accumulator::new();
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * binomial(k, j) * factorial(r + j) * rfactorial(n + r + j);
        acc.add(w * unit_sum_over_gamma(n + r + j, a, b)?);
    }
    Ok(acc.value())
}

/// `m_k/Γ(a)` through the `{p+2}F_{p+1}` representation plus the closed
/// correction term.
pub fn moment_mk_alt(spec: &GHatSpec, k: usize) -> Result<Complex64> {
    check_admissible(spec)?;
    let (a, b, n) = (spec.params.a(), spec.params.b(), spec.n);
    let nk = n + k;
    let tail = {
        let shifted: Vec<Complex64> = b.iter().map(|&z| z + nk as f64).collect();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * pochhammer_vec(a, nk) * rgamma_vec(&shifted) * factorial(k) * rfactorial(nk)
    };
    if n == 0 {
        // 1/(-1)! = 0: only the correction term survives
        return Ok(tail);
    }
    // {p+2}F_{p+1}(-n-k, 1-n, a; 1-n-k, b; 1) terminates at 1-n before the
    // lower parameter 1-n-k reaches zero, so the sum runs over i ≤ n-1.
    let mut acc = Accumulator::new();
    let mut coef = Complex64::new(1.0, 0.0);
    for i in 0..n {
        if i > 0 {
            let im = (i - 1) as f64;
            coef *= (-(nk as f64) + im) * (1.0 - n as f64 + im) / ((1.0 - nk as f64 + im) * i as f64)
                * a.iter().map(|&z| z + im).product::<Complex64>();
        }
        let shifted: Vec<Complex64> = b.iter().map(|&z| z + i as f64).collect();
        acc.add(coef * rgamma_vec(&shifted));
    }
    Ok(acc.value() * rfactorial(n - 1) / nk as f64 + tail)
}

/// Residual of the identity between the two moment formulas.
pub fn cor27_residual(spec: &GHatSpec, k: usize) -> Result<f64> {
    Ok((mixed_moment(spec, k, 0)? - moment_mk_alt(spec, k)?).norm())
}

/// Transform kernels `K(zt)`, each a `uF_s(c; d; -zt)`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    GeneralHypergeom { c: Vec<Complex64>, d: Vec<Complex64> },
    /// `(1 + zt)^{-σ}`
    Stieltjes { sigma: Complex64 },
    /// `e^{-zt}`
    Laplace,
    /// `0F1(; ν; -zt)`
    Bessel { nu: Complex64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub z: Complex64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, z: Complex64) -> Result<Self> {
        let k = KernelSpec { kind, z };
        let (c, d) = k.parameters();
        if let Some(&bad) = d.iter().find(|&&w| exact_nonpositive_integer(w).is_some()) {
            return Err(Error::InvalidParams(format!("lower kernel parameter {bad} is a nonpositive integer")));
        }
        if c.len() > d.len() + 1 {
            return Err(Error::Divergent { upper: c.len(), lower: d.len() });
        }
        Ok(k)
    }

    pub fn stieltjes(sigma: f64, z: f64) -> Result<Self> {
        Self::new(KernelKind::Stieltjes { sigma: Complex64::new(sigma, 0.0) }, Complex64::new(z, 0.0))
    }

    pub fn laplace(z: f64) -> Result<Self> {
        Self::new(KernelKind::Laplace, Complex64::new(z, 0.0))
    }

    pub fn bessel(nu: f64, z: f64) -> Result<Self> {
        Self::new(KernelKind::Bessel { nu: Complex64::new(nu, 0.0) }, Complex64::new(z, 0.0))
    }

    /// `(c, d)` with `K(x) = uF_s(c; d; -x)`.
    pub fn parameters(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        match &self.kind {
            KernelKind::GeneralHypergeom { c, d } => (c.clone(), d.clone()),
            KernelKind::Stieltjes { sigma } => (vec![*sigma], vec![]),
            KernelKind::Laplace => (vec![], vec![]),
            KernelKind::Bessel { nu } => (vec![], vec![*nu]),
        }
    }

    /// `true` when `u = s + 1`, i.e. the kernel has a branch cut on
    /// `zt ∈ (-∞, -1]`.
    pub fn has_cut(&self) -> bool {
        let (c, d) = self.parameters();
        c.len() == d.len() + 1
    }

    /// `uF_s(c + j; d + j; -w)`.
    pub fn shifted_value(&self, j: usize, w: Complex64) -> Result<Complex64> {
        let jf = j as f64;
        match &self.kind {
            KernelKind::Stieltjes { sigma } => Ok((1.0 + w).powc(-(sigma + jf))),
            KernelKind::Laplace => Ok((-w).exp()),
            _ => {
                let (c, d) = self.parameters();
                let c: Vec<Complex64> = c.iter().map(|&x| x + jf).collect();
                let d: Vec<Complex64> = d.iter().map(|&x| x + jf).collect();
                Ok(hyp(&c, &d, -w)?.value)
            }
        }
    }

    /// `d^k/dt^k K(zt) = (-z)^k (c)_k/(d)_k uF_s(c+k; d+k; -zt)`.
    pub fn derivative(&self, t: f64, order: usize) -> Result<Complex64> {
        let (c, d) = self.parameters();
        let factor = (-self.z).powi(order as i32) * pochhammer_vec(&c, order) / pochhammer_vec(&d, order);
        if factor == Complex64::new(0.0, 0.0) {
            return Ok(factor);
        }
        Ok(factor * self.shifted_value(order, self.z * t)?)
    }

    fn check_cut(&self) -> Result<()> {
        if self.has_cut() && self.z.im == 0.0 && self.z.re <= -1.0 {
            return Err(Error::BranchCut(self.z));
        }
        Ok(())
    }
}

/// Generic `j`-series `Σ_j z^j (c)_j/((d)_j (n+j)!) uF_s(c+j; d+j; -z) w_j`
/// with weights `w_j` supplied by the caller.
fn j_series<W>(kernel: &KernelSpec, n: usize, tol: f64, max_terms: usize, weight: W) -> Result<EvalResult>
where
    W: Fn(usize) -> Result<Complex64>,
{
    let z = kernel.z;
    if kernel.has_cut() && z.re <= -0.5 {
        return Err(Error::OutsideDomain(z));
    }
    let (c, d) = kernel.parameters();
    let min_terms = 5 + z.norm().ceil() as usize;
    let mut acc = Accumulator::new();
    let mut coef = Complex64::new(rfactorial(n), 0.0);
    let mut small = 0;
    let mut err = 0.0;
    for j in 0..max_terms {
        if j > 0 {
            let jm = (j - 1) as f64;
            coef *= z * c.iter().map(|&x| x + jm).product::<Complex64>()
                / (d.iter().map(|&x| x + jm).product::<Complex64>() * (n + j) as f64);
        }
        if coef == Complex64::new(0.0, 0.0) {
            // (c)_j vanished: the series terminated
            break;
        }
        let term = coef * kernel.shifted_value(j, z)? * weight(j)?;
        acc.add(term);
        let mag = term.norm();
        if mag <= tol * acc.value().norm() {
            small += 1;
            if small >= 3 && j >= min_terms {
                err = 10.0 * mag;
                let e = err + 8.0 * f64::EPSILON * acc.l1();
                return Ok(EvalResult::new(acc.value(), e, j + 1, Method::PowerSeries));
            }
        } else {
            small = 0;
        }
        err = mag;
    }
    if acc.value().norm() == 0.0 || coef == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::new(acc.value(), err + 8.0 * f64::EPSILON * acc.l1(), max_terms, Method::PowerSeries));
    }
    Err(Error::NonConvergence { terms: max_terms, partial: acc.value().norm(), last: err })
}

/// `∫_0^1 K(zt) Ĝ_n(t) dt / Γ(a)` by the moment series.
pub fn hyper_transform(spec: &GHatSpec, kernel: &KernelSpec, tol: f64) -> Result<EvalResult> {
    hyper_transform_with(spec, kernel, tol, 100_000)
}

pub fn hyper_transform_with(spec: &GHatSpec, kernel: &KernelSpec, tol: f64, max_terms: usize) -> Result<EvalResult> {
    check_admissible(spec)?;
    let (a, b, n) = (spec.params.a(), spec.params.b(), spec.n);
    j_series(kernel, n, tol, max_terms, |j| unit_sum_over_gamma(n + j, a, b))
}

/// The same transform by direct quadrature of `K(zt) Ĝ_n(t)/Γ(a)`; for
/// kernels with a cut this is the analytic continuation beyond the series'
/// half-plane.
pub fn transform_by_quadrature(spec: &GHatSpec, kernel: &KernelSpec, opts: &QuadOptions) -> Result<EvalResult> {
    check_admissible(spec)?;
    kernel.check_cut()?;
    let ev = GHatEvaluator::new(spec);
    tanh_sinh_fallible(|t, tc| Ok(kernel.derivative(t, 0)? * ev.eval_split(t, tc)?.value), opts)
}

/// `∫_0^1 t^k (1-t)^r Ĝ_n(t) dt / Γ(a)` by quadrature.
pub fn mixed_moment_by_quadrature(spec: &GHatSpec, k: usize, r: usize, opts: &QuadOptions) -> Result<EvalResult> {
    check_admissible(spec)?;
    let ev = GHatEvaluator::new(spec);
    tanh_sinh_fallible(|t, tc| Ok(ev.eval_split(t, tc)?.value * t.powi(k as i32) * tc.powi(r as i32)), opts)
}

/// Right-hand side of
/// `{u+p}F_{s+p}(a, c; b, d; -z) = Σ_j (c)_j z^j/((d)_j j!) uF_s(c+j; d+j; -z) {p+1}F_p(-j, a; b; 1)`.
pub fn summation_series(
    a: &[Complex64],
    b: &[Complex64],
    c: &[Complex64],
    d: &[Complex64],
    z: Complex64,
    tol: f64,
) -> Result<EvalResult> {
    if a.len() != b.len() {
        return Err(Error::InvalidParams("a and b must have equal length".into()));
    }
    let kernel = KernelSpec::new(KernelKind::GeneralHypergeom { c: c.to_vec(), d: d.to_vec() }, z)?;
    j_series(&kernel, 0, tol, 100_000, |j| Ok(hyp_unit_terminating(j, a, b)?.value))
}

/// Left-hand side `{u+p}F_{s+p}(a, c; b, d; -z)` by its own power series.
pub fn summation_lhs(a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64], z: Complex64) -> Result<EvalResult> {
    let upper: Vec<Complex64> = a.iter().chain(c).copied().collect();
    let lower: Vec<Complex64> = b.iter().chain(d).copied().collect();
    hyp(&upper, &lower, -z)
}

/// `m̂_0/Γ(a) = {p+1}F_p(-n, a; b; 1)/(Γ(b) n!)`, the `z = 0` value of every
/// transform.
pub fn transform_at_zero(params: &ParamVectors, n: usize) -> Result<Complex64> {
    Ok(unit_sum_over_gamma(n, params.a(), params.b())? * rfactorial(n))
}
