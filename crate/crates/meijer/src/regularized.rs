//! The regularized functionals `𝒢₁` and `𝒢ᵇ¹`: finite parts of
//! `∫ G_0(t) φ(t) dt` and `∫ G^{p,0}_{p,p}(u² | b-½; a-½) φ(u) du`, defined for
//! all parameters by moving `n` derivatives onto the test function.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gamma::{gamma_vec, rfactorial, rgamma_vec};
use crate::ghat::{origin_sign_info, GHatEvaluator};
use crate::hypergeom::{hyp, hyp_unit_terminating};
use crate::moments::KernelSpec;
use crate::quad::{tanh_sinh_fallible, QuadOptions};
use crate::types::{nonpositive_integer, Accumulator, EvalResult, GHatSpec, Method, ParamVectors};

/// A test function on `[0, 1]` with analytic derivatives.
pub trait SmoothFunction: Send + Sync {
    /// `φ^{(order)}(t)`.
    fn eval(&self, t: f64, order: usize) -> Result<Complex64>;
    fn max_order(&self) -> usize;
}

const FD_STEP: f64 = 1e-4;
const FD_TOL: f64 = 1e-5;
const FD_POINTS: usize = 5;

/// Compares each derivative with a centered difference of the one below at
/// five pseudo-random points (fixed seed).
pub fn check_derivatives(phi: &dyn SmoothFunction) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_696a);
    let top = phi.max_order().min(6);
    for _ in 0..FD_POINTS {
        let t: f64 = rng.gen_range(0.05..0.95);
        for order in 0..top {
            let lo = phi.eval(t - FD_STEP, order)?;
            let hi = phi.eval(t + FD_STEP, order)?;
            let fd = (hi - lo) / (2.0 * FD_STEP);
            let d = phi.eval(t, order + 1)?;
            let scale = d.norm().max(fd.norm()).max(phi.eval(t, order)?.norm());
            if (fd - d).norm() > FD_TOL * scale {
                return Err(Error::InconsistentDerivative { order: order + 1, t });
            }
        }
    }
    Ok(())
}

type DerivFn = dyn Fn(f64, usize) -> Complex64 + Send + Sync;

/// Test function given by a closure `(t, order) ↦ φ^{(order)}(t)`, checked
/// against finite differences when built.
#[derive(Clone)]
pub struct FnTestFunction {
    f: Arc<DerivFn>,
    max_order: usize,
}

impl FnTestFunction {
    pub fn new(f: impl Fn(f64, usize) -> Complex64 + Send + Sync + 'static, max_order: usize) -> Result<Self> {
        let phi = FnTestFunction { f: Arc::new(f), max_order };
        check_derivatives(&phi)?;
        Ok(phi)
    }
}

impl SmoothFunction for FnTestFunction {
    fn eval(&self, t: f64, order: usize) -> Result<Complex64> {
        if order > self.max_order {
            return Err(Error::Domain(format!("derivative order {order} above {}", self.max_order)));
        }
        Ok((self.f)(t, order))
    }

    fn max_order(&self) -> usize {
        self.max_order
    }
}

/// `Σ c_i t^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<Complex64>);

impl SmoothFunction for Polynomial {
    fn eval(&self, t: f64, order: usize) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, &c) in self.0.iter().enumerate().skip(order) {
            let falling: f64 = ((i - order + 1)..=i).map(|m| m as f64).product();
            sum += c * falling * t.powi((i - order) as i32);
        }
        Ok(sum)
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }
}

/// `e^{c t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential(pub Complex64);

impl SmoothFunction for Exponential {
    fn eval(&self, t: f64, order: usize) -> Result<Complex64> {
        Ok(self.0.powi(order as i32) * (self.0 * t).exp())
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }
}

/// `cos(z t + phase)`; derivatives `z^k cos(z t + phase + πk/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cosine {
    pub z: f64,
    pub phase: f64,
}

impl Cosine {
    pub fn new(z: f64) -> Self {
        Cosine { z, phase: 0.0 }
    }
}

impl SmoothFunction for Cosine {
    fn eval(&self, t: f64, order: usize) -> Result<Complex64> {
        let k = order as f64;
        let arg = self.z * t + self.phase + FRAC_PI_2 * (order % 4) as f64;
        Ok(Complex64::new(self.z.powf(k) * arg.cos(), 0.0))
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }
}

/// The kernel `K(z t) = uF_s(c; d; -z t)` as a test function.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFunction(pub KernelSpec);

impl SmoothFunction for KernelFunction {
    fn eval(&self, t: f64, order: usize) -> Result<Complex64> {
        self.0.derivative(t, order)
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }
}

/// `Σ w_i φ_i`.
#[derive(Clone)]
pub struct Combination(pub Vec<(Complex64, Arc<dyn SmoothFunction>)>);

impl SmoothFunction for Combination {
    fn eval(&self, t: f64, order: usize) -> Result<Complex64> {
        self.0.iter().map(|(w, f)| Ok(w * f.eval(t, order)?)).sum()
    }

    fn max_order(&self) -> usize {
        self.0.iter().map(|(_, f)| f.max_order()).min().unwrap_or(usize::MAX)
    }
}

/// Parameters of `𝒢₁(a, b)` (or `𝒢ᵇ¹`) and the number `n` of derivatives
/// moved onto the test function.
#[derive(Debug, Clone, PartialEq)]
pub struct RegFunctionalSpec {
    pub params: ParamVectors,
    pub n: usize,
}

impl RegFunctionalSpec {
    /// With `n = None` the order is chosen as
    /// `max(0, ⌈-a_min⌉ + 1, ⌈-Re ψ⌉ + 1)`.
    pub fn new(params: ParamVectors, n: Option<usize>) -> Result<Self> {
        if let Some(&bad) = params.b().iter().find(|&&z| nonpositive_integer(z).is_some()) {
            return Err(Error::InvalidParams(format!("b contains the nonpositive integer {bad}")));
        }
        let need = params.min_admissible_n();
        let n = match n {
            Some(n) if n < need => {
                return Err(Error::Admissibility {
                    n,
                    reason: format!("need n > -min(min Re a, Re ψ), i.e. n ≥ {need}"),
                })
            }
            Some(n) => n,
            None => auto_order(&params).max(need),
        };
        Ok(RegFunctionalSpec { params, n })
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.params.clone(), Some(n))
    }

    pub fn ghat(&self) -> GHatSpec {
        GHatSpec::new(self.params.clone(), self.n)
    }
}

fn auto_order(params: &ParamVectors) -> usize {
    let bound = |x: f64| ((-x).ceil() + 1.0).max(0.0) as usize;
    bound(params.a_min()).max(bound(params.psi().re))
}

fn check_order(spec: &RegFunctionalSpec, phi: &dyn SmoothFunction) -> Result<()> {
    if phi.max_order() < spec.n {
        return Err(Error::Domain(format!(
            "test function has {} derivatives, the functional needs {}",
            phi.max_order(),
            spec.n
        )));
    }
    Ok(())
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `⟨𝒢₁(a, b), φ⟩`.
pub fn g1_action(spec: &RegFunctionalSpec, phi: &dyn SmoothFunction) -> Result<EvalResult> {
    g1_action_with(spec, phi, &QuadOptions::default())
}

pub fn g1_action_with(spec: &RegFunctionalSpec, phi: &dyn SmoothFunction, opts: &QuadOptions) -> Result<EvalResult> {
    check_order(spec, phi)?;
    let (a, b, n) = (spec.params.a(), spec.params.b(), spec.n);
    let mut acc = Accumulator::new();
    let mut err = 0.0;
    for k in 0..n {
        let f = hyp_unit_terminating(k, a, b)?;
        let w = sign(k) * phi.eval(1.0, k)? * rfactorial(k);
        acc.add(w * f.value);
        err += w.norm() * f.abs_err;
    }
    let gamma_b = gamma_vec(b)?;
    let ev = GHatEvaluator::new(&spec.ghat());
    let integral = tanh_sinh_fallible(|t, tc| Ok(ev.eval_split(t, tc)?.value * phi.eval(t, n)?), opts)?;
    let tail = sign(n) * gamma_b * integral.value;
    acc.add(tail);
    err += gamma_b.norm() * integral.abs_err + 4.0 * f64::EPSILON * acc.l1();
    Ok(EvalResult::new(acc.value(), err, integral.count + n, Method::Quadrature))
}

/// `⟨𝒢₁(a, b), uF_s(c; d; -z t)⟩`, which equals
/// `{u+p}F_{s+p}(a, c; b, d; -z)`.
pub fn g1_kernel(spec: &RegFunctionalSpec, kernel: &KernelSpec) -> Result<EvalResult> {
    if kernel.has_cut() && kernel.z.im == 0.0 && kernel.z.re <= -1.0 {
        return Err(Error::BranchCut(kernel.z));
    }
    g1_action(spec, &KernelFunction(kernel.clone()))
}

/// The augmented function `{u+p}F_{s+p}(a, c; b, d; -z)` by its own series.
pub fn augmented_series(params: &ParamVectors, kernel: &KernelSpec) -> Result<EvalResult> {
    let (c, d) = kernel.parameters();
    let upper: Vec<Complex64> = params.a().iter().chain(&c).copied().collect();
    let lower: Vec<Complex64> = params.b().iter().chain(&d).copied().collect();
    hyp(&upper, &lower, -kernel.z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub residual: f64,
    /// `{u+p}F_{s+p}(a, c; b, d; -z)/Γ(b)`.
    pub lhs: Complex64,
    pub finite_sum: Complex64,
    /// `(-1)^η z^n (c)_n/(d)_n ∫ K_n(z t) μ_n(dt)`.
    pub measure_term: Complex64,
    pub eta: u8,
    /// Smallest value of the density of `μ_n` on the grid.
    pub min_density: f64,
    pub grid: usize,
}

const DENSITY_GRID: usize = 200;
const DENSITY_SLACK: f64 = 1e-12;

/// Checks `F/Γ(b) = finite sum + (-1)^η z^n (c)_n/(d)_n ∫ K_n(zt) μ_n(dt)` with
/// `μ_n = (-1)^η Ĝ_n/Γ(a) dt`, and that `μ_n` is a positive measure.
///
/// `K_k` is the kernel with parameters shifted by `k`; for the Stieltjes,
/// Laplace and cosine kernels this is the familiar decomposition with
/// `(1+z)^{-σ-k}`, `e^{-z}` and `0F1(; k+½; -z)` factors.
pub fn decomposition_check(spec: &RegFunctionalSpec, kernel: &KernelSpec, n: usize) -> Result<DecompositionReport> {
    if !spec.params.is_real() {
        return Err(Error::EtaUndefined);
    }
    let spec = spec.with_n(n)?;
    let ghat = spec.ghat();
    let eta = origin_sign_info(&ghat)?.eta()?;
    let ev = GHatEvaluator::new(&ghat);
    let s_eta = sign(eta as usize);
    let mut min_density = f64::INFINITY;
    for i in 1..=DENSITY_GRID {
        let t = i as f64 / (DENSITY_GRID + 1) as f64;
        let v = s_eta * ev.eval(t)?.value.re;
        if v < -DENSITY_SLACK {
            return Err(Error::PositivityViolation { t, value: v });
        }
        min_density = min_density.min(v);
    }

    let (a, b) = (spec.params.a(), spec.params.b());
    let (c, d) = kernel.parameters();
    let z = kernel.z;
    let lhs = augmented_series(&spec.params, kernel)?.value * rgamma_vec(b);

    let mut finite = Accumulator::new();
    let mut coef = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        if k > 0 {
            let km = (k - 1) as f64;
            coef *= z * c.iter().map(|&x| x + km).product::<Complex64>()
                / (d.iter().map(|&x| x + km).product::<Complex64>() * k as f64);
        }
        if k == n {
            break;
        }
        let f = hyp_unit_terminating(k, a, b)?.value * rgamma_vec(b);
        finite.add(coef * kernel.shifted_value(k, z)? * f);
    }
    // coef is now z^n (c)_n/((d)_n n!); the measure term carries no 1/n!
    let weight = coef * crate::gamma::factorial(n);
    let integral = if weight == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        tanh_sinh_fallible(
            |t, tc| Ok(kernel.shifted_value(n, z * t)? * ev.eval_split(t, tc)?.value),
            &QuadOptions::default(),
        )?
        .value
    };
    let measure_term = weight * integral;
    let residual = (lhs - finite.value() - measure_term).norm();
    Ok(DecompositionReport { residual, lhs, finite_sum: finite.value(), measure_term, eta, min_density, grid: DENSITY_GRID })
}

/// `∫_0^1 G^{p,0}_{p,p}(u² | b-½; a-½) (1-u)^k du`, split into its even and
/// odd moment parts.
fn gb1_bracket(a: &[Complex64], b: &[Complex64], k: usize) -> Result<Complex64> {
    let half = Complex64::new(0.5, 0.0);
    let kf = k as f64;
    let mut upper = vec![Complex64::new(-kf / 2.0, 0.0), Complex64::new(-kf / 2.0 + 0.5, 0.0)];
    upper.extend_from_slice(a);
    let mut lower = vec![half];
    lower.extend_from_slice(b);
    let even = gamma_vec(a)? * rgamma_vec(b) / 2.0 * hyp(&upper, &lower, Complex64::new(1.0, 0.0))?.value;
    if k == 0 {
        return Ok(even);
    }
    let ah: Vec<Complex64> = a.iter().map(|&x| x + 0.5).collect();
    let bh: Vec<Complex64> = b.iter().map(|&x| x + 0.5).collect();
    let mut upper = vec![Complex64::new(-kf / 2.0 + 1.0, 0.0), Complex64::new(-kf / 2.0 + 0.5, 0.0)];
    upper.extend_from_slice(&ah);
    let mut lower = vec![Complex64::new(1.5, 0.0)];
    lower.extend_from_slice(&bh);
    let odd = kf * gamma_vec(&ah)? * rgamma_vec(&bh) / 2.0 * hyp(&upper, &lower, Complex64::new(1.0, 0.0))?.value;
    Ok(even - odd)
}

/// `⟨𝒢ᵇ¹(a, b), φ⟩`, the finite part of
/// `∫_0^1 G^{p,0}_{p,p}(u² | b-½; a-½) φ(u) du`.
///
/// The remainder term is computed as
/// `(-1)^n/(n-1)! ∫_0^1 φ^{(n)}(t) ∫_0^t G(u²)(t-u)^{n-1} du dt`
/// by nested quadrature. Requires `min Re a > 0`, which makes the inner
/// integral converge at the origin.
pub fn gb1_action(spec: &RegFunctionalSpec, phi: &dyn SmoothFunction) -> Result<EvalResult> {
    check_order(spec, phi)?;
    let (a, b, n) = (spec.params.a(), spec.params.b(), spec.n);
    if spec.params.a_min() <= 0.0 {
        return Err(Error::Admissibility {
            n,
            reason: "the squared-argument functional needs min Re a > 0".into(),
        });
    }
    let mut acc = Accumulator::new();
    for k in 0..n {
        acc.add(sign(k) * phi.eval(1.0, k)? * rfactorial(k) * gb1_bracket(a, b, k)?);
    }
    let finite_err = 64.0 * f64::EPSILON * acc.l1();

    // G(u² | b-½; a-½) = Γ(a+½) · [Ĝ_0/Γ(a+½)](u²) with shifted parameters
    let shifted = spec.params.shifted(Complex64::new(0.5, 0.0));
    let gamma_shift = gamma_vec(shifted.a())?;
    let ev = GHatEvaluator::new(&GHatSpec::new(shifted, 0));
    let density = |u: f64, uc: f64| -> Result<Complex64> {
        // nodes this close to the origin carry negligible weight
        if u * u < f64::MIN_POSITIVE {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // 1 - u² with the complement kept exact near u = 1
        Ok(gamma_shift * ev.eval_split(u * u, uc * (1.0 + u))?.value)
    };

    let outer_opts = QuadOptions::with_tol(1e-10);
    let inner_opts = QuadOptions::with_tol(1e-12);
    let (remainder, count) = if n == 0 {
        let r = tanh_sinh_fallible(|u, uc| Ok(density(u, uc)? * phi.eval(u, 0)?), &outer_opts)?;
        (r, r.count)
    } else {
        let inner_err = std::cell::Cell::new(0.0f64);
        let r = tanh_sinh_fallible(
            |t, tc| {
                // keeps u² representable on all but negligible inner nodes
                if t < 1e-100 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                // u = t s: ∫_0^t G(u²)(t-u)^{n-1} du = t^n ∫_0^1 G(t²s²)(1-s)^{n-1} ds
                let inner = tanh_sinh_fallible(
                    |s, sc| {
                        let u = t * s;
                        let uc = tc + t * sc;
                        Ok(density(u, uc)? * sc.powi(n as i32 - 1))
                    },
                    &inner_opts,
                )?;
                let scale = t.powi(n as i32);
                inner_err.set(inner_err.get().max(inner.abs_err * scale));
                Ok(inner.value * scale * phi.eval(t, n)?)
            },
            &outer_opts,
        )?;
        let w = sign(n) * rfactorial(n - 1);
        let mut scaled = r.scale(Complex64::new(w, 0.0));
        scaled.abs_err += inner_err.get() * rfactorial(n - 1);
        (scaled, r.count)
    };
    acc.add(remainder.value);
    Ok(EvalResult::new(acc.value(), remainder.abs_err + finite_err, count, Method::Quadrature))
}

/// `{p-1}F_p(â; b; -z²/4)` rebuilt from the cosine representation with `n`
/// derivatives moved onto `cos(z·)`; `a = (â, ½)`.
///
/// `n = 1` uses `cos z + z Γ(b) ∫_0^1 [Ĝ_1(t²)/Γ(a)] sin(z t) dt`; other
/// orders go through [`gb1_action`].
pub fn besselrep_series(a_hat: &[f64], b: &[f64], z: f64, n: usize) -> Result<EvalResult> {
    let mut a = a_hat.to_vec();
    a.push(0.5);
    let params = ParamVectors::real(&a, b)?;
    let spec = RegFunctionalSpec::new(params.clone(), Some(n))?;
    let gamma_b = gamma_vec(params.b())?;
    if n == 1 {
        let ev = GHatEvaluator::new(&spec.ghat());
        let r = tanh_sinh_fallible(
            |t, tc| {
                if t * t < f64::MIN_POSITIVE {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                Ok(ev.eval_split(t * t, tc * (1.0 + t))?.value * (z * t).sin())
            },
            &QuadOptions::default(),
        )?;
        let w = z * gamma_b;
        let value = Complex64::new(z.cos(), 0.0) + w * r.value;
        return Ok(EvalResult::new(value, w.norm() * r.abs_err + 4.0 * f64::EPSILON, r.count, Method::Quadrature));
    }
    let r = gb1_action(&spec, &Cosine::new(z))?;
    Ok(r.scale(2.0 * gamma_b * rgamma_vec(params.a())))
}

/// `{p-1}F_p(â; b; -z²/4)` by its power series.
pub fn bessel_type_direct(a_hat: &[f64], b: &[f64], z: f64) -> Result<EvalResult> {
    let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    hyp(&c(a_hat), &c(b), Complex64::new(-z * z / 4.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: &[f64], b: &[f64], n: Option<usize>) -> RegFunctionalSpec {
        RegFunctionalSpec::new(ParamVectors::real(a, b).unwrap(), n).unwrap()
    }

    #[test]
    fn auto_order() {
        assert_eq!(spec(&[1.0], &[2.0], None).n, 0);
        assert_eq!(spec(&[-0.5], &[1.0], None).n, 2);
        assert_eq!(spec(&[0.5, 1.0], &[0.25, 0.75], None).n, 2);
        assert!(RegFunctionalSpec::new(ParamVectors::real(&[-0.5], &[1.0]).unwrap(), Some(0)).is_err());
        assert!(RegFunctionalSpec::new(ParamVectors::real(&[1.0], &[-2.0]).unwrap(), None).is_err());
    }

    #[test]
    fn constant_function() {
        let one = Polynomial(vec![Complex64::new(1.0, 0.0)]);
        for s in [spec(&[1.0], &[2.0], Some(0)), spec(&[-0.5, 1.2], &[0.3, 2.0], None)] {
            let r = g1_action(&s, &one).unwrap();
            assert!((r.value - 1.0).norm() < 1e-10, "{:?} {}", s, r.value);
        }
    }

    #[test]
    fn polynomial_derivatives() {
        let p = Polynomial(vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)]);
        assert_eq!(p.eval(2.0, 0).unwrap().re, 17.0);
        assert_eq!(p.eval(2.0, 1).unwrap().re, 14.0);
        assert_eq!(p.eval(2.0, 2).unwrap().re, 6.0);
        assert_eq!(p.eval(2.0, 3).unwrap().re, 0.0);
        check_derivatives(&p).unwrap();
    }

    #[test]
    fn derivative_check_catches_mistakes() {
        assert!(FnTestFunction::new(|t, k| Complex64::new(if k == 0 { t * t } else { t }, 0.0), 3).is_err());
        assert!(FnTestFunction::new(|t, k| Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 } * (-t).exp(), 0.0), 5).is_ok());
        check_derivatives(&Cosine::new(3.0)).unwrap();
    }

    #[test]
    fn gb1_constant_density() {
        let s = spec(&[1.0, 0.5], &[1.0, 1.5], Some(0));
        for z in [1.0, 5.0] {
            let r = gb1_action(&s, &Cosine::new(z)).unwrap();
            assert!((r.value.re - z.sin() / z).abs() < 1e-9, "{}", r.value);
        }
    }
}
