//! Independent closed forms for `p ≤ 2`, used as references by the
//! verification suites.
//!
//! Everything here is unnormalized: `g0_p2` is `G_0` itself and the
//! `g2133_*` functions return `G^{2,1}_{3,3}(t | n, b+n-1; a+n-1, 0)`, i.e.
//! `Γ(a)` times what [`crate::ghat::eval_ghat`] reports.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::{factorial, gamma, pochhammer, rfactorial, rgamma};
use crate::hypergeom::{hyp, hyp_unit_terminating};
use crate::types::{nonpositive_integer, Accumulator, EvalResult, Method, ParamVectors};

const C1: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn require_p2(params: &ParamVectors) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    if params.p() != 2 {
        return Err(Error::InvalidParams(format!("expected p = 2, got p = {}", params.p())));
    }
    let (a, b) = (params.a(), params.b());
    Ok((a[0], a[1], b[0], b[1]))
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("t = {t} outside (0, 1)")))
    }
}

/// `G_0(t)` for `p = 2` through the reduced `₂F₁` form
/// `t^{a₂-1}(1-t)^{ψ-1}/Γ(ψ) ₂F₁(b₁-a₁, b₂-a₁; ψ; 1-t)`, with the
/// `ψ = -m` variant when the excess is a nonpositive integer.
pub fn g0_p2(params: &ParamVectors, t: f64) -> Result<EvalResult> {
    check_t(t)?;
    let (a1, a2, b1, b2) = require_p2(params)?;
    let tc = c(1.0 - t);
    let lead = (c(t.ln()) * (a2 - 1.0)).exp();
    match params.psi_nonpositive_integer() {
        None => {
            let psi = params.psi();
            let f = hyp(&[b1 - a1, b2 - a1], &[psi], tc)?;
            let pre = lead * (c(tc.re.ln()) * (psi - 1.0)).exp() * rgamma(psi);
            Ok(f.scale(pre))
        }
        Some(m) => {
            let m1 = (m + 1) as f64;
            let f = hyp(&[b1 - a1 + m1, b2 - a1 + m1], &[c(m1 + 1.0)], tc)?;
            let pre = lead * pochhammer(b1 - a1, m + 1) * pochhammer(b2 - a1, m + 1) * rfactorial(m + 1);
            Ok(f.scale(pre))
        }
    }
}

fn finish(acc: &Accumulator, count: usize, tail: f64, method: Method) -> EvalResult {
    EvalResult::new(acc.value(), tail + 16.0 * f64::EPSILON * acc.l1(), count, method)
}

/// Termwise fractional integration of the reduced form:
/// `t^{a₂-1+n}/(Γ(ψ)(a₂)_n) Σ_k (b₁-a₁)_k(b₂-a₁)_k/((ψ)_k k!) ₂F₁(a₂, 1-ψ-k; a₂+n; t)`.
///
/// Terms decay like `k^{-a₁-1}`, so this is only practical for `Re a₁`
/// comfortably above zero. The `₂F₁` values are generated by the
/// contiguous relation in the second parameter, which is stable in the
/// direction of decreasing parameter.
pub fn g2133_fractional(params: &ParamVectors, n: usize, t: f64, max_terms: usize) -> Result<EvalResult> {
    check_t(t)?;
    let (a1, a2, b1, b2) = require_p2(params)?;
    let psi = params.psi();
    if nonpositive_integer(psi).is_some() {
        return Err(Error::InvalidParams("ψ must not be a nonpositive integer".into()));
    }
    if a1.re <= 0.0 {
        return Err(Error::InvalidParams("the series needs Re a₁ > 0".into()));
    }
    let cc = a2 + n as f64;
    let z = c(t);
    // F(β) with β = 1-ψ-k; (c-β)F(β-1) + (2β-c+(a-β)z)F(β) + β(z-1)F(β+1) = 0
    let mut f_prev = hyp(&[a2, 1.0 - psi + 1.0], &[cc], z)?.value;
    let mut f_cur = hyp(&[a2, 1.0 - psi], &[cc], z)?.value;
    let mut acc = Accumulator::new();
    let mut coef = rgamma(psi);
    let mut last = f64::INFINITY;
    let mut k = 0;
    while k < max_terms {
        let term = coef * f_cur;
        acc.add(term);
        last = term.norm();
        let kf = k as f64;
        coef *= (b1 - a1 + kf) * (b2 - a1 + kf) / ((psi + kf) * (kf + 1.0));
        let beta = 1.0 - psi - kf;
        let f_next = -((2.0 * beta - cc + (a2 - beta) * z) * f_cur + beta * (z - 1.0) * f_prev) / (cc - beta);
        f_prev = f_cur;
        f_cur = f_next;
        k += 1;
        if coef.norm() == 0.0 {
            last = 0.0;
            break;
        }
        if last * k as f64 / a1.re <= 1e-15 * acc.value().norm() {
            break;
        }
    }
    // algebraic tail Σ_{j>K} C j^{-a₁-1} ≈ last·K/a₁
    let tail = if last == 0.0 { 0.0 } else { last * k as f64 / a1.re };
    let pre = (c(t.ln()) * (a2 - 1.0 + n as f64)).exp() / pochhammer(a2, n);
    Ok(finish(&acc, k, tail, Method::ClosedForm).scale(pre))
}

/// The rearranged form with an inner `₃F₂` in `1-t`:
/// `t^{a₂-1+n}(1-t)^{ψ+n-1}/(Γ(ψ)(a₂)_n) Σ_k (n)_k(a₂+ψ+n-1)_k/((a₂+n)_k k!) t^k
///  ₃F₂(b₁-a₁, b₂-a₁, a₂+ψ+n+k-1; ψ, a₂+ψ+n-1; 1-t)`.
///
/// The inner function grows like `t^{-k}`, so each inner series is summed
/// with the outer weight folded into its first term; the outer terms then
/// decay like `k^{-a₁-1}`, as for [`g2133_fractional`].
pub fn g2133_euler(params: &ParamVectors, n: usize, t: f64, max_terms: usize) -> Result<EvalResult> {
    check_t(t)?;
    let (a1, a2, b1, b2) = require_p2(params)?;
    let psi = params.psi();
    if nonpositive_integer(psi).is_some() {
        return Err(Error::InvalidParams("ψ must not be a nonpositive integer".into()));
    }
    if a1.re <= 0.0 {
        return Err(Error::InvalidParams("the series needs Re a₁ > 0".into()));
    }
    let nf = n as f64;
    let e = a2 + psi + nf - 1.0;
    let x = 1.0 - t;
    let mut acc = Accumulator::new();
    let mut coef = rgamma(psi);
    let mut k = 0;
    let mut last = f64::INFINITY;
    while k < max_terms {
        let upper = [b1 - a1, b2 - a1, e + k as f64];
        let lower = [psi, e];
        let mut inner = Accumulator::new();
        let mut term = coef;
        let mut j = 0usize;
        loop {
            inner.add(term);
            let jf = j as f64;
            let num: Complex64 = upper.iter().map(|&u| u + jf).product();
            let den: Complex64 = lower.iter().map(|&l| l + jf).product();
            term *= num * x / (den * (jf + 1.0));
            j += 1;
            let ratio_small = (jf + 1.0) > (k as f64 + e.norm()) * x / t + 10.0;
            if term.norm() == 0.0 || (ratio_small && term.norm() <= 1e-18 * inner.value().norm()) || j > 200_000 {
                break;
            }
        }
        acc.add(inner.value());
        last = inner.value().norm();
        k += 1;
        if last * k as f64 / a1.re <= 1e-13 * acc.value().norm() || !last.is_finite() {
            break;
        }
        let kf = (k - 1) as f64;
        coef *= (nf + kf) * (e + kf) * t / ((a2 + nf + kf) * (kf + 1.0));
        if coef.norm() < 1e-280 {
            last = 0.0;
            break;
        }
    }
    let tail = last * k as f64 / a1.re;
    let pre = (c(t.ln()) * (a2 - 1.0 + nf)).exp() * (c(x.ln()) * (psi + nf - 1.0)).exp() / pochhammer(a2, n);
    Ok(finish(&acc, k, tail, Method::ClosedForm).scale(pre))
}

/// The standard two-term `₃F₂` representation, valid for `a₁ - a₂ ∉ ℤ`.
pub fn g2133_standard(params: &ParamVectors, n: usize, t: f64) -> Result<EvalResult> {
    check_t(t)?;
    let (a1, a2, b1, b2) = require_p2(params)?;
    if crate::types::near_integer(a1 - a2).is_some() {
        return Err(Error::Degenerate("a₁ - a₂ is an integer".into()));
    }
    let nf = n as f64;
    let part = |x: Complex64, y: Complex64| -> Result<EvalResult> {
        let pre = gamma(y - x)? * (c(t.ln()) * (x + nf - 1.0)).exp() / pochhammer(x, n) * rgamma(b1 - x) * rgamma(b2 - x);
        Ok(hyp(&[x, x - b1 + 1.0, x - b2 + 1.0], &[x - y + 1.0, x + nf], c(t))?.scale(pre))
    };
    let u = part(a1, a2)?;
    let v = part(a2, a1)?;
    Ok(EvalResult::new(u.value + v.value, u.abs_err + v.abs_err, u.count + v.count, Method::ClosedForm))
}

/// The unity-side form: the Nørlund series of the `3 × 3` companion function
/// (with unit-argument terminating `₃F₂` coefficients) plus the polynomial
/// part `t^{n-1}Γ(a)/(Γ(b)(n-1)!) ₃F₂(1-n, a; b; 1/t)`.
pub fn g2133_unity(params: &ParamVectors, n: usize, t: f64, max_terms: usize) -> Result<EvalResult> {
    check_t(t)?;
    let (a1, a2, b1, b2) = require_p2(params)?;
    let psi = params.psi();
    let nf = n as f64;
    let x = 1.0 - t;
    let (u1, u2) = (psi - b1 + 1.0, psi - b2 + 1.0);
    let mut acc = Accumulator::new();
    let mut coef = rgamma(psi + nf);
    let mut xk = 1.0;
    let mut small = 0;
    let mut last = f64::INFINITY;
    let mut k = 0;
    while k < max_terms {
        let g = hyp_unit_terminating(k, &[1.0 - a1, 1.0 - a2], &[u1, u2])?.value;
        let term = coef * g * xk;
        acc.add(term);
        last = term.norm();
        if last <= f64::EPSILON * 1e-2 * acc.value().norm() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        let kf = k as f64;
        coef *= (u1 + kf) * (u2 + kf) / ((psi + nf + kf) * (kf + 1.0));
        xk *= x;
        k += 1;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let pre = sign * (c(x.ln()) * (psi + nf - 1.0)).exp();
    let series = finish(&acc, k, last, Method::ClosedForm).scale(pre);
    if n == 0 {
        return Ok(series);
    }
    let poly = hyp_unit_terminating_arg(n - 1, &[a1, a2], &[b1, b2], 1.0 / t)?;
    let ga = gamma(a1)? * gamma(a2)? * rgamma(b1) * rgamma(b2);
    let scale = c(t.powi(n as i32 - 1)) * ga / factorial(n - 1);
    Ok(EvalResult::new(
        series.value + scale * poly.value,
        series.abs_err + scale.norm() * poly.abs_err,
        series.count + poly.count,
        Method::ClosedForm,
    ))
}

/// `₃F₂(-m, a; b; x)` summed directly (it is a polynomial).
fn hyp_unit_terminating_arg(m: usize, a: &[Complex64], b: &[Complex64], x: f64) -> Result<EvalResult> {
    let mut acc = Accumulator::new();
    let mut term = C1;
    for j in 0..=m {
        acc.add(term);
        let jf = j as f64;
        let num: Complex64 = a.iter().map(|&z| z + jf).product();
        let den: Complex64 = b.iter().map(|&z| z + jf).product();
        if den.norm() == 0.0 {
            return Err(Error::Pole(den));
        }
        term *= -((m - j) as f64) * num * x / (den * (jf + 1.0));
    }
    Ok(finish(&acc, m + 1, 0.0, Method::ClosedForm))
}
