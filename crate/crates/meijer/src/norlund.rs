//! Nørlund's expansion of the Meijer–Nørlund function around `t = 1`, its
//! coefficients `g_j`, the correction polynomial `q(s)` and the Mellin
//! transform of `G_0`.
//!
//! With `G_0(t) = G^{p,0}_{p,p}(t | b-1; a-1)` the expansion reads
//!
//! ```text
//! G_0(t) = t^{a_k - 1} Σ_j g_j(a_[k]; b) (1-t)^{ψ+j-1} / Γ(ψ+j)
//! ```
//!
//! and is used in this form for every `ψ`: when `ψ = -l` the reciprocal gamma
//! kills the first `l + 1` terms and what remains is the analytic
//! expansion valid for nonpositive integer excess.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::{factorial, gamma_vec, rgamma, rgamma_vec};
use crate::types::{Accumulator, EvalResult, Method, ParamVectors};

/// Hard cap on the number of expansion coefficients.
pub const MAX_COEFFS: usize = 200;
/// Coefficients computed when the caller has no preference.
pub const DEFAULT_COEFFS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct NorlundCoeffs {
    /// One-based pivot index `k`.
    pub pivot: usize,
    pub values: Vec<Complex64>,
    pub params: ParamVectors,
}

/// `g_0 .. g_J` for pivot `k` (one-based).
///
/// The nested lattice sum over `0 ≤ j_1 ≤ … ≤ j_{p-2} ≤ j` factorizes into
/// `p - 1` successive convolutions, which is how it is evaluated here.
pub fn norlund_coeffs(params: &ParamVectors, pivot: usize, j_max: usize) -> Result<NorlundCoeffs> {
    let scaled = scaled_coeffs(params, pivot, j_max)?;
    let mut values = Vec::with_capacity(scaled.len());
    let mut fact = 1.0;
    for (j, v) in scaled.into_iter().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        values.push(v * fact);
    }
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("Nørlund coefficient overflow".into()));
    }
    Ok(NorlundCoeffs { pivot, values, params: params.clone() })
}

/// `g_j / j!`, which stays of polynomial size where `g_j` itself overflows.
fn scaled_coeffs(params: &ParamVectors, pivot: usize, j_max: usize) -> Result<Vec<Complex64>> {
    let p = params.p();
    if pivot == 0 || pivot > p {
        return Err(Error::InvalidParams(format!("pivot {pivot} outside 1..={p}")));
    }
    if j_max > MAX_COEFFS {
        return Err(Error::InvalidParams(format!("J = {j_max} exceeds {MAX_COEFFS}")));
    }
    let mut a = params.a().to_vec();
    a.swap(pivot - 1, p - 1);
    let b = params.b();
    let zero = Complex64::new(0.0, 0.0);
    let mut w = vec![zero; j_max + 1];
    w[0] = Complex64::new(1.0, 0.0);
    let mut psi_m = zero;
    for m in 1..p {
        psi_m += b[m - 1] - a[m - 1];
        let beta = b[m] - a[m - 1];
        let mut next = vec![zero; j_max + 1];
        for i in 0..=j_max {
            if w[i] == zero {
                continue;
            }
            // i!/(i+d)! · (ψ_m + i)_d (β)_d / d!
            let mut f = w[i];
            next[i] += f;
            for d in 1..=j_max - i {
                let df = (d - 1) as f64;
                f *= (psi_m + i as f64 + df) * (beta + df) / (d as f64 * (i + d) as f64);
                next[i + d] += f;
            }
        }
        w = next;
    }
    if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("Nørlund coefficient overflow".into()));
    }
    Ok(w)
}

/// Precomputed expansion of `G_0` around one for a fixed pivot.
#[derive(Debug, Clone)]
pub struct UnityExpansion {
    coeffs: Vec<Complex64>,
    psi: Complex64,
    snapped: Option<usize>,
    exponent: Complex64,
}

impl UnityExpansion {
    pub fn new(params: &ParamVectors, pivot: usize, j_max: usize) -> Result<Self> {
        let scaled = scaled_coeffs(params, pivot, j_max.min(MAX_COEFFS))?;
        let snapped = params.psi_nonpositive_integer();
        let psi = match snapped {
            Some(l) => Complex64::new(-(l as f64), 0.0),
            None => params.psi(),
        };
        // c_j = g_j/Γ(ψ+j) = (g_j/j!) · j!/Γ(ψ+j), the ratio by recurrence
        let mut coeffs = vec![Complex64::new(0.0, 0.0); scaled.len()];
        let (start, mut ratio) = match snapped {
            Some(l) => (l + 1, Complex64::new(factorial(l + 1), 0.0)),
            None => (0, rgamma(psi)),
        };
        for j in start..scaled.len() {
            if j > start {
                ratio *= j as f64 / (psi + (j - 1) as f64);
            }
            coeffs[j] = scaled[j] * ratio;
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("Nørlund expansion overflow".into()));
        }
        Ok(UnityExpansion { coeffs, psi, snapped, exponent: params.a()[pivot - 1] - 1.0 })
    }

    /// `G_0(t)` with `tc = 1 - t` supplied by the caller for accuracy near one.
    pub fn eval(&self, t: f64, tc: f64) -> Result<EvalResult> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain(format!("t = {t} outside (0, 1]")));
        }
        let prefactor = Complex64::new(t, 0.0).powc(self.exponent);
        if tc == 0.0 {
            return self.at_one(prefactor);
        }
        let lw = tc.ln();
        let base = ((self.psi - 1.0) * lw).exp();
        let mut acc = Accumulator::new();
        let mut wj = 1.0;
        let mut small = 0usize;
        let first_live = self.snapped.map_or(0, |l| l + 1);
        let mut last = 0.0;
        for (j, &g) in self.coeffs.iter().enumerate() {
            let term = g * wj;
            acc.add(term);
            wj *= tc;
            last = term.norm();
            if j > first_live && last <= 1e-17 * acc.value().norm() {
                small += 1;
                if small >= 3 {
                    let s = acc.value();
                    let err = 10.0 * last + 8.0 * f64::EPSILON * acc.l1();
                    let scale = (prefactor * base).norm();
                    return Ok(EvalResult::new(prefactor * base * s, err * scale, j + 1, Method::UnitySeries));
                }
            } else {
                small = 0;
            }
        }
        // ran out of coefficients: report the last term as the truncation error
        let s = acc.value();
        let scale = (prefactor * base).norm();
        let tail = if tc < 1.0 { last * tc / (1.0 - tc) } else { f64::INFINITY };
        Ok(EvalResult::new(
            prefactor * base * s,
            (10.0 * last + tail + 8.0 * f64::EPSILON * acc.l1()) * scale,
            self.coeffs.len(),
            Method::UnitySeries,
        ))
    }

    fn at_one(&self, prefactor: Complex64) -> Result<EvalResult> {
        // only the term with exponent ψ + j - 1 = 0 survives; a negative
        // exponent with nonzero coefficient is a genuine singularity
        let mut value = Complex64::new(0.0, 0.0);
        for (j, &g) in self.coeffs.iter().enumerate() {
            let e = self.psi + j as f64 - 1.0;
            let coef = g;
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            if e.re < 0.0 || (e.re == 0.0 && e.im != 0.0) {
                return Err(Error::Domain("expansion is singular at t = 1".into()));
            }
            if e == Complex64::new(0.0, 0.0) {
                value += coef;
            }
            if e.re > 0.0 {
                break;
            }
        }
        Ok(EvalResult::new(prefactor * value, 4.0 * f64::EPSILON * value.norm(), 1, Method::UnitySeries))
    }
}

/// `G_0(t) = G^{p,0}_{p,p}(t | b-1; a-1)` for `0 < t < 1`.
///
/// `j_max` caps the number of expansion coefficients used on the unity side
/// (clamped to [`MAX_COEFFS`]).
pub fn eval_g0(params: &ParamVectors, t: f64, j_max: usize) -> Result<EvalResult> {
    eval_g0_split(params, t, 1.0 - t, j_max)
}

pub(crate) fn eval_g0_split(params: &ParamVectors, t: f64, tc: f64, j_max: usize) -> Result<EvalResult> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("t = {t} outside (0, 1)")));
    }
    let unity = || -> Result<EvalResult> {
        UnityExpansion::new(params, params.p(), j_max.max(DEFAULT_COEFFS).min(MAX_COEFFS))?.eval(t, tc)
    };
    let origin = || crate::ghat::origin_g0(params, t);
    let (first, second): (&dyn Fn() -> Result<EvalResult>, &dyn Fn() -> Result<EvalResult>) =
        if t > 0.5 { (&unity, &origin) } else { (&origin, &unity) };
    let primary = first();
    match &primary {
        Ok(r) if r.abs_err <= 1e-13 * r.value.norm().max(1e-300) => primary,
        _ => match (primary, second()) {
            (Ok(a), Ok(b)) => Ok(if b.abs_err < a.abs_err { b } else { a }),
            (Ok(a), Err(_)) => Ok(a),
            (Err(_), Ok(b)) => Ok(b),
            (Err(e), Err(_)) => Err(e),
        },
    }
}

/// The correction polynomial in monomial form, `q(s) = Σ c_i s^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct QPolynomial {
    pub coeffs: Vec<Complex64>,
}

impl QPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }
}

/// `q(s) = Σ_{j=0}^m g_{m-j}(a_[1]; b) (s + a_1 - j)_j` for `ψ = -m`.
pub fn q_polynomial(params: &ParamVectors) -> Result<QPolynomial> {
    q_polynomial_with_pivot(params, 1)
}

pub fn q_polynomial_with_pivot(params: &ParamVectors, pivot: usize) -> Result<QPolynomial> {
    let m = params.psi_nonpositive_integer().ok_or(Error::NonIntegerPsi(params.psi()))?;
    if m > MAX_COEFFS {
        return Err(Error::InvalidParams(format!("degree {m} exceeds {MAX_COEFFS}")));
    }
    let g = norlund_coeffs(params, pivot, m)?.values;
    let ak = params.a()[pivot - 1];
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m + 1];
    for j in 0..=m {
        // (s + a_k - j)_j expanded in powers of s
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        for i in 0..j {
            let shift = ak - j as f64 + i as f64;
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d] += c * shift;
                next[d + 1] += c;
            }
            poly = next;
        }
        for (d, &c) in poly.iter().enumerate() {
            coeffs[d] += g[m - j] * c;
        }
    }
    Ok(QPolynomial { coeffs })
}

/// `∫_0^1 x^{s-1} G_0(x) dx`: `Γ(a+s-1)/Γ(b+s-1)`, minus `q(s-1)` when
/// `ψ` is a nonpositive integer.
pub fn mellin_rhs(params: &ParamVectors, s: Complex64) -> Result<Complex64> {
    if let Some(a) = params.a().iter().find(|a| (s + *a - 1.0).re <= 0.0) {
        return Err(Error::Domain(format!("Re(s + a - 1) <= 0 for a = {a}")));
    }
    let sa: Vec<Complex64> = params.a().iter().map(|a| a + s - 1.0).collect();
    let sb: Vec<Complex64> = params.b().iter().map(|b| b + s - 1.0).collect();
    let ratio = gamma_vec(&sa)? * rgamma_vec(&sb);
    match params.psi_nonpositive_integer() {
        Some(_) => Ok(ratio - q_polynomial(params)?.eval(s - 1.0)),
        None if params.psi().re > 0.0 => Ok(ratio),
        None => Err(Error::Domain(format!("Mellin transform needs Re ψ > 0 or ψ ∈ -ℕ₀, got {}", params.psi()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::pochhammer as poch;
    use crate::hypergeom::hyp;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn p2_coefficients() {
        let params = ParamVectors::real(&[0.5, 1.0], &[1.5, 2.0]).unwrap();
        let g = norlund_coeffs(&params, 2, 5).unwrap().values;
        assert_eq!(g[0], c(1.0));
        assert!((g[1].re - 1.5).abs() < 1e-15);
        for j in 0..=5 {
            let want = poch(c(1.0), j) * poch(c(1.5), j) / crate::gamma::factorial(j);
            assert!((g[j] - want).norm() < 1e-13 * want.norm());
        }
    }

    #[test]
    fn p3_matches_closed_form() {
        let params = ParamVectors::real(&[0.35, 1.2, 2.05], &[0.9, 1.75, 2.6]).unwrap();
        let (a, b, psi) = (params.a(), params.b(), params.psi());
        let g = norlund_coeffs(&params, 3, 12).unwrap().values;
        for n in 0..=12 {
            let u1 = psi - b[0] + a[2];
            let u2 = psi - b[1] + a[2];
            let f = hyp(&[c(-(n as f64)), b[2] - a[0], b[2] - a[1]], &[u1, u2], c(1.0)).unwrap().value;
            let want = poch(u1, n) * poch(u2, n) / crate::gamma::factorial(n) * f;
            assert!((g[n] - want).norm() < 1e-12 * want.norm().max(1.0), "n={n}: {} vs {}", g[n], want);
        }
    }

    #[test]
    fn g0_references() {
        // 30-digit values from an independent Meijer-G evaluation
        let p2 = ParamVectors::real(&[0.7, 1.9], &[1.3, 2.8]).unwrap();
        let p3 = ParamVectors::real(&[0.35, 1.2, 2.05], &[0.9, 1.75, 2.6]).unwrap();
        let cases = [
            (&p2, 0.3, 0.960648981410846379005375064253),
            (&p2, 0.7, 0.609695962835799306729961681201),
            (&p3, 0.2, 1.92289040896989369543554210998),
            (&p3, 0.45, 1.02981854831278447955369804148),
            (&p3, 0.8, 0.423087745702523254382166603386),
        ];
        for (params, t, want) in cases {
            let r = eval_g0(params, t, DEFAULT_COEFFS).unwrap();
            assert!((r.value.re - want).abs() < 1e-12, "{params} t={t}: {} vs {want}", r.value.re);
        }
    }

    #[test]
    fn p1_constant() {
        let params = ParamVectors::real(&[1.0], &[2.0]).unwrap();
        for t in [0.1, 0.5, 0.9] {
            assert!((eval_g0(&params, t, 60).unwrap().value.re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn q_trivial_and_p1() {
        let q = q_polynomial(&ParamVectors::real(&[1.0, 2.0], &[1.5, 1.5]).unwrap()).unwrap();
        assert_eq!(q.coeffs, vec![c(1.0)]);
        let q = q_polynomial(&ParamVectors::real(&[2.0], &[1.0]).unwrap()).unwrap();
        assert_eq!(q.degree(), 1);
        assert!((q.eval(c(3.0)) - c(4.0)).norm() < 1e-15);
    }

    #[test]
    fn mellin_domain() {
        let p = ParamVectors::real(&[1.0], &[2.0]).unwrap();
        assert!((mellin_rhs(&p, c(2.0)).unwrap() - c(0.5)).norm() < 1e-15);
        assert!(mellin_rhs(&p, c(0.0)).is_err());
    }
}
