//! Evaluation of `Ĝ_n(t) = G^{p,1}_{p+1,p+1}(t | n, b+n-1; a+n-1, 0)`.
//!
//! Everything is returned divided by `Γ(a)`, which makes the function entire
//! in `a`. Three representations are combined:
//!
//! * the sum of `p` hypergeometric series around the origin,
//! * the connection with `G̃_n = G^{p+1,0}_{p+1,p+1}` (Nørlund expansion
//!   around one) minus a polynomial,
//! * a terminating sum when `a` contains a nonpositive integer.
//!
//! When two components of `a` differ by an integer the origin series has
//! colliding poles; it is then evaluated at symmetrically split parameters
//! and Richardson-extrapolated to zero splitting.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::{gamma, pochhammer, rfactorial, rgamma, rgamma_vec};
use crate::hypergeom::hyp;
use crate::norlund::{q_polynomial, UnityExpansion, MAX_COEFFS};
use crate::types::{near_integer, nonpositive_integer, Accumulator, EvalResult, GHatSpec, Method, ParamVectors, INTEGER_TOL};

/// Parameter differences closer than this to an integer are treated as
/// colliding poles by the origin series.
pub const COINCIDENCE_BAND: f64 = 1e-4;
/// Base splitting used when poles collide.
pub const SPLIT_EPS: f64 = 1e-3;

const ORIGIN_FALLBACK_MIN_TC: f64 = 1e-3;

/// A `b_k` that cancels all poles of `a_i`: `b_k = a_i + shift`, `shift ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pairing {
    pub b_index: usize,
    pub a_index: usize,
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    /// The surviving (normal) components of `a`.
    pub a: Vec<Complex64>,
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
    pub pairs: Vec<Pairing>,
}

/// Deletes the components of `a` whose poles are all cancelled by some
/// `b_k = a_i + l`, `l ≤ 0`. Components are visited in ascending `Re a`
/// and each `b_k` cancels at most one `a_i`; when several `b` qualify the
/// one with the smallest index is used.
pub fn normalize_params(params: &ParamVectors) -> Normalization {
    let a = params.a();
    let b = params.b();
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[i].re.total_cmp(&a[j].re).then(i.cmp(&j)));
    let mut used = vec![false; b.len()];
    let mut pairs = Vec::new();
    for &i in &order {
        let hit = (0..b.len()).find(|&k| !used[k] && near_integer(b[k] - a[i]).is_some_and(|l| l <= 0));
        if let Some(k) = hit {
            used[k] = true;
            pairs.push(Pairing { b_index: k, a_index: i, shift: near_integer(b[k] - a[i]).unwrap_or(0) });
        }
    }
    let mut removed: Vec<usize> = pairs.iter().map(|p| p.a_index).collect();
    removed.sort_unstable();
    let kept: Vec<usize> = (0..a.len()).filter(|i| !removed.contains(i)).collect();
    Normalization { a: kept.iter().map(|&i| a[i]).collect(), kept, removed, pairs }
}

/// Distance of `a_i - a_k` to the nearest integer, minimized over pairs.
fn min_integer_gap(a: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..a.len() {
        for k in i + 1..a.len() {
            let d = a[i] - a[k];
            gap = gap.min(((d.re - d.re.round()).powi(2) + d.im * d.im).sqrt());
        }
    }
    gap
}

struct OriginTerm {
    coef: Complex64,
    exponent: Complex64,
    upper: Vec<Complex64>,
    lower: Vec<Complex64>,
}

/// The `p`-term origin representation at fixed parameters.
pub(crate) struct OriginSeries {
    terms: Vec<OriginTerm>,
}

impl OriginSeries {
    /// `normalized` selects `Ĝ_n/Γ(a)` (true) or `Ĝ_n` itself (false).
    pub(crate) fn new(a: &[Complex64], b: &[Complex64], n: usize, normalized: bool) -> Result<Self> {
        if min_integer_gap(a) < INTEGER_TOL {
            return Err(Error::Degenerate("components of a differ by an integer".into()));
        }
        let mut terms = Vec::with_capacity(a.len());
        for (k, &ak) in a.iter().enumerate() {
            let mut coef = b.iter().map(|&bj| rgamma(bj - ak)).product::<Complex64>();
            let mut upper = Vec::with_capacity(b.len() + 1);
            let mut lower = Vec::with_capacity(a.len());
            if n > 0 {
                upper.push(ak);
                lower.push(ak + n as f64);
            }
            upper.extend(b.iter().map(|&bj| 1.0 + ak - bj));
            for (i, &ai) in a.iter().enumerate() {
                if i == k {
                    continue;
                }
                coef *= gamma(ai - ak)?;
                if normalized {
                    coef *= rgamma(ai);
                }
                lower.push(1.0 + ak - ai);
            }
            coef *= if normalized { rgamma(ak + n as f64) } else { 1.0 / pochhammer(ak, n) };
            if !coef.re.is_finite() || !coef.im.is_finite() {
                return Err(Error::NonFinite("origin series coefficient".into()));
            }
            terms.push(OriginTerm { coef, exponent: ak + n as f64 - 1.0, upper, lower });
        }
        Ok(OriginSeries { terms })
    }

    pub(crate) fn eval(&self, t: f64) -> Result<EvalResult> {
        let lt = t.ln();
        let mut acc = Accumulator::new();
        let mut err = 0.0;
        let mut count = 0;
        for term in &self.terms {
            if term.coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let f = hyp(&term.upper, &term.lower, Complex64::new(t, 0.0))?;
            let scale = term.coef * (term.exponent * lt).exp();
            acc.add(scale * f.value);
            err += scale.norm() * f.abs_err;
            count += f.count;
        }
        err += 4.0 * f64::EPSILON * acc.l1();
        Ok(EvalResult::new(acc.value(), err, count, Method::OriginSeries))
    }
}

/// Origin series evaluated at split parameters and extrapolated to zero
/// splitting. Components of `a` whose differences are within
/// [`COINCIDENCE_BAND`] of an integer are grouped; each group of size `r`
/// gets offsets `s·(j - (r-1)/2)`, which leave `ψ` unchanged.
pub(crate) struct SplitSeries {
    levels: Vec<[OriginSeries; 2]>,
}

impl SplitSeries {
    pub(crate) fn new(a: &[Complex64], b: &[Complex64], n: usize, normalized: bool) -> Result<Self> {
        let offsets = split_offsets(a);
        let mut levels = Vec::with_capacity(3);
        for scale in [1.0, 2.0, 4.0] {
            let mut pair = Vec::with_capacity(2);
            for sign in [1.0, -1.0] {
                let s = sign * scale * SPLIT_EPS;
                let shifted: Vec<Complex64> = a.iter().zip(&offsets).map(|(&ai, &o)| ai + s * o).collect();
                pair.push(OriginSeries::new(&shifted, b, n, normalized)?);
            }
            let [p, m]: [OriginSeries; 2] = pair.try_into().map_err(|_| Error::Degenerate("split".into()))?;
            levels.push([p, m]);
        }
        Ok(SplitSeries { levels })
    }

    pub(crate) fn eval(&self, t: f64) -> Result<EvalResult> {
        let mut avg = [Complex64::new(0.0, 0.0); 3];
        let mut round = 0.0;
        let mut count = 0;
        for (l, [p, m]) in self.levels.iter().enumerate() {
            let (x, y) = (p.eval(t)?, m.eval(t)?);
            avg[l] = 0.5 * (x.value + y.value);
            if l == 0 {
                round = x.abs_err + y.abs_err;
            }
            count += x.count + y.count;
        }
        // the averages are even in the splitting: A(s) = f + c s² + d s⁴ + …
        let r1 = (4.0 * avg[0] - avg[1]) / 3.0;
        let r2 = (4.0 * avg[1] - avg[2]) / 3.0;
        let err = (r1 - r2).norm() / 15.0 + 2.0 * round;
        Ok(EvalResult::new(r1, err, count, Method::EpsilonSplit))
    }
}

fn split_offsets(a: &[Complex64]) -> Vec<f64> {
    let p = a.len();
    let mut group: Vec<usize> = (0..p).collect();
    fn root(g: &mut [usize], mut i: usize) -> usize {
        while g[i] != i {
            g[i] = g[g[i]];
            i = g[i];
        }
        i
    }
    for i in 0..p {
        for k in i + 1..p {
            let d = a[i] - a[k];
            if ((d.re - d.re.round()).powi(2) + d.im * d.im).sqrt() < COINCIDENCE_BAND {
                let (ri, rk) = (root(&mut group, i), root(&mut group, k));
                group[ri] = rk;
            }
        }
    }
    let mut offsets = vec![0.0; p];
    for r in 0..p {
        let mut members: Vec<usize> = (0..p).filter(|&i| root(&mut group, i) == r).collect();
        if members.len() < 2 {
            continue;
        }
        members.sort_by(|&i, &j| a[i].re.total_cmp(&a[j].re).then(i.cmp(&j)));
        let centre = (members.len() - 1) as f64 / 2.0;
        for (j, &i) in members.iter().enumerate() {
            offsets[i] = j as f64 - centre;
        }
    }
    offsets
}

/// Origin-side evaluation of `G_0` (unnormalized, `n = 0`).
pub(crate) fn origin_g0(params: &ParamVectors, t: f64) -> Result<EvalResult> {
    let (a, b) = (params.a(), params.b());
    if min_integer_gap(a) < COINCIDENCE_BAND {
        SplitSeries::new(a, b, 0, false)?.eval(t)
    } else {
        OriginSeries::new(a, b, 0, false)?.eval(t)
    }
}

/// `P(x) = Σ_{j<n} (-x)^{n-1-j}/(n-1-j)! · (a)_j/j! / Γ(b+j)`, the polynomial
/// separating `G̃_n/Γ(a)` from `(-1)^n Ĝ_n/Γ(a)`.
fn connection_polynomial(params: &ParamVectors, n: usize, x: f64) -> (Complex64, f64) {
    let mut acc = Accumulator::new();
    let mut aj = Complex64::new(1.0, 0.0);
    for j in 0..n {
        if j > 0 {
            aj *= params.a().iter().map(|&a| a + (j - 1) as f64).product::<Complex64>() / j as f64;
        }
        let shifted: Vec<Complex64> = params.b().iter().map(|&b| b + j as f64).collect();
        let e = n - 1 - j;
        acc.add((-x).powi(e as i32) * rfactorial(e) * aj * rgamma_vec(&shifted));
    }
    (acc.value(), 4.0 * f64::EPSILON * acc.l1())
}

/// Precomputed evaluator for one `Ĝ_n`: build it once when evaluating the
/// same function at many points (quadrature, grids).
pub struct GHatEvaluator {
    spec: GHatSpec,
    integer_a: bool,
    coincident: bool,
    rgamma_a: Complex64,
    origin: OnceLock<Result<OriginRoute>>,
    unity: OnceLock<Result<UnityExpansion>>,
}

enum OriginRoute {
    Plain(OriginSeries),
    Split(SplitSeries),
}

impl OriginRoute {
    fn eval(&self, t: f64) -> Result<EvalResult> {
        match self {
            OriginRoute::Plain(s) => s.eval(t),
            OriginRoute::Split(s) => s.eval(t),
        }
    }
}

/// Which representation to use; `Auto` picks by `t` and falls back on poor
/// error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Auto,
    Origin,
    Unity,
}

impl GHatEvaluator {
    pub fn new(spec: &GHatSpec) -> Self {
        let a = spec.params.a();
        GHatEvaluator {
            spec: spec.clone(),
            integer_a: a.iter().any(|&z| nonpositive_integer(z).is_some()),
            coincident: min_integer_gap(a) < COINCIDENCE_BAND,
            rgamma_a: rgamma_vec(a),
            origin: OnceLock::new(),
            unity: OnceLock::new(),
        }
    }

    pub fn spec(&self) -> &GHatSpec {
        &self.spec
    }

    /// `Ĝ_n(t)/Γ(a)` for `t ∈ (0, 1]`.
    pub fn eval(&self, t: f64) -> Result<EvalResult> {
        self.eval_split(t, 1.0 - t)
    }

    /// As [`eval`](Self::eval) with the complement `tc = 1 - t` supplied
    /// exactly by the caller.
    pub fn eval_split(&self, t: f64, tc: f64) -> Result<EvalResult> {
        self.eval_route(t, tc, Route::Auto)
    }

    pub fn eval_route(&self, t: f64, tc: f64, route: Route) -> Result<EvalResult> {
        if !(t > 0.0 && t <= 1.0) || !t.is_finite() {
            return Err(Error::Domain(format!("t = {t} outside (0, 1]")));
        }
        if self.integer_a {
            return Ok(self.terminating(t));
        }
        if tc == 0.0 {
            return match unity_limit(&self.spec)? {
                UnityLimit::Finite(v) => Ok(EvalResult::new(v, 16.0 * f64::EPSILON * v.norm().max(f64::MIN_POSITIVE), 1, Method::UnitySeries)),
                UnityLimit::PowerSingular { exponent, .. } => {
                    Err(Error::Domain(format!("Ĝ_n is singular at t = 1 (exponent {exponent})")))
                }
            };
        }
        match route {
            Route::Origin => self.origin_route(t),
            Route::Unity => self.unity_route(t, tc),
            Route::Auto => {
                let (first, second): (Result<EvalResult>, fn(&Self, f64, f64) -> Result<EvalResult>) = if t > 0.5 {
                    (self.unity_route(t, tc), |s, t, _| s.origin_route(t))
                } else {
                    (self.origin_route(t), |s, t, tc| s.unity_route(t, tc))
                };
                // the origin series needs O(1/(1-t)) terms; don't fall back on
                // it where it cannot converge within its term cap
                let hopeless = t > 0.5 && tc < ORIGIN_FALLBACK_MIN_TC;
                match first {
                    Ok(r) if r.abs_err <= 1e-14 * r.value.norm() || hopeless => Ok(r),
                    first => match (first, second(self, t, tc)) {
                        (Ok(x), Ok(y)) => Ok(if y.abs_err < x.abs_err { y } else { x }),
                        (Ok(x), Err(_)) => Ok(x),
                        (Err(_), Ok(y)) => Ok(y),
                        (Err(e), Err(_)) => Err(e),
                    },
                }
            }
        }
    }

    fn terminating(&self, t: f64) -> EvalResult {
        let n = self.spec.n;
        let (p, err) = connection_polynomial(&self.spec.params, n, t);
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        EvalResult::new(sign * p, err, n.max(1), Method::Terminating)
    }

    fn origin_route(&self, t: f64) -> Result<EvalResult> {
        let route = self.origin.get_or_init(|| {
            let (a, b, n) = (self.spec.params.a(), self.spec.params.b(), self.spec.n);
            if self.coincident {
                SplitSeries::new(a, b, n, true).map(OriginRoute::Split)
            } else {
                OriginSeries::new(a, b, n, true).map(OriginRoute::Plain)
            }
        });
        match route {
            Ok(r) => r.eval(t),
            Err(e) => Err(e.clone()),
        }
    }

    fn unity_route(&self, t: f64, tc: f64) -> Result<EvalResult> {
        let exp = self.unity.get_or_init(|| {
            let params = &self.spec.params;
            let n = self.spec.n as f64;
            let mut a: Vec<Complex64> = params.a().iter().map(|&z| z + n).collect();
            let mut b: Vec<Complex64> = params.b().iter().map(|&z| z + n).collect();
            a.push(Complex64::new(1.0, 0.0));
            b.push(Complex64::new(n + 1.0, 0.0));
            let tilde = ParamVectors::new(a, b)?;
            UnityExpansion::new(&tilde, tilde.p(), MAX_COEFFS)
        });
        let exp = match exp {
            Ok(e) => e,
            Err(e) => return Err(e.clone()),
        };
        let g = exp.eval(t, tc)?;
        let n = self.spec.n;
        let (p, perr) = connection_polynomial(&self.spec.params, n, t);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let gt = g.value * self.rgamma_a;
        let value = sign * (gt - p);
        let err = g.abs_err * self.rgamma_a.norm() + perr + 4.0 * f64::EPSILON * (gt.norm() + p.norm());
        Ok(EvalResult::new(value, err, g.count, Method::UnitySeries))
    }
}

/// `Ĝ_n(t)/Γ(a)` for `t ∈ (0, 1]`.
pub fn eval_ghat(spec: &GHatSpec, t: f64) -> Result<EvalResult> {
    GHatEvaluator::new(spec).eval(t)
}

/// Behaviour of `Ĝ_n(x)/Γ(a)` as `x → 1⁻`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnityLimit {
    Finite(Complex64),
    /// `coefficient · (1-x)^exponent`, `Re exponent ≤ 0`.
    PowerSingular { exponent: Complex64, coefficient: Complex64 },
}

/// Limit of `Ĝ_n(x)/Γ(a)` at `x = 1`, `n ≥ 1`.
pub fn unity_limit(spec: &GHatSpec) -> Result<UnityLimit> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Admissibility { n, reason: "the limit at one needs n ≥ 1".into() });
    }
    let params = &spec.params;
    let psi = params.psi();
    let integer_a = params.a().iter().any(|&z| nonpositive_integer(z).is_some());
    // Σ_j (-1)^j C(n-1, j) (a)_j / Γ(b+j) / (n-1)!, written without Γ(b)
    // so that poles of Γ(b) are harmless
    let finite = || {
        let mut acc = Accumulator::new();
        let mut aj = Complex64::new(1.0, 0.0);
        for j in 0..n {
            if j > 0 {
                aj *= params.a().iter().map(|&a| a + (j - 1) as f64).product::<Complex64>();
            }
            let shifted: Vec<Complex64> = params.b().iter().map(|&b| b + j as f64).collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc.add(sign * rfactorial(n - 1 - j) * rfactorial(j) * aj * rgamma_vec(&shifted));
        }
        acc.value()
    };
    if integer_a || psi.re + n as f64 - 1.0 > INTEGER_TOL {
        return Ok(UnityLimit::Finite(finite()));
    }
    if let Some(m) = params.psi_nonpositive_integer() {
        if m + 1 >= n {
            let q = q_polynomial(params)?;
            let mut corr = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                corr += sign * q.eval(Complex64::new(j as f64, 0.0)) * rfactorial(n - 1 - j) * rfactorial(j);
            }
            return Ok(UnityLimit::Finite(finite() - rgamma_vec(params.a()) * corr));
        }
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let exponent = psi + n as f64 - 1.0;
    Ok(UnityLimit::PowerSingular {
        exponent,
        coefficient: sign * rgamma_vec(params.a()) * rgamma(psi + n as f64),
    })
}

/// Leading behaviour of `Ĝ_n(x)/Γ(a)` as `x → 0⁺`:
/// `Σ_k α_k x^{e_k} [log(1/x)]^{log_power}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignInfo {
    pub leading_exponent: Complex64,
    pub log_power: usize,
    /// `(exponent, α_k)` for each leading component.
    pub leading_coeffs: Vec<(Complex64, Complex64)>,
    /// `(-1)^η α_1 > 0`; only defined for real parameters.
    pub eta: Option<u8>,
    /// `Some(m)` when `a` contains nonpositive integers and the terminating
    /// form governs the origin behaviour (exponent `n - 1 - m`).
    pub integer_case: Option<usize>,
}

impl SignInfo {
    /// `Σ_k α_k x^{e_k} log^{r-1}(1/x)`.
    pub fn leading_term(&self, x: f64) -> Complex64 {
        let lg = (1.0 / x).ln().powi(self.log_power as i32);
        self.leading_coeffs.iter().map(|&(e, al)| al * (e * x.ln()).exp() * lg).sum()
    }

    pub fn eta(&self) -> Result<u8> {
        self.eta.ok_or(Error::EtaUndefined)
    }
}

/// Origin asymptotics for real or complex parameters; `eta` is filled in
/// for real parameters only.
pub fn origin_asymptotics(spec: &GHatSpec) -> Result<SignInfo> {
    let params = &spec.params;
    let n = spec.n;
    let real = params.is_real();
    if params.a().iter().any(|&z| nonpositive_integer(z).is_some()) {
        // terminating form: the lowest power of x with a nonzero coefficient
        let mut aj = Complex64::new(1.0, 0.0);
        let mut best = None;
        for j in 0..n {
            if j > 0 {
                aj *= params.a().iter().map(|&a| a + (j - 1) as f64).product::<Complex64>();
            }
            let shifted: Vec<Complex64> = params.b().iter().map(|&b| b + j as f64).collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let coef = sign * aj * rgamma_vec(&shifted) * rfactorial(j) * rfactorial(n - 1 - j);
            if coef.norm() > 0.0 {
                best = Some((j, coef));
            }
        }
        let (m, coef) = best.ok_or_else(|| Error::Degenerate("Ĝ_n/Γ(a) vanishes identically".into()))?;
        let exponent = Complex64::new((n - 1 - m) as f64, 0.0);
        return Ok(SignInfo {
            leading_exponent: exponent,
            log_power: 0,
            leading_coeffs: vec![(exponent, coef)],
            eta: real.then(|| u8::from(coef.re < 0.0)),
            integer_case: Some(m),
        });
    }
    let norm = normalize_params(params);
    if norm.a.is_empty() {
        return Err(Error::Degenerate("every component of a is cancelled".into()));
    }
    let a_prime = norm.a.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let close = |x: Complex64, y: Complex64| (x - y).norm() < INTEGER_TOL;
    let candidates: Vec<Complex64> = norm.a.iter().copied().filter(|z| (z.re - a_prime).abs() < INTEGER_TOL).collect();
    let mult = |z: Complex64| norm.a.iter().filter(|&&w| close(w, z)).count();
    let r = candidates.iter().map(|&z| mult(z)).max().unwrap_or(1);
    let mut hats: Vec<Complex64> = Vec::new();
    for &z in &candidates {
        if mult(z) == r && !hats.iter().any(|&h| close(h, z)) {
            hats.push(z);
        }
    }
    let paired_b: Vec<usize> = norm.pairs.iter().map(|p| p.b_index).collect();
    let mut coeffs = Vec::with_capacity(hats.len());
    for &h in &hats {
        let mut alpha = rgamma_vec(params.a()) * rfactorial(r - 1) / pochhammer(h, n);
        for &ai in &norm.a {
            if !close(ai, h) {
                alpha *= gamma(ai - h)?;
            }
        }
        for (k, &bk) in params.b().iter().enumerate() {
            if !paired_b.contains(&k) {
                alpha *= rgamma(bk - h);
            }
        }
        // a cancelled pair contributes Γ(a_i+n-1+s)/Γ(b_k+n-1+s) = (b_k - â)_{-l} at the pole
        for pr in &norm.pairs {
            alpha *= pochhammer(params.b()[pr.b_index] - h, (-pr.shift) as usize);
        }
        coeffs.push((h + n as f64 - 1.0, alpha));
    }
    let eta = if real {
        let a1 = coeffs[0].1;
        if a1.re == 0.0 {
            return Err(Error::Degenerate("leading coefficient vanishes".into()));
        }
        Some(u8::from(a1.re < 0.0))
    } else {
        None
    };
    Ok(SignInfo {
        leading_exponent: coeffs[0].0,
        log_power: r - 1,
        leading_coeffs: coeffs,
        eta,
        integer_case: None,
    })
}

/// Origin asymptotics with the parity `η`; real parameters only.
pub fn origin_sign_info(spec: &GHatSpec) -> Result<SignInfo> {
    if !spec.params.is_real() {
        return Err(Error::EtaUndefined);
    }
    origin_asymptotics(spec)
}

/// `|G̃_n(x) - (-1)^n Ĝ_n(x) - (-x)^{n-1} Γ(a)/((n-1)! Γ(b)) F(1-n, a; b; 1/x)|`
/// with `G̃_n` from the Nørlund expansion and `Ĝ_n` from the origin series.
pub fn connection_residual(spec: &GHatSpec, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} outside (0, 1)")));
    }
    let ev = GHatEvaluator::new(spec);
    let origin = ev.eval_route(x, 1.0 - x, Route::Origin)?;
    let unity = ev.eval_route(x, 1.0 - x, Route::Unity)?;
    // the unity route is (-1)^n [G̃_n/Γ(a) - P(x)], so the difference of the
    // two routes is the residual of the identity divided by (-1)^n Γ(a)
    let diff = (origin.value - unity.value).norm();
    let ga = crate::gamma::gamma_vec(spec.params.a()).map(|g| g.norm()).unwrap_or(1.0);
    Ok(diff * if ga.is_finite() { ga } else { 1.0 })
}

/// Error scale of the two routes used by [`connection_residual`].
pub fn connection_tolerance(spec: &GHatSpec, x: f64) -> Result<f64> {
    let ev = GHatEvaluator::new(spec);
    let o = ev.eval_route(x, 1.0 - x, Route::Origin)?;
    let u = ev.eval_route(x, 1.0 - x, Route::Unity)?;
    let ga = crate::gamma::gamma_vec(spec.params.a()).map(|g| g.norm()).unwrap_or(1.0);
    Ok((o.abs_err + u.abs_err) * if ga.is_finite() { ga } else { 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: &[f64], b: &[f64], n: usize) -> GHatSpec {
        GHatSpec::new(ParamVectors::real(a, b).unwrap(), n)
    }

    #[test]
    fn closed_form_p1() {
        let s = spec(&[1.0], &[2.0], 2);
        for t in [0.1, 0.4, 0.6, 0.9, 1.0] {
            let r = eval_ghat(&s, t).unwrap();
            assert!((r.value.re - t * t / 2.0).abs() < 1e-15, "t={t}: {}", r.value);
        }
    }

    #[test]
    fn terminating_example() {
        let r = eval_ghat(&spec(&[-1.0], &[1.0], 3), 0.5).unwrap();
        assert!((r.value.re - 0.625).abs() < 1e-15);
        assert_eq!(r.method, Method::Terminating);
    }

    #[test]
    fn normalization_examples() {
        let n = normalize_params(&ParamVectors::real(&[0.5, 1.0], &[1.0, 1.5]).unwrap());
        assert_eq!(n.removed, vec![1]);
        let n = normalize_params(&ParamVectors::real(&[0.5, 1.0], &[1.5, 2.0]).unwrap());
        assert!(n.removed.is_empty());
        let n = normalize_params(&ParamVectors::real(&[1.0, 1.0], &[1.0, 3.0]).unwrap());
        assert_eq!(n.a.len(), 1);
    }

    #[test]
    fn sign_info_examples() {
        let s = origin_sign_info(&spec(&[1.0], &[2.0], 2)).unwrap();
        assert!((s.leading_coeffs[0].1.re - 0.5).abs() < 1e-15);
        assert_eq!(s.eta, Some(0));
        let s = origin_sign_info(&spec(&[0.5, 0.5], &[2.0, 3.0], 1)).unwrap();
        assert_eq!(s.log_power, 1);
        let s = origin_sign_info(&spec(&[-1.0], &[1.0], 3)).unwrap();
        assert_eq!(s.integer_case, Some(1));
        assert!((s.leading_exponent.re - 1.0).abs() < 1e-15);
        assert_eq!(s.eta, Some(0));
    }

    #[test]
    fn unity_limit_closed_form() {
        match unity_limit(&spec(&[1.0], &[2.0], 1)).unwrap() {
            UnityLimit::Finite(v) => assert!((v.re - 1.0).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        let s = spec(&[1.5, 2.5], &[1.2, 1.3], 1);
        assert!(matches!(unity_limit(&s).unwrap(), UnityLimit::PowerSingular { .. }));
    }

    #[test]
    fn connection_trivial() {
        let s = spec(&[1.0], &[2.0], 1);
        assert!(connection_residual(&s, 0.4).unwrap() < 1e-15);
    }
}
