//! Exact Gaussian-dyadic arithmetic for hypergeometric series that cancel
//! too badly for binary64.
//!
//! Every finite `f64` is a dyadic rational, and so is every partial sum of a
//! series whose parameters and argument are `f64`. Keeping numerators and a
//! common denominator as big integers makes the only rounding the final
//! conversion back to floating point.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub(crate) struct Dyadic {
    re: BigInt,
    im: BigInt,
    exp: i64,
}

fn split_f64(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    };
    (BigInt::from(sign) * BigInt::from(mant), exp)
}

fn bit_len(x: &BigInt) -> i64 {
    x.bits() as i64
}

impl Dyadic {
    pub(crate) fn zero() -> Self {
        Dyadic { re: BigInt::zero(), im: BigInt::zero(), exp: 0 }
    }

    pub(crate) fn one() -> Self {
        Dyadic { re: BigInt::from(1), im: BigInt::zero(), exp: 0 }
    }

    pub(crate) fn from_c64(z: Complex64) -> Self {
        let (mr, er) = split_f64(z.re);
        let (mi, ei) = split_f64(z.im);
        let (re, im, exp) = if mr.is_zero() {
            (mr, mi, ei)
        } else if mi.is_zero() {
            (mr, mi, er)
        } else if er <= ei {
            (mr, mi << (ei - er) as usize, er)
        } else {
            (mr << (er - ei) as usize, mi, ei)
        };
        Dyadic { re, im, exp }.normalized()
    }

    pub(crate) fn from_int(k: i64) -> Self {
        Dyadic { re: BigInt::from(k), im: BigInt::zero(), exp: 0 }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = match (self.re.trailing_zeros(), self.im.trailing_zeros()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => 0,
        };
        if tz > 0 {
            self.re >>= tz as usize;
            self.im >>= tz as usize;
            self.exp += tz as i64;
        }
        self
    }

    pub(crate) fn mul(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return Dyadic::zero();
        }
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Dyadic { re, im, exp: self.exp + o.exp }.normalized()
    }

    pub(crate) fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= o.exp { (self, o) } else { (o, self) };
        let shift = (hi.exp - lo.exp) as usize;
        let re = &lo.re + (&hi.re << shift);
        let im = &lo.im + (&hi.im << shift);
        Dyadic { re, im, exp: lo.exp }.normalized()
    }

    fn conj(&self) -> Dyadic {
        Dyadic { re: self.re.clone(), im: -&self.im, exp: self.exp }
    }

    /// Binary magnitude: `|z| ≈ 2^magnitude()` to within a factor of two.
    pub(crate) fn magnitude(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN / 4;
        }
        bit_len(&self.re).max(bit_len(&self.im)) + self.exp
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

// num / den for a real dyadic pair with positive den, rounded to f64.
fn real_ratio(num: &BigInt, num_exp: i64, den: &BigInt, den_exp: i64) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = (bit_len(den) - bit_len(num) + 66).max(0);
    let q = (num << shift as usize) / den;
    let (sign, mag) = (q.sign(), q.magnitude().clone());
    // keep 64 leading bits so the conversion below is a single rounding
    let extra = (mag.bits() as i64 - 64).max(0);
    let top = (&mag >> extra as usize).to_f64().unwrap_or(f64::INFINITY);
    let v = ldexp(top, extra + num_exp - den_exp - shift);
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

/// `a / d` rounded to binary64.
pub(crate) fn quotient(a: &Dyadic, d: &Dyadic) -> Complex64 {
    let num = a.mul(&d.conj());
    let den = &d.re * &d.re + &d.im * &d.im;
    let den_exp = 2 * d.exp;
    Complex64::new(
        real_ratio(&num.re, num.exp, &den, den_exp),
        real_ratio(&num.im, num.exp, &den, den_exp),
    )
}

/// Outcome of an exact summation: the rounded value, the magnitude of the
/// first omitted term relative to the value, and the number of terms.
pub(crate) struct ExactSum {
    pub value: Complex64,
    pub last_term: f64,
    pub tail_ratio: f64,
    pub terms: usize,
}

/// Sums `Σ_k (upper)_k / (lower)_k z^k / k!` exactly.
///
/// For a terminating series `stop_at` is the last index with a nonzero term;
/// otherwise summation continues until three consecutive terms fall below
/// `2^-60` of the partial sum, with `min_terms` as a floor and `max_terms` as
/// a hard cap (`None` when the cap is hit).
pub(crate) fn exact_series(
    upper: &[Complex64],
    lower: &[Complex64],
    z: Complex64,
    stop_at: Option<usize>,
    min_terms: usize,
    max_terms: usize,
) -> Option<ExactSum> {
    let up: Vec<Dyadic> = upper.iter().map(|&u| Dyadic::from_c64(u)).collect();
    let lo: Vec<Dyadic> = lower.iter().map(|&l| Dyadic::from_c64(l)).collect();
    let zd = Dyadic::from_c64(z);
    // S_k = acc / den, t_k = num / den
    let mut acc = Dyadic::one();
    let mut num = Dyadic::one();
    let mut den = Dyadic::one();
    let mut small = 0usize;
    let mut k = 0usize;
    loop {
        if let Some(n) = stop_at {
            if k >= n {
                return Some(ExactSum {
                    value: quotient(&acc, &den),
                    last_term: 0.0,
                    tail_ratio: 0.0,
                    terms: k + 1,
                });
            }
        } else if k >= max_terms {
            return None;
        }
        let kd = Dyadic::from_int(k as i64);
        let mut step_num = zd.clone();
        for u in &up {
            step_num = step_num.mul(&u.add(&kd));
        }
        let mut step_den = Dyadic::from_int(k as i64 + 1);
        for l in &lo {
            step_den = step_den.mul(&l.add(&kd));
        }
        if step_den.is_zero() {
            return None;
        }
        num = num.mul(&step_num);
        acc = acc.mul(&step_den).add(&num);
        den = den.mul(&step_den);
        k += 1;
        if stop_at.is_none() {
            if num.is_zero() {
                return Some(ExactSum {
                    value: quotient(&acc, &den),
                    last_term: 0.0,
                    tail_ratio: 0.0,
                    terms: k + 1,
                });
            }
            if num.magnitude() < acc.magnitude() - 60 {
                small += 1;
            } else {
                small = 0;
            }
            let ratio = quotient(&step_num, &step_den).norm();
            if small >= 3 && k >= min_terms && ratio < 1.0 {
                let value = quotient(&acc, &den);
                let term = quotient(&num, &den).norm();
                return Some(ExactSum {
                    value,
                    last_term: term * ratio,
                    tail_ratio: ratio,
                    terms: k + 1,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn roundtrip() {
        for &x in &[1.0, -0.1, 3.75e-300, 1e300, 0.3] {
            let d = Dyadic::from_c64(Complex64::new(x, -x / 3.0));
            let back = quotient(&d, &Dyadic::one());
            assert_eq!(back, Complex64::new(x, -x / 3.0));
        }
    }

    #[test]
    fn chu_vandermonde_large_n() {
        // 2F1(-60, 0.3; 1.7; 1) = (1.4)_60 / (1.7)_60
        let s = exact_series(&[c(-60.0), c(0.3)], &[c(1.7)], c(1.0), Some(60), 0, 0).unwrap();
        let want = 0.298285023397832648557356735282;
        assert!((s.value.re - want).abs() < 1e-15 * want);
    }

    #[test]
    fn exponential_with_cancellation() {
        // 0F0(;;-30) = e^-30
        let s = exact_series(&[], &[], c(-30.0), None, 0, 10_000).unwrap();
        let want = (-30f64).exp();
        assert!((s.value.re - want).abs() < 1e-14 * want);
    }
}
