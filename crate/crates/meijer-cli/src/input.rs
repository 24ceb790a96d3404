//! Flag parsing: complex numbers, comma lists, params files, and the small
//! specification languages for test functions and kernels.

use std::path::Path;
use std::sync::Arc;

use meijer::moments::{KernelKind, KernelSpec};
use meijer::regularized::{Cosine, Exponential, KernelFunction, Polynomial, SmoothFunction};
use meijer::ParamVectors;
use num_complex::Complex64;
use serde::Deserialize;

/// A usage-level problem (bad flag syntax, missing input): exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// `re`, `imj`, or `re+imj` / `re-imj` (exponents such as `1e-3` allowed).
pub fn parse_complex(s: &str) -> Result<Complex64, UsageError> {
    let s = s.trim();
    let bad = || UsageError(format!("cannot parse '{s}' as a number (expected re or re+imj)"));
    let Some(body) = s.strip_suffix(['j', 'i']) else {
        return s.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the sign of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// A comma-separated list; the empty string is the empty list.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, UsageError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_complex).collect()
}

pub fn parse_real(s: &str) -> Result<f64, UsageError> {
    let z = parse_complex(s)?;
    if z.im != 0.0 {
        return usage(format!("'{s}' must be real"));
    }
    Ok(z.re)
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>, UsageError> {
    parse_complex_list(s)?
        .into_iter()
        .map(|z| if z.im == 0.0 { Ok(z.re) } else { usage(format!("'{s}' must be real")) })
        .collect()
}

/// `{"a": [[re, im], …], "b": [[re, im], …], "n": int}`; `n` is optional and
/// a bare number is accepted for a real entry.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub a: Vec<Entry>,
    pub b: Vec<Entry>,
    pub n: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(&self) -> Complex64 {
        match *self {
            Entry::Pair([re, im]) => Complex64::new(re, im),
            Entry::Real(x) => Complex64::new(x, 0.0),
        }
    }
}

pub fn read_params_file(path: &Path) -> Result<ParamsFile, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("bad params file {}: {e}", path.display())))
}

/// Parameters from flags, falling back to the params file for anything not
/// given on the command line.
pub struct ResolvedParams {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub n: Option<usize>,
}

pub fn resolve_params(
    a: Option<&str>,
    b: Option<&str>,
    n: Option<usize>,
    file: Option<&Path>,
) -> Result<ResolvedParams, UsageError> {
    let file = file.map(read_params_file).transpose()?;
    let from_file = |pick: fn(&ParamsFile) -> &Vec<Entry>| file.as_ref().map(|f| pick(f).iter().map(Entry::value).collect());
    let a = match a {
        Some(s) => parse_complex_list(s)?,
        None => from_file(|f| &f.a).ok_or_else(|| UsageError("missing --a (or --params-file)".into()))?,
    };
    let b = match b {
        Some(s) => parse_complex_list(s)?,
        None => from_file(|f| &f.b).ok_or_else(|| UsageError("missing --b (or --params-file)".into()))?,
    };
    Ok(ResolvedParams { a, b, n: n.or(file.and_then(|f| f.n)) })
}

impl ResolvedParams {
    pub fn vectors(&self) -> meijer::Result<ParamVectors> {
        ParamVectors::new(self.a.clone(), self.b.clone())
    }

    pub fn real(&self) -> Result<(Vec<f64>, Vec<f64>), UsageError> {
        let re = |v: &[Complex64]| -> Result<Vec<f64>, UsageError> {
            v.iter().map(|z| if z.im == 0.0 { Ok(z.re) } else { usage("real parameters required") }).collect()
        };
        Ok((re(&self.a)?, re(&self.b)?))
    }

    pub fn require_n(&self) -> Result<usize, UsageError> {
        self.n.ok_or_else(|| UsageError("missing --n (or \"n\" in the params file)".into()))
    }
}

fn split_spec(s: &str) -> (&str, &str) {
    s.split_once(':').unwrap_or((s, ""))
}

/// `laplace:Z`, `stieltjes:SIGMA,Z`, `bessel:NU,Z` or `hyp:C1,C2/D1,D2/Z`
/// for the general `uF_s(c; d; -z t)`.
pub fn parse_kernel(s: &str) -> Result<KernelSpec, UsageError> {
    let (name, rest) = split_spec(s);
    let kernel = match name {
        "laplace" => KernelSpec::new(KernelKind::Laplace, parse_complex(rest)?),
        "stieltjes" | "bessel" => {
            let v = parse_complex_list(rest)?;
            let [first, z] = v[..] else {
                return usage(format!("kernel '{name}' takes two values, got '{rest}'"));
            };
            let kind = if name == "stieltjes" { KernelKind::Stieltjes { sigma: first } } else { KernelKind::Bessel { nu: first } };
            KernelSpec::new(kind, z)
        }
        "hyp" => {
            let parts: Vec<&str> = rest.split('/').collect();
            let [c, d, z] = parts[..] else {
                return usage("kernel 'hyp' expects C1,C2/D1,D2/Z");
            };
            KernelSpec::new(
                KernelKind::GeneralHypergeom { c: parse_complex_list(c)?, d: parse_complex_list(d)? },
                parse_complex(z)?,
            )
        }
        _ => return usage(format!("unknown kernel '{name}' (laplace, stieltjes, bessel, hyp)")),
    };
    kernel.map_err(|e| UsageError(format!("bad kernel '{s}': {e}")))
}

/// `poly:C0,C1,…`, `exp:C` (e^{c t}), `cos:Z` (cos z t) or any kernel
/// specification accepted by [`parse_kernel`].
pub fn parse_test_function(s: &str) -> Result<Arc<dyn SmoothFunction>, UsageError> {
    let (name, rest) = split_spec(s);
    Ok(match name {
        "poly" => Arc::new(Polynomial(parse_complex_list(rest)?)),
        "exp" => Arc::new(Exponential(parse_complex(rest)?)),
        "cos" => Arc::new(Cosine::new(parse_real(rest)?)),
        _ => Arc::new(KernelFunction(parse_kernel(s)?)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("2.5").unwrap(), Complex64::new(2.5, 0.0));
        assert_eq!(parse_complex("1+2j").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("-1e-3-4.5j").unwrap(), Complex64::new(-1e-3, -4.5));
        assert_eq!(parse_complex("3j").unwrap(), Complex64::new(0.0, 3.0));
        assert_eq!(parse_complex("1e+2+1e-2j").unwrap(), Complex64::new(100.0, 0.01));
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("1+").is_err());
    }

    #[test]
    fn lists_and_specs() {
        assert_eq!(parse_real_list("1, -0.5").unwrap(), vec![1.0, -0.5]);
        assert!(parse_real_list("1+1j").is_err());
        assert!(parse_complex_list("").unwrap().is_empty());
        assert!(parse_kernel("stieltjes:0.5,1").is_ok());
        assert!(parse_kernel("hyp:1/2/0.5").is_ok());
        assert!(parse_kernel("bessel:1").is_err());
        assert!(parse_test_function("poly:1,0,1").is_ok());
    }

    #[test]
    fn params_file_schema() {
        let f: ParamsFile = serde_json::from_str(r#"{"a": [[1, 0], 0.5], "b": [[2, 0.5], [1.5, 0]], "n": 2}"#).unwrap();
        assert_eq!(f.a[1].value(), Complex64::new(0.5, 0.0));
        assert_eq!(f.b[0].value(), Complex64::new(2.0, 0.5));
        assert!(serde_json::from_str::<ParamsFile>(r#"{"a": [], "b": [], "m": 1}"#).is_err());
    }
}
