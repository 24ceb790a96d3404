use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at {0}")]
    Pole(Complex64),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("series diverges for nonzero argument ({upper} upper vs {lower} lower parameters)")]
    Divergent { upper: usize, lower: usize },
    #[error("no convergence after {terms} terms (partial magnitude {partial:e}, last term {last:e})")]
    NonConvergence { terms: usize, partial: f64, last: f64 },
    #[error("lower parameter {value} is a pole of the series")]
    LowerPole { value: Complex64 },
    #[error("argument {0} lies outside the convergence domain")]
    OutsideDomain(Complex64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameters are degenerate for this route: {0}")]
    Degenerate(String),
    #[error("order n = {n} is not admissible: {reason}")]
    Admissibility { n: usize, reason: String },
    #[error("psi = {0} is not a nonpositive integer")]
    NonIntegerPsi(Complex64),
    #[error("sign parity is undefined for complex parameters")]
    EtaUndefined,
    #[error("density is negative ({value:e}) at t = {t}")]
    PositivityViolation { t: f64, value: f64 },
    #[error("search exceeded n = {0}")]
    SearchCap(usize),
    #[error("hypotheses fail: {0}")]
    HypothesisFailed(String),
    #[error("z = {0} lies on the branch cut (-inf, -1]")]
    BranchCut(Complex64),
    #[error("test function derivative of order {order} disagrees with finite differences at t = {t}")]
    InconsistentDerivative { order: usize, t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
