pub mod closed_forms;
pub mod error;
mod exact;
pub mod gamma;
pub mod ghat;
pub mod hypergeom;
pub mod moments;
pub mod norlund;
pub mod positivity;
pub mod quad;
pub mod regularized;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use types::{EvalResult, GHatSpec, Method, ParamVectors};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/conventions.md")]
    struct Conventions;
    #[doc = include_str!("../../../book/src/evaluation.md")]
    struct Evaluation;
    #[doc = include_str!("../../../book/src/moments.md")]
    struct Moments;
    #[doc = include_str!("../../../book/src/regularized.md")]
    struct Regularized;
    #[doc = include_str!("../../../book/src/positivity.md")]
    struct Positivity;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
}
