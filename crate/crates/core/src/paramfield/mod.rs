//! Exact coefficient arithmetic: Gaussian rationals, polynomials and rational
//! functions in the formal parameters λ and ν, and formal Gamma factors.

mod fastq;
mod gaussian;
mod poly;
mod scalar;

pub use gaussian::{fmt_q, parse_q, q, qi, GaussianRational, Q};
pub use poly::{AffineExp, ParamPoly, Substitution};
pub use scalar::{gamma_normalize, pochhammer, GammaToken, ParamScalar};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("unevaluated Gamma factors remain: {0:?}")]
    GammaResidual(Vec<String>),
    #[error("division by the zero rational function")]
    ZeroDenominator,
    #[error("cannot add scalars carrying different Gamma factors")]
    GammaMismatch,
    #[error("malformed number: {0:?}")]
    Parse(String),
}
