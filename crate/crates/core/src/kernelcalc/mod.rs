//! Symbolic distribution kernels on `ℝ^n` and the identities relating the
//! scalar and spinor families of symmetry breaking kernels.
//!
//! A [`KernelExpr`] is a finite sum of terms, each a matrix entry of the value
//! space times a coefficient in λ, ν (with formal Gamma factors) times one of
//! four shapes:
//!
//! | shape | meaning |
//! |---|---|
//! | `Smooth` | `x^β · sgn(x_n)^p |x_n|^a · r^b` with `r = |x|²` |
//! | `Layer` | `x^β · r^b · δ^{(m)}(x_n)` |
//! | `Boundary` | `x^β · |x'|^c · δ^{(m)}(x_n)` |
//! | `Point` | `∂^α δ(x)` |
//!
//! Coordinate and Clifford multiplication act on the normal forms directly,
//! so identities between families reduce to comparisons of finite term maps.

mod expr;
mod families;
mod identities;
mod symmetry;

use serde::Serialize;
use thiserror::Error;

pub use expr::{unit_multi, KernelExpr, KernelMeta, KernelTerm, Multi, Shape, TermKey, ValueKind, KMAX};
pub use families::{
    a_normalization, expected_degree, family_degree, family_line, family_point, laplacian_power, make_family,
    make_family_form, mult_xn, mult_zeta, project, residue_constant, rho, rho_h, slash_minus_factor,
    xn_minus_factor, DisplayForm, FamilyId, FamilyParams, Line, ParamKind, ALL_FAMILIES,
};
pub use identities::{check_identity, check_projection_support, IdentityId, IdentityReport, SubCheck};
pub use symmetry::{symmetry_checks, SymmetryReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter arithmetic failed: {0}")]
    Param(String),
    #[error("coefficients with incompatible Gamma factors: {0}")]
    GammaMismatch(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("term {term} fails the {generator} test")]
    SymmetryFailure { term: String, generator: String },
}

/// Support of a kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Support {
    Empty,
    Origin,
    Hyperplane,
    Full,
}

impl std::fmt::Display for Support {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Support::Empty => "empty",
            Support::Origin => "{0}",
            Support::Hyperplane => "{x_n = 0}",
            Support::Full => "R^n",
        };
        f.write_str(s)
    }
}

/// The support read off from the term shapes (the union of the term supports).
pub fn support(k: &KernelExpr) -> Support {
    k.raw_terms()
        .keys()
        .map(|t| match t.shape {
            Shape::Smooth { .. } => Support::Full,
            Shape::Layer { .. } | Shape::Boundary { .. } => Support::Hyperplane,
            Shape::Point { .. } => Support::Origin,
        })
        .max_by_key(|s| *s as u8)
        .unwrap_or(Support::Empty)
}
