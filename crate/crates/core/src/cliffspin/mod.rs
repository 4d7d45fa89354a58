//! Clifford algebras, the Pin covering map, the fundamental spin modules on
//! the exterior algebra `ΛW`, and the branching maps between them.

mod branching;
mod clifford;
mod spinor;

pub use branching::{check_proj_independence, fund_branching, spin_projection_P, BranchingMaps, IndependenceReport};
pub use clifford::{blade_product, pin_cover_action, quadratic_form, CliffordElt};
pub use spinor::{gamma, gamma_map, zeta_action, zeta_clifford, zeta_generator, zeta_vector, SpinMap, Spinor, UnitOp, Variant};

use thiserror::Error;

use crate::paramfield::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is not a product of unit vectors")]
    NotInPin,
    #[error("operators are linearly dependent (rank {rank})")]
    IndependenceFailure { rank: usize, kernel: Vec<GaussianRational> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// `m` with `n = 2m` or `n = 2m + 1`.
pub fn half_dim(n: usize) -> usize {
    n / 2
}

/// Dimension `2^m` of the spin module for `ℝ^n`.
pub fn spin_dim(n: usize) -> usize {
    1usize << half_dim(n)
}
