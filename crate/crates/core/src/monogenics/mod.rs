//! Spinor-valued polynomials, the Dirac operator, Fischer decomposition,
//! Gegenbauer polynomials, monogenic branching maps and the λ-constants.

mod branch;
mod fischer;
mod gegenbauer;
mod lambda;
mod poly;

pub use branch::{branch_embed, spin_embedding, verify_branching, BranchingReport};
pub use fischer::{dirac_rank, fischer_split, monogenic_basis, mult_coordinate_split, CoordinateSplit};
pub use gegenbauer::{
    gegenbauer, gegenbauer_at_one, gegenbauer_identity_report, gegenbauer_q, verify_gegenbauer_identities, GegenbauerPoly,
    GegenbauerReport, IdentityCheck, GEGENBAUER_IDENTITIES,
};
pub use lambda::{
    adjacent_targets, lambda_constant, lambda_constant_bruteforce, lambda_sweep, lambda_table_bruteforce, lambda_value, source_pairs, KLabel,
    LambdaEntry, Sign,
};
pub use poly::{
    clifford_gens, clifford_x, clifford_x_with, dirac, dirac_with, monomial_degree, monomials_of_degree, pin_act, Monomial,
    SpinorPolynomial, MAX_VARS,
};

use thiserror::Error;

use crate::paramfield::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoError {
    #[error("identity {identity} fails; difference {residual}")]
    IdentityFailure { identity: String, residual: String },
    #[error("input polynomial is not homogeneous monogenic")]
    NotMonogenic,
    #[error("Fischer splitting failed: {0}")]
    SplitFailure(String),
    #[error("Gegenbauer parity violated while assembling a branching embedding")]
    ParityError,
    #[error("K-type labels are not adjacent: {0}")]
    NotAdjacent(String),
    #[error("the two sides are not proportional: {0}")]
    MultiplicityViolation(String),
    #[error("both sides vanish, the constant is indeterminate: {0}")]
    ZeroMap(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// `v · √−1^phase` for a small integer `v`.
fn rot_int(v: i64, phase: u8) -> GaussianRational {
    let g = GaussianRational::from_int(v);
    match phase % 4 {
        0 => g,
        1 => g.mul_i(),
        2 => -g,
        _ => -g.mul_i(),
    }
}
