//! The recurrence system on the K-type lattice and the multiplicities it
//! determines.
//!
//! An intertwiner between the Harish-Chandra modules is a family of scalars
//! `t_{α,α'}` indexed by pairs of K-types `α' ⊂ α`. Coordinate multiplication
//! couples neighbouring pairs, giving a linear system whose solution space is
//! the space of intertwiners. In the sector variables
//! `s^±_{i,j} = t_+ ± (−1)^{i−j} t_−` the system splits into two independent
//! halves.

mod affine;
mod composition;
mod system;

use serde::Serialize;
use thiserror::Error;

pub use affine::Affine;
pub use composition::{composition_multiplicity, CompositionBlock, Factor};
pub use system::{
    build_system, build_t_system, lattice_grid, lattice_point, lattice_window, solve_dimension, solve_with_zeros, t_system_dimension,
    total_dimension, Constraint, GridRow, LatticeSystem, SolutionSpace, TotalDimension,
};

pub use crate::monogenics::{KLabel, Sign};
use crate::monogenics::{adjacent_targets, lambda_value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("K-types are not adjacent: {0}")]
    NotAdjacent(String),
    #[error("truncation depth {depth} too small: {reason}")]
    BadDepth { depth: usize, reason: String },
    #[error("dimension {dim_n} at depth {depth} differs from {dim_next} at depth {next}", next = depth + 1)]
    NotStabilized { depth: usize, dim_n: usize, dim_next: usize },
    #[error("sector equations do not decouple at {0}")]
    SectorCoupling(String),
    #[error("unsupported dimension n = {0}")]
    BadDimension(usize),
}

/// A lattice index `(i, j)` with the sign carried by `i` (n even) or `j` (n odd).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KTypeIndex {
    pub i: usize,
    pub j: usize,
    pub sign: Sign,
}

impl KTypeIndex {
    /// The pair of labels `(α, α')` for dimension `n`.
    pub fn labels(&self, n: usize) -> (KLabel, KLabel) {
        if n.is_multiple_of(2) {
            (KLabel::signed(self.i, self.sign), KLabel::plain(self.j))
        } else {
            (KLabel::plain(self.i), KLabel::signed(self.j, self.sign))
        }
    }

    pub fn from_labels(n: usize, a: KLabel, ap: KLabel) -> Result<Self, LatticeError> {
        let s = if n.is_multiple_of(2) { a.sign } else { ap.sign };
        let sign = s.ok_or_else(|| LatticeError::NotAdjacent(format!("labels {a}, {ap} do not fit n = {n}")))?;
        Ok(KTypeIndex { i: a.deg, j: ap.deg, sign })
    }
}

/// Whether two K-type labels are adjacent under coordinate multiplication.
/// Labels carrying a sign flip it exactly on the horizontal move.
pub fn adjacent(a: KLabel, b: KLabel) -> bool {
    let d = b.deg as i64 - a.deg as i64;
    if d.abs() > 1 {
        return false;
    }
    match (a.sign, b.sign) {
        (None, None) => true,
        (Some(x), Some(y)) => (d == 0) == (x != y),
        _ => false,
    }
}

/// Difference `σ_β − σ_α` of the Casimir eigenvalues for K-types of the
/// group with parameter `n` (use `n − 1` for the subgroup).
pub fn casimir_difference(n: usize, a: KLabel, b: KLabel) -> Result<i64, LatticeError> {
    if !adjacent(a, b) {
        return Err(LatticeError::NotAdjacent(format!("{a} and {b}")));
    }
    let (n, i) = (n as i64, a.deg as i64);
    Ok(match b.deg as i64 - i {
        1 => 2 * i + n + 1,
        0 => 0,
        _ => -2 * i - n + 1,
    })
}

/// One instance of the general scalar identity
/// `(2ν + σ'_{β'} − σ'_{α'}) t_{α,α'} = Σ_β λ^{β,β'}_{α,α'} (2λ + σ_β − σ_α) t_{β,β'}`
/// with formal λ, ν.
#[derive(Clone, Debug, Serialize)]
pub struct GeneralIdentity {
    pub alpha: KLabel,
    pub alpha_p: KLabel,
    pub beta_p: KLabel,
    pub lhs: Affine,
    pub rhs: Vec<(KLabel, Affine)>,
}

/// Assemble the general identity for `(α, α')` and the subgroup move `α' → β'`.
pub fn general_identity_instance(n: usize, alpha: KLabel, alpha_p: KLabel, beta_p: KLabel) -> Result<GeneralIdentity, LatticeError> {
    if n < 3 {
        return Err(LatticeError::BadDimension(n));
    }
    let sub = casimir_difference(n - 1, alpha_p, beta_p)?;
    let targets = adjacent_targets(n, alpha, alpha_p).map_err(|e| LatticeError::NotAdjacent(e.to_string()))?;
    let mut rhs = Vec::new();
    for (b, bp) in targets {
        if bp != beta_p {
            continue;
        }
        let sig = casimir_difference(n, alpha, b)?;
        let lam = lambda_value(n, alpha, alpha_p, b, bp).map_err(|e| LatticeError::NotAdjacent(e.to_string()))?;
        rhs.push((b, Affine::lambda_form(2, sig).scale(&lam)));
    }
    Ok(GeneralIdentity { alpha, alpha_p, beta_p, lhs: Affine::nu_form(2, sub), rhs })
}
