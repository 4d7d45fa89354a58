//! Exact verification engine for spinor symmetry breaking operators between
//! principal series of `Pin(n+1,1)` and `Pin(n,1)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`paramfield`]: Gaussian rationals, rational functions in λ, ν and formal Gamma factors.
//! * [`linalg`]: exact Gaussian elimination over ℚ(√−1).
//! * [`cliffspin`]: Clifford algebras, Pin covering map, spin modules and branching maps.
//! * [`monogenics`]: spinor-valued polynomials, Dirac operator, Fischer decomposition,
//!   Gegenbauer polynomials, monogenic branching and the λ-constants.
//! * [`kernelcalc`]: symbolic distribution kernels and their translation identities.
//! * [`sbolattice`]: the K-type recurrence system and multiplicity computations.

pub mod paramfield;
pub mod linalg;
pub mod cliffspin;
pub mod monogenics;
pub mod kernelcalc;
pub mod sbolattice;
