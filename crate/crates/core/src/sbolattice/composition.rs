//! Multiplicities between composition factors at reducibility points.
//!
//! The finite-dimensional factor `F(i)` is the quotient of the principal
//! series at `λ = ρ+½+i` (after twisting by the sign character) and the
//! infinite-dimensional factor `T(i)` is the quotient at `λ = −ρ−½−i`. On the
//! subgroup side `F'(j)` is the subrepresentation at `ν = −ρ_H−½−j` and `T'(j)`
//! the subrepresentation at `ν = ρ_H+½+j`. A homomorphism between factors is a
//! solution of the recurrence system that vanishes on the K-types killed by
//! the quotient and on the K-types outside the target.

use serde::Serialize;

use super::system::{build_system, solve_with_zeros};
use super::{LatticeError, Sign};
use crate::paramfield::{q, GaussianRational};

type G = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Factor {
    F,
    T,
}

/// The four multiplicities for one `(i, j)` and parity `δ + ε`.
#[derive(Clone, Debug, Serialize)]
pub struct CompositionBlock {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub parity: u8,
    pub depth: usize,
    pub ff: usize,
    pub ft: usize,
    pub tf: usize,
    pub tt: usize,
    pub stabilized: bool,
}

impl CompositionBlock {
    pub fn get(&self, src: Factor, dst: Factor) -> usize {
        match (src, dst) {
            (Factor::F, Factor::F) => self.ff,
            (Factor::F, Factor::T) => self.ft,
            (Factor::T, Factor::F) => self.tf,
            (Factor::T, Factor::T) => self.tt,
        }
    }
}

fn pair(n: usize, i: usize, j: usize, parity: u8, src: Factor, dst: Factor, depth: usize) -> Result<(usize, bool), LatticeError> {
    let half = q(1, 2);
    let rho = q(n as i64, 2) + half.clone() + q(i as i64, 1);
    let rho_h = q(n as i64 - 1, 2) + half + q(j as i64, 1);
    // F as a source and T' as a target each flip one of δ, ε
    let flips = (src == Factor::F) as u8 + (dst == Factor::T) as u8;
    let sector = if (parity + flips).is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
    let lam0 = G::real(if src == Factor::F { rho } else { -rho });
    let nu0 = G::real(if dst == Factor::T { rho_h } else { -rho_h });
    let sys = build_system(n, lam0, nu0, sector, depth)?;
    let zero = move |k: usize, l: usize| {
        let src_zero = match src {
            Factor::F => k > i,
            Factor::T => k <= i,
        };
        let dst_zero = match dst {
            Factor::F => l > j,
            Factor::T => l <= j,
        };
        src_zero || dst_zero
    };
    let s = solve_with_zeros(&sys, &zero)?;
    Ok((s.dim, s.stabilized))
}

/// Multiplicities between `F(i), T(i)` and `F'(j), T'(j)` for the parity `δ + ε mod 2`.
pub fn composition_multiplicity(n: usize, i: usize, j: usize, parity: u8, depth: usize) -> Result<CompositionBlock, LatticeError> {
    if depth <= i + j + 2 {
        return Err(LatticeError::BadDepth { depth, reason: format!("need depth > i + j + 2 = {}", i + j + 2) });
    }
    let parity = parity % 2;
    let mut stabilized = true;
    let mut get = |s, d| -> Result<usize, LatticeError> {
        let (dim, st) = pair(n, i, j, parity, s, d, depth)?;
        stabilized &= st;
        Ok(dim)
    };
    let ff = get(Factor::F, Factor::F)?;
    let ft = get(Factor::F, Factor::T)?;
    let tf = get(Factor::T, Factor::F)?;
    let tt = get(Factor::T, Factor::T)?;
    Ok(CompositionBlock { n, i, j, parity, depth, ff, ft, tf, tt, stabilized })
}
