//! Monogenic bases, the Fischer decomposition and the coordinate splitting.

use super::poly::{clifford_gens, clifford_x_with, dirac_with, monomials_of_degree, SpinorPolynomial};
use super::MonoError;
use crate::cliffspin::{spin_dim, UnitOp};
use crate::linalg::{self, Echelon};
use crate::paramfield::GaussianRational;

type G = GaussianRational;

/// Rows of the Dirac operator `Pol_i(ℝ^n; S_n) → Pol_{i-1}(ℝ^n; S_n)` in the
/// monomial ⊗ spin basis.
fn dirac_rows(n: usize, i: usize) -> (Vec<linalg::SparseRow>, usize) {
    let sdim = spin_dim(n);
    let src = monomials_of_degree(n, i);
    let dst = if i == 0 { vec![] } else { monomials_of_degree(n, i - 1) };
    let gens = clifford_gens(n);
    let ncols = src.len() * sdim;
    let mut rows = vec![linalg::SparseRow::new(); dst.len() * sdim];
    let index: std::collections::HashMap<_, _> = dst.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    for (c_m, mono) in src.iter().enumerate() {
        for k in 0..n {
            let e = mono[k];
            if e == 0 {
                continue;
            }
            let mut m2 = *mono;
            m2[k] -= 1;
            let r_m = index[&m2];
            let op = &gens[k];
            for s in 0..sdim {
                let r = r_m * sdim + op.target[s];
                let v = super::rot_int(e as i64, op.phase[s]);
                let slot = rows[r].entry(c_m * sdim + s).or_default();
                *slot += &v;
                if slot.is_zero() {
                    rows[r].remove(&(c_m * sdim + s));
                }
            }
        }
    }
    (rows, ncols)
}

/// Rank of the Dirac operator on homogeneous polynomials of degree `i`.
pub fn dirac_rank(n: usize, i: usize) -> usize {
    let (rows, ncols) = dirac_rows(n, i);
    linalg::rank(&rows, ncols)
}

/// A basis of `M_i(ℝ^n; S_n)`, the kernel of the Dirac operator on `Pol_i`.
pub fn monogenic_basis(n: usize, i: usize) -> Vec<SpinorPolynomial> {
    let sdim = spin_dim(n);
    let (rows, ncols) = dirac_rows(n, i);
    let mut ech = Echelon::new(ncols);
    for r in &rows {
        ech.insert(r);
    }
    let monos = monomials_of_degree(n, i);
    ech.nullspace().iter().map(|v| SpinorPolynomial::from_dense(n, sdim, &monos, v)).collect()
}

/// `D̸(x̲^a ψ) = c · x̲^{a-1} ψ` for `ψ ∈ M_b`.
fn lowering_constant(n: usize, a: usize, b: usize) -> G {
    if a.is_multiple_of(2) {
        G::from_int(-(a as i64))
    } else {
        G::from_int(-((a - 1) as i64 + n as i64 + 2 * b as i64))
    }
}

fn power_x(phi: &SpinorPolynomial, a: usize, gens: &[UnitOp]) -> SpinorPolynomial {
    let mut p = phi.clone();
    for _ in 0..a {
        p = clifford_x_with(&p, gens, phi.nvars());
    }
    p
}

fn split_rec(phi: &SpinorPolynomial, d: usize, gens: &[UnitOp]) -> Vec<SpinorPolynomial> {
    let n = phi.nvars();
    if d == 0 {
        return vec![phi.clone()];
    }
    let dphi = dirac_with(phi, gens);
    if dphi.is_zero() {
        let mut v = vec![phi.clone()];
        v.resize(d + 1, SpinorPolynomial::zero(n, phi.sdim()));
        return v;
    }
    let lower = split_rec(&dphi, d - 1, gens);
    let mut comps = vec![SpinorPolynomial::zero(n, phi.sdim()); d + 1];
    let mut rest = phi.clone();
    for (a, eta) in lower.iter().enumerate() {
        if eta.is_zero() {
            continue;
        }
        let c = lowering_constant(n, a + 1, d - 1 - a);
        let psi = eta.scale(&c.inv().expect("nonzero Fischer constant"));
        rest = rest.sub(&power_x(&psi, a + 1, gens));
        comps[a + 1] = psi;
    }
    comps[0] = rest;
    comps
}

/// Fischer decomposition `φ = Σ_j x̲^j ψ_j` of a homogeneous polynomial, with
/// `ψ_j ∈ M_{deg-j}`. Only nonzero components are returned.
pub fn fischer_split(phi: &SpinorPolynomial) -> Result<Vec<(usize, SpinorPolynomial)>, MonoError> {
    let Some(d) = phi.degree() else {
        return Ok(vec![]);
    };
    if !phi.is_homogeneous(d) {
        return Err(MonoError::SplitFailure("input is not homogeneous".into()));
    }
    if phi.sdim() != spin_dim(phi.nvars()) {
        return Err(MonoError::DimensionMismatch("values must lie in S_n".into()));
    }
    let gens = clifford_gens(phi.nvars());
    let comps = split_rec(phi, d, &gens);
    let mut recon = SpinorPolynomial::zero(phi.nvars(), phi.sdim());
    for (a, c) in comps.iter().enumerate() {
        if !dirac_with(c, &gens).is_zero() {
            return Err(MonoError::SplitFailure(format!("component {a} is not monogenic")));
        }
        recon = recon.add(&power_x(c, a, &gens));
    }
    if recon != *phi {
        return Err(MonoError::SplitFailure("components do not reconstruct the input".into()));
    }
    Ok(comps.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
}

/// The three pieces of `x_k φ = φ_k^+ - x̲ φ_k^0 + |x|² φ_k^-`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateSplit {
    pub plus: SpinorPolynomial,
    pub zero: SpinorPolynomial,
    pub minus: SpinorPolynomial,
}

/// Closed-form splitting without verification; `deg` is the degree of `φ`.
pub(crate) fn coordinate_split_with(phi: &SpinorPolynomial, deg: usize, k: usize, gens: &[UnitOp]) -> CoordinateSplit {
    let n = phi.nvars();
    let a = G::from_int((n + 2 * deg) as i64).inv().expect("n + 2i > 0");
    let ek = phi.apply_unit(&gens[k - 1]);
    let dk = phi.deriv(k);
    let xek = clifford_x_with(&ek, gens, n);
    let plus = phi.mul_coord(k).add(&xek.sub(&dk.mul_norm_sq()).scale(&a));
    let (zero, minus) = if dk.is_zero() {
        (ek.scale(&a), SpinorPolynomial::zero(n, phi.sdim()))
    } else {
        let b = G::from_int((n + 2 * deg) as i64 - 2).inv().expect("n + 2i - 2 > 0 when ∂φ ≠ 0");
        let xdk = clifford_x_with(&dk, gens, n);
        let zero = ek.sub(&xdk.scale(&(&b * &G::from_int(2)))).scale(&a);
        (zero, dk.scale(&b))
    };
    CoordinateSplit { plus, zero, minus }
}

/// Splits `x_k φ` for a homogeneous monogenic `φ` and checks the result.
pub fn mult_coordinate_split(phi: &SpinorPolynomial, k: usize) -> Result<CoordinateSplit, MonoError> {
    let n = phi.nvars();
    if k == 0 || k > n {
        return Err(MonoError::DimensionMismatch(format!("coordinate {k} in {n} variables")));
    }
    let gens = clifford_gens(n);
    let deg = phi.degree().unwrap_or(0);
    if !phi.is_homogeneous(deg) || !dirac_with(phi, &gens).is_zero() {
        return Err(MonoError::NotMonogenic);
    }
    let s = coordinate_split_with(phi, deg, k, &gens);
    for part in [&s.plus, &s.zero, &s.minus] {
        if !dirac_with(part, &gens).is_zero() {
            return Err(MonoError::SplitFailure("a coordinate component is not monogenic".into()));
        }
    }
    let recombined = s.plus.sub(&clifford_x_with(&s.zero, &gens, n)).add(&s.minus.mul_norm_sq());
    if recombined != phi.mul_coord(k) {
        return Err(MonoError::SplitFailure("coordinate components do not recombine".into()));
    }
    Ok(s)
}
