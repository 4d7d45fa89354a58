//! The branching embeddings `I_{j→i} : M_j(ℝ^n; S_n) → M_i(ℝ^{n+1}; S_{n+1})`.

use num_traits::Zero;
use serde::Serialize;

use super::gegenbauer::gegenbauer_q;
use super::fischer::monogenic_basis;
use super::poly::{clifford_gens, clifford_x_with, dirac, dirac_with, pin_act, SpinorPolynomial};
use super::MonoError;
use crate::cliffspin::{fund_branching, spin_dim, CliffordElt, SpinMap};
use crate::paramfield::{q, GaussianRational, Q};

type G = GaussianRational;

/// The spin embedding `S_n ⊂ S_{n+1}` used by the branching maps: the
/// identity for even `n` and `ω ↦ ω - √−1 ω∧w_{m+1}` for odd `n`.
pub fn spin_embedding(n: usize) -> SpinMap {
    if n.is_multiple_of(2) {
        SpinMap::identity(spin_dim(n))
    } else {
        fund_branching(n).expect("n ≥ 1").plus
    }
}

/// `Σ_t c_{d-2t} x_N^{d-2t} |x|^{2t} ψ`, the homogenization of an even or odd
/// polynomial `Σ_t c_t z^t` of degree `d` with respect to `z = x_N / |x|`.
fn homogenize(coeffs: &[Q], d: usize, psi: &SpinorPolynomial) -> Result<SpinorPolynomial, MonoError> {
    let nv = psi.nvars();
    let mut out = SpinorPolynomial::zero(nv, psi.sdim());
    for (p, c) in coeffs.iter().enumerate() {
        if (d - p) % 2 == 1 && !c.is_zero() {
            return Err(MonoError::ParityError);
        }
    }
    let mut radial = psi.clone();
    for t in 0..=d / 2 {
        let p = d - 2 * t;
        let c = &coeffs[p];
        if !c.is_zero() {
            let mut term = radial.clone();
            for _ in 0..p {
                term = term.mul_coord(nv);
            }
            out.add_scaled(&G::real(c.clone()), &term);
        }
        radial = radial.mul_norm_sq();
    }
    Ok(out)
}

/// `I_{j→i}φ` without validating the input.
pub(crate) fn branch_embed_raw(n: usize, j: usize, i: usize, phi: &SpinorPolynomial, emb: &SpinMap) -> Result<SpinorPolynomial, MonoError> {
    let m = i - j;
    let mu: Q = q(n as i64 - 1, 2) + Q::from_integer((j as i64).into());
    let big = phi.with_nvars(n + 1).apply_map(emb);
    let first = homogenize(&gegenbauer_q(m, &mu), m, &big)?;
    let mut out = first.scale(&G::from_int((n + i + j) as i64 - 1));
    if m >= 1 {
        let gens = clifford_gens(n + 1);
        let psi = clifford_x_with(&big.apply_unit(&gens[n]), &gens, n);
        let second = homogenize(&gegenbauer_q(m - 1, &(mu + Q::from_integer(1.into()))), m - 1, &psi)?;
        out.add_scaled(&G::from_int((n + 2 * j) as i64 - 1), &second);
    }
    Ok(out)
}

/// The embedding `I_{j→i}` of a degree-`j` monogenic polynomial on `ℝ^n` into
/// degree-`i` monogenic polynomials on `ℝ^{n+1}`.
pub fn branch_embed(n: usize, j: usize, i: usize, phi: &SpinorPolynomial) -> Result<SpinorPolynomial, MonoError> {
    if j > i {
        return Err(MonoError::DimensionMismatch(format!("I_{{{j}→{i}}} needs j ≤ i")));
    }
    if phi.nvars() != n || phi.sdim() != spin_dim(n) || n + 1 > super::poly::MAX_VARS {
        return Err(MonoError::DimensionMismatch(format!("expected an S_{n}-valued polynomial on ℝ^{n}")));
    }
    if !phi.is_homogeneous(j) || !dirac_with(phi, &clifford_gens(n)).is_zero() {
        return Err(MonoError::NotMonogenic);
    }
    branch_embed_raw(n, j, i, phi, &spin_embedding(n))
}

/// Outcome of checking every `I_{j→i}` for one `n`.
#[derive(Clone, Debug, Serialize)]
pub struct BranchingReport {
    pub n: usize,
    pub max_deg: usize,
    /// Number of `(j, i, φ)` triples whose image was checked to be monogenic.
    pub images: usize,
    /// Number of `(j, i, φ, g)` quadruples checked for equivariance.
    pub equivariance: usize,
    /// First failure, if any.
    pub failure: Option<String>,
}

impl BranchingReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Pin generators used for the equivariance test: the basis vectors and the
/// rational unit vector `(3/5, 4/5, 0, …)`.
fn pin_generators(n: usize) -> Vec<CliffordElt> {
    let mut out: Vec<CliffordElt> = (1..=n).map(|k| CliffordElt::e(n, 0, k)).collect();
    if n >= 2 {
        let mut v = vec![G::zero(); n];
        v[0] = G::from_frac(3, 5);
        v[1] = G::from_frac(4, 5);
        out.push(CliffordElt::vector(n, 0, &v));
    }
    out
}

/// Check `D_{n+1} I_{j→i}φ = 0` and `I_{j→i}(g·φ) = g·I_{j→i}φ` for
/// `0 ≤ j ≤ i ≤ max_deg`, every basis `φ` and the Pin generators.
pub fn verify_branching(n: usize, max_deg: usize) -> Result<BranchingReport, MonoError> {
    let mut rep = BranchingReport { n, max_deg, images: 0, equivariance: 0, failure: None };
    let gens = pin_generators(n);
    for j in 0..=max_deg {
        let basis = monogenic_basis(n, j);
        for i in j..=max_deg {
            for (b, phi) in basis.iter().enumerate() {
                let img = branch_embed(n, j, i, phi)?;
                if !dirac(&img).is_zero() {
                    rep.failure = Some(format!("D I_{{{j}->{i}}} phi_{b} != 0"));
                    return Ok(rep);
                }
                rep.images += 1;
                for (k, g) in gens.iter().enumerate() {
                    let act = |p: &SpinorPolynomial| pin_act(g, p).map_err(|e| MonoError::DimensionMismatch(e.to_string()));
                    let lhs = branch_embed(n, j, i, &act(phi)?)?;
                    let rhs = act(&img)?;
                    if lhs != rhs {
                        rep.failure = Some(format!("I_{{{j}->{i}}} not equivariant under generator {k} on phi_{b}"));
                        return Ok(rep);
                    }
                    rep.equivariance += 1;
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliffspin::{half_dim, Spinor};

    #[test]
    fn diagonal_embedding_is_scalar() {
        for n in 2..=4 {
            for j in 0..=2 {
                for phi in monogenic_basis(n, j).into_iter().take(3) {
                    let out = branch_embed(n, j, j, &phi).unwrap();
                    let expect = phi.with_nvars(n + 1).apply_map(&spin_embedding(n)).scale(&G::from_int((n + 2 * j) as i64 - 1));
                    assert_eq!(out, expect);
                }
            }
        }
    }

    #[test]
    fn degree_one_from_constant() {
        let n = 4;
        let s = Spinor::basis(half_dim(n), 1);
        let c = SpinorPolynomial::constant(n, &s);
        let out = branch_embed(n, 0, 1, &c).unwrap();
        let big = c.with_nvars(n + 1);
        let gens = clifford_gens(n + 1);
        let expect = big
            .mul_coord(n + 1)
            .scale(&G::from_int((n * (n - 1)) as i64))
            .add(&clifford_x_with(&big.apply_unit(&gens[n]), &gens, n).scale(&G::from_int(n as i64 - 1)));
        assert_eq!(out, expect);
    }

    #[test]
    fn small_report_passes() {
        for n in 2..=3 {
            let rep = verify_branching(n, 2).unwrap();
            assert!(rep.passed(), "{:?}", rep.failure);
            assert!(rep.equivariance > 0);
        }
    }

    #[test]
    fn embeddings_are_monogenic() {
        for n in 2..=3 {
            for j in 0..=2 {
                let basis = monogenic_basis(n, j);
                for i in j..=3 {
                    for phi in &basis {
                        assert!(dirac(&branch_embed(n, j, i, phi).unwrap()).is_zero(), "n={n} j={j} i={i}");
                    }
                }
            }
        }
    }
}
