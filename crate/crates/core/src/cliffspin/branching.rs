//! Branching of the fundamental spin modules from `ℝ^{n+1}` to `ℝ^n`, and the
//! projection `P : S_n → S_{n-1}` used for spinor-valued kernels.

use serde::Serialize;

use super::spinor::{gamma_map, zeta_generator, SpinMap, Variant};
use super::{half_dim, spin_dim, CliffError};
use crate::linalg;
use crate::paramfield::GaussianRational;

type G = GaussianRational;

/// The two branching maps `S_n → S_{n+1}`.
///
/// For even `n`, `plus` and `minus` are isomorphisms `ζ_n ≅ ζ_{n+1}^{±}|`.
/// For odd `n` they embed `ζ_n^{±}` into `ζ_{n+1}|`.
#[derive(Clone, Debug, Serialize)]
pub struct BranchingMaps {
    pub n: usize,
    pub plus: SpinMap,
    pub minus: SpinMap,
}

impl BranchingMaps {
    /// For odd `n`, the projection of `S_{n+1}` onto the image of `plus` or `minus`.
    pub fn image_projection(&self, variant: Variant) -> Option<SpinMap> {
        if self.n.is_multiple_of(2) {
            return None;
        }
        let big = self.n + 1;
        let d = spin_dim(big);
        let e = zeta_generator(big, Variant::Plus, big).ok()?.compose(&gamma_map(half_dim(big))).to_map();
        let half = G::from_frac(1, 2);
        let signed = if variant == Variant::Plus { e } else { e.scale(&G::from_int(-1)) };
        Some(SpinMap::identity(d).add(&signed).scale(&half))
    }

    /// Checks `ζ_{n+1}(e_i) ∘ emb = emb ∘ ζ_n(e_i)` with the appropriate twists
    /// for every `i ≤ n`. Returns the first failing generator.
    pub fn verify_intertwining(&self) -> Result<(), usize> {
        let n = self.n;
        for (emb, var) in [(&self.plus, Variant::Plus), (&self.minus, Variant::Minus)] {
            let (big_var, small_var) = if n.is_multiple_of(2) { (var, Variant::Plus) } else { (Variant::Plus, var) };
            for i in 1..=n {
                let big = zeta_generator(n + 1, big_var, i).map_err(|_| i)?.to_map();
                let small = zeta_generator(n, small_var, i).map_err(|_| i)?.to_map();
                if big.compose(emb) != emb.compose(&small) {
                    return Err(i);
                }
            }
        }
        Ok(())
    }
}

/// The explicit branching maps for the fundamental spin modules.
pub fn fund_branching(n: usize) -> Result<BranchingMaps, CliffError> {
    if n == 0 {
        return Err(CliffError::InvalidArgument("n must be at least 1".into()));
    }
    let m = half_dim(n);
    let d = spin_dim(n);
    if n.is_multiple_of(2) {
        return Ok(BranchingMaps { n, plus: SpinMap::identity(d), minus: gamma_map(m).to_map() });
    }
    let top = 1usize << m;
    let mut plus = SpinMap::zeros(2 * d, d);
    let mut minus = SpinMap::zeros(2 * d, d);
    for t in 0..d {
        plus.matrix[t][t] = G::one();
        plus.matrix[t | top][t] = -G::i();
        let g = if t.count_ones() % 2 == 1 { G::from_int(-1) } else { G::one() };
        minus.matrix[t][t] = g.clone();
        minus.matrix[t | top][t] = g.mul_i();
    }
    Ok(BranchingMaps { n, plus, minus })
}

/// A nonzero `Pin(n-1)`-equivariant map `[ζ_n ⊗ det]| → ζ_{n-1}`.
///
/// For odd `n` this is `γ`. For even `n` it projects onto the summand
/// isomorphic to `ζ_{n-1}` and undoes the branching embedding, so that
/// `P ∘ emb = id` on that summand.
#[allow(non_snake_case)]
pub fn spin_projection_P(n: usize) -> Result<SpinMap, CliffError> {
    if n < 2 {
        return Err(CliffError::InvalidArgument("P needs n ≥ 2".into()));
    }
    let m = half_dim(n);
    if n % 2 == 1 {
        return Ok(gamma_map(m).to_map());
    }
    let small = spin_dim(n - 1);
    let b = fund_branching(n - 1)?;
    let proj = b.image_projection(Variant::Minus).expect("odd branching");
    let mut restrict = SpinMap::zeros(small, 2 * small);
    for t in 0..small {
        restrict.matrix[t][t] = G::one();
    }
    Ok(gamma_map(m - 1).to_map().compose(&restrict).compose(&proj))
}

/// Outcome of the independence check for `P ∘ ζ_n(e_1), …, P ∘ ζ_n(e_n)`.
#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub n: usize,
    pub rank: usize,
    /// Matrix entries `(row, col)` on which the `n` operators restrict to an
    /// invertible `n × n` matrix.
    pub pivot_entries: Vec<(usize, usize)>,
    /// Determinant of that restricted matrix.
    pub minor_determinant: G,
}

/// Exact rank check of `{P ∘ ζ_n(e_i)}` inside `Hom(S_n, S_{n-1})`.
pub fn check_proj_independence(n: usize) -> Result<IndependenceReport, CliffError> {
    if n < 2 || n % 2 == 1 {
        return Err(CliffError::InvalidArgument("independence check needs even n ≥ 2".into()));
    }
    let p = spin_projection_P(n)?;
    let src = spin_dim(n);
    let ops: Vec<Vec<G>> = (1..=n)
        .map(|i| Ok(p.compose(&zeta_generator(n, Variant::Plus, i)?.to_map()).flatten()))
        .collect::<Result<_, CliffError>>()?;
    let width = ops[0].len();
    let mut ech = linalg::Echelon::new(width);
    for v in &ops {
        ech.insert(&linalg::sparse(v));
    }
    let rank = ech.rank();
    if rank < n {
        let cols: Vec<linalg::SparseRow> =
            (0..width).map(|k| linalg::sparse(&ops.iter().map(|v| v[k].clone()).collect::<Vec<_>>())).collect();
        let kernel = linalg::kernel_witness(&cols, n).unwrap_or_default();
        return Err(CliffError::IndependenceFailure { rank, kernel });
    }
    let pivots: Vec<usize> = ech.pivots().map(|(c, _)| *c).collect();
    let minor: Vec<Vec<G>> = ops.iter().map(|v| pivots.iter().map(|&c| v[c].clone()).collect()).collect();
    Ok(IndependenceReport {
        n,
        rank,
        pivot_entries: pivots.iter().map(|&c| (c / src, c % src)).collect(),
        minor_determinant: linalg::determinant(&minor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branching_maps_intertwine() {
        for n in 1..=7 {
            let b = fund_branching(n).unwrap();
            assert_eq!(b.verify_intertwining(), Ok(()), "n = {n}");
            assert_eq!(b.plus.rank(), spin_dim(n));
            assert_eq!(b.minus.rank(), spin_dim(n));
        }
    }

    #[test]
    fn even_top_generator_is_i_gamma() {
        for n in [2, 4, 6] {
            let e = zeta_generator(n + 1, Variant::Plus, n + 1).unwrap().to_map();
            assert_eq!(e, gamma_map(half_dim(n)).to_map().scale(&G::i()));
        }
    }

    #[test]
    fn odd_projections_fix_images() {
        for n in [1, 3, 5] {
            let b = fund_branching(n).unwrap();
            for (var, emb, other) in [(Variant::Plus, &b.plus, &b.minus), (Variant::Minus, &b.minus, &b.plus)] {
                let pr = b.image_projection(var).unwrap();
                assert_eq!(pr.compose(emb), *emb);
                assert!(pr.compose(other).is_zero());
            }
        }
    }

    #[test]
    fn projection_ranks_and_equivariance() {
        for n in 2..=7 {
            let p = spin_projection_P(n).unwrap();
            let expect = if n % 2 == 1 { spin_dim(n) } else { spin_dim(n) / 2 };
            assert_eq!(p.rank(), expect, "n = {n}");
            for i in 1..n {
                let big = zeta_generator(n, Variant::Plus, i).unwrap().to_map();
                let small = zeta_generator(n - 1, Variant::Plus, i).unwrap().to_map();
                assert_eq!(p.compose(&big), small.compose(&p).scale(&G::from_int(-1)), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn even_projection_inverts_embedding() {
        for n in [2, 4, 6] {
            let p = spin_projection_P(n).unwrap();
            let emb = fund_branching(n - 1).unwrap().minus;
            assert_eq!(p.compose(&emb), SpinMap::identity(spin_dim(n - 1)));
        }
    }

    #[test]
    fn independence_ranks() {
        for n in [2, 4, 6] {
            let r = check_proj_independence(n).unwrap();
            assert_eq!(r.rank, n);
            assert!(!r.minor_determinant.is_zero());
        }
        assert!(check_proj_independence(3).is_err());
    }
}
