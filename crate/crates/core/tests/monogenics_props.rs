use proptest::prelude::*;
use spinbranch::cliffspin::{spin_dim, CliffordElt};
use spinbranch::monogenics::{
    branch_embed, clifford_x, dirac, dirac_rank, fischer_split, monogenic_basis, monomials_of_degree, pin_act, SpinorPolynomial,
};
use spinbranch::paramfield::GaussianRational as G;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// Dimension of homogeneous degree-`i` polynomials in `n` variables.
fn pol_dim(n: usize, i: isize) -> usize {
    if i < 0 {
        0
    } else {
        binom(n + i as usize - 1, i as usize)
    }
}

fn random_poly() -> impl Strategy<Value = SpinorPolynomial> {
    (2usize..=4, 0usize..=5).prop_flat_map(|(n, d)| {
        let monos = monomials_of_degree(n, d);
        let len = monos.len() * spin_dim(n);
        proptest::collection::vec((-3i64..=3, -2i64..=2), len).prop_map(move |cs| {
            let v: Vec<G> = cs.into_iter().map(|(a, b)| &G::from_int(a) + &G::from_int(b).mul_i()).collect();
            SpinorPolynomial::from_dense(n, spin_dim(n), &monos, &v)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fischer_components_recombine(phi in random_poly()) {
        let parts = fischer_split(&phi).unwrap();
        let mut sum = SpinorPolynomial::zero(phi.nvars(), phi.sdim());
        for (j, psi) in &parts {
            prop_assert!(dirac(psi).is_zero());
            let mut t = psi.clone();
            for _ in 0..*j {
                t = clifford_x(&t);
            }
            sum = sum.add(&t);
        }
        prop_assert_eq!(sum, phi);
    }
}

#[test]
fn monogenic_bases_are_killed_by_dirac() {
    for n in 2..=4 {
        for i in 0..=4 {
            for phi in monogenic_basis(n, i) {
                assert!(dirac(&phi).is_zero(), "n={n} i={i}");
            }
        }
    }
}

#[test]
fn monogenic_dimension_matches_surjectivity() {
    for n in 2..=4 {
        let s = spin_dim(n);
        for i in 0..=5 {
            let want = (pol_dim(n, i as isize) - pol_dim(n, i as isize - 1)) * s;
            assert_eq!(monogenic_basis(n, i).len(), want, "n={n} i={i}");
            assert_eq!(dirac_rank(n, i), pol_dim(n, i as isize - 1) * s, "n={n} i={i}");
        }
    }
}

#[test]
fn branching_commutes_with_e1_and_e1e2() {
    for n in 2..=4 {
        let gens = [CliffordElt::e(n, 0, 1), CliffordElt::blade(n, 0, &[1, 2], G::one())];
        for j in 0..=3 {
            for i in j..=3 {
                for phi in monogenic_basis(n, j) {
                    for g in &gens {
                        let lhs = branch_embed(n, j, i, &pin_act(g, &phi).unwrap()).unwrap();
                        let rhs = pin_act(g, &branch_embed(n, j, i, &phi).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "n={n} j={j} i={i}");
                    }
                }
            }
        }
    }
}
