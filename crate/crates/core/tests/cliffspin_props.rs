use proptest::prelude::*;
use spinbranch::cliffspin::{
    fund_branching, gamma_map, half_dim, pin_cover_action, quadratic_form, spin_dim, spin_projection_P, zeta_generator, zeta_vector,
    CliffordElt, SpinMap, Variant,
};
use spinbranch::paramfield::GaussianRational as G;

fn rational() -> impl Strategy<Value = G> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| G::from_frac(a, b))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<G>> {
    proptest::collection::vec(rational(), n)
}

fn dim_and_vector() -> impl Strategy<Value = (usize, Vec<G>)> {
    (1usize..=7).prop_flat_map(|n| (Just(n), vector(n)))
}

/// A rational unit vector in the plane of coordinates `a < b`, from the
/// parametrisation `((1−t²)/(1+t²), 2t/(1+t²))`.
fn unit_vector(n: usize) -> impl Strategy<Value = Vec<G>> {
    (0..n, 0..n, -6i64..=6, 1i64..=4).prop_map(move |(a, b, p, r)| {
        let mut v = vec![G::zero(); n];
        let t = G::from_frac(p, r);
        let d = (&G::one() + &(&t * &t)).inv().unwrap();
        if a == b {
            v[a] = G::one();
        } else {
            v[a] = &(&G::one() - &(&t * &t)) * &d;
            v[b] = &(&G::from_int(2) * &t) * &d;
        }
        v
    })
}

fn variants(n: usize) -> Vec<Variant> {
    if n % 2 == 1 {
        vec![Variant::Plus, Variant::Minus]
    } else {
        vec![Variant::Plus]
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zeta_squares_to_minus_norm((n, v) in dim_and_vector()) {
        let norm: G = v.iter().fold(G::zero(), |acc, x| &acc + &(x * x));
        for var in variants(n) {
            let z = zeta_vector(n, var, &v).unwrap();
            prop_assert_eq!(z.compose(&z), SpinMap::identity(spin_dim(n)).scale(&-&norm));
        }
    }

    #[test]
    fn gamma_anticommutes_with_vectors(k in 1usize..=4, v in vector(8)) {
        let n = 2 * k;
        let z = zeta_vector(n, Variant::Plus, &v[..n]).unwrap();
        let g = gamma_map(half_dim(n)).to_map();
        prop_assert!(g.compose(&z).add(&z.compose(&g)).is_zero());
    }

    #[test]
    fn covering_action_preserves_the_form(n in 2usize..=6, seed in proptest::collection::vec(unit_vector(6), 1..4), y in vector(6)) {
        let mut g = CliffordElt::one(n, 0);
        for u in &seed {
            let u: Vec<G> = u.iter().take(n).cloned().collect();
            let norm: G = u.iter().fold(G::zero(), |acc, x| &acc + &(x * x));
            prop_assume!(norm.is_one());
            g = g.try_mul(&CliffordElt::vector(n, 0, &u)).unwrap();
        }
        let y = &y[..n];
        let img = pin_cover_action(&g, y).unwrap();
        prop_assert_eq!(quadratic_form(n, &img), quadratic_form(n, y));
    }
}

#[test]
fn branching_intertwines_on_a_full_basis() {
    for n in 1..=7 {
        let b = fund_branching(n).unwrap();
        assert_eq!(b.verify_intertwining(), Ok(()), "n = {n}");
        assert_eq!(b.plus.rank(), spin_dim(n));
        assert_eq!(b.minus.rank(), spin_dim(n));
    }
}

#[test]
fn projection_relations() {
    for n in [2usize, 4, 6] {
        let p = spin_projection_P(n).unwrap();
        let emb = fund_branching(n - 1).unwrap().minus;
        let top = zeta_generator(n, Variant::Plus, n).unwrap().to_map();
        assert!(p.compose(&top).compose(&emb).is_zero(), "n = {n}");
        for i in 1..n {
            let big = zeta_generator(n, Variant::Plus, i).unwrap().to_map();
            let small = zeta_generator(n - 1, Variant::Plus, i).unwrap().to_map();
            assert_eq!(p.compose(&big), small.compose(&p).scale(&G::from_int(-1)));
        }
    }
}
