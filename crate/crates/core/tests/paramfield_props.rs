use proptest::prelude::*;
use spinbranch::paramfield::{gamma_normalize, pochhammer, q, qi, AffineExp, GaussianRational as G, ParamScalar};

/// `a + bλ + cν + dλν` with small integer coefficients.
fn poly() -> impl Strategy<Value = ParamScalar> {
    (-4i64..=4, -3i64..=3, -3i64..=3, -2i64..=2).prop_map(|(a, b, c, d)| {
        let l = ParamScalar::lambda();
        let v = ParamScalar::nu();
        ParamScalar::from_int(a)
            .try_add(&l.scale(&G::from_int(b)))
            .and_then(|s| s.try_add(&v.scale(&G::from_int(c))))
            .and_then(|s| s.try_add(&l.mul(&v).scale(&G::from_int(d))))
            .unwrap()
    })
}

fn affine() -> impl Strategy<Value = ParamScalar> {
    (-4i64..=4, -2i64..=2, -2i64..=2).prop_map(|(a, b, c)| ParamScalar::from_affine(&AffineExp::new(qi(b), qi(c), qi(a))))
}

/// A gamma-free rational function with an affine denominator and a Gaussian
/// constant factor.
fn rational() -> impl Strategy<Value = ParamScalar> {
    (poly(), affine(), -3i64..=3, 1i64..=3).prop_filter_map("zero denominator", |(a, b, re, im)| {
        a.div(&b).ok().map(|x| x.scale(&G::new(qi(re), qi(im))))
    })
}

/// Products of Gamma powers with shifted affine arguments.
fn with_gammas() -> impl Strategy<Value = ParamScalar> {
    (rational(), proptest::collection::vec((0i64..=1, 0i64..=1, -3i64..=3, 1i64..=2, any::<bool>()), 0..3)).prop_map(|(r, gs)| {
        gs.into_iter().fold(r, |acc, (l, v, c, den, up)| {
            let l = if l == 0 && v == 0 { 1 } else { l };
            let arg = AffineExp::new(qi(l), qi(v), q(c, den));
            acc.mul(&if up { ParamScalar::gamma(arg) } else { ParamScalar::inv_gamma(arg) })
        })
    })
}

fn add(a: &ParamScalar, b: &ParamScalar) -> ParamScalar {
    a.try_add(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn addition_is_associative_and_commutative(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert!(add(&a, &a.neg()).is_zero());
    }

    #[test]
    fn multiplication_distributes(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(a.mul(&add(&b, &c)), add(&a.mul(&b), &a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn nonzero_elements_are_invertible(a in rational()) {
        prop_assume!(!a.is_zero());
        prop_assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn normalization_is_idempotent_and_multiplicative(a in with_gammas(), b in with_gammas()) {
        let na = gamma_normalize(&a);
        prop_assert_eq!(gamma_normalize(&na), na.clone());
        prop_assert_eq!(gamma_normalize(&a.mul(&b)), gamma_normalize(&na.mul(&gamma_normalize(&b))));
    }

    #[test]
    fn gamma_shift_matches_functional_equation(c in -4i64..=4, den in 1i64..=3) {
        let x = AffineExp::new(qi(1), qi(0), q(c, den));
        let x1 = AffineExp::new(qi(1), qi(0), q(c, den) + qi(1));
        let lhs = ParamScalar::gamma(x1);
        let rhs = ParamScalar::from_affine(&x).mul(&ParamScalar::gamma(x));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pochhammer_evaluates_to_the_product(num in -20i64..=20, den in 1i64..=7, n in 0u32..=8) {
        let x = G::from_frac(num, den);
        let got = pochhammer(&ParamScalar::lambda(), n).evaluate(&x, &G::zero()).unwrap();
        let want = (0..n).fold(G::one(), |acc, k| &acc * &(&x + &G::from_int(k as i64)));
        prop_assert_eq!(got, want);
    }
}
