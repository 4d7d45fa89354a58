use proptest::prelude::*;
use spinbranch::kernelcalc::{
    expected_degree, make_family, mult_xn, mult_zeta, support, symmetry_checks, FamilyId, FamilyParams, KernelExpr, ParamKind,
    ALL_FAMILIES,
};
use spinbranch::paramfield::{q, GaussianRational as G, ParamScalar, Substitution};

fn params_for(id: FamilyId, k: u32) -> FamilyParams {
    match id.param_kind() {
        ParamKind::Generic => FamilyParams::Generic,
        ParamKind::Index => FamilyParams::Index(k),
        ParamKind::Point => match id {
            FamilyId::AAMinus | FamilyId::SlashAAMinus => FamilyParams::Point { i: k + 1, j: k % 2 },
            _ => FamilyParams::Point { i: k, j: k % 2 },
        },
    }
}

const SCALAR: [FamilyId; 8] = [
    FamilyId::APlus,
    FamilyId::AMinus,
    FamilyId::BPlus,
    FamilyId::BMinus,
    FamilyId::CPlus,
    FamilyId::CMinus,
    FamilyId::AAPlus,
    FamilyId::AAMinus,
];

fn scalar_kernel() -> impl Strategy<Value = (usize, FamilyId, u32)> {
    (2usize..=5, 0usize..SCALAR.len(), 0u32..=3).prop_map(|(n, f, k)| (n, SCALAR[f], k))
}

fn constant() -> impl Strategy<Value = ParamScalar> {
    (-5i64..=5, -3i64..=3).prop_map(|(a, b)| ParamScalar::constant(&G::from_int(a) + &G::from_int(b).mul_i()))
}

fn build(n: usize, id: FamilyId, k: u32) -> KernelExpr {
    make_family(id, n, params_for(id, k)).unwrap()
}

fn rank(k: &KernelExpr) -> u8 {
    support(k) as u8
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multiplications_are_linear((n, f1, k1) in scalar_kernel(), f2 in 0usize..SCALAR.len(), k2 in 0u32..=3, a in constant(), b in constant()) {
        let x = build(n, f1, k1);
        let y = build(n, SCALAR[f2], k2);
        let combo = x.scale(&a).add(&y.scale(&b)).unwrap();
        let lin = mult_xn(&x).unwrap().scale(&a).add(&mult_xn(&y).unwrap().scale(&b)).unwrap();
        prop_assert!(mult_xn(&combo).unwrap().same_kernel(&lin).unwrap());
        let lin = mult_zeta(&x).unwrap().scale(&a).add(&mult_zeta(&y).unwrap().scale(&b)).unwrap();
        prop_assert!(mult_zeta(&combo).unwrap().same_kernel(&lin).unwrap());
    }

    #[test]
    fn zeta_twice_is_minus_norm_squared((n, f, k) in scalar_kernel()) {
        let x = build(n, f, k);
        let twice = mult_zeta(&mult_zeta(&x).unwrap()).unwrap();
        let want = x
            .mult_norm_sq()
            .unwrap()
            .tensor_identity()
            .unwrap()
            .substitute(&Substitution::shift(q(-1, 1), q(1, 1)))
            .unwrap()
            .neg();
        prop_assert!(twice.same_kernel(&want).unwrap());
    }

    #[test]
    fn expansion_is_idempotent_and_keeps_degree((n, f, k) in scalar_kernel()) {
        let x = build(n, f, k);
        let e = x.expand_against_delta().unwrap();
        let again = e.expand_against_delta().unwrap();
        prop_assert_eq!(again.raw_terms(), e.raw_terms());
        if !x.is_zero() {
            prop_assert_eq!(e.degrees(), x.degrees());
        }
    }

    #[test]
    fn coordinate_multiplication_does_not_grow_support((n, f, k) in scalar_kernel()) {
        let x = build(n, f, k);
        for t in x.terms() {
            let mut single = KernelExpr::zero(n, x.kind());
            single.add_term(t.spin, t.shape.clone(), t.coeff.clone()).unwrap();
            prop_assert!(rank(&mult_xn(&single).unwrap()) <= rank(&single));
        }
    }
}

#[test]
fn families_are_equivariant_and_homogeneous_on_their_lines() {
    for n in 2..=6 {
        for id in ALL_FAMILIES {
            for k in 0..=3u32 {
                let params = params_for(id, k);
                let Ok(x) = make_family(id, n, params) else { continue };
                let rep = symmetry_checks(&x, id.is_even()).unwrap_or_else(|e| panic!("{id} n={n} k={k}: {e}"));
                if let Some(d) = rep.degree {
                    assert_eq!(d, expected_degree(id, n, params).unwrap(), "{id} n={n} k={k}");
                }
                if id.param_kind() == ParamKind::Generic {
                    break;
                }
            }
        }
    }
}
