//! Equivariance, parity and homogeneity tests for kernels.

use serde::Serialize;

use super::expr::{Multi, Shape};
use super::{KernelError, KernelExpr, ValueKind};
use crate::cliffspin::{zeta_generator, UnitOp, Variant};
use crate::paramfield::{AffineExp, GaussianRational, ParamScalar};

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    /// Number of rotation generators `L_ab` tested.
    pub generators: usize,
    /// The common homogeneity degree, `None` for the zero kernel.
    pub degree: Option<AffineExp>,
    pub even: bool,
}

fn fail(term: String, generator: &str) -> KernelError {
    KernelError::SymmetryFailure { term, generator: generator.to_string() }
}

/// `L_ab = x_a ∂_b − x_b ∂_a` for `a < b < n` (1-based), applied termwise.
fn rotate(k: &KernelExpr, a: usize, b: usize) -> Result<KernelExpr, KernelError> {
    let mut out = KernelExpr::zero(k.n(), k.kind());
    for (key, c) in k.raw_terms() {
        let mut push = |shape: Shape, f: i64| -> Result<(), KernelError> {
            out.add_term(key.spin, shape, c.scale(&GaussianRational::from_int(f)))
        };
        match &key.shape {
            Shape::Point { multi } => {
                // x_i ∂^γ δ = −γ_i ∂^{γ−e_i} δ
                let (ea, eb) = (multi[a - 1] as i64, multi[b - 1] as i64);
                if ea > 0 {
                    let mut m: Multi = *multi;
                    m[a - 1] -= 1;
                    m[b - 1] += 1;
                    push(Shape::Point { multi: m }, -ea)?;
                }
                if eb > 0 {
                    let mut m: Multi = *multi;
                    m[b - 1] -= 1;
                    m[a - 1] += 1;
                    push(Shape::Point { multi: m }, eb)?;
                }
            }
            s => {
                let mono = *s.mono().expect("monomial shape");
                let (ea, eb) = (mono[a - 1] as i64, mono[b - 1] as i64);
                if eb > 0 {
                    let mut m = mono;
                    m[b - 1] -= 1;
                    m[a - 1] += 1;
                    push(s.with_mono(m), eb)?;
                }
                if ea > 0 {
                    let mut m = mono;
                    m[a - 1] -= 1;
                    m[b - 1] += 1;
                    push(s.with_mono(m), -ea)?;
                }
            }
        }
    }
    Ok(out)
}

fn bivector(dim: usize, a: usize, b: usize) -> Result<UnitOp, KernelError> {
    let za = zeta_generator(dim, Variant::Plus, a).map_err(|e| KernelError::DimensionMismatch(e.to_string()))?;
    let zb = zeta_generator(dim, Variant::Plus, b).map_err(|e| KernelError::DimensionMismatch(e.to_string()))?;
    Ok(za.compose(&zb))
}

/// Check that `k` is `SO(n−1)`-equivariant (with the spin action on matrix
/// values), that every term has the given parity, and that all terms share
/// one homogeneity degree.
pub fn symmetry_checks(k: &KernelExpr, even: bool) -> Result<SymmetryReport, KernelError> {
    let n = k.n();
    for t in k.terms() {
        if t.shape.is_odd() == even {
            return Err(fail(t.shape.variant_name().to_string(), if even { "even parity" } else { "odd parity" }));
        }
    }
    let degs = k.degrees();
    if degs.len() > 1 {
        return Err(fail(format!("{degs:?}"), "homogeneity"));
    }
    let half = ParamScalar::frac(1, 2);
    let mut generators = 0;
    for b in 2..n {
        for a in 1..b {
            let lhs = rotate(k, a, b)?;
            let rhs = match k.kind() {
                ValueKind::Scalar => KernelExpr::zero(n, ValueKind::Scalar),
                ValueKind::End => {
                    let u = bivector(n, a, b)?;
                    k.left_unit(&u)?.sub(&k.right_unit(&u)?)?.scale(&half)
                }
                ValueKind::Hom => {
                    let row = bivector(n - 1, a, b)?;
                    let col = bivector(n, a, b)?;
                    k.left_unit(&row)?.sub(&k.right_unit(&col)?)?.scale(&half)
                }
            };
            let diff = lhs.kernel_difference(&rhs)?;
            if !diff.is_zero() {
                let first = diff.terms().next().map(|t| t.shape.variant_name().to_string()).unwrap_or_default();
                return Err(fail(first, &format!("L_{a}{b}")));
            }
            generators += 1;
        }
    }
    Ok(SymmetryReport { generators, degree: degs.into_iter().next(), even })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernelcalc::{make_family, unit_multi, FamilyId, FamilyParams, KMAX};

    #[test]
    fn partial_derivative_of_delta_is_not_invariant() {
        let mut k = KernelExpr::zero(3, ValueKind::Scalar);
        k.add_term((0, 0), Shape::Point { multi: unit_multi(1) }, ParamScalar::one()).unwrap();
        let err = symmetry_checks(&k, false).unwrap_err();
        assert!(matches!(err, KernelError::SymmetryFailure { .. }));
    }

    #[test]
    fn clifford_constant_is_not_equivariant() {
        let mut k = KernelExpr::zero(3, ValueKind::End);
        let u = zeta_generator(3, Variant::Plus, 1).unwrap();
        for (c, &r) in u.target.iter().enumerate() {
            let ph = GaussianRational::i().pow(u.phase[c] as u32);
            k.add_term((r, c), Shape::Point { multi: [0; KMAX] }, ParamScalar::constant(ph)).unwrap();
        }
        assert!(symmetry_checks(&k, true).is_err());
    }

    #[test]
    fn spinor_b_family_is_equivariant() {
        let k = make_family(FamilyId::SlashBPlus, 5, FamilyParams::Index(2)).unwrap();
        let rep = symmetry_checks(&k, true).unwrap();
        assert_eq!(rep.generators, 6);
        assert!(symmetry_checks(&k, false).is_err());
    }
}
