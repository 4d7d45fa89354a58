//! Gegenbauer polynomials `C_n^λ(z)` with a formal or rational parameter.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::MonoError;
use crate::paramfield::{pochhammer, GaussianRational, ParamScalar, Q};

/// `C_n^λ(z)` as its coefficient list, `coeffs[t]` multiplying `z^t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GegenbauerPoly {
    pub degree: usize,
    pub coeffs: Vec<ParamScalar>,
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// The explicit sum `Σ_m (-1)^m (λ)_{n-m} / (m!(n-2m)!) (2z)^{n-2m}`.
pub fn gegenbauer(deg: usize, lam: &ParamScalar) -> GegenbauerPoly {
    let mut coeffs = vec![ParamScalar::zero(); deg + 1];
    for m in 0..=deg / 2 {
        let p = deg - 2 * m;
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let k = ParamScalar::frac(sign * (1i64 << p), factorial(m) * factorial(p));
        coeffs[p] = pochhammer(lam, (deg - m) as u32).mul(&k);
    }
    GegenbauerPoly { degree: deg, coeffs }
}

/// Coefficients of `C_n^μ` for a rational parameter, computed directly in ℚ.
pub fn gegenbauer_q(deg: usize, mu: &Q) -> Vec<Q> {
    let mut coeffs = vec![Q::zero(); deg + 1];
    for m in 0..=deg / 2 {
        let p = deg - 2 * m;
        let mut poch = Q::one();
        for t in 0..(deg - m) {
            poch *= mu + Q::from_integer((t as i64).into());
        }
        let mut c = poch * Q::from_integer((1i64 << p).into()) / Q::from_integer((factorial(m) * factorial(p)).into());
        if m % 2 == 1 {
            c = -c;
        }
        coeffs[p] = c;
    }
    coeffs
}

/// `C_n^μ(1) = (2μ)_n / n!`.
pub fn gegenbauer_at_one(deg: usize, mu: &Q) -> Q {
    gegenbauer_q(deg, mu).into_iter().fold(Q::zero(), |a, b| a + b)
}

type ZPoly = Vec<ParamScalar>;

fn zp_trim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn zp_add(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = ParamScalar::zero();
    zp_trim((0..n).map(|k| a.get(k).unwrap_or(&z) + b.get(k).unwrap_or(&z)).collect())
}

fn zp_scale(a: &ZPoly, k: &ParamScalar) -> ZPoly {
    zp_trim(a.iter().map(|c| c.mul(k)).collect())
}

fn zp_mul_z(a: &ZPoly) -> ZPoly {
    if a.is_empty() {
        return vec![];
    }
    let mut out = vec![ParamScalar::zero()];
    out.extend(a.iter().cloned());
    out
}

fn zp_one_minus_z2(a: &ZPoly) -> ZPoly {
    let z2 = zp_mul_z(&zp_mul_z(a));
    zp_add(a, &zp_scale(&z2, &ParamScalar::from_int(-1)))
}

fn zp_deriv(a: &ZPoly) -> ZPoly {
    zp_trim(a.iter().enumerate().skip(1).map(|(k, c)| c.mul(&ParamScalar::from_int(k as i64))).collect())
}

fn zp_render(a: &ZPoly) -> String {
    if a.is_empty() {
        return "0".into();
    }
    a.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("({c})z^{k}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Outcome of one identity at one degree.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub degree: usize,
    pub pass: bool,
    /// The nonzero difference polynomial, when the identity fails.
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GegenbauerReport {
    pub max_deg: usize,
    pub checks: Vec<IdentityCheck>,
}

impl GegenbauerReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Names of the checked identities, in report order.
pub const GEGENBAUER_IDENTITIES: [&str; 9] = ["G1", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "ODE"];

/// Checks the Gegenbauer identities (G1), (G3)–(G9) and the differential
/// equation with a formal parameter λ for every degree `n ≤ max_deg`.
pub fn gegenbauer_identity_report(max_deg: usize) -> GegenbauerReport {
    let lam = ParamScalar::lambda();
    let mut cache: BTreeMap<(i64, i64), ZPoly> = BTreeMap::new();
    let mut c = |n: i64, shift: i64| -> ZPoly {
        if n < 0 {
            return vec![];
        }
        cache
            .entry((n, shift))
            .or_insert_with(|| {
                let l = &ParamScalar::lambda() + &ParamScalar::from_int(shift);
                zp_trim(gegenbauer(n as usize, &l).coeffs)
            })
            .clone()
    };
    let k = |v: i64| ParamScalar::from_int(v);
    let two_l = lam.scale(&GaussianRational::from_int(2));
    let l_plus = |s: i64| &lam + &k(s);
    let mut checks = Vec::new();
    for deg in 0..=max_deg {
        let n = deg as i64;
        let nn = k(n);
        let four_ll1 = two_l.mul(&l_plus(1)).scale(&GaussianRational::from_int(2));
        let two_l_2l1 = two_l.mul(&(&two_l + &k(1)));
        let residuals: Vec<ZPoly> = vec![
            // G1
            zp_add(&zp_deriv(&c(n, 0)), &zp_scale(&c(n - 1, 1), &two_l.neg())),
            // G3
            {
                let a = zp_scale(&zp_mul_z(&c(n, 1)), &two_l);
                let b = zp_scale(&c(n + 1, 0), &k(-(n + 1)));
                let d = zp_scale(&c(n - 1, 1), &two_l.neg());
                zp_add(&zp_add(&a, &b), &d)
            },
            // G4
            {
                let a = zp_scale(&zp_one_minus_z2(&c(n - 2, 2)), &four_ll1);
                let b = zp_scale(&c(n, 0), &(&two_l + &nn).mul(&(&(&two_l + &nn) + &k(1))));
                let d = zp_scale(&c(n, 1), &two_l_2l1.neg());
                zp_add(&zp_add(&a, &b), &d)
            },
            // G5
            {
                let a = zp_scale(&zp_one_minus_z2(&c(n - 2, 2)), &four_ll1);
                let b = zp_scale(&zp_mul_z(&c(n - 1, 1)), &two_l_2l1.neg());
                let d = zp_scale(&c(n, 0), &nn.mul(&(&two_l + &nn)));
                zp_add(&zp_add(&a, &b), &d)
            },
            // G6
            {
                let a = zp_scale(&c(n, 1), &two_l);
                let b = zp_scale(&c(n, 0), &(&nn + &two_l).neg());
                let d = zp_scale(&zp_mul_z(&c(n - 1, 1)), &two_l.neg());
                zp_add(&zp_add(&a, &b), &d)
            },
            // G7
            {
                let a = zp_scale(&zp_one_minus_z2(&c(n - 1, 1)), &two_l);
                let b = zp_scale(&zp_mul_z(&c(n, 0)), &(&nn + &two_l).neg());
                let d = zp_scale(&c(n + 1, 0), &k(n + 1));
                zp_add(&zp_add(&a, &b), &d)
            },
            // G8
            {
                let a = zp_scale(&c(n + 1, 0), &l_plus(-1));
                let b = zp_scale(&c(n + 1, -1), &(&nn + &lam).neg());
                let d = zp_scale(&c(n - 1, 0), &l_plus(-1).neg());
                zp_add(&zp_add(&a, &b), &d)
            },
            // G9
            {
                let a = zp_scale(&zp_one_minus_z2(&c(n - 2, 2)), &four_ll1);
                let b = zp_scale(&c(n - 2, 1), &two_l_2l1.neg());
                let d = zp_scale(&c(n, 0), &k(n * (n - 1)));
                zp_add(&zp_add(&a, &b), &d)
            },
            // Gegenbauer differential equation
            {
                let u = c(n, 0);
                let a = zp_one_minus_z2(&zp_deriv(&zp_deriv(&u)));
                let b = zp_scale(&zp_mul_z(&zp_deriv(&u)), &(&two_l + &k(1)).neg());
                let d = zp_scale(&u, &nn.mul(&(&nn + &two_l)));
                zp_add(&zp_add(&a, &b), &d)
            },
        ];
        for (name, r) in GEGENBAUER_IDENTITIES.iter().zip(residuals) {
            let pass = r.is_empty();
            checks.push(IdentityCheck {
                identity: name.to_string(),
                degree: deg,
                pass,
                residual: if pass { None } else { Some(zp_render(&r)) },
            });
        }
    }
    GegenbauerReport { max_deg, checks }
}

/// Like [`gegenbauer_identity_report`], but fails on the first broken identity.
pub fn verify_gegenbauer_identities(max_deg: usize) -> Result<GegenbauerReport, MonoError> {
    let report = gegenbauer_identity_report(max_deg);
    if let Some(bad) = report.checks.iter().find(|c| !c.pass) {
        return Err(MonoError::IdentityFailure {
            identity: format!("{} at degree {}", bad.identity, bad.degree),
            residual: bad.residual.clone().unwrap_or_default(),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paramfield::q;

    #[test]
    fn low_degrees() {
        let l = ParamScalar::lambda();
        assert_eq!(gegenbauer(0, &l).coeffs, vec![ParamScalar::one()]);
        let c1 = gegenbauer(1, &l);
        assert!(c1.coeffs[0].is_zero());
        assert_eq!(c1.coeffs[1], l.scale(&GaussianRational::from_int(2)));
        let c2 = gegenbauer(2, &l);
        assert_eq!(c2.coeffs[0], l.neg());
        assert_eq!(c2.coeffs[2], l.mul(&(&l + &ParamScalar::one())).scale(&GaussianRational::from_int(2)));
    }

    #[test]
    fn rational_version_agrees() {
        let mu = q(5, 2);
        let formal = gegenbauer(5, &ParamScalar::from_q(mu.clone()));
        let fast = gegenbauer_q(5, &mu);
        for (a, b) in formal.coeffs.iter().zip(&fast) {
            assert_eq!(a.constant_value().unwrap(), GaussianRational::real(b.clone()));
        }
        // C_3^{1/2}(1) = 1 (Legendre)
        assert_eq!(gegenbauer_at_one(3, &q(1, 2)), q(1, 1));
    }

    #[test]
    fn identities_hold_to_degree_six() {
        assert!(verify_gegenbauer_identities(6).is_ok());
    }
}
