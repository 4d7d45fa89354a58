//! Catalogue of translation identities between kernel families.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use super::families::*;
use super::{support, KernelError, KernelExpr, Support};
use crate::paramfield::{gamma_normalize, q, qi, AffineExp, ParamScalar, Substitution};

/// The six groups of identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IdentityId {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [IdentityId::A, IdentityId::B, IdentityId::C, IdentityId::D, IdentityId::E, IdentityId::F];

    pub fn letter(&self) -> char {
        match self {
            IdentityId::A => 'a',
            IdentityId::B => 'b',
            IdentityId::C => 'c',
            IdentityId::D => 'd',
            IdentityId::E => 'e',
            IdentityId::F => 'f',
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for IdentityId {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').to_ascii_lowercase();
        IdentityId::ALL
            .iter()
            .copied()
            .find(|i| t.len() == 1 && t.starts_with(i.letter()))
            .ok_or_else(|| KernelError::UnknownIdentity(s.to_string()))
    }
}

/// One verified equation.
#[derive(Clone, Debug, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub n: usize,
    pub index: u32,
    pub passed: bool,
    pub checks: Vec<SubCheck>,
}

fn norm_constraints(v: &[AffineExp]) -> Vec<AffineExp> {
    let mut out: Vec<AffineExp> = v
        .iter()
        .filter(|a| !(a.is_constant() && a.c.is_zero()))
        .map(|a| {
            let lead = if !a.lam.is_zero() { a.lam.clone() } else { a.nu.clone() };
            if lead.is_zero() {
                a.clone()
            } else {
                a.scale(&(qi(1) / lead))
            }
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn kernel_check(name: String, lhs: &KernelExpr, rhs: &KernelExpr) -> Result<SubCheck, KernelError> {
    let diff = lhs.kernel_difference(rhs)?;
    let same_lines = norm_constraints(&lhs.meta.constraints) == norm_constraints(&rhs.meta.constraints);
    let passed = diff.is_zero() && same_lines;
    let detail = if passed {
        None
    } else if !diff.is_zero() {
        let s = diff.to_string();
        Some(format!("difference: {}", s.chars().take(400).collect::<String>()))
    } else {
        Some("constraint lines differ".to_string())
    };
    Ok(SubCheck { name, passed, detail })
}

fn scalar_check(name: String, got: &ParamScalar, want: &ParamScalar) -> Result<SubCheck, KernelError> {
    let passed = if want.is_zero() {
        got.is_zero()
    } else {
        gamma_normalize(&got.div(want).map_err(perr)?).is_one()
    };
    let detail = (!passed).then(|| format!("got {got}, expected {want}"));
    Ok(SubCheck { name, passed, detail })
}

fn flag(name: String, passed: bool, detail: impl FnOnce() -> String) -> SubCheck {
    SubCheck { name, passed, detail: (!passed).then(detail) }
}

fn perr(e: crate::paramfield::ParamError) -> KernelError {
    KernelError::Param(e.to_string())
}

fn fam(id: FamilyId, n: usize, k: u32) -> Result<KernelExpr, KernelError> {
    make_family(id, n, FamilyParams::Index(k))
}

fn line_sub(id: FamilyId, k: u32) -> Substitution {
    family_line(id, k).expect("index family").substitution()
}

fn affine(l: (i64, i64), nu: (i64, i64), c: (i64, i64)) -> ParamScalar {
    ParamScalar::from_affine(&AffineExp::new(q(l.0, l.1), q(nu.0, nu.1), q(c.0, c.1)))
}

/// `h · c_target / c_source(shifted)` restricted to the target line, compared with `want`.
fn chain_check(
    name: String,
    h: &ParamScalar,
    target: (FamilyId, u32),
    source: (FamilyId, u32),
    shift: &Substitution,
    want: &ParamScalar,
    n: usize,
) -> Result<SubCheck, KernelError> {
    let ct = residue_constant(target.0, n, target.1)?;
    let cs = residue_constant(source.0, n, source.1)?.substitute(shift).map_err(perr)?;
    let x = h.mul(&ct).div(&cs).map_err(perr)?;
    let s = line_sub(target.0, target.1);
    let x = x.substitute(&s).map_err(perr)?;
    let w = want.substitute(&s).map_err(perr)?;
    scalar_check(name, &x, &w)
}

fn xn_shift() -> Substitution {
    Substitution::shift(qi(-1), qi(0))
}

fn zeta_shift() -> Substitution {
    Substitution::shift(q(-1, 2), q(1, 2))
}

fn check_a(n: usize, k: u32) -> Result<Vec<SubCheck>, KernelError> {
    let mut out = Vec::new();
    let want = ParamScalar::from_int(2 * (k as i64 + 1)).mul(&affine((0, 1), (1, 1), (k as i64 + 1, 1)));
    let rhs = fam(FamilyId::BMinus, n, k)?.scale(&want.substitute(&line_sub(FamilyId::BMinus, k)).map_err(perr)?);
    let lhs = mult_xn(&fam(FamilyId::BPlus, n, k + 1)?)?;
    out.push(kernel_check(format!("x_n B+[{}] = 2(k+1)(nu+k+1) B-[{k}]", k + 1), &lhs, &rhs)?);
    let lhs_x = mult_xn(&make_family_form(FamilyId::BPlus, n, FamilyParams::Index(k + 1), DisplayForm::Expanded)?)?;
    let rhs_x = make_family_form(FamilyId::BMinus, n, FamilyParams::Index(k), DisplayForm::Expanded)?
        .scale(&want.substitute(&line_sub(FamilyId::BMinus, k)).map_err(perr)?);
    out.push(kernel_check(format!("expanded form: x_n B+[{}] = 2(k+1)(nu+k+1) B-[{k}]", k + 1), &lhs_x, &rhs_x)?);
    out.push(chain_check(
        "constant chain for B".into(),
        &xn_minus_factor(),
        (FamilyId::BMinus, k),
        (FamilyId::BPlus, k + 1),
        &xn_shift(),
        &want,
        n,
    )?);
    for id in [FamilyId::BPlus, FamilyId::BMinus] {
        let c = fam(id, n, k)?;
        let x = make_family_form(id, n, FamilyParams::Index(k), DisplayForm::Expanded)?;
        out.push(kernel_check(format!("{id}[{k}] compact = expanded"), &c, &x)?);
    }
    let ap = make_family(FamilyId::APlus, n, FamilyParams::Generic)?;
    let am = make_family(FamilyId::AMinus, n, FamilyParams::Generic)?;
    out.push(kernel_check("x_n A+ = h A-".into(), &mult_xn(&ap)?, &am.scale(&xn_minus_factor()))?);
    out.push(kernel_check("x_n A- = A+".into(), &mult_xn(&am)?, &ap)?);
    Ok(out)
}

fn check_b(n: usize, l: u32) -> Result<Vec<SubCheck>, KernelError> {
    let want = ParamScalar::from_int(-4).mul(&affine((0, 1), (1, 1), (-(l as i64) - 1, 1)));
    let lhs = mult_xn(&fam(FamilyId::CPlus, n, l + 1)?)?;
    let rhs = fam(FamilyId::CMinus, n, l)?.scale(&want);
    Ok(vec![
        kernel_check(format!("x_n C+[{}] = -4(nu-l-1) C-[{l}]", l + 1), &lhs, &rhs)?,
        chain_check(
            "constant chain for C".into(),
            &xn_minus_factor(),
            (FamilyId::CMinus, l),
            (FamilyId::CPlus, l + 1),
            &xn_shift(),
            &want,
            n,
        )?,
    ])
}

fn check_c(n: usize, l: u32) -> Result<Vec<SubCheck>, KernelError> {
    let mut out = Vec::new();
    // in the target parameters (λ+1, ν) the factor −2(λ_src+ν+½) reads −2(λ+ν−½)
    let s = ParamScalar::from_int(-2).mul(&affine((1, 1), (1, 1), (-1, 2)));
    let lhs = mult_xn(&fam(FamilyId::CPlus, n, l)?)?;
    if l == 0 {
        out.push(flag("x_n C+[0] = 0".into(), lhs.is_zero(), || lhs.to_string()));
    } else {
        let line = line_sub(FamilyId::CMinus, l - 1);
        let rhs = fam(FamilyId::CMinus, n, l - 1)?.scale(&s.substitute(&line).map_err(perr)?);
        out.push(kernel_check(format!("x_n C+[{l}] = -2(lambda+nu+1/2) C-[{}]", l - 1), &lhs, &rhs)?);
        out.push(chain_check(
            "constant chain for x_n C+".into(),
            &xn_minus_factor(),
            (FamilyId::CMinus, l - 1),
            (FamilyId::CPlus, l),
            &xn_shift(),
            &s,
            n,
        )?);
    }
    let lhs = mult_xn(&fam(FamilyId::CMinus, n, l)?)?;
    let rhs = fam(FamilyId::CPlus, n, l)?.neg();
    out.push(kernel_check(format!("x_n C-[{l}] = -C+[{l}]"), &lhs, &rhs)?);
    out.push(chain_check(
        "constant chain for x_n C-".into(),
        &ParamScalar::one(),
        (FamilyId::CPlus, l),
        (FamilyId::CMinus, l),
        &xn_shift(),
        &ParamScalar::from_int(-1),
        n,
    )?);
    Ok(out)
}

fn point(id: FamilyId, n: usize, i: u32, j: u32) -> Result<KernelExpr, KernelError> {
    make_family(id, n, FamilyParams::Point { i, j })
}

fn point_sub(id: FamilyId, n: usize, i: u32, j: u32) -> Result<Substitution, KernelError> {
    let (l, v) = family_point(id, n, i, j)?;
    Ok(Substitution { lam: AffineExp::constant(l), nu: AffineExp::constant(v) })
}

fn structural(id: FamilyId, n: usize, i: u32, j: u32, k: &KernelExpr, out: &mut Vec<SubCheck>) -> Result<(), KernelError> {
    let deg = expected_degree(id, n, FamilyParams::Point { i, j })?;
    let degs = k.degrees();
    out.push(flag(format!("{id}({i},{j}) homogeneous of the A degree"), degs == vec![deg.clone()], || {
        format!("degrees {degs:?}, expected {deg:?}")
    }));
    let want = if n.is_multiple_of(2) { Support::Full } else { Support::Hyperplane };
    let got = support(k);
    out.push(flag(format!("{id}({i},{j}) support"), got == want, || format!("{got} instead of {want}")));
    Ok(())
}

fn check_d(n: usize, i: u32) -> Result<Vec<SubCheck>, KernelError> {
    let mut out = Vec::new();
    let gam = |s: (i64, i64)| ParamScalar::gamma(AffineExp::new(q(1, 2), q(-1, 2), q(s.0, 2 * s.1)));
    for j in 0..=i {
        let even = (i - j).is_multiple_of(2);
        let (aa, base, g) =
            if even { (FamilyId::AAPlus, FamilyId::APlus, gam((1, 2))) } else { (FamilyId::AAMinus, FamilyId::AMinus, gam((3, 2))) };
        let k = point(aa, n, i, j)?;
        structural(aa, n, i, j, &k, &mut out)?;
        let ps = point_sub(aa, n, i, j)?;
        let smooth = make_family(base, n, FamilyParams::Generic)?.scale(&g).substitute(&ps)?;
        if n % 2 == 1 {
            out.push(flag(format!("{aa}({i},{j}): renormalized A vanishes at the point"), smooth.is_zero(), || {
                smooth.to_string()
            }));
            let nn = n as u32;
            let (bid, kk) = if even { (FamilyId::BPlus, (i + j + nn - 1) / 2) } else { (FamilyId::BMinus, (nn + i + j - 2) / 2) };
            let c = residue_constant(bid, n, kk)?;
            let gl = g.substitute(&line_sub(bid, kk)).map_err(perr)?;
            let res = fam(bid, n, kk)?.scale(&gl.mul(&c)).substitute(&ps)?;
            out.push(kernel_check(format!("{aa}({i},{j}) = Gamma * residue via {bid}[{kk}]"), &k, &res)?);
        } else {
            out.push(kernel_check(format!("{aa}({i},{j}) = renormalized A at the point"), &k, &smooth)?);
        }
        if !even {
            let (lam, nu) = family_point(aa, n, i, j)?;
            let f = (lam + nu - q(1, 2)) / qi(2);
            let lhs = mult_xn(&point(FamilyId::AAPlus, n, i + 1, j)?)?;
            let rhs = k.scale(&ParamScalar::from_q(f));
            out.push(kernel_check(format!("x_n AA+({},{j}) = (lambda+nu-1/2)/2 AA-({i},{j})", i + 1), &lhs, &rhs)?);
        }
        let (sid, src) = if even { (FamilyId::SlashAAPlus, FamilyId::AAMinus) } else { (FamilyId::SlashAAMinus, FamilyId::AAPlus) };
        let s = point(sid, n, i, j)?;
        structural(sid, n, i, j, &s, &mut out)?;
        let z = mult_zeta(&point(src, n, i + 1, j)?)?;
        out.push(kernel_check(format!("{sid}({i},{j}) = zeta {src}({},{j})", i + 1), &s, &z)?);
    }
    Ok(out)
}

fn check_e(n: usize, t: u32) -> Result<Vec<SubCheck>, KernelError> {
    let mut out = Vec::new();
    let sh = zeta_shift();
    let at = |id, k| fam(id, n, k);
    let hs = slash_minus_factor();
    let one = ParamScalar::one();
    let cases: [(FamilyId, u32, FamilyId, u32, ParamScalar, ParamScalar, &str); 4] = [
        (FamilyId::BPlus, t, FamilyId::SlashBMinus, t, hs.clone(), hs.clone(), "(lambda-nu-1/2)/2"),
        (FamilyId::BMinus, t, FamilyId::SlashBPlus, t, one.clone(), one.clone(), "1"),
        (FamilyId::CPlus, t + 1, FamilyId::SlashCMinus, t, ParamScalar::from_int(-2), hs.clone(), "-2"),
        (FamilyId::CMinus, t, FamilyId::SlashCPlus, t, ParamScalar::from_int(-1), one.clone(), "-1"),
    ];
    for (src, ks, tgt, kt, factor, h, label) in cases {
        let lhs = mult_zeta(&at(src, ks)?)?;
        let f = factor.substitute(&line_sub(tgt, kt)).map_err(perr)?;
        let rhs = at(tgt, kt)?.scale(&f);
        out.push(kernel_check(format!("zeta {src}[{ks}] = {label} {tgt}[{kt}]"), &lhs, &rhs)?);
        out.push(chain_check(format!("constant chain {src}[{ks}] -> {tgt}[{kt}]"), &h, (tgt, kt), (src, ks), &sh, &factor, n)?);
    }
    let sam = make_family(FamilyId::SlashAMinus, n, FamilyParams::Generic)?;
    let ap = make_family(FamilyId::APlus, n, FamilyParams::Generic)?.tensor_identity()?.neg();
    out.push(kernel_check("zeta SA- = -A+ id".into(), &mult_zeta(&sam)?, &ap)?);
    Ok(out)
}

fn check_f(n: usize, t: u32) -> Result<Vec<SubCheck>, KernelError> {
    let mut out = Vec::new();
    for id in [FamilyId::BPlus, FamilyId::BMinus, FamilyId::CPlus, FamilyId::CMinus] {
        let k = fam(id, n, t)?;
        let vanish_xn = mult_xn(&k)?.is_zero();
        let expect_xn = t == 0 && matches!(id, FamilyId::BPlus | FamilyId::CPlus);
        out.push(flag(format!("x_n {id}[{t}] vanishes: {expect_xn}"), vanish_xn == expect_xn, || format!("got {vanish_xn}")));
        let vanish_z = mult_zeta(&k.tensor_identity()?)?.is_zero();
        let expect_z = t == 0 && id == FamilyId::CPlus;
        out.push(flag(format!("zeta {id}[{t}] vanishes: {expect_z}"), vanish_z == expect_z, || format!("got {vanish_z}")));
    }
    for id in [FamilyId::APlus, FamilyId::AMinus] {
        let k = make_family(id, n, FamilyParams::Generic)?;
        out.push(flag(format!("x_n {id} nonzero"), !mult_xn(&k)?.is_zero(), String::new));
        out.push(flag(format!("zeta {id} nonzero"), !mult_zeta(&k.tensor_identity()?)?.is_zero(), String::new));
    }
    if t == 0 {
        let b = fam(FamilyId::BPlus, n, 0)?;
        let mut want = KernelExpr::zero(n, super::ValueKind::Scalar);
        want.add_term(
            (0, 0),
            super::Shape::Boundary {
                mono: [0; super::KMAX],
                xp_exp: AffineExp::new(qi(0), qi(-2), qi(1 - n as i64)),
                delta_order: 0,
            },
            ParamScalar::inv_gamma(AffineExp::new(qi(0), qi(-1), qi(0))),
        )?;
        out.push(kernel_check("B+[0] = |x'|^(1-n-2nu) delta / Gamma(-nu)".into(), &b.with_meta("", vec![]), &want)?);
        let c = fam(FamilyId::CPlus, n, 0)?;
        let mut d = KernelExpr::zero(n, super::ValueKind::Scalar);
        d.add_term((0, 0), super::Shape::Point { multi: [0; super::KMAX] }, ParamScalar::one())?;
        out.push(kernel_check("C+[0] = delta".into(), &c.with_meta("", vec![]), &d)?);
    }
    Ok(out)
}

/// Verify one group of identities in dimension `n` at the given index.
///
/// The index is `k` for B-type statements, `ℓ` for C-type statements and the
/// lattice label `i` for the residue group `(d)`.
pub fn check_identity(id: IdentityId, n: usize, index: u32) -> Result<IdentityReport, KernelError> {
    if !(2..=super::KMAX).contains(&n) {
        return Err(KernelError::BadParams(format!("dimension n = {n} outside 2..={}", super::KMAX)));
    }
    let checks = match id {
        IdentityId::A => check_a(n, index)?,
        IdentityId::B => check_b(n, index)?,
        IdentityId::C => check_c(n, index)?,
        IdentityId::D => check_d(n, index)?,
        IdentityId::E => check_e(n, index)?,
        IdentityId::F => check_f(n, index)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(IdentityReport { identity: id, n, index, passed, checks })
}

/// For each spinor family at the given index, compare the support of the
/// kernel with that of its composition with the projection onto `S_{n−1}`.
pub fn check_projection_support(n: usize, index: u32) -> Result<Vec<SubCheck>, KernelError> {
    let mut ks = Vec::new();
    for id in [FamilyId::SlashBPlus, FamilyId::SlashBMinus, FamilyId::SlashCPlus, FamilyId::SlashCMinus] {
        ks.push(fam(id, n, index)?);
    }
    for id in [FamilyId::SlashAPlus, FamilyId::SlashAMinus] {
        ks.push(make_family(id, n, FamilyParams::Generic)?);
    }
    for j in 0..=index {
        let id = if (index - j).is_multiple_of(2) { FamilyId::SlashAAPlus } else { FamilyId::SlashAAMinus };
        ks.push(point(id, n, index, j)?);
    }
    let mut out = Vec::new();
    for k in ks {
        let p = project(&k)?;
        let (a, b) = (support(&k), support(&p));
        out.push(flag(format!("supp P {} = supp {}", k.meta.family, k.meta.family), a == b, || format!("{b} vs {a}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_identity_letters() {
        assert_eq!("(c)".parse::<IdentityId>().unwrap(), IdentityId::C);
        assert_eq!("E".parse::<IdentityId>().unwrap(), IdentityId::E);
        assert!("g".parse::<IdentityId>().is_err());
    }

    #[test]
    fn wrong_factor_is_detected() {
        let lhs = mult_xn(&fam(FamilyId::CPlus, 4, 2).unwrap()).unwrap();
        let want = ParamScalar::from_int(-4).mul(&affine((0, 1), (1, 1), (-2, 1)));
        let good = fam(FamilyId::CMinus, 4, 1).unwrap().scale(&want);
        let bad = good.scale(&ParamScalar::from_int(2));
        assert!(kernel_check("good".into(), &lhs, &good).unwrap().passed);
        assert!(!kernel_check("bad".into(), &lhs, &bad).unwrap().passed);
    }

    #[test]
    fn juhl_relation_at_small_index() {
        let r = check_identity(IdentityId::C, 3, 2).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.checks.len() >= 4);
    }
}
