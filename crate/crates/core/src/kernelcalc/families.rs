//! The explicit kernel families, their constraint lines and the residue
//! constants relating them to the meromorphic A-families.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::expr::{unit_multi, KernelExpr, Multi, Shape, ValueKind, KMAX};
use super::KernelError;
use crate::cliffspin::{spin_dim, spin_projection_P, zeta_generator, Variant};
use crate::paramfield::{pochhammer, q, qi, AffineExp, GaussianRational, ParamScalar, Substitution, Q};

type G = GaussianRational;

/// Tags of the kernel families. `Slash*` families are `End(S_n)`-valued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyId {
    APlus,
    AMinus,
    BPlus,
    BMinus,
    CPlus,
    CMinus,
    AAPlus,
    AAMinus,
    SlashAPlus,
    SlashAMinus,
    SlashBPlus,
    SlashBMinus,
    SlashCPlus,
    SlashCMinus,
    SlashAAPlus,
    SlashAAMinus,
}

pub const ALL_FAMILIES: [FamilyId; 16] = [
    FamilyId::APlus,
    FamilyId::AMinus,
    FamilyId::BPlus,
    FamilyId::BMinus,
    FamilyId::CPlus,
    FamilyId::CMinus,
    FamilyId::AAPlus,
    FamilyId::AAMinus,
    FamilyId::SlashAPlus,
    FamilyId::SlashAMinus,
    FamilyId::SlashBPlus,
    FamilyId::SlashBMinus,
    FamilyId::SlashCPlus,
    FamilyId::SlashCMinus,
    FamilyId::SlashAAPlus,
    FamilyId::SlashAAMinus,
];

impl FamilyId {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyId::APlus => "A+",
            FamilyId::AMinus => "A-",
            FamilyId::BPlus => "B+",
            FamilyId::BMinus => "B-",
            FamilyId::CPlus => "C+",
            FamilyId::CMinus => "C-",
            FamilyId::AAPlus => "AA+",
            FamilyId::AAMinus => "AA-",
            FamilyId::SlashAPlus => "SA+",
            FamilyId::SlashAMinus => "SA-",
            FamilyId::SlashBPlus => "SB+",
            FamilyId::SlashBMinus => "SB-",
            FamilyId::SlashCPlus => "SC+",
            FamilyId::SlashCMinus => "SC-",
            FamilyId::SlashAAPlus => "SAA+",
            FamilyId::SlashAAMinus => "SAA-",
        }
    }

    /// `true` for even kernels (`K(−x) = K(x)`).
    pub fn is_even(&self) -> bool {
        matches!(
            self,
            FamilyId::APlus
                | FamilyId::BPlus
                | FamilyId::CPlus
                | FamilyId::AAPlus
                | FamilyId::SlashAPlus
                | FamilyId::SlashBPlus
                | FamilyId::SlashCPlus
                | FamilyId::SlashAAPlus
        )
    }

    pub fn is_spinor(&self) -> bool {
        self.tag().starts_with('S')
    }

    /// Which parameters the family takes.
    pub fn param_kind(&self) -> ParamKind {
        match self {
            FamilyId::APlus | FamilyId::AMinus | FamilyId::SlashAPlus | FamilyId::SlashAMinus => ParamKind::Generic,
            FamilyId::AAPlus | FamilyId::AAMinus | FamilyId::SlashAAPlus | FamilyId::SlashAAMinus => ParamKind::Point,
            _ => ParamKind::Index,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl FromStr for FamilyId {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_FAMILIES
            .iter()
            .copied()
            .find(|f| f.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| KernelError::BadParams(format!("unknown family tag {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Generic,
    Index,
    Point,
}

/// Parameters of a family instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyParams {
    /// Symbolic `(λ, ν)`.
    Generic,
    /// `k` for B-families, `ℓ` for C-families.
    Index(u32),
    /// The lattice point labelled `(i, j)`.
    Point { i: u32, j: u32 },
}

/// Which of the two displayed forms of a B-family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DisplayForm {
    /// `r^b δ^{(m)}(x_n)` kept as a Layer term.
    #[default]
    Compact,
    /// The finite sum of `|x'|^c δ^{(m')}(x_n)` terms.
    Expanded,
}

/// `ρ = n/2`.
pub fn rho(n: usize) -> Q {
    q(n as i64, 2)
}

/// `ρ_H = (n−1)/2`.
pub fn rho_h(n: usize) -> Q {
    q(n as i64 - 1, 2)
}

/// A constraint line `λ + ν = −offset` (sum) or `λ − ν = −offset` (difference).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub sum: bool,
    pub offset: Q,
}

impl Line {
    /// The constraint as an affine form vanishing on the line.
    pub fn constraint(&self) -> AffineExp {
        let s = if self.sum { qi(1) } else { qi(-1) };
        AffineExp::new(qi(1), s, self.offset.clone())
    }

    /// Eliminate λ in favour of ν.
    pub fn substitution(&self) -> Substitution {
        let a = if self.sum { qi(-1) } else { qi(1) };
        Substitution::lambda_line(a, -self.offset.clone())
    }
}

fn half_odd(twice: i64) -> Q {
    q(twice, 2)
}

/// Constraint line of an index family.
pub fn family_line(id: FamilyId, index: u32) -> Option<Line> {
    let t = 2 * index as i64;
    let (sum, twice) = match id {
        FamilyId::BPlus => (true, 1),
        FamilyId::BMinus => (true, 3),
        FamilyId::CPlus => (false, 1),
        FamilyId::CMinus => (false, 3),
        FamilyId::SlashBPlus => (true, 3),
        FamilyId::SlashBMinus => (true, 1),
        FamilyId::SlashCPlus => (false, 1),
        FamilyId::SlashCMinus => (false, 3),
        _ => return None,
    };
    Some(Line { sum, offset: half_odd(twice) + qi(t) })
}

/// Coordinates `(λ, ν)` of the lattice point `(i, j)` of a point family.
pub fn family_point(id: FamilyId, n: usize, i: u32, j: u32) -> Result<(Q, Q), KernelError> {
    let parity_ok = match id {
        FamilyId::AAPlus | FamilyId::SlashAAPlus => i >= j && (i - j).is_multiple_of(2),
        FamilyId::AAMinus | FamilyId::SlashAAMinus => i > j && (i - j) % 2 == 1,
        _ => return Err(KernelError::BadParams(format!("{id} is not a point family"))),
    };
    if !parity_ok {
        return Err(KernelError::BadParams(format!("({i},{j}) is not a lattice point of {id}")));
    }
    let (i, j) = (qi(i as i64), qi(j as i64));
    let shift = if id.is_spinor() { q(1, 2) } else { qi(0) };
    Ok((-rho(n) - i - shift.clone(), -rho_h(n) - j - shift))
}

fn pi_power(n: usize) -> ParamScalar {
    ParamScalar::gamma(AffineExp::constant(q(1, 2))).pow(n as u32 - 1)
}

fn fact(m: u32) -> i64 {
    (1..=m as i64).product()
}

fn sgn(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn inv_gamma_half(lam_minus_nu_shift: Q) -> ParamScalar {
    // 1/Γ(½(λ − ν + s))
    ParamScalar::inv_gamma(AffineExp::new(q(1, 2), q(-1, 2), lam_minus_nu_shift / qi(2)))
}

fn inv_gamma_half_sum(shift: Q) -> ParamScalar {
    // 1/Γ(½(λ + ν + s))
    ParamScalar::inv_gamma(AffineExp::new(q(1, 2), q(1, 2), shift / qi(2)))
}

/// Renormalizing factor of the A-families (a product of reciprocal Gammas).
pub fn a_normalization(id: FamilyId) -> ParamScalar {
    match id {
        FamilyId::APlus => inv_gamma_half_sum(q(1, 2)).mul(&inv_gamma_half(q(1, 2))),
        FamilyId::AMinus => inv_gamma_half_sum(q(3, 2)).mul(&inv_gamma_half(q(3, 2))),
        FamilyId::SlashAPlus => inv_gamma_half_sum(q(3, 2)).mul(&inv_gamma_half(q(1, 2))),
        FamilyId::SlashAMinus => inv_gamma_half_sum(q(1, 2)).mul(&inv_gamma_half(q(3, 2))),
        _ => ParamScalar::one(),
    }
}

/// Constant `c` with `Ã = c · F` on the constraint line of the index family
/// `F`, in unsubstituted form (it may still involve ν and Gamma factors).
pub fn residue_constant(id: FamilyId, n: usize, index: u32) -> Result<ParamScalar, KernelError> {
    let k = index;
    let kf = |num: i64, den: i64| ParamScalar::frac(num, den);
    let c_tail = |shift: Q| ParamScalar::inv_gamma(AffineExp::new(qi(0), qi(1), shift)).mul(&pi_power(n));
    let two_pow = |e: u32| ParamScalar::from_int(1i64 << e);
    let out = match id {
        FamilyId::BPlus | FamilyId::SlashBMinus => kf(sgn(k) * fact(k), fact(2 * k)),
        FamilyId::BMinus | FamilyId::SlashBPlus => kf(sgn(k + 1) * fact(k), fact(2 * k + 1)),
        FamilyId::CPlus => kf(sgn(k) * fact(k), 1).mul(&c_tail(rho_h(n))).div(&two_pow(2 * k)).map_err(perr)?,
        FamilyId::CMinus => kf(sgn(k + 1) * fact(k), 1).mul(&c_tail(rho_h(n))).div(&two_pow(2 * k)).map_err(perr)?,
        FamilyId::SlashCPlus => kf(sgn(k) * fact(k), 1).mul(&c_tail(rho(n))).div(&two_pow(2 * k)).map_err(perr)?,
        FamilyId::SlashCMinus => {
            kf(sgn(k + 1) * fact(k), 1).mul(&c_tail(rho(n))).div(&two_pow(2 * k + 1)).map_err(perr)?
        }
        _ => return Err(KernelError::BadParams(format!("{id} has no residue constant"))),
    };
    Ok(out)
}

fn perr(e: crate::paramfield::ParamError) -> KernelError {
    KernelError::Param(e.to_string())
}

/// Exponent vectors `2γ` with `|γ| = j` over `x_1..x_{n-1}` together with the
/// multinomial coefficient `j!/γ!`, i.e. the expansion of `Δ_{ℝ^{n-1}}^j`.
pub fn laplacian_power(n: usize, j: u32) -> Vec<(Multi, i64)> {
    fn rec(pos: usize, left: u32, nv: usize, cur: &mut Multi, acc: &mut Vec<(Multi, i64)>, j: u32) {
        if pos + 1 == nv {
            cur[pos] = (2 * left) as u8;
            let denom: i64 = (0..nv).map(|p| fact(cur[p] as u32 / 2)).product();
            acc.push((*cur, fact(j) / denom));
            cur[pos] = 0;
            return;
        }
        for a in 0..=left {
            cur[pos] = (2 * a) as u8;
            rec(pos + 1, left - a, nv, cur, acc, j);
        }
        cur[pos] = 0;
    }
    let mut acc = Vec::new();
    let mut cur = [0u8; KMAX];
    rec(0, j, n - 1, &mut cur, &mut acc, j);
    acc
}

/// Add `c · e_k · shape` to an `End(S_n)`-valued expression (`k = 0` means the identity).
fn add_clifford(expr: &mut KernelExpr, k: usize, shape: Shape, c: &ParamScalar) -> Result<(), KernelError> {
    let n = expr.n();
    let d = spin_dim(n);
    if k == 0 {
        for r in 0..d {
            expr.add_term((r, r), shape.clone(), c.clone())?;
        }
        return Ok(());
    }
    let u = zeta_generator(n, Variant::Plus, k).map_err(|e| KernelError::DimensionMismatch(e.to_string()))?;
    for col in 0..d {
        let ph = G::i().pow(u.phase[col] as u32);
        expr.add_term((u.target[col], col), shape.clone(), c.scale(&ph))?;
    }
    Ok(())
}

fn b_exponent(n: usize, spinor: bool) -> AffineExp {
    // −ν − (n−1)/2, or −ν − n/2 for spinors
    let c = if spinor { -rho(n) } else { -rho_h(n) };
    AffineExp::new(qi(0), qi(-1), c)
}

fn a_family(n: usize, odd: bool) -> Result<KernelExpr, KernelError> {
    let id = if odd { FamilyId::AMinus } else { FamilyId::APlus };
    let mut k = KernelExpr::zero(n, ValueKind::Scalar);
    let shape = Shape::Smooth {
        mono: [0; KMAX],
        parity: odd as u8,
        xn_exp: AffineExp::new(qi(1), qi(1), q(-1, 2)),
        r_exp: b_exponent(n, false),
    };
    k.add_term((0, 0), shape, a_normalization(id))?;
    Ok(k.with_meta(id.tag(), vec![]))
}

fn b_family(n: usize, k: u32, odd: bool, form: DisplayForm) -> Result<KernelExpr, KernelError> {
    let id = if odd { FamilyId::BMinus } else { FamilyId::BPlus };
    let m = 2 * k + odd as u32;
    let gam = inv_gamma_half(if odd { q(3, 2) } else { q(1, 2) });
    let b = b_exponent(n, false);
    let mut e = KernelExpr::zero(n, ValueKind::Scalar);
    match form {
        DisplayForm::Compact => {
            e.add_term((0, 0), Shape::Layer { mono: [0; KMAX], r_exp: b, delta_order: m }, gam)?;
        }
        DisplayForm::Expanded => {
            // Σ_i (−1)^i m! (ν+(n−1)/2)_i / (i!(m−2i)!) |x'|^{1−n−2ν−2i} δ^{(m−2i)}
            let base = ParamScalar::from_affine(&AffineExp::new(qi(0), qi(1), rho_h(n)));
            for i in 0..=k {
                let c = pochhammer(&base, i)
                    .scale(&G::from_frac(sgn(i) * fact(m), fact(i) * fact(m - 2 * i)))
                    .mul(&gam);
                let xp = AffineExp::new(qi(0), qi(-2), qi(1 - n as i64 - 2 * i as i64));
                e.add_term((0, 0), Shape::Boundary { mono: [0; KMAX], xp_exp: xp, delta_order: m - 2 * i }, c)?;
            }
        }
    }
    let line = family_line(id, k).expect("index family");
    let e = e.substitute(&line.substitution())?;
    Ok(e.with_meta(&format!("{}[{k}]", id.tag()), vec![line.constraint()]))
}

fn c_family(n: usize, l: u32, odd: bool) -> Result<KernelExpr, KernelError> {
    let id = if odd { FamilyId::CMinus } else { FamilyId::CPlus };
    let mut e = KernelExpr::zero(n, ValueKind::Scalar);
    let base = ParamScalar::from_affine(&AffineExp::new(qi(0), qi(1), qi(-(l as i64))));
    for j in 0..=l {
        let dn = 2 * (l - j) + odd as u32;
        let c = pochhammer(&base, l - j).scale(&G::from_frac(1i64 << (2 * (l - j)), fact(j) * fact(dn)));
        for (mut multi, w) in laplacian_power(n, j) {
            multi[n - 1] = dn as u8;
            e.add_term((0, 0), Shape::Point { multi }, c.scale(&G::from_int(w)))?;
        }
    }
    let line = family_line(id, l).expect("index family");
    Ok(e.with_meta(&format!("{}[{l}]", id.tag()), vec![line.constraint()]))
}

fn slash_b_family(n: usize, k: u32, odd: bool) -> Result<KernelExpr, KernelError> {
    // odd = SB+ : ζ(x') r^b δ^{(2k+1)} − (2k+1) r^b e_n δ^{(2k)}, Gamma ½(λ−ν+½)
    // even = SB−: ζ(x') r^b δ^{(2k)} − 2k r^b e_n δ^{(2k−1)},   Gamma ½(λ−ν+3/2)
    let id = if odd { FamilyId::SlashBPlus } else { FamilyId::SlashBMinus };
    let m = 2 * k + odd as u32;
    let gam = inv_gamma_half(if odd { q(1, 2) } else { q(3, 2) });
    let b = b_exponent(n, true);
    let mut e = KernelExpr::zero(n, ValueKind::End);
    for i in 1..n {
        add_clifford(&mut e, i, Shape::Layer { mono: unit_multi(i), r_exp: b.clone(), delta_order: m }, &gam)?;
    }
    if m > 0 {
        let c = gam.scale(&G::from_int(-(m as i64)));
        add_clifford(&mut e, n, Shape::Layer { mono: [0; KMAX], r_exp: b, delta_order: m - 1 }, &c)?;
    }
    let line = family_line(id, k).expect("index family");
    let e = e.substitute(&line.substitution())?;
    Ok(e.with_meta(&format!("{}[{k}]", id.tag()), vec![line.constraint()]))
}

fn slash_c_family(n: usize, l: u32, minus: bool) -> Result<KernelExpr, KernelError> {
    let id = if minus { FamilyId::SlashCMinus } else { FamilyId::SlashCPlus };
    let mut e = KernelExpr::zero(n, ValueKind::End);
    // Pochhammer base: ν + ½ − ℓ for SC+, ν − ℓ − ½ for SC−
    let shift = if minus { q(-2 * l as i64 - 1, 2) } else { q(1 - 2 * l as i64, 2) };
    let base = ParamScalar::from_affine(&AffineExp::new(qi(0), qi(1), shift));
    let push_dirac_prime = |e: &mut KernelExpr, j: u32, dn: u32, c: ParamScalar| -> Result<(), KernelError> {
        for (mut multi, w) in laplacian_power(n, j) {
            multi[n - 1] = dn as u8;
            for i in 1..n {
                let mut mi = multi;
                mi[i - 1] += 1;
                add_clifford(e, i, Shape::Point { multi: mi }, &c.scale(&G::from_int(w)))?;
            }
        }
        Ok(())
    };
    let push_en = |e: &mut KernelExpr, j: u32, dn: u32, c: ParamScalar| -> Result<(), KernelError> {
        for (mut multi, w) in laplacian_power(n, j) {
            multi[n - 1] = dn as u8;
            add_clifford(e, n, Shape::Point { multi }, &c.scale(&G::from_int(w)))?;
        }
        Ok(())
    };
    if minus {
        for j in 0..=l {
            let d = 2 * (l - j);
            let c1 = pochhammer(&base, l - j).scale(&G::from_frac(1i64 << d, fact(j) * fact(d)));
            push_dirac_prime(&mut e, j, d, c1)?;
            let c2 = pochhammer(&base, l - j + 1).scale(&G::from_frac(1i64 << (d + 1), fact(j) * fact(d + 1)));
            push_en(&mut e, j, d + 1, c2)?;
        }
    } else {
        for j in 0..l {
            let d = 2 * (l - j) - 1;
            let c1 = pochhammer(&base, l - j - 1).scale(&G::from_frac(1i64 << d, fact(j) * fact(d)));
            push_dirac_prime(&mut e, j, d, c1)?;
        }
        for j in 0..=l {
            let d = 2 * (l - j);
            let c2 = pochhammer(&base, l - j).scale(&G::from_frac(1i64 << d, fact(j) * fact(d)));
            push_en(&mut e, j, d, c2)?;
        }
    }
    let line = family_line(id, l).expect("index family");
    Ok(e.with_meta(&format!("{}[{l}]", id.tag()), vec![line.constraint()]))
}

/// `K ↦ x_n K`, re-expressed in the target parameters `(λ+1, ν)`.
pub fn mult_xn(k: &KernelExpr) -> Result<KernelExpr, KernelError> {
    let out = k.mult_coordinate(k.n())?.substitute(&Substitution::shift(qi(-1), qi(0)))?;
    let fam = format!("x_n*{}", k.meta.family);
    let cons = out.meta.constraints.clone();
    Ok(out.with_meta(&fam, cons))
}

/// `K ↦ ζ(x) K`, re-expressed in the target parameters `(λ+½, ν−½)`.
pub fn mult_zeta(k: &KernelExpr) -> Result<KernelExpr, KernelError> {
    let out = k.mult_clifford_x()?.substitute(&Substitution::shift(q(-1, 2), q(1, 2)))?;
    let fam = format!("zeta*{}", k.meta.family);
    let cons = out.meta.constraints.clone();
    Ok(out.with_meta(&fam, cons))
}

/// Compose an `End(S_n)`-valued kernel with the projection `P : S_n → S_{n−1}`.
pub fn project(k: &KernelExpr) -> Result<KernelExpr, KernelError> {
    if k.kind() != ValueKind::End {
        return Err(KernelError::DimensionMismatch("projection needs an End(S_n)-valued kernel".into()));
    }
    let p = spin_projection_P(k.n()).map_err(|e| KernelError::DimensionMismatch(e.to_string()))?;
    let mut out = k.left_map(&p, ValueKind::Hom)?;
    out.meta.family = format!("P*{}", k.meta.family);
    Ok(out)
}

/// `½(λ − ν − ½)`, the renormalizing factor between `ζ·Ã^+` and `K̸̃^{A,−}`.
pub fn slash_minus_factor() -> ParamScalar {
    ParamScalar::from_affine(&AffineExp::new(q(1, 2), q(-1, 2), q(-1, 4)))
}

/// `¼(λ+ν−½)(λ−ν−½)`, the renormalizing factor between `x_n·Ã^+_{λ−1,ν}` and `Ã^-_{λ,ν}`.
pub fn xn_minus_factor() -> ParamScalar {
    ParamScalar::from_affine(&AffineExp::new(q(1, 2), q(1, 2), q(-1, 4)))
        .mul(&ParamScalar::from_affine(&AffineExp::new(q(1, 2), q(-1, 2), q(-1, 4))))
}

fn point_sub(lam: &Q, nu: &Q) -> Substitution {
    Substitution { lam: AffineExp::constant(lam.clone()), nu: AffineExp::constant(nu.clone()) }
}

fn point_family(id: FamilyId, n: usize, i: u32, j: u32) -> Result<KernelExpr, KernelError> {
    let (lam, nu) = family_point(id, n, i, j)?;
    let tag = format!("{}({i},{j})", id.tag());
    if n.is_multiple_of(2) {
        // doubly renormalized: multiply by the Gamma factor that vanishes on the //-line
        let (base, s) = match id {
            FamilyId::AAPlus => (make_family(FamilyId::APlus, n, FamilyParams::Generic)?, q(1, 2)),
            FamilyId::AAMinus => (make_family(FamilyId::AMinus, n, FamilyParams::Generic)?, q(3, 2)),
            FamilyId::SlashAAPlus => (make_family(FamilyId::SlashAPlus, n, FamilyParams::Generic)?, q(1, 2)),
            _ => (make_family(FamilyId::SlashAMinus, n, FamilyParams::Generic)?, q(3, 2)),
        };
        let g = ParamScalar::gamma(AffineExp::new(q(1, 2), q(-1, 2), s / qi(2)));
        let e = base.scale(&g).substitute(&point_sub(&lam, &nu))?;
        return Ok(e.with_meta(&tag, vec![]));
    }
    let j_exp = AffineExp::constant(qi(j as i64));
    let nn = n as u32;
    let (kind, e) = match id {
        FamilyId::AAPlus => {
            let k = (i + j + nn - 1) / 2;
            let c = ParamScalar::frac(sgn(k) * fact(k), fact(2 * k));
            let mut e = KernelExpr::zero(n, ValueKind::Scalar);
            e.add_term((0, 0), Shape::Layer { mono: [0; KMAX], r_exp: j_exp, delta_order: 2 * k }, c)?;
            (ValueKind::Scalar, e)
        }
        FamilyId::AAMinus => {
            let k = (nn + i + j - 2) / 2;
            let c = ParamScalar::frac(sgn(k + 1) * fact(k), fact(2 * k + 1));
            let mut e = KernelExpr::zero(n, ValueKind::Scalar);
            e.add_term((0, 0), Shape::Layer { mono: [0; KMAX], r_exp: j_exp, delta_order: 2 * k + 1 }, c)?;
            (ValueKind::Scalar, e)
        }
        FamilyId::SlashAAPlus | FamilyId::SlashAAMinus => {
            let plus = id == FamilyId::SlashAAPlus;
            let (k, m, c) = if plus {
                let k = (nn + i + j - 1) / 2;
                (k, 2 * k + 1, ParamScalar::frac(sgn(k + 1) * fact(k), fact(2 * k + 1)))
            } else {
                let k = (nn + i + j) / 2;
                (k, 2 * k, ParamScalar::frac(sgn(k) * fact(k), fact(2 * k)))
            };
            let _ = k;
            let mut e = KernelExpr::zero(n, ValueKind::End);
            for t in 1..n {
                add_clifford(&mut e, t, Shape::Layer { mono: unit_multi(t), r_exp: j_exp.clone(), delta_order: m }, &c)?;
            }
            if m > 0 {
                let cn = c.scale(&G::from_int(-(m as i64)));
                add_clifford(&mut e, n, Shape::Layer { mono: [0; KMAX], r_exp: j_exp, delta_order: m - 1 }, &cn)?;
            }
            (ValueKind::End, e)
        }
        _ => unreachable!("point families only"),
    };
    debug_assert_eq!(e.kind(), kind);
    Ok(e.with_meta(&tag, vec![]))
}

/// Build a kernel family with symbolic parameters.
///
/// Index families are returned on their constraint line with λ eliminated;
/// point families are evaluated at the lattice point.
pub fn make_family(id: FamilyId, n: usize, params: FamilyParams) -> Result<KernelExpr, KernelError> {
    make_family_form(id, n, params, DisplayForm::Compact)
}

/// [`make_family`] with a choice of displayed form for the B-families.
pub fn make_family_form(
    id: FamilyId,
    n: usize,
    params: FamilyParams,
    form: DisplayForm,
) -> Result<KernelExpr, KernelError> {
    if !(2..=KMAX).contains(&n) {
        return Err(KernelError::BadParams(format!("dimension n = {n} outside 2..={KMAX}")));
    }
    let want = id.param_kind();
    match (want, params) {
        (ParamKind::Generic, FamilyParams::Generic) => match id {
            FamilyId::APlus => a_family(n, false),
            FamilyId::AMinus => a_family(n, true),
            FamilyId::SlashAPlus => {
                let e = mult_zeta(&a_family(n, true)?)?;
                Ok(e.with_meta("SA+", vec![]))
            }
            _ => {
                let h = slash_minus_factor().inv().map_err(perr)?;
                let e = mult_zeta(&a_family(n, false)?)?.scale(&h);
                Ok(e.with_meta("SA-", vec![]))
            }
        },
        (ParamKind::Index, FamilyParams::Index(k)) => {
            if k > 12 {
                return Err(KernelError::BadParams(format!("index {k} too large")));
            }
            let e = match id {
                FamilyId::BPlus => b_family(n, k, false, form),
                FamilyId::BMinus => b_family(n, k, true, form),
                FamilyId::CPlus => c_family(n, k, false),
                FamilyId::CMinus => c_family(n, k, true),
                FamilyId::SlashBPlus => slash_b_family(n, k, true),
                FamilyId::SlashBMinus => slash_b_family(n, k, false),
                FamilyId::SlashCPlus => slash_c_family(n, k, false),
                _ => slash_c_family(n, k, true),
            }?;
            if form == DisplayForm::Expanded && id.is_spinor() {
                let meta = e.meta.clone();
                let mut x = e.expand_against_delta()?;
                x.meta = meta;
                return Ok(x);
            }
            Ok(e)
        }
        (ParamKind::Point, FamilyParams::Point { i, j }) => point_family(id, n, i, j),
        _ => Err(KernelError::BadParams(format!("{id} does not take parameters {params:?}"))),
    }
}

/// Homogeneity degree `λ − ν − ½ − (n−1)` shared by all families.
pub fn family_degree(n: usize) -> AffineExp {
    AffineExp::new(qi(1), qi(-1), q(-1, 2) - qi(n as i64 - 1))
}

/// [`family_degree`] evaluated where the family lives.
pub fn expected_degree(id: FamilyId, n: usize, params: FamilyParams) -> Result<AffineExp, KernelError> {
    let d = family_degree(n);
    Ok(match params {
        FamilyParams::Generic => d,
        FamilyParams::Index(k) => {
            let line = family_line(id, k).ok_or_else(|| KernelError::BadParams(format!("{id} has no line")))?;
            d.substitute(&line.substitution())
        }
        FamilyParams::Point { i, j } => {
            let (lam, nu) = family_point(id, n, i, j)?;
            d.substitute(&point_sub(&lam, &nu))
        }
    })
}
