use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::{general_identity_instance, Affine, KLabel, KTypeIndex, LatticeError, Sign};
use crate::linalg::{Echelon, SparseRow};
use crate::paramfield::{q, GaussianRational};

type G = GaussianRational;

/// One linear constraint `Σ coeff · s_{i,j} = 0` in the sector unknowns.
#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    /// Lattice point the identity is centred at.
    pub center: (usize, usize),
    /// Move of the subgroup label: `+1`, `0` or `−1`.
    pub move_j: i8,
    pub terms: Vec<((usize, usize), Affine)>,
}

/// The truncated recurrence system for one sector.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeSystem {
    pub n: usize,
    pub lam0: G,
    pub nu0: G,
    pub sign: Sign,
    pub depth: usize,
    pub constraints: Vec<Constraint>,
}

/// Position of `s_{i,j}` in the unknown vector.
pub fn tri_index(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

impl LatticeSystem {
    pub fn unknowns(&self) -> usize {
        (self.depth + 1) * (self.depth + 2) / 2
    }

    /// Constraint rows evaluated at `(λ0, ν0)`.
    pub fn rows(&self) -> Vec<SparseRow> {
        self.constraints
            .iter()
            .map(|c| {
                let mut row = SparseRow::new();
                for ((i, j), a) in &c.terms {
                    let v = a.eval(&self.lam0, &self.nu0);
                    if !v.is_zero() {
                        row.insert(tri_index(*i, *j), v);
                    }
                }
                row
            })
            .filter(|r| !r.is_empty())
            .collect()
    }
}

/// `(−1)^{i−j}`, the twist in the sector variables.
fn kappa(i: usize, j: usize) -> i64 {
    if (i + j).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The identity at `(i, j)` for the given label sign and subgroup move, moved
/// to one side. `None` when it reaches beyond the truncation.
fn t_equation(n: usize, i: usize, j: usize, s0: Sign, dj: i64, depth: usize) -> Result<Option<Vec<(KTypeIndex, Affine)>>, LatticeError> {
    let jb = j as i64 + dj;
    if jb < 0 {
        return Ok(None);
    }
    let idx = KTypeIndex { i, j, sign: s0 };
    let (a, ap) = idx.labels(n);
    let bp = if n.is_multiple_of(2) {
        KLabel::plain(jb as usize)
    } else {
        KLabel::signed(jb as usize, if dj == 0 { s0.flip() } else { s0 })
    };
    let g = general_identity_instance(n, a, ap, bp)?;
    if g.rhs.is_empty() || g.rhs.iter().any(|(b, _)| b.deg > depth) {
        return Ok(None);
    }
    let mut terms = vec![(idx, g.lhs.scale(&G::from_int(-1)))];
    for (b, c) in g.rhs {
        terms.push((KTypeIndex::from_labels(n, b, bp)?, c));
    }
    Ok(Some(terms))
}

/// Sector constraints of the recurrence system with formal λ, ν.
pub fn sector_constraints(n: usize, sign: Sign, depth: usize) -> Result<Vec<Constraint>, LatticeError> {
    let eps = sign.value();
    let half = G::from_frac(1, 2);
    let mut out = Vec::new();
    for i in 0..=depth {
        for j in 0..=i {
            for dj in [1i64, 0, -1] {
                let (Some(ep), Some(em)) = (t_equation(n, i, j, Sign::Plus, dj, depth)?, t_equation(n, i, j, Sign::Minus, dj, depth)?)
                else {
                    continue;
                };
                // E_+ + ε κ_{ij} E_−, rewritten in s^± via
                // t_+ = (s^+ + s^−)/2 and t_− = κ (s^+ − s^−)/2
                let mut acc: BTreeMap<((usize, usize), Sign), Affine> = BTreeMap::new();
                let weight_m = G::from_int(eps * kappa(i, j));
                for (eq, w) in [(&ep, G::one()), (&em, weight_m)] {
                    for (t, c) in eq {
                        let c = c.scale(&w).scale(&half);
                        let (fp, fm) = match t.sign {
                            Sign::Plus => (G::one(), G::one()),
                            Sign::Minus => {
                                let k = G::from_int(kappa(t.i, t.j));
                                (k.clone(), -k)
                            }
                        };
                        for (sec, f) in [(Sign::Plus, fp), (Sign::Minus, fm)] {
                            let e = acc.entry(((t.i, t.j), sec)).or_default();
                            *e = e.add(&c.scale(&f));
                        }
                    }
                }
                if let Some(((p, _), _)) = acc.iter().find(|((_, s), c)| *s != sign && !c.is_zero()) {
                    return Err(LatticeError::SectorCoupling(format!("n={n} centre ({i},{j}) move {dj} term {p:?}")));
                }
                let terms: Vec<_> = acc.into_iter().filter(|((_, s), c)| *s == sign && !c.is_zero()).map(|((p, _), c)| (p, c)).collect();
                if !terms.is_empty() {
                    out.push(Constraint { center: (i, j), move_j: dj as i8, terms });
                }
            }
        }
    }
    Ok(out)
}

/// Build the truncated system for one sector at `(λ0, ν0)`.
pub fn build_system(n: usize, lam0: G, nu0: G, sign: Sign, depth: usize) -> Result<LatticeSystem, LatticeError> {
    if depth < 2 {
        return Err(LatticeError::BadDepth { depth, reason: "need depth at least 2".into() });
    }
    if !(3..=12).contains(&n) {
        return Err(LatticeError::BadDimension(n));
    }
    let constraints = sector_constraints(n, sign, depth)?;
    Ok(LatticeSystem { n, lam0, nu0, sign, depth, constraints })
}

/// A basis of the solution space together with the stabilization verdict.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionSpace {
    pub dim: usize,
    #[serde(skip)]
    pub basis: Vec<BTreeMap<(usize, usize), G>>,
    /// Dimension of the same problem truncated one level deeper.
    pub dim_next: usize,
    pub stabilized: bool,
}

impl SolutionSpace {
    /// The non-fatal stabilization report.
    pub fn stabilization(&self, depth: usize) -> Result<(), LatticeError> {
        if self.stabilized {
            Ok(())
        } else {
            Err(LatticeError::NotStabilized { depth, dim_n: self.dim, dim_next: self.dim_next })
        }
    }
}

fn echelon_for(sys: &LatticeSystem, zero: &dyn Fn(usize, usize) -> bool) -> Echelon {
    let mut e = Echelon::new(sys.unknowns());
    for i in 0..=sys.depth {
        for j in 0..=i {
            if zero(i, j) {
                e.insert(&SparseRow::from([(tri_index(i, j), G::one())]));
            }
        }
    }
    for r in sys.rows() {
        e.insert(&r);
    }
    e
}

/// Solution space of the system with the extra conditions `s_{i,j} = 0`
/// wherever `zero(i, j)` holds.
pub fn solve_with_zeros(sys: &LatticeSystem, zero: &dyn Fn(usize, usize) -> bool) -> Result<SolutionSpace, LatticeError> {
    let e = echelon_for(sys, zero);
    let pos: Vec<(usize, usize)> = (0..=sys.depth).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let basis: Vec<BTreeMap<(usize, usize), G>> = e
        .nullspace()
        .into_iter()
        .map(|v| pos.iter().zip(v).filter(|(_, x)| !x.is_zero()).map(|(p, x)| (*p, x)).collect())
        .collect();
    let next = build_system(sys.n, sys.lam0.clone(), sys.nu0.clone(), sys.sign, sys.depth + 1)?;
    let e2 = echelon_for(&next, zero);
    let dim_next = next.unknowns() - e2.rank();
    let dim = basis.len();
    Ok(SolutionSpace { dim, basis, dim_next, stabilized: dim == dim_next })
}

/// Solution space of the plain system.
pub fn solve_dimension(sys: &LatticeSystem) -> Result<SolutionSpace, LatticeError> {
    solve_with_zeros(sys, &|_, _| false)
}

fn rho(n: usize) -> G {
    G::real(q(n as i64, 2))
}

fn rho_h(n: usize) -> G {
    G::real(q(n as i64 - 1, 2))
}

fn as_nat(x: &G) -> Option<usize> {
    let v = x.to_integer()?;
    let v: i64 = v.try_into().ok()?;
    (v >= 0).then_some(v as usize)
}

/// `Some((i, j))` when `(λ0, ν0) = (−ρ−½−i, −ρ_H−½−j)` with `0 ≤ j ≤ i`.
pub fn lattice_point(n: usize, lam0: &G, nu0: &G) -> Option<(usize, usize)> {
    let h = G::from_frac(1, 2);
    let i = as_nat(&-&(&(lam0 + &rho(n)) + &h))?;
    let j = as_nat(&-&(&(nu0 + &rho_h(n)) + &h))?;
    (j <= i).then_some((i, j))
}

/// Dimensions of both sectors at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct TotalDimension {
    pub n: usize,
    pub lam0: G,
    pub nu0: G,
    pub depth: usize,
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub total: usize,
    pub stabilized: bool,
    pub on_lattice: bool,
}

pub fn total_dimension(n: usize, lam0: G, nu0: G, depth: usize) -> Result<TotalDimension, LatticeError> {
    let p = solve_dimension(&build_system(n, lam0.clone(), nu0.clone(), Sign::Plus, depth)?)?;
    let m = solve_dimension(&build_system(n, lam0.clone(), nu0.clone(), Sign::Minus, depth)?)?;
    let on_lattice = lattice_point(n, &lam0, &nu0).is_some();
    Ok(TotalDimension {
        n,
        lam0,
        nu0,
        depth,
        dim_plus: p.dim,
        dim_minus: m.dim,
        total: p.dim + m.dim,
        stabilized: p.stabilized && m.stabilized,
        on_lattice,
    })
}

/// The system in the original unknowns `t_{α,α'}` (both label signs), evaluated.
pub fn build_t_system(n: usize, lam0: &G, nu0: &G, depth: usize) -> Result<(Vec<SparseRow>, usize), LatticeError> {
    let tri = (depth + 1) * (depth + 2) / 2;
    let col = |t: &KTypeIndex| tri_index(t.i, t.j) + if t.sign == Sign::Plus { 0 } else { tri };
    let mut rows = Vec::new();
    for i in 0..=depth {
        for j in 0..=i {
            for s0 in [Sign::Plus, Sign::Minus] {
                for dj in [1i64, 0, -1] {
                    if let Some(eq) = t_equation(n, i, j, s0, dj, depth)? {
                        let mut row = SparseRow::new();
                        for (t, a) in eq {
                            let v = a.eval(lam0, nu0);
                            if !v.is_zero() {
                                *row.entry(col(&t)).or_default() += &v;
                            }
                        }
                        row.retain(|_, v| !v.is_zero());
                        if !row.is_empty() {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    Ok((rows, 2 * tri))
}

/// Nullity of the unsplit system, which must equal the sum of the two sector dimensions.
pub fn t_system_dimension(n: usize, lam0: &G, nu0: &G, depth: usize) -> Result<usize, LatticeError> {
    let (rows, ncols) = build_t_system(n, lam0, nu0, depth)?;
    Ok(ncols - crate::linalg::rank(&rows, ncols))
}

/// One row of a multiplicity table.
#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub n: usize,
    pub lam0: String,
    pub nu0: String,
    pub sector: char,
    pub depth: usize,
    pub dim: usize,
    pub stabilized: bool,
    pub on_lattice: bool,
}

/// Sector dimensions over the points `(−ρ−½−a, −ρ_H−½−b)` for
/// `a ∈ [−1, imax+1]`, `b ∈ [−1, jmax+1]`.
pub fn lattice_grid(n: usize, imax: usize, jmax: usize, depth: usize) -> Result<Vec<GridRow>, LatticeError> {
    lattice_window(n, -1..=imax as i64 + 1, -1..=jmax as i64 + 1, depth)
}

/// Sector dimensions over `(−ρ−½−a, −ρ_H−½−b)` for `a` and `b` in the given
/// ranges, both sectors per point, in row-major order.
pub fn lattice_window(
    n: usize,
    a_range: RangeInclusive<i64>,
    b_range: RangeInclusive<i64>,
    depth: usize,
) -> Result<Vec<GridRow>, LatticeError> {
    let h = G::from_frac(1, 2);
    let mut rows = Vec::new();
    for a in a_range {
        for b in b_range.clone() {
            let lam0 = -&(&(&rho(n) + &h) + &G::from_int(a));
            let nu0 = -&(&(&rho_h(n) + &h) + &G::from_int(b));
            let on = lattice_point(n, &lam0, &nu0).is_some();
            for sign in [Sign::Plus, Sign::Minus] {
                let s = solve_dimension(&build_system(n, lam0.clone(), nu0.clone(), sign, depth)?)?;
                rows.push(GridRow {
                    n,
                    lam0: lam0.to_string(),
                    nu0: nu0.to_string(),
                    sector: if sign == Sign::Plus { '+' } else { '-' },
                    depth,
                    dim: s.dim,
                    stabilized: s.stabilized,
                    on_lattice: on,
                });
            }
        }
    }
    Ok(rows)
}
