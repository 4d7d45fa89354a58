//! The proportionality constants between coordinate multiplication on the
//! two spheres, in closed form and by direct computation in the polynomial
//! model.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::branch::{branch_embed_raw, spin_embedding};
use super::fischer::{coordinate_split_with, monogenic_basis};
use super::gegenbauer::gegenbauer_at_one;
use super::poly::{clifford_gens, SpinorPolynomial};
use super::MonoError;
use crate::cliffspin::{fund_branching, gamma_map, half_dim, spin_dim, SpinMap, UnitOp, Variant};
use crate::paramfield::{q, GaussianRational, ParamScalar, Q};

type G = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A K-type label: `(i, ±)` or a plain degree `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KLabel {
    pub deg: usize,
    pub sign: Option<Sign>,
}

impl KLabel {
    pub fn plain(deg: usize) -> Self {
        KLabel { deg, sign: None }
    }

    pub fn signed(deg: usize, s: Sign) -> Self {
        KLabel { deg, sign: Some(s) }
    }
}

impl fmt::Display for KLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            None => write!(f, "{}", self.deg),
            Some(Sign::Plus) => write!(f, "({},+)", self.deg),
            Some(Sign::Minus) => write!(f, "({},-)", self.deg),
        }
    }
}

fn check_shape(n: usize, alpha: KLabel, alpha_p: KLabel) -> Result<Sign, MonoError> {
    let bad = || MonoError::NotAdjacent(format!("labels {alpha}, {alpha_p} do not fit n = {n}"));
    let s = if n.is_multiple_of(2) {
        if alpha_p.sign.is_some() {
            return Err(bad());
        }
        alpha.sign.ok_or_else(bad)?
    } else {
        if alpha.sign.is_some() {
            return Err(bad());
        }
        alpha_p.sign.ok_or_else(bad)?
    };
    if alpha_p.deg > alpha.deg {
        return Err(MonoError::NotAdjacent(format!("{alpha_p} is not contained in {alpha}")));
    }
    Ok(s)
}

/// All `(β, β')` with `(α, α') ↔ (β, β')`, ordered by `Δi` then `Δj` descending.
pub fn adjacent_targets(n: usize, alpha: KLabel, alpha_p: KLabel) -> Result<Vec<(KLabel, KLabel)>, MonoError> {
    let s = check_shape(n, alpha, alpha_p)?;
    let (i, j) = (alpha.deg as i64, alpha_p.deg as i64);
    let mut out = Vec::new();
    for di in [1i64, 0, -1] {
        for dj in [1i64, 0, -1] {
            let (i2, j2) = (i + di, j + dj);
            if i2 < 0 || j2 < 0 || j2 > i2 {
                continue;
            }
            let (b, bp) = if n.is_multiple_of(2) {
                let bs = if di == 0 { s.flip() } else { s };
                (KLabel::signed(i2 as usize, bs), KLabel::plain(j2 as usize))
            } else {
                let bs = if dj == 0 { s.flip() } else { s };
                (KLabel::plain(i2 as usize), KLabel::signed(j2 as usize, bs))
            };
            out.push((b, bp));
        }
    }
    Ok(out)
}

fn steps(n: usize, alpha: KLabel, alpha_p: KLabel, beta: KLabel, beta_p: KLabel) -> Result<(Sign, i64, i64), MonoError> {
    let s = check_shape(n, alpha, alpha_p)?;
    let targets = adjacent_targets(n, alpha, alpha_p)?;
    if !targets.contains(&(beta, beta_p)) {
        return Err(MonoError::NotAdjacent(format!("({alpha},{alpha_p}) and ({beta},{beta_p})")));
    }
    Ok((s, beta.deg as i64 - alpha.deg as i64, beta_p.deg as i64 - alpha_p.deg as i64))
}

/// Closed-form value of `λ_{α,α'}^{β,β'}` in `ℚ(√−1)`.
pub fn lambda_value(n: usize, alpha: KLabel, alpha_p: KLabel, beta: KLabel, beta_p: KLabel) -> Result<G, MonoError> {
    let (s, di, dj) = steps(n, alpha, alpha_p, beta, beta_p)?;
    let (nn, i, j) = (n as i64, alpha.deg as i64, alpha_p.deg as i64);
    let sg = s.value();
    let r = |a: i64, b: i64| G::real(q(a, b));
    // odd entries are real; even ones carry √−1 on the sign-flipping column
    let unit = |v: G| if n.is_multiple_of(2) { v.mul_i() } else { v };
    let odd_sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let v = match (di, dj) {
        (1, 1) => r(nn + 2 * j - 1, nn + 2 * i + 1),
        (0, 1) => unit(r(odd_sign * sg * 2 * (nn + 2 * j - 1), (nn + 2 * i - 1) * (nn + 2 * i + 1))),
        (-1, 1) => r(-(nn + 2 * j - 1), nn + 2 * i - 1),
        (1, 0) => unit(r(-odd_sign * sg * (i - j + 1), nn + 2 * i + 1)),
        (0, 0) => r((nn + 2 * i) * (nn + 2 * j - 1), (nn + 2 * i - 1) * (nn + 2 * i + 1)),
        (-1, 0) => unit(r(odd_sign * sg * (nn + i + j - 1), nn + 2 * i - 1)),
        (1, -1) => r(-(i - j + 1) * (i - j + 2), (nn + 2 * i + 1) * (nn + 2 * j - 3)),
        (0, -1) => unit(r(
            odd_sign * sg * 2 * (i - j + 1) * (nn + i + j - 1),
            (nn + 2 * i - 1) * (nn + 2 * i + 1) * (nn + 2 * j - 3),
        )),
        (-1, -1) => r((nn + i + j - 2) * (nn + i + j - 1), (nn + 2 * i - 1) * (nn + 2 * j - 3)),
        _ => unreachable!("adjacency checked"),
    };
    Ok(v)
}

/// Closed-form `λ_{α,α'}^{β,β'}` as a parameter-free scalar.
pub fn lambda_constant(n: usize, alpha: KLabel, alpha_p: KLabel, beta: KLabel, beta_p: KLabel) -> Result<ParamScalar, MonoError> {
    lambda_value(n, alpha, alpha_p, beta, beta_p).map(ParamScalar::constant)
}

/// Sphere functions in the polynomial model: layer `(i, 0)` holds `ψ` and
/// layer `(i, 1)` holds `ψ` standing for `x̲ψ`, with `ψ ∈ M_i(ℝ^{n+1}; S_{n+1})`.
type Layered = BTreeMap<(usize, u8), SpinorPolynomial>;

fn layer_add(l: &mut Layered, key: (usize, u8), k: &G, p: &SpinorPolynomial) {
    if p.is_zero() {
        return;
    }
    let entry = l.entry(key).or_insert_with(|| SpinorPolynomial::zero(p.nvars(), p.sdim()));
    entry.add_scaled(k, p);
}

/// Precomputed data for one dimension `n`.
struct Model {
    n: usize,
    gens_g: Vec<UnitOp>,
    gens_h: Vec<UnitOp>,
    gamma_g: UnitOp,
    gamma_h: UnitOp,
    emb: SpinMap,
    /// For odd `n`: inverses of the two spin embeddings composed with the projections.
    inv_plus: Option<SpinMap>,
    inv_minus: Option<SpinMap>,
}

impl Model {
    fn new(n: usize) -> Self {
        let emb = spin_embedding(n);
        let (inv_plus, inv_minus) = if n % 2 == 1 {
            let b = fund_branching(n).expect("n ≥ 1");
            let small = spin_dim(n);
            let mut restrict = SpinMap::zeros(small, 2 * small);
            for t in 0..small {
                restrict.matrix[t][t] = G::one();
            }
            let pp = restrict.compose(&b.image_projection(Variant::Plus).expect("odd"));
            let pm = gamma_map(half_dim(n)).to_map().compose(&restrict).compose(&b.image_projection(Variant::Minus).expect("odd"));
            (Some(pp), Some(pm))
        } else {
            (None, None)
        };
        Model {
            n,
            gens_g: clifford_gens(n + 1),
            gens_h: clifford_gens(n),
            gamma_g: gamma_map(half_dim(n + 1)),
            gamma_h: gamma_map(half_dim(n)),
            emb,
            inv_plus,
            inv_minus,
        }
    }

    fn embed(&self, j: usize, i: usize, phi: &SpinorPolynomial) -> Result<SpinorPolynomial, MonoError> {
        branch_embed_raw(self.n, j, i, phi, &self.emb)
    }

    /// `S_{α,α'}φ` as a layered sphere function.
    fn s_map(&self, alpha: KLabel, alpha_p: KLabel, phi: &SpinorPolynomial) -> Result<Layered, MonoError> {
        let (i, j) = (alpha.deg, alpha_p.deg);
        let mut out = Layered::new();
        let one = G::one();
        if self.n.is_multiple_of(2) {
            match alpha.sign {
                Some(Sign::Plus) => layer_add(&mut out, (i, 0), &one, &self.embed(j, i, phi)?),
                _ => layer_add(&mut out, (i, 1), &one, &self.embed(j, i, &phi.apply_unit(&self.gamma_h))?),
            }
        } else {
            let ip = self.embed(j, i, phi)?;
            let gp = ip.apply_unit(&self.gamma_g);
            match alpha_p.sign {
                Some(Sign::Plus) => {
                    layer_add(&mut out, (i, 0), &one, &ip);
                    layer_add(&mut out, (i, 1), &one, &gp);
                }
                _ => {
                    layer_add(&mut out, (i, 0), &one, &gp);
                    layer_add(&mut out, (i, 1), &one, &ip);
                }
            }
        }
        Ok(out)
    }

    /// Multiplication by `x_k` on the sphere `S^n`.
    fn mul_coord(&self, f: &Layered, k: usize) -> Layered {
        let mut out = Layered::new();
        let one = G::one();
        let minus = G::from_int(-1);
        for (&(i, a), psi) in f {
            let sp = coordinate_split_with(psi, i, k, &self.gens_g);
            let zero_sign = if a == 0 { &minus } else { &one };
            layer_add(&mut out, (i + 1, a), &one, &sp.plus);
            layer_add(&mut out, (i, 1 - a), zero_sign, &sp.zero);
            if i > 0 {
                layer_add(&mut out, (i - 1, a), &one, &sp.minus);
            }
        }
        out
    }

    /// Writes `ψ ∈ M_i(ℝ^{n+1})` as `Σ_d I_{d→i}(u_d)` (plus `γ I_{d→i}(w_d)`
    /// for odd `n`), certifying that nothing is left over.
    #[allow(clippy::type_complexity)]
    fn decompose(&self, psi: &SpinorPolynomial, i: usize) -> Result<Vec<(SpinorPolynomial, Option<SpinorPolynomial>)>, MonoError> {
        let n = self.n;
        let mut rest = psi.clone();
        let mut out = Vec::with_capacity(i + 1);
        for d in 0..=i {
            let e = (i - d) as u8;
            let slice = rest.split_last_var().remove(&e).unwrap_or_else(|| SpinorPolynomial::zero(n + 1, psi.sdim()));
            let slice = slice.restrict_nvars(n);
            let mu: Q = q(n as i64 - 1, 2) + Q::from_integer((d as i64).into());
            let c = gegenbauer_at_one(i - d, &mu) * Q::from_integer(((n + i + d) as i64 - 1).into());
            let cinv = G::real(Q::from_integer(1.into()) / c);
            if n.is_multiple_of(2) {
                let u = slice.scale(&cinv);
                rest = rest.sub(&self.embed(d, i, &u)?);
                out.push((u, None));
            } else {
                let u = slice.apply_map(self.inv_plus.as_ref().expect("odd")).scale(&cinv);
                let w = slice.apply_map(self.inv_minus.as_ref().expect("odd")).scale(&cinv);
                rest = rest.sub(&self.embed(d, i, &u)?);
                rest = rest.sub(&self.embed(d, i, &w)?.apply_unit(&self.gamma_g));
                out.push((u, Some(w)));
            }
        }
        if !rest.is_zero() {
            return Err(MonoError::MultiplicityViolation(format!("degree-{i} monogenic not exhausted by branching components")));
        }
        Ok(out)
    }

    /// `R_{β,β'}` applied to the `E(β)`-part of a layered function, for every
    /// `β' ⊂ β` at once.
    fn read_off(&self, f: &Layered, beta: KLabel) -> Result<BTreeMap<KLabel, SpinorPolynomial>, MonoError> {
        let n = self.n;
        let i = beta.deg;
        let zero_g = SpinorPolynomial::zero(n + 1, spin_dim(n + 1));
        let layer = |a: u8| f.get(&(i, a)).cloned().unwrap_or_else(|| zero_g.clone());
        let mut out = BTreeMap::new();
        if n.is_multiple_of(2) {
            let plus = beta.sign == Some(Sign::Plus);
            let psi = if plus { layer(0) } else { layer(1) };
            for (d, (u, _)) in self.decompose(&psi, i)?.into_iter().enumerate() {
                out.insert(KLabel::plain(d), if plus { u } else { u.apply_unit(&self.gamma_h) });
            }
        } else {
            let psi = layer(0);
            if layer(1) != psi.apply_unit(&self.gamma_g) {
                return Err(MonoError::MultiplicityViolation(format!("layer {i} leaves the K-type {beta}")));
            }
            for (d, (u, w)) in self.decompose(&psi, i)?.into_iter().enumerate() {
                out.insert(KLabel::signed(d, Sign::Plus), u);
                out.insert(KLabel::signed(d, Sign::Minus), w.expect("odd"));
            }
        }
        Ok(out)
    }

    /// `ω'_{α'}^{β'}(e_k)` in the `φ`-representation of the target K-type.
    fn omega_h(&self, alpha_p: KLabel, phi: &SpinorPolynomial, k: usize) -> BTreeMap<KLabel, SpinorPolynomial> {
        let j = alpha_p.deg;
        let sp = coordinate_split_with(phi, j, k, &self.gens_h);
        let mut out = BTreeMap::new();
        let minus = G::from_int(-1);
        if self.n.is_multiple_of(2) {
            out.insert(KLabel::plain(j + 1), sp.plus);
            out.insert(KLabel::plain(j), sp.zero.apply_unit(&self.gamma_h).scale(&minus));
            if j > 0 {
                out.insert(KLabel::plain(j - 1), sp.minus);
            }
        } else {
            let s = alpha_p.sign.expect("odd labels carry a sign");
            out.insert(KLabel::signed(j + 1, s), sp.plus);
            let z = if s == Sign::Plus { sp.zero.scale(&minus) } else { sp.zero };
            out.insert(KLabel::signed(j, s.flip()), z);
            if j > 0 {
                out.insert(KLabel::signed(j - 1, s), sp.minus);
            }
        }
        out
    }
}

/// One row of the brute-force λ table.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaEntry {
    pub n: usize,
    pub alpha: KLabel,
    pub alpha_p: KLabel,
    pub beta: KLabel,
    pub beta_p: KLabel,
    pub closed_form: G,
    pub bruteforce: Option<G>,
    pub error: Option<String>,
}

impl LambdaEntry {
    pub fn agrees(&self) -> bool {
        self.bruteforce.as_ref() == Some(&self.closed_form)
    }
}

/// Finds the scalar `λ` with `lhs = λ·rhs` for all collected pairs.
fn proportionality(pairs: &[(Vec<G>, Vec<G>)], what: &str) -> Result<G, MonoError> {
    let mut lam: Option<G> = None;
    for (l, r) in pairs {
        if let Some(pos) = r.iter().position(|x| !x.is_zero()) {
            lam = Some(&l[pos] / &r[pos]);
            break;
        }
    }
    let Some(lam) = lam else {
        if pairs.iter().all(|(l, _)| l.iter().all(G::is_zero)) {
            return Err(MonoError::ZeroMap(what.to_string()));
        }
        return Err(MonoError::MultiplicityViolation(format!("{what}: right side vanishes, left side does not")));
    };
    for (l, r) in pairs {
        for (a, b) in l.iter().zip(r) {
            if *a != &lam * b {
                return Err(MonoError::MultiplicityViolation(format!("{what}: not proportional")));
            }
        }
    }
    Ok(lam)
}

fn dense_pair(lhs: &SpinorPolynomial, rhs: &SpinorPolynomial) -> (Vec<G>, Vec<G>) {
    let mut keys: Vec<_> = lhs.terms().keys().chain(rhs.terms().keys()).copied().collect();
    keys.sort();
    keys.dedup();
    (lhs.to_dense(&keys), rhs.to_dense(&keys))
}

fn table_with(model: &Model, basis: &[SpinorPolynomial], alpha: KLabel, alpha_p: KLabel) -> Result<Vec<LambdaEntry>, MonoError> {
    let n = model.n;
    let targets = adjacent_targets(n, alpha, alpha_p)?;
    let mut pairs: BTreeMap<(KLabel, KLabel), Vec<(Vec<G>, Vec<G>)>> = BTreeMap::new();
    let mut failures: BTreeMap<(KLabel, KLabel), String> = BTreeMap::new();
    for phi in basis {
        let s = model.s_map(alpha, alpha_p, phi)?;
        for k in 1..=n {
            let lhs_all = model.mul_coord(&s, k);
            let rhs_all = model.omega_h(alpha_p, phi, k);
            let mut read: BTreeMap<KLabel, Result<BTreeMap<KLabel, SpinorPolynomial>, String>> = BTreeMap::new();
            for &(beta, beta_p) in &targets {
                if failures.contains_key(&(beta, beta_p)) {
                    continue;
                }
                let parts = read.entry(beta).or_insert_with(|| model.read_off(&lhs_all, beta).map_err(|e| e.to_string()));
                match parts {
                    Ok(parts) => {
                        let lhs = parts[&beta_p].clone();
                        let rhs = rhs_all[&beta_p].clone();
                        pairs.entry((beta, beta_p)).or_default().push(dense_pair(&lhs, &rhs));
                    }
                    Err(e) => {
                        failures.insert((beta, beta_p), e.clone());
                    }
                }
            }
        }
    }
    Ok(targets
        .into_iter()
        .map(|(beta, beta_p)| {
            let closed_form = lambda_value(n, alpha, alpha_p, beta, beta_p).expect("adjacent");
            let what = format!("n={n} ({alpha},{alpha_p})→({beta},{beta_p})");
            let (bruteforce, error) = match failures.get(&(beta, beta_p)) {
                Some(e) => (None, Some(e.clone())),
                None => match proportionality(pairs.get(&(beta, beta_p)).map(Vec::as_slice).unwrap_or(&[]), &what) {
                    Ok(v) => (Some(v), None),
                    Err(e) => (None, Some(e.to_string())),
                },
            };
            LambdaEntry { n, alpha, alpha_p, beta, beta_p, closed_form, bruteforce, error }
        })
        .collect())
}

/// All constants `λ_{α,α'}^{β,β'}` for one source pair, computed directly.
pub fn lambda_table_bruteforce(n: usize, alpha: KLabel, alpha_p: KLabel) -> Result<Vec<LambdaEntry>, MonoError> {
    check_shape(n, alpha, alpha_p)?;
    let model = Model::new(n);
    let basis = monogenic_basis(n, alpha_p.deg);
    table_with(&model, &basis, alpha, alpha_p)
}

/// Brute-force value of a single constant `λ_{α,α'}^{β,β'}`.
pub fn lambda_constant_bruteforce(
    n: usize,
    alpha: KLabel,
    alpha_p: KLabel,
    beta: KLabel,
    beta_p: KLabel,
) -> Result<ParamScalar, MonoError> {
    steps(n, alpha, alpha_p, beta, beta_p)?;
    let table = lambda_table_bruteforce(n, alpha, alpha_p)?;
    let e = table.into_iter().find(|e| e.beta == beta && e.beta_p == beta_p).expect("target listed");
    match (e.bruteforce, e.error) {
        (Some(v), _) => Ok(ParamScalar::constant(v)),
        (None, Some(msg)) if msg.starts_with("both sides vanish") => Err(MonoError::ZeroMap(msg)),
        (None, msg) => Err(MonoError::MultiplicityViolation(msg.unwrap_or_default())),
    }
}

/// Every source pair `(α, α')` with `deg α ≤ max_i`, in a fixed order.
pub fn source_pairs(n: usize, max_i: usize) -> Vec<(KLabel, KLabel)> {
    let mut out = Vec::new();
    for i in 0..=max_i {
        for j in 0..=i {
            for s in [Sign::Plus, Sign::Minus] {
                if n.is_multiple_of(2) {
                    out.push((KLabel::signed(i, s), KLabel::plain(j)));
                } else {
                    out.push((KLabel::plain(i), KLabel::signed(j, s)));
                }
            }
        }
    }
    out
}

/// The brute-force table for all source pairs with `deg α ≤ max_i`, computed
/// in parallel.
pub fn lambda_sweep(n: usize, max_i: usize) -> Result<Vec<LambdaEntry>, MonoError> {
    let model = Model::new(n);
    let bases: Vec<Vec<SpinorPolynomial>> = (0..=max_i).into_par_iter().map(|j| monogenic_basis(n, j)).collect();
    let pairs = source_pairs(n, max_i);
    let tables: Vec<Result<Vec<LambdaEntry>, MonoError>> =
        pairs.par_iter().map(|&(a, ap)| table_with(&model, &bases[ap.deg], a, ap)).collect();
    let mut out = Vec::new();
    for t in tables {
        out.extend(t?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let p = |d| KLabel::signed(d, Sign::Plus);
        let m = |d| KLabel::signed(d, Sign::Minus);
        let j = KLabel::plain;
        assert_eq!(lambda_value(4, p(1), j(0), p(2), j(1)).unwrap(), G::from_frac(3, 7));
        assert_eq!(lambda_value(4, p(0), j(0), m(0), j(0)).unwrap(), G::from_frac(4, 5));
        assert_eq!(lambda_value(4, p(2), j(1), p(1), j(0)).unwrap(), G::from_frac(5 * 6, 7 * 3));
        assert!(lambda_value(4, p(0), j(0), p(1), j(2)).is_err());
        assert!(lambda_value(4, KLabel::plain(0), j(0), p(1), j(1)).is_err());
    }

    #[test]
    fn bruteforce_small_cases() {
        let p = |d| KLabel::signed(d, Sign::Plus);
        let j = KLabel::plain;
        let v = lambda_constant_bruteforce(4, p(1), j(0), p(2), j(1)).unwrap();
        assert_eq!(v.constant_value().unwrap(), G::from_frac(3, 7));
        let m = |d| KLabel::signed(d, Sign::Minus);
        let v = lambda_constant_bruteforce(4, p(0), j(0), m(0), j(0)).unwrap();
        assert_eq!(v.constant_value().unwrap(), G::from_frac(4, 5));
    }
}
