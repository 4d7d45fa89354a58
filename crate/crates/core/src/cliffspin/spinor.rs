//! The spin module `S_n = ΛW` and the Clifford action `ζ_n` on it.

use std::fmt;

use serde::Serialize;

use super::{half_dim, CliffError, CliffordElt};
use crate::linalg;
use crate::paramfield::GaussianRational;

type G = GaussianRational;

/// Which of the two Clifford modules is meant for odd `n`; `Minus` is `ζ_n ∘ α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Variant {
    Plus,
    Minus,
}

/// Multiply by `√−1` raised to `k`.
pub(crate) fn rot(c: &G, k: u8) -> G {
    match k % 4 {
        0 => c.clone(),
        1 => c.mul_i(),
        2 => -c,
        _ => -c.mul_i(),
    }
}

/// An element of `ΛW` with `W = span(w_1..w_m)`. Index `T` is a bit mask with
/// bit `i-1` standing for `w_i`; the basis vector is `w_{t_1}∧⋯∧w_{t_k}` in
/// increasing order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Spinor {
    m: usize,
    coeffs: Vec<G>,
}

impl Spinor {
    pub fn zero(m: usize) -> Self {
        Spinor { m, coeffs: vec![G::zero(); 1 << m] }
    }

    /// The basis spinor `w_T`.
    pub fn basis(m: usize, t: usize) -> Self {
        let mut s = Self::zero(m);
        s.coeffs[t] = G::one();
        s
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<G>) -> Self {
        assert_eq!(coeffs.len(), 1 << m, "spinor length must be 2^m");
        Spinor { m, coeffs }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[G] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(G::is_zero)
    }

    pub fn add(&self, o: &Spinor) -> Spinor {
        assert_eq!(self.m, o.m);
        Spinor { m: self.m, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: &G) -> Spinor {
        Spinor { m: self.m, coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    /// `ω ∧ w_{m+1}` as an element of the next module.
    pub fn wedge_top(&self) -> Spinor {
        let mut out = Spinor::zero(self.m + 1);
        let top = 1 << self.m;
        for (t, c) in self.coeffs.iter().enumerate() {
            out.coeffs[t | top] = c.clone();
        }
        out
    }

    /// `ω` viewed inside the next module.
    pub fn lift(&self) -> Spinor {
        let mut out = Spinor::zero(self.m + 1);
        out.coeffs[..self.coeffs.len()].clone_from_slice(&self.coeffs);
        out
    }
}

impl fmt::Display for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if t == 0 {
                parts.push(format!("({c})"));
            } else {
                let w: Vec<String> = (0..self.m).filter(|k| t >> k & 1 == 1).map(|k| format!("w{}", k + 1)).collect();
                parts.push(format!("({c}){}", w.join("^")));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A monomial operator: column `c` is sent to row `target[c]` with factor
/// `√−1^phase[c]`. Every `ζ_n(e_S)` has this shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitOp {
    pub target: Vec<usize>,
    pub phase: Vec<u8>,
}

impl UnitOp {
    pub fn identity(dim: usize) -> Self {
        UnitOp { target: (0..dim).collect(), phase: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UnitOp) -> UnitOp {
        let target = other.target.iter().map(|&t| self.target[t]).collect();
        let phase = other.target.iter().zip(&other.phase).map(|(&t, &p)| (p + self.phase[t]) % 4).collect();
        UnitOp { target, phase }
    }

    pub fn negate(&self) -> UnitOp {
        UnitOp { target: self.target.clone(), phase: self.phase.iter().map(|p| (p + 2) % 4).collect() }
    }

    /// Apply to a coefficient vector.
    pub fn apply_slice(&self, v: &[G]) -> Vec<G> {
        let mut out = vec![G::zero(); v.len()];
        for (c, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out[self.target[c]] = rot(x, self.phase[c]);
            }
        }
        out
    }

    pub fn apply(&self, s: &Spinor) -> Spinor {
        Spinor { m: s.m, coeffs: self.apply_slice(&s.coeffs) }
    }

    pub fn to_map(&self) -> SpinMap {
        let d = self.dim();
        let mut m = SpinMap::zeros(d, d);
        for c in 0..d {
            m.matrix[self.target[c]][c] = rot(&G::one(), self.phase[c]);
        }
        m
    }
}

fn check_variant(n: usize, variant: Variant) -> Result<(), CliffError> {
    if variant == Variant::Minus && n.is_multiple_of(2) {
        return Err(CliffError::InvalidArgument(format!("ζ_{n}^- requested for even n")));
    }
    Ok(())
}

/// `ζ_n^{±}(e_k)` as a monomial operator, `1 ≤ k ≤ n`.
pub fn zeta_generator(n: usize, variant: Variant, k: usize) -> Result<UnitOp, CliffError> {
    check_variant(n, variant)?;
    if k == 0 || k > n {
        return Err(CliffError::DimensionMismatch(format!("generator e_{k} in dimension {n}")));
    }
    let m = half_dim(n);
    let dim = 1usize << m;
    let mut target = Vec::with_capacity(dim);
    let mut phase = Vec::with_capacity(dim);
    for t in 0..dim {
        if k == 2 * m + 1 {
            target.push(t);
            phase.push((1 + 2 * (t.count_ones() as u8)) % 4);
            continue;
        }
        let i = k.div_ceil(2);
        let bit = 1usize << (i - 1);
        let pos = (t & (bit - 1)).count_ones() as u8;
        let present = t & bit != 0;
        // e_{2i-1} = w_i + w_i', e_{2i} = -√−1 (w_i - w_i'); w_i' contracts with factor -1.
        let (tt, ph) = match (k % 2 == 1, present) {
            (true, false) => (t | bit, 2 * pos),
            (true, true) => (t & !bit, 2 + 2 * pos),
            (false, _) => (t ^ bit, 3 + 2 * pos),
        };
        target.push(tt);
        phase.push(ph % 4);
    }
    let op = UnitOp { target, phase };
    Ok(if variant == Variant::Minus { op.negate() } else { op })
}

/// `ζ_n^{±}(v)` for a complex vector `v ∈ ℂ^n`.
pub fn zeta_vector(n: usize, variant: Variant, v: &[G]) -> Result<SpinMap, CliffError> {
    if v.len() != n {
        return Err(CliffError::DimensionMismatch(format!("vector of length {} for n = {n}", v.len())));
    }
    let d = 1usize << half_dim(n);
    let mut out = SpinMap::zeros(d, d);
    for (k, c) in v.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&zeta_generator(n, variant, k + 1)?.to_map().scale(c));
        }
    }
    Ok(out)
}

/// Applies `ζ_n^{±}(v)` to a spinor.
pub fn zeta_action(n: usize, variant: Variant, v: &[G], s: &Spinor) -> Result<Spinor, CliffError> {
    if s.m != half_dim(n) {
        return Err(CliffError::DimensionMismatch(format!("spinor with m = {} for n = {n}", s.m)));
    }
    zeta_vector(n, variant, v)?.apply(s)
}

/// `ζ_n^{±}(g)` for an element of `Cl(n) ⊗ ℂ`.
pub fn zeta_clifford(variant: Variant, g: &CliffordElt) -> Result<SpinMap, CliffError> {
    let n = g.n();
    if g.signature() != (n, 0) {
        return Err(CliffError::DimensionMismatch("spin modules are built for Cl(n,0)".into()));
    }
    check_variant(n, variant)?;
    let d = 1usize << half_dim(n);
    let gens: Vec<UnitOp> = (1..=n).map(|k| zeta_generator(n, variant, k)).collect::<Result<_, _>>()?;
    let mut out = SpinMap::zeros(d, d);
    for (mask, c) in g.coeffs() {
        let mut op = UnitOp::identity(d);
        for k in 0..n {
            if mask >> k & 1 == 1 {
                op = op.compose(&gens[k]);
            }
        }
        out = out.add(&op.to_map().scale(c));
    }
    Ok(out)
}

/// The grading involution `γ(w_T) = (-1)^{|T|} w_T`.
pub fn gamma(s: &Spinor) -> Spinor {
    let coeffs =
        s.coeffs.iter().enumerate().map(|(t, c)| if t.count_ones() % 2 == 1 { -c } else { c.clone() }).collect();
    Spinor { m: s.m, coeffs }
}

/// `γ` on `ΛW` with `dim W = m`, as a monomial operator.
pub fn gamma_map(m: usize) -> UnitOp {
    let d = 1usize << m;
    UnitOp { target: (0..d).collect(), phase: (0..d).map(|t| if (t as u32).count_ones() % 2 == 1 { 2 } else { 0 }).collect() }
}

/// A linear map between spin modules, stored densely as `dst_dim × src_dim`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SpinMap {
    pub src_dim: usize,
    pub dst_dim: usize,
    pub matrix: Vec<Vec<G>>,
}

impl SpinMap {
    pub fn zeros(dst_dim: usize, src_dim: usize) -> Self {
        SpinMap { src_dim, dst_dim, matrix: vec![vec![G::zero(); src_dim]; dst_dim] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for k in 0..d {
            m.matrix[k][k] = G::one();
        }
        m
    }

    /// Build from the images of the basis vectors.
    pub fn from_columns(dst_dim: usize, cols: &[Vec<G>]) -> Self {
        let mut m = Self::zeros(dst_dim, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dst_dim);
            for (r, x) in col.iter().enumerate() {
                m.matrix[r][c] = x.clone();
            }
        }
        m
    }

    pub fn entry(&self, r: usize, c: usize) -> &G {
        &self.matrix[r][c]
    }

    pub fn apply_slice(&self, v: &[G]) -> Vec<G> {
        assert_eq!(v.len(), self.src_dim);
        self.matrix
            .iter()
            .map(|row| {
                let mut acc = G::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn apply(&self, s: &Spinor) -> Result<Spinor, CliffError> {
        if s.dim() != self.src_dim {
            return Err(CliffError::DimensionMismatch(format!("map from dim {} applied to dim {}", self.src_dim, s.dim())));
        }
        let coeffs = self.apply_slice(&s.coeffs);
        Ok(Spinor { m: self.dst_dim.trailing_zeros() as usize, coeffs })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SpinMap) -> SpinMap {
        assert_eq!(self.src_dim, other.dst_dim, "composition dimension mismatch");
        let mut out = SpinMap::zeros(self.dst_dim, other.src_dim);
        for r in 0..self.dst_dim {
            for (k, a) in self.matrix[r].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.src_dim {
                    let b = &other.matrix[k][c];
                    if !b.is_zero() {
                        out.matrix[r][c] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &SpinMap) -> SpinMap {
        assert_eq!((self.dst_dim, self.src_dim), (o.dst_dim, o.src_dim));
        let matrix = self.matrix.iter().zip(&o.matrix).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        SpinMap { src_dim: self.src_dim, dst_dim: self.dst_dim, matrix }
    }

    pub fn sub(&self, o: &SpinMap) -> SpinMap {
        self.add(&o.scale(&G::from_int(-1)))
    }

    pub fn scale(&self, k: &G) -> SpinMap {
        let matrix = self.matrix.iter().map(|row| row.iter().map(|x| x * k).collect()).collect();
        SpinMap { src_dim: self.src_dim, dst_dim: self.dst_dim, matrix }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(G::is_zero))
    }

    /// Row-major flattening, used to test linear independence of maps.
    pub fn flatten(&self) -> Vec<G> {
        self.matrix.iter().flatten().cloned().collect()
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<_> = self.matrix.iter().map(|r| linalg::sparse(r)).collect();
        linalg::rank(&rows, self.src_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(v: i64) -> G {
        G::from_int(v)
    }

    #[test]
    fn wedge_and_odd_generator() {
        // ζ_2(w_1) = ½(ζ(e_1) + √−1 ζ(e_2))
        let half = G::from_frac(1, 2);
        let w1 = vec![half.clone(), half.mul_i()];
        let one = Spinor::basis(1, 0);
        assert_eq!(zeta_action(2, Variant::Plus, &w1, &one).unwrap(), Spinor::basis(1, 1));
        let e3 = vec![gi(0), gi(0), gi(1)];
        assert_eq!(zeta_action(3, Variant::Plus, &e3, &one).unwrap(), one.scale(&G::i()));
        let w = Spinor::basis(1, 1);
        assert_eq!(zeta_action(3, Variant::Plus, &e3, &w).unwrap(), w.scale(&-G::i()));
        let e1 = vec![gi(1), gi(0)];
        let once = zeta_action(2, Variant::Plus, &e1, &one).unwrap();
        assert_eq!(zeta_action(2, Variant::Plus, &e1, &once).unwrap(), one.scale(&gi(-1)));
    }

    #[test]
    fn clifford_relations_hold() {
        for n in 1..=7 {
            let d = 1usize << half_dim(n);
            for a in 1..=n {
                for b in 1..=n {
                    let ea = zeta_generator(n, Variant::Plus, a).unwrap().to_map();
                    let eb = zeta_generator(n, Variant::Plus, b).unwrap().to_map();
                    let anti = ea.compose(&eb).add(&eb.compose(&ea));
                    let expect = if a == b { SpinMap::identity(d).scale(&gi(-2)) } else { SpinMap::zeros(d, d) };
                    assert_eq!(anti, expect, "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn gamma_anticommutes() {
        let g = gamma_map(2).to_map();
        for k in 1..=4 {
            let e = zeta_generator(4, Variant::Plus, k).unwrap().to_map();
            assert!(g.compose(&e).add(&e.compose(&g)).is_zero());
        }
        assert_eq!(gamma(&Spinor::basis(1, 1)), Spinor::basis(1, 1).scale(&gi(-1)));
        assert_eq!(gamma(&Spinor::basis(1, 0)), Spinor::basis(1, 0));
    }

    #[test]
    fn clifford_element_matches_generator_product() {
        let g = CliffordElt::blade(4, 0, &[1, 2], G::one());
        let z = zeta_clifford(Variant::Plus, &g).unwrap();
        let e1 = zeta_generator(4, Variant::Plus, 1).unwrap().to_map();
        let e2 = zeta_generator(4, Variant::Plus, 2).unwrap().to_map();
        assert_eq!(z, e1.compose(&e2));
    }

    #[test]
    fn minus_variant_only_for_odd() {
        assert!(zeta_generator(4, Variant::Minus, 1).is_err());
        let p = zeta_generator(5, Variant::Plus, 2).unwrap();
        assert_eq!(zeta_generator(5, Variant::Minus, 2).unwrap(), p.negate());
    }
}
