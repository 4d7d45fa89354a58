//! The real Clifford algebra `Cl(p,q)` with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::CliffError;
use crate::paramfield::GaussianRational;

type G = GaussianRational;

/// An element `Σ c_S e_S` of `Cl(p,q) ⊗ ℂ`. Subsets `S ⊆ {1..n}` are stored as
/// bit masks with bit `i-1` standing for `e_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CliffordElt {
    n: usize,
    p: usize,
    coeffs: BTreeMap<u32, G>,
}

/// Sign and basis blade of `e_A · e_B` for the signature with `p` negative squares.
pub fn blade_product(a: u32, b: u32, p: usize) -> (i32, u32) {
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    let neg_mask: u32 = if p >= 32 { u32::MAX } else { (1u32 << p) - 1 };
    let squares_neg = (a & b & neg_mask).count_ones();
    let sign = if (swaps + squares_neg).is_multiple_of(2) { 1 } else { -1 };
    (sign, a ^ b)
}

impl CliffordElt {
    /// The zero element of `Cl(p,q)` with `n = p + q`.
    pub fn zero(p: usize, q: usize) -> Self {
        assert!(p + q <= 31, "at most 31 generators supported");
        CliffordElt { n: p + q, p, coeffs: BTreeMap::new() }
    }

    pub fn one(p: usize, q: usize) -> Self {
        Self::scalar(p, q, G::one())
    }

    pub fn scalar(p: usize, q: usize, c: G) -> Self {
        let mut e = Self::zero(p, q);
        e.add_term(0, c);
        e
    }

    /// The generator `e_i`, `1 ≤ i ≤ n`.
    pub fn e(p: usize, q: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= p + q, "generator index out of range");
        Self::blade(p, q, &[i], G::one())
    }

    /// `c · e_{i_1} ⋯ e_{i_k}` for an arbitrary index sequence.
    pub fn blade(p: usize, q: usize, idx: &[usize], c: G) -> Self {
        let mut acc = Self::scalar(p, q, c);
        for &i in idx {
            let mut g = Self::zero(p, q);
            g.add_term(1 << (i - 1), G::one());
            acc = &acc * &g;
        }
        acc
    }

    /// The vector `Σ v_i e_i`.
    pub fn vector(p: usize, q: usize, v: &[G]) -> Self {
        assert_eq!(v.len(), p + q);
        let mut e = Self::zero(p, q);
        for (k, c) in v.iter().enumerate() {
            e.add_term(1 << k, c.clone());
        }
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.n - self.p)
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, G> {
        &self.coeffs
    }

    /// Coefficient of `e_S` where `S` is given as a bit mask.
    pub fn coeff(&self, mask: u32) -> G {
        self.coeffs.get(&mask).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mask: u32, c: G) {
        let slot = self.coeffs.entry(mask).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_algebra(&self, o: &Self) -> Result<(), CliffError> {
        if self.n != o.n || self.p != o.p {
            return Err(CliffError::DimensionMismatch(format!(
                "Cl({},{}) vs Cl({},{})",
                self.p,
                self.n - self.p,
                o.p,
                o.n - o.p
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, CliffError> {
        self.same_algebra(o)?;
        let mut out = Self::zero(self.p, self.n - self.p);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                let (s, m) = blade_product(*a, *b, self.p);
                let c = ca * cb;
                out.add_term(m, if s > 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, CliffError> {
        self.same_algebra(o)?;
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &G) -> Self {
        let mut out = Self::zero(self.p, self.n - self.p);
        for (m, c) in &self.coeffs {
            out.add_term(*m, c * k);
        }
        out
    }

    fn map_signs(&self, f: impl Fn(u32) -> bool) -> Self {
        let mut out = self.clone();
        for (m, c) in out.coeffs.iter_mut() {
            if f(m.count_ones()) {
                *c = -c.clone();
            }
        }
        out
    }

    /// The canonical automorphism `α`, `-1` on odd elements.
    pub fn alpha(&self) -> Self {
        self.map_signs(|k| k % 2 == 1)
    }

    /// The reversal anti-automorphism `e_{i_1}⋯e_{i_k} ↦ e_{i_k}⋯e_{i_1}`.
    pub fn reversal(&self) -> Self {
        self.map_signs(|k| (k * k.saturating_sub(1) / 2) % 2 == 1)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|m| m.count_ones() % 2 == 0)
    }

    /// The scalar part if the element is a pure scalar.
    pub fn as_scalar(&self) -> Option<G> {
        match self.coeffs.len() {
            0 => Some(G::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    /// Components along `e_1..e_n` if the element lies in the vector subspace.
    pub fn as_vector(&self) -> Option<Vec<G>> {
        if self.coeffs.keys().any(|m| m.count_ones() != 1) {
            return None;
        }
        Some((0..self.n).map(|k| self.coeff(1 << k)).collect())
    }

    /// Inverse of a Pin element, using `g · reversal(g) = ±1`.
    pub fn pin_inverse(&self) -> Result<Self, CliffError> {
        let rev = self.reversal();
        let norm = self.try_mul(&rev)?.as_scalar().ok_or(CliffError::NotInPin)?;
        let is_unit = norm.is_real() && (norm.is_one() || (-&norm).is_one());
        if !is_unit {
            return Err(CliffError::NotInPin);
        }
        Ok(rev.scale(&norm))
    }
}

/// The quadratic form `Q(y) = -y_1² - ⋯ - y_p² + y_{p+1}² + ⋯`.
pub fn quadratic_form(p: usize, y: &[G]) -> G {
    let mut acc = G::zero();
    for (k, c) in y.iter().enumerate() {
        let sq = c * c;
        if k < p {
            acc -= &sq;
        } else {
            acc += &sq;
        }
    }
    acc
}

/// Applies the covering map `q(g)y = α(g) y g^{-1}`.
///
/// The element is validated as a Pin element: `g · reversal(g)` must be `±1`
/// and `q(g)` has to map every basis vector back into the vector subspace.
pub fn pin_cover_action(g: &CliffordElt, y: &[G]) -> Result<Vec<G>, CliffError> {
    let (p, q) = g.signature();
    if y.len() != g.n() {
        return Err(CliffError::DimensionMismatch(format!("vector of length {} in Cl({p},{q})", y.len())));
    }
    let ginv = g.pin_inverse()?;
    let ag = g.alpha();
    let conj = |v: &CliffordElt| -> Result<CliffordElt, CliffError> { ag.try_mul(v)?.try_mul(&ginv) };
    for i in 1..=g.n() {
        if conj(&CliffordElt::e(p, q, i))?.as_vector().is_none() {
            return Err(CliffError::NotInPin);
        }
    }
    conj(&CliffordElt::vector(p, q, y))?.as_vector().ok_or(CliffError::NotInPin)
}

impl Mul for &CliffordElt {
    type Output = CliffordElt;
    fn mul(self, o: &CliffordElt) -> CliffordElt {
        self.try_mul(o).expect("Clifford algebras differ")
    }
}

impl Add for &CliffordElt {
    type Output = CliffordElt;
    fn add(self, o: &CliffordElt) -> CliffordElt {
        self.try_add(o).expect("Clifford algebras differ")
    }
}

impl Sub for &CliffordElt {
    type Output = CliffordElt;
    fn sub(self, o: &CliffordElt) -> CliffordElt {
        self.try_add(&-o).expect("Clifford algebras differ")
    }
}

impl Neg for &CliffordElt {
    type Output = CliffordElt;
    fn neg(self) -> CliffordElt {
        self.scale(&G::from_int(-1))
    }
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask >> k & 1 == 1).map(|k| k as usize + 1).collect()
}

impl fmt::Display for CliffordElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                if *m == 0 {
                    format!("({c})")
                } else {
                    let idx: Vec<String> = mask_indices(*m).iter().map(|i| i.to_string()).collect();
                    format!("({c})e_{{{}}}", idx.join(","))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TermOut {
    subset: Vec<usize>,
    coeff: G,
}

impl Serialize for CliffordElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<TermOut> =
            self.coeffs.iter().map(|(m, c)| TermOut { subset: mask_indices(*m), coeff: c.clone() }).collect();
        let mut st = s.serialize_struct("CliffordElt", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("signature", &(self.p, self.n - self.p))?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> CliffordElt {
        CliffordElt::e(3, 0, i)
    }

    #[test]
    fn generator_relations() {
        assert_eq!(&e(1) * &e(1), CliffordElt::scalar(3, 0, G::from_int(-1)));
        let e12 = CliffordElt::blade(3, 0, &[1, 2], G::one());
        assert_eq!(&e(1) * &e(2), e12);
        assert_eq!(&e(2) * &e(1), -&e12);
        assert_eq!(&e12 * &e12, CliffordElt::scalar(3, 0, G::from_int(-1)));
        let f = CliffordElt::e(1, 1, 2);
        assert_eq!(&f * &f, CliffordElt::one(1, 1));
    }

    #[test]
    fn cover_action_of_reflection() {
        let one = G::one();
        let z = G::zero();
        let y1 = vec![one.clone(), z.clone(), z.clone()];
        let y2 = vec![z.clone(), one.clone(), z.clone()];
        assert_eq!(pin_cover_action(&e(1), &y1).unwrap(), vec![-one.clone(), z.clone(), z.clone()]);
        assert_eq!(pin_cover_action(&e(1), &y2).unwrap(), y2);
        assert_eq!(pin_cover_action(&CliffordElt::one(3, 0), &y1).unwrap(), y1);
    }

    #[test]
    fn non_pin_elements_rejected() {
        let bad = &CliffordElt::one(3, 0) + &e(1);
        assert_eq!(pin_cover_action(&bad, &[G::one(), G::zero(), G::zero()]), Err(CliffError::NotInPin));
        let twice = e(1).scale(&G::from_int(2));
        assert!(pin_cover_action(&twice, &[G::one(), G::zero(), G::zero()]).is_err());
    }

    #[test]
    fn mismatch_detected() {
        assert!(e(1).try_mul(&CliffordElt::e(2, 1, 1)).is_err());
    }
}
