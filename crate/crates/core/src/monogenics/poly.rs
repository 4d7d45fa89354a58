//! Spinor-valued polynomials on `ℝ^N`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cliffspin::{half_dim, pin_cover_action, spin_dim, zeta_generator, CliffordElt, SpinMap, Spinor, UnitOp, Variant};
use crate::paramfield::GaussianRational;

type G = GaussianRational;

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

/// Exponent vector; entries beyond the number of variables stay zero.
pub type Monomial = [u8; MAX_VARS];

/// All monomials of total degree `d` in `nvars` variables, in lexicographic order.
pub fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
    fn rec(k: usize, nvars: usize, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k + 1 == nvars {
            cur[k] = left as u8;
            out.push(*cur);
            cur[k] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[k] = e as u8;
            rec(k + 1, nvars, left - e, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push([0; MAX_VARS]);
        }
        return out;
    }
    rec(0, nvars, d, &mut [0; MAX_VARS], &mut out);
    out
}

pub fn monomial_degree(m: &Monomial) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// The Clifford generators `ζ_N(e_1), …, ζ_N(e_N)` acting on `S_N`.
pub fn clifford_gens(nvars: usize) -> Vec<UnitOp> {
    (1..=nvars).map(|k| zeta_generator(nvars, Variant::Plus, k).expect("valid generator")).collect()
}

/// A polynomial map `ℝ^N → S` with exact spinor coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpinorPolynomial {
    nvars: usize,
    sdim: usize,
    terms: BTreeMap<Monomial, Vec<G>>,
}

fn axpy_vec(target: &mut [G], k: &G, src: &[G]) {
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t += &(k * s);
        }
    }
}

impl SpinorPolynomial {
    pub fn zero(nvars: usize, sdim: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        SpinorPolynomial { nvars, sdim, terms: BTreeMap::new() }
    }

    /// The zero polynomial valued in the spin module `S_N`.
    pub fn zero_spin(nvars: usize) -> Self {
        Self::zero(nvars, spin_dim(nvars))
    }

    pub fn constant(nvars: usize, s: &Spinor) -> Self {
        let mut p = Self::zero(nvars, s.dim());
        p.add_term([0; MAX_VARS], s.coeffs());
        p
    }

    /// `x^α · s`.
    pub fn monomial(nvars: usize, mono: Monomial, s: &Spinor) -> Self {
        let mut p = Self::zero(nvars, s.dim());
        p.add_term(mono, s.coeffs());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn sdim(&self) -> usize {
        self.sdim
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Vec<G>> {
        &self.terms
    }

    pub fn coeff(&self, mono: &Monomial) -> Vec<G> {
        self.terms.get(mono).cloned().unwrap_or_else(|| vec![G::zero(); self.sdim])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, c: &[G]) {
        self.add_scaled_term(mono, &G::one(), c);
    }

    pub fn add_scaled_term(&mut self, mono: Monomial, k: &G, c: &[G]) {
        assert_eq!(c.len(), self.sdim, "spinor dimension mismatch");
        if k.is_zero() || c.iter().all(G::is_zero) {
            return;
        }
        let slot = self.terms.entry(mono).or_insert_with(|| vec![G::zero(); c.len()]);
        axpy_vec(slot, k, c);
        if slot.iter().all(G::is_zero) {
            self.terms.remove(&mono);
        }
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(monomial_degree).max()
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|m| monomial_degree(m) == d)
    }

    pub fn add_scaled(&mut self, k: &G, o: &SpinorPolynomial) {
        assert_eq!((self.nvars, self.sdim), (o.nvars, o.sdim), "polynomial shape mismatch");
        for (m, c) in &o.terms {
            self.add_scaled_term(*m, k, c);
        }
    }

    pub fn add(&self, o: &SpinorPolynomial) -> SpinorPolynomial {
        let mut out = self.clone();
        out.add_scaled(&G::one(), o);
        out
    }

    pub fn sub(&self, o: &SpinorPolynomial) -> SpinorPolynomial {
        let mut out = self.clone();
        out.add_scaled(&G::from_int(-1), o);
        out
    }

    pub fn scale(&self, k: &G) -> SpinorPolynomial {
        if k.is_zero() {
            return Self::zero(self.nvars, self.sdim);
        }
        let terms = self.terms.iter().map(|(m, c)| (*m, c.iter().map(|x| x * k).collect())).collect();
        SpinorPolynomial { nvars: self.nvars, sdim: self.sdim, terms }
    }

    /// `x_k · φ` for `1 ≤ k ≤ N`.
    pub fn mul_coord(&self, k: usize) -> SpinorPolynomial {
        assert!(k >= 1 && k <= self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = *m;
                m2[k - 1] += 1;
                (m2, c.clone())
            })
            .collect();
        SpinorPolynomial { nvars: self.nvars, sdim: self.sdim, terms }
    }

    /// `|x|² · φ`, summing over all variables.
    pub fn mul_norm_sq(&self) -> SpinorPolynomial {
        let mut out = Self::zero(self.nvars, self.sdim);
        for k in 1..=self.nvars {
            out.add_scaled(&G::one(), &self.mul_coord(k).mul_coord(k));
        }
        out
    }

    /// `∂φ/∂x_k`.
    pub fn deriv(&self, k: usize) -> SpinorPolynomial {
        assert!(k >= 1 && k <= self.nvars);
        let mut out = Self::zero(self.nvars, self.sdim);
        for (m, c) in &self.terms {
            let e = m[k - 1];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2[k - 1] -= 1;
            out.add_scaled_term(m2, &G::from_int(e as i64), c);
        }
        out
    }

    /// Apply a monomial spin operator to every coefficient.
    pub fn apply_unit(&self, op: &UnitOp) -> SpinorPolynomial {
        assert_eq!(op.dim(), self.sdim);
        let terms = self.terms.iter().map(|(m, c)| (*m, op.apply_slice(c))).collect();
        SpinorPolynomial { nvars: self.nvars, sdim: self.sdim, terms }
    }

    /// Apply a linear map between spin modules to every coefficient.
    pub fn apply_map(&self, map: &SpinMap) -> SpinorPolynomial {
        assert_eq!(map.src_dim, self.sdim);
        let mut out = Self::zero(self.nvars, map.dst_dim);
        for (m, c) in &self.terms {
            out.add_term(*m, &map.apply_slice(c));
        }
        out
    }

    /// The same polynomial regarded as a function of more variables.
    pub fn with_nvars(&self, nvars: usize) -> SpinorPolynomial {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        SpinorPolynomial { nvars, sdim: self.sdim, terms: self.terms.clone() }
    }

    /// The same polynomial as a function of fewer variables; the dropped
    /// variables must not occur.
    pub fn restrict_nvars(&self, nvars: usize) -> SpinorPolynomial {
        assert!(nvars <= self.nvars);
        assert!(self.terms.keys().all(|m| m[nvars..].iter().all(|&e| e == 0)), "dropped variable occurs");
        SpinorPolynomial { nvars, sdim: self.sdim, terms: self.terms.clone() }
    }

    /// `x ↦ φ(Mx)` for an `N × N` matrix `M`.
    pub fn linear_substitute(&self, mat: &[Vec<G>]) -> SpinorPolynomial {
        let n = self.nvars;
        assert_eq!(mat.len(), n);
        // images of the coordinate functions as scalar linear forms
        let mut out = Self::zero(n, self.sdim);
        for (m, c) in &self.terms {
            let mut acc: BTreeMap<Monomial, G> = BTreeMap::new();
            acc.insert([0; MAX_VARS], G::one());
            for k in 0..n {
                for _ in 0..m[k] {
                    let mut next: BTreeMap<Monomial, G> = BTreeMap::new();
                    for (mm, v) in &acc {
                        for (l, a) in mat[k].iter().enumerate() {
                            if a.is_zero() {
                                continue;
                            }
                            let mut m2 = *mm;
                            m2[l] += 1;
                            *next.entry(m2).or_default() += &(v * a);
                        }
                    }
                    acc = next;
                }
            }
            for (mm, v) in acc {
                out.add_scaled_term(mm, &v, c);
            }
        }
        out
    }

    /// Coefficient vector against an ordered monomial list, spin index fastest.
    pub fn to_dense(&self, monos: &[Monomial]) -> Vec<G> {
        let mut v = Vec::with_capacity(monos.len() * self.sdim);
        for m in monos {
            v.extend(self.coeff(m));
        }
        v
    }

    pub fn from_dense(nvars: usize, sdim: usize, monos: &[Monomial], v: &[G]) -> SpinorPolynomial {
        let mut p = Self::zero(nvars, sdim);
        for (k, m) in monos.iter().enumerate() {
            p.add_term(*m, &v[k * sdim..(k + 1) * sdim]);
        }
        p
    }

    /// Parts grouped by the exponent of the last variable.
    pub fn split_last_var(&self) -> BTreeMap<u8, SpinorPolynomial> {
        let mut out: BTreeMap<u8, SpinorPolynomial> = BTreeMap::new();
        let last = self.nvars - 1;
        for (m, c) in &self.terms {
            let mut m2 = *m;
            let e = m2[last];
            m2[last] = 0;
            out.entry(e).or_insert_with(|| Self::zero(self.nvars, self.sdim)).add_term(m2, c);
        }
        out
    }
}

/// `x̲φ = Σ_k x_k ζ(e_k) φ`.
pub fn clifford_x(phi: &SpinorPolynomial) -> SpinorPolynomial {
    clifford_x_with(phi, &clifford_gens(phi.nvars()), phi.nvars())
}

/// `Σ_{k ≤ upto} x_k g_k φ` for given generator matrices.
pub fn clifford_x_with(phi: &SpinorPolynomial, gens: &[UnitOp], upto: usize) -> SpinorPolynomial {
    let mut out = SpinorPolynomial::zero(phi.nvars(), phi.sdim());
    for k in 1..=upto {
        out.add_scaled(&G::one(), &phi.apply_unit(&gens[k - 1]).mul_coord(k));
    }
    out
}

/// The Dirac operator `D̸φ = Σ_k ζ(e_k) ∂φ/∂x_k`.
pub fn dirac(phi: &SpinorPolynomial) -> SpinorPolynomial {
    dirac_with(phi, &clifford_gens(phi.nvars()))
}

pub fn dirac_with(phi: &SpinorPolynomial, gens: &[UnitOp]) -> SpinorPolynomial {
    let mut out = SpinorPolynomial::zero(phi.nvars(), phi.sdim());
    for k in 1..=phi.nvars() {
        out.add_scaled(&G::one(), &phi.deriv(k).apply_unit(&gens[k - 1]));
    }
    out
}

/// The natural action `(g·φ)(x) = ζ(g) φ(q(g)^{-1} x)` of a Pin element on
/// polynomials in `N` variables valued in `S_N`. The element may live in a
/// smaller Clifford algebra `Cl(n)`, `n ≤ N`, embedded in `Cl(N)`.
pub fn pin_act(g: &CliffordElt, phi: &SpinorPolynomial) -> Result<SpinorPolynomial, crate::cliffspin::CliffError> {
    let big = phi.nvars();
    let mut lifted = CliffordElt::zero(big, 0);
    for (mask, c) in g.coeffs() {
        lifted.add_term(*mask, c.clone());
    }
    let ginv = lifted.pin_inverse()?;
    let mut mat = vec![vec![G::zero(); big]; big];
    for l in 0..big {
        let mut e = vec![G::zero(); big];
        e[l] = G::one();
        let col = pin_cover_action(&ginv, &e)?;
        for (k, v) in col.into_iter().enumerate() {
            mat[k][l] = v;
        }
    }
    let spin = crate::cliffspin::zeta_clifford(Variant::Plus, &lifted)?;
    debug_assert_eq!(half_dim(big), phi.sdim().trailing_zeros() as usize);
    Ok(phi.linear_substitute(&mat).apply_map(&spin))
}

impl fmt::Display for SpinorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let m = self.sdim.trailing_zeros() as usize;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(mono, c)| {
                let xs: Vec<String> = (0..self.nvars)
                    .filter(|&k| mono[k] > 0)
                    .map(|k| if mono[k] == 1 { format!("x{}", k + 1) } else { format!("x{}^{}", k + 1, mono[k]) })
                    .collect();
                let s = Spinor::from_coeffs(m, c.clone());
                if xs.is_empty() {
                    format!("[{s}]")
                } else {
                    format!("{}·[{s}]", xs.join("·"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TermOut<'a> {
    exponents: &'a [u8],
    spinor: &'a [G],
}

impl Serialize for SpinorPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<TermOut> =
            self.terms.iter().map(|(m, c)| TermOut { exponents: &m[..self.nvars], spinor: c }).collect();
        let mut st = s.serialize_struct("SpinorPolynomial", 3)?;
        st.serialize_field("nvars", &self.nvars)?;
        st.serialize_field("spin_dim", &self.sdim)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(7, 4).len(), 210);
        assert_eq!(monomials_of_degree(1, 5), vec![{
            let mut m = [0; MAX_VARS];
            m[0] = 5;
            m
        }]);
    }

    #[test]
    fn dirac_examples() {
        for n in 2..=5 {
            let s = Spinor::basis(half_dim(n), 1 % spin_dim(n));
            let c = SpinorPolynomial::constant(n, &s);
            assert!(dirac(&c).is_zero());
            let gens = clifford_gens(n);
            for k in 1..=n {
                assert_eq!(dirac(&c.mul_coord(k)), c.apply_unit(&gens[k - 1]));
            }
            assert_eq!(dirac(&clifford_x(&c)), c.scale(&G::from_int(-(n as i64))));
        }
    }

    #[test]
    fn x_underline_squares_to_minus_norm() {
        let s = Spinor::from_coeffs(1, vec![G::from_int(2), G::i()]);
        let c = SpinorPolynomial::constant(3, &s);
        assert_eq!(clifford_x(&clifford_x(&c)), c.mul_norm_sq().scale(&G::from_int(-1)));
    }
}
