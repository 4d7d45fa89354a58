//! Polynomials in the formal parameters λ, ν over ℚ(√−1), affine forms,
//! affine substitutions and bivariate gcd.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gaussian::{fmt_q, qi, GaussianRational, Q};

type G = GaussianRational;

/// The affine form `lam·λ + nu·ν + c` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AffineExp {
    pub lam: Q,
    pub nu: Q,
    pub c: Q,
}

impl AffineExp {
    pub fn new(lam: Q, nu: Q, c: Q) -> Self {
        AffineExp { lam, nu, c }
    }

    pub fn constant(c: Q) -> Self {
        AffineExp { lam: Q::zero(), nu: Q::zero(), c }
    }

    pub fn lambda() -> Self {
        AffineExp { lam: Q::one(), nu: Q::zero(), c: Q::zero() }
    }

    pub fn nu() -> Self {
        AffineExp { lam: Q::zero(), nu: Q::one(), c: Q::zero() }
    }

    pub fn is_constant(&self) -> bool {
        self.lam.is_zero() && self.nu.is_zero()
    }

    pub fn add(&self, o: &AffineExp) -> AffineExp {
        AffineExp { lam: &self.lam + &o.lam, nu: &self.nu + &o.nu, c: &self.c + &o.c }
    }

    pub fn sub(&self, o: &AffineExp) -> AffineExp {
        AffineExp { lam: &self.lam - &o.lam, nu: &self.nu - &o.nu, c: &self.c - &o.c }
    }

    pub fn scale(&self, k: &Q) -> AffineExp {
        AffineExp { lam: &self.lam * k, nu: &self.nu * k, c: &self.c * k }
    }

    pub fn shift(&self, k: &Q) -> AffineExp {
        AffineExp { lam: self.lam.clone(), nu: self.nu.clone(), c: &self.c + k }
    }

    pub fn to_poly(&self) -> ParamPoly {
        let mut p = ParamPoly::zero();
        p.add_term((1, 0), G::real(self.lam.clone()));
        p.add_term((0, 1), G::real(self.nu.clone()));
        p.add_term((0, 0), G::real(self.c.clone()));
        p
    }

    pub fn substitute(&self, s: &Substitution) -> AffineExp {
        s.lam.scale(&self.lam).add(&s.nu.scale(&self.nu)).shift(&self.c)
    }

    pub fn eval(&self, lam: &G, nu: &G) -> G {
        lam.scale(&self.lam) + nu.scale(&self.nu) + G::real(self.c.clone())
    }

    /// `Some(k)` when `self - other` is the integer constant `k`.
    pub fn integer_offset(&self, other: &AffineExp) -> Option<i64> {
        let d = self.sub(other);
        if d.is_constant() && d.c.is_integer() {
            i64::try_from(d.c.to_integer()).ok()
        } else {
            None
        }
    }
}

impl fmt::Display for AffineExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (coef, name) in [(&self.lam, "lambda"), (&self.nu, "nu")] {
            if coef.is_zero() {
                continue;
            }
            let body = if coef.is_one() {
                name.to_string()
            } else if (-coef.clone()).is_one() {
                format!("-{name}")
            } else {
                format!("{}*{name}", fmt_q(coef))
            };
            parts.push(body);
        }
        if !self.c.is_zero() || parts.is_empty() {
            parts.push(fmt_q(&self.c));
        }
        let mut out = String::new();
        for (k, p) in parts.iter().enumerate() {
            if k > 0 && !p.starts_with('-') {
                out.push('+');
            }
            out.push_str(p);
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for AffineExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for AffineExp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AffineExp", 3)?;
        st.serialize_field("lambda", &fmt_q(&self.lam))?;
        st.serialize_field("nu", &fmt_q(&self.nu))?;
        st.serialize_field("const", &fmt_q(&self.c))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for AffineExp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lambda: String,
            nu: String,
            #[serde(rename = "const")]
            c: String,
        }
        let r = Raw::deserialize(d)?;
        let p = |s: &str| super::gaussian::parse_q(s).map_err(serde::de::Error::custom);
        Ok(AffineExp { lam: p(&r.lambda)?, nu: p(&r.nu)?, c: p(&r.c)? })
    }
}

/// Simultaneous affine substitution `λ ↦ lam`, `ν ↦ nu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub lam: AffineExp,
    pub nu: AffineExp,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution { lam: AffineExp::lambda(), nu: AffineExp::nu() }
    }

    /// Restrict to the line `λ = a·ν + c`, keeping ν free.
    pub fn lambda_line(a: Q, c: Q) -> Self {
        Substitution { lam: AffineExp::new(Q::zero(), a, c), nu: AffineExp::nu() }
    }

    /// Restrict to the line `ν = a·λ + c`, keeping λ free.
    pub fn nu_line(a: Q, c: Q) -> Self {
        Substitution { lam: AffineExp::lambda(), nu: AffineExp::new(a, Q::zero(), c) }
    }

    /// Shift `λ ↦ λ + dl`, `ν ↦ ν + dn`.
    pub fn shift(dl: Q, dn: Q) -> Self {
        Substitution { lam: AffineExp::lambda().shift(&dl), nu: AffineExp::nu().shift(&dn) }
    }

    /// Apply `self` after `first`: the result maps x to self(first(x)).
    pub fn after(&self, first: &Substitution) -> Substitution {
        Substitution { lam: first.lam.substitute(self), nu: first.nu.substitute(self) }
    }
}

/// A polynomial in λ, ν: map from `(deg_λ, deg_ν)` to a nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<(u32, u32), G>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(G::one())
    }

    pub fn constant(c: G) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0), c);
        p
    }

    pub fn lambda() -> Self {
        let mut p = Self::zero();
        p.add_term((1, 0), G::one());
        p
    }

    pub fn nu() -> Self {
        let mut p = Self::zero();
        p.add_term((0, 1), G::one());
        p
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), G> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(a, b)| a == 0 && b == 0)
    }

    pub fn constant_value(&self) -> Option<G> {
        if self.is_constant() {
            Some(self.terms.get(&(0, 0)).cloned().unwrap_or_default())
        } else {
            None
        }
    }

    pub fn add_term(&mut self, e: (u32, u32), c: G) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &ParamPoly) -> ParamPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &ParamPoly) -> ParamPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c);
        }
        r
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn mul(&self, o: &ParamPoly) -> ParamPoly {
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        let mut r = ParamPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term((e1.0 + e2.0, e1.1 + e2.1), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, k: &G) -> ParamPoly {
        if k.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect() }
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn deg_lambda(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    /// Leading term under graded lexicographic order with λ > ν.
    pub fn leading_grlex(&self) -> Option<((u32, u32), &G)> {
        self.terms.iter().max_by_key(|(&(a, b), _)| (a + b, a)).map(|(e, c)| (*e, c))
    }

    fn leading_lex(&self) -> Option<((u32, u32), &G)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn eval(&self, lam: &G, nu: &G) -> G {
        let mut acc = G::zero();
        for (&(a, b), c) in &self.terms {
            acc += &(c * &lam.pow(a) * nu.pow(b));
        }
        acc
    }

    pub fn substitute(&self, s: &Substitution) -> ParamPoly {
        let l = s.lam.to_poly();
        let v = s.nu.to_poly();
        let mut lpow: Vec<ParamPoly> = vec![ParamPoly::one()];
        let mut vpow: Vec<ParamPoly> = vec![ParamPoly::one()];
        let mut r = ParamPoly::zero();
        for (&(a, b), c) in &self.terms {
            while lpow.len() <= a as usize {
                let next = lpow.last().unwrap().mul(&l);
                lpow.push(next);
            }
            while vpow.len() <= b as usize {
                let next = vpow.last().unwrap().mul(&v);
                vpow.push(next);
            }
            r = r.add(&lpow[a as usize].mul(&vpow[b as usize]).scale(c));
        }
        r
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &ParamPoly) -> Option<ParamPoly> {
        let ((dl, dn), dc) = d.leading_lex()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv()?));
        }
        let dinv = dc.inv()?;
        let mut rem = self.clone();
        let mut quo = ParamPoly::zero();
        while let Some(((rl, rn), rc)) = rem.leading_lex() {
            if rl < dl || rn < dn {
                return None;
            }
            let e = (rl - dl, rn - dn);
            let c = rc * &dinv;
            let mut t = ParamPoly::zero();
            t.add_term(e, c.clone());
            rem = rem.sub(&d.mul(&t));
            quo.add_term(e, c);
        }
        Some(quo)
    }

    /// Monic-normalized gcd (leading grlex coefficient 1); gcd(0,0) = 0.
    pub fn gcd(&self, o: &ParamPoly) -> ParamPoly {
        let g = bivariate_gcd(self, o);
        g.make_monic()
    }

    /// Divide by the leading grlex coefficient.
    pub fn make_monic(&self) -> ParamPoly {
        match self.leading_grlex() {
            None => ParamPoly::zero(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Derivative with respect to λ (`var = 0`) or ν (`var = 1`).
    pub fn derivative(&self, var: usize) -> ParamPoly {
        let mut r = ParamPoly::zero();
        for (&(a, b), c) in &self.terms {
            let (k, e) = if var == 0 { (a, (a.saturating_sub(1), b)) } else { (b, (a, b.saturating_sub(1))) };
            if k > 0 {
                r.add_term(e, c.scale(&qi(k as i64)));
            }
        }
        r
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest grlex term first for readability
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(a, b)| std::cmp::Reverse((a + b, a)));
        for (a, b) in keys {
            let c = &self.terms[&(a, b)];
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let mut s = Vec::new();
                    if a == 1 {
                        s.push("lambda".to_string());
                    } else if a > 1 {
                        s.push(format!("lambda^{a}"));
                    }
                    if b == 1 {
                        s.push("nu".to_string());
                    } else if b > 1 {
                        s.push(format!("nu^{b}"));
                    }
                    s.join("*")
                }
            };
            let cs = c.to_string();
            let coef = if mono.is_empty() {
                cs.clone()
            } else if c.is_one() {
                String::new()
            } else if (-c).is_one() {
                "-".to_string()
            } else if c.is_real() {
                format!("{cs}*")
            } else {
                format!("({cs})*")
            };
            let term = format!("{coef}{mono}");
            if !first && !term.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{term}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials in ν (dense, lowest degree first).

#[derive(Clone, PartialEq, Eq, Debug, Default)]
struct UPoly(Vec<G>);

impl UPoly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &G {
        self.0.last().expect("nonzero polynomial")
    }

    fn scale(&self, k: &G) -> UPoly {
        UPoly(self.0.iter().map(|c| c * k).collect()).trim()
    }

    fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = G::zero();
        UPoly((0..n).map(|k| self.0.get(k).unwrap_or(&z) + o.0.get(k).unwrap_or(&z)).collect()).trim()
    }

    fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-G::one()))
    }

    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut r = vec![G::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += &(a * b);
            }
        }
        UPoly(r).trim()
    }

    fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::default();
        }
        let mut v = vec![G::zero(); k];
        v.extend(self.0.iter().cloned());
        UPoly(v)
    }

    /// Division with remainder over the field.
    fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let inv = d.lc().inv().expect("nonzero divisor");
        let mut r = self.clone();
        let mut q = UPoly::default();
        while !r.is_zero() && r.deg() >= d.deg() {
            let k = r.deg() - d.deg();
            let c = r.lc() * &inv;
            let t = UPoly(vec![c]).shift(k);
            r = r.sub(&d.mul(&t));
            q = q.add(&t);
        }
        (q, r)
    }

    fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// λ-major view: coefficient of λ^k is a univariate polynomial in ν.
fn to_lambda_major(p: &ParamPoly) -> Vec<UPoly> {
    let dl = p.deg_lambda() as usize;
    let mut out = vec![UPoly::default(); dl + 1];
    for (&(a, b), c) in &p.terms {
        let slot = &mut out[a as usize].0;
        if slot.len() <= b as usize {
            slot.resize(b as usize + 1, G::zero());
        }
        slot[b as usize] = c.clone();
    }
    out.into_iter().map(UPoly::trim).collect()
}

fn from_lambda_major(v: &[UPoly]) -> ParamPoly {
    let mut p = ParamPoly::zero();
    for (a, u) in v.iter().enumerate() {
        for (b, c) in u.0.iter().enumerate() {
            p.add_term((a as u32, b as u32), c.clone());
        }
    }
    p
}

fn lm_trim(mut v: Vec<UPoly>) -> Vec<UPoly> {
    while v.last().is_some_and(|u| u.is_zero()) {
        v.pop();
    }
    v
}

fn content(v: &[UPoly]) -> UPoly {
    let mut g = UPoly::default();
    for u in v {
        g = g.gcd(u);
        if g.deg() == 0 && !g.is_zero() {
            break;
        }
    }
    g
}

fn divide_content(v: &[UPoly], c: &UPoly) -> Vec<UPoly> {
    v.iter()
        .map(|u| {
            let (q, r) = u.divrem(c);
            debug_assert!(r.is_zero());
            q
        })
        .collect()
}

/// Pseudo-remainder of `a` by `b` in F[ν][λ].
fn prem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r: Vec<UPoly> = a.to_vec();
    r = lm_trim(r);
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let k = dr - db;
        let mut next: Vec<UPoly> = r.iter().map(|u| u.mul(lcb)).collect();
        for (t, bt) in b.iter().enumerate() {
            next[t + k] = next[t + k].sub(&bt.mul(&lcr));
        }
        r = lm_trim(next);
    }
    r
}

fn bivariate_gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return ParamPoly::one();
    }
    let mut am = lm_trim(to_lambda_major(a));
    let mut bm = lm_trim(to_lambda_major(b));
    let ca = content(&am);
    let cb = content(&bm);
    let c = ca.gcd(&cb);
    am = divide_content(&am, &ca);
    bm = divide_content(&bm, &cb);
    if am.len() < bm.len() {
        std::mem::swap(&mut am, &mut bm);
    }
    let prim = loop {
        if bm.len() == 1 {
            // λ-free primitive polynomial: a unit
            break vec![UPoly(vec![G::one()])];
        }
        let r = prem(&am, &bm);
        if r.is_empty() {
            break bm;
        }
        let cr = content(&r);
        am = bm;
        bm = divide_content(&r, &cr);
    };
    let prim_poly = from_lambda_major(&prim);
    let c_poly = from_lambda_major(&[c]);
    prim_poly.mul(&c_poly)
}

#[cfg(test)]
mod tests {
    use super::super::gaussian::q;
    use super::*;

    fn lin(a: i64, b: i64, c: i64) -> ParamPoly {
        AffineExp::new(qi(a), qi(b), qi(c)).to_poly()
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let f = lin(1, 1, 1);
        let g = lin(1, -1, 2);
        let h = lin(0, 1, -3);
        let a = f.mul(&g).mul(&g);
        let b = f.mul(&h).mul(&g);
        let d = a.gcd(&b);
        assert_eq!(d, f.mul(&g).make_monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = lin(1, 2, 0).mul(&lin(0, 1, 1));
        let b = lin(1, 0, 5);
        assert_eq!(a.gcd(&b), ParamPoly::one());
    }

    #[test]
    fn gcd_univariate_in_nu() {
        let a = lin(0, 1, 1).mul(&lin(0, 1, 2));
        let b = lin(0, 1, 2).mul(&lin(0, 2, 7));
        assert_eq!(a.gcd(&b), lin(0, 1, 2));
    }

    #[test]
    fn exact_division() {
        let f = lin(2, 1, 1);
        let g = lin(1, -1, 3).mul(&lin(0, 1, 1));
        let p = f.mul(&g);
        assert_eq!(p.div_exact(&f).unwrap(), g);
        assert!(lin(1, 0, 0).div_exact(&lin(0, 1, 0)).is_none());
    }

    #[test]
    fn substitution_on_line() {
        // λ+ν+1/2 on the line λ = -ν - 1/2 vanishes
        let p = AffineExp::new(qi(1), qi(1), q(1, 2)).to_poly();
        let s = Substitution::lambda_line(qi(-1), q(-1, 2));
        assert!(p.substitute(&s).is_zero());
    }
}
