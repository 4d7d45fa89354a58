//! Rational functions in λ, ν decorated with formal Gamma factors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::gaussian::{qi, GaussianRational, Q};
use super::poly::{AffineExp, ParamPoly, Substitution};
use super::ParamError;

type G = GaussianRational;

/// One formal factor `Γ(arg)^sign`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaToken {
    pub sign: i8,
    pub arg: AffineExp,
}

/// Element of ℚ(√−1)(λ, ν) times a product of Gamma powers.
///
/// Gamma arguments are always stored in canonical form: one representative
/// per integer-shift class, with constant term in `[0, 1)`, and a nonzero
/// net exponent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamScalar {
    num: ParamPoly,
    den: ParamPoly,
    gammas: BTreeMap<AffineExp, i32>,
}

fn floor_q(x: &Q) -> Q {
    x.floor()
}

impl ParamScalar {
    pub fn zero() -> Self {
        ParamScalar { num: ParamPoly::zero(), den: ParamPoly::one(), gammas: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(G::one())
    }

    pub fn constant(c: G) -> Self {
        ParamScalar { num: ParamPoly::constant(c), den: ParamPoly::one(), gammas: BTreeMap::new() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(G::from_int(v))
    }

    pub fn from_q(v: Q) -> Self {
        Self::constant(G::real(v))
    }

    pub fn frac(a: i64, b: i64) -> Self {
        Self::constant(G::from_frac(a, b))
    }

    pub fn i() -> Self {
        Self::constant(G::i())
    }

    pub fn lambda() -> Self {
        Self::from_poly(ParamPoly::lambda())
    }

    pub fn nu() -> Self {
        Self::from_poly(ParamPoly::nu())
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        ParamScalar { num: p, den: ParamPoly::one(), gammas: BTreeMap::new() }
    }

    pub fn from_affine(a: &AffineExp) -> Self {
        Self::from_poly(a.to_poly())
    }

    /// `num / den`, reduced.
    pub fn ratio(num: ParamPoly, den: ParamPoly) -> Result<Self, ParamError> {
        if den.is_zero() {
            return Err(ParamError::ZeroDenominator);
        }
        Ok(Self::build(num, den, BTreeMap::new()))
    }

    /// The factor `Γ(arg)`.
    pub fn gamma(arg: AffineExp) -> Self {
        let mut g = BTreeMap::new();
        g.insert(arg, 1);
        Self::build(ParamPoly::one(), ParamPoly::one(), g)
    }

    /// The factor `1/Γ(arg)`.
    pub fn inv_gamma(arg: AffineExp) -> Self {
        let mut g = BTreeMap::new();
        g.insert(arg, -1);
        Self::build(ParamPoly::one(), ParamPoly::one(), g)
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    /// Canonical Gamma factors as `(argument, net exponent)`.
    pub fn gammas(&self) -> &BTreeMap<AffineExp, i32> {
        &self.gammas
    }

    /// Gamma factors expanded into individual tokens.
    pub fn gamma_tokens(&self) -> Vec<GammaToken> {
        let mut v = Vec::new();
        for (arg, &e) in &self.gammas {
            for _ in 0..e.unsigned_abs() {
                v.push(GammaToken { sign: e.signum() as i8, arg: arg.clone() });
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.gammas.is_empty() && self.den == ParamPoly::one() && self.num == ParamPoly::one()
    }

    pub fn has_gammas(&self) -> bool {
        !self.gammas.is_empty()
    }

    /// Constant value when the scalar carries no λ, ν or Gamma dependence.
    pub fn constant_value(&self) -> Option<G> {
        if !self.gammas.is_empty() {
            return None;
        }
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    fn build(num: ParamPoly, den: ParamPoly, gammas: BTreeMap<AffineExp, i32>) -> Self {
        let mut s = ParamScalar { num, den, gammas };
        s.normalize_gammas();
        s.reduce();
        s
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            *self = Self::zero();
            return;
        }
        if let Some(c) = self.den.constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            self.num = self.num.scale(&inv);
            self.den = ParamPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_constant() {
            self.num = self.num.div_exact(&g).expect("gcd divides numerator");
            self.den = self.den.div_exact(&g).expect("gcd divides denominator");
        }
        let (_, lc) = self.den.leading_grlex().expect("nonzero denominator");
        let inv = lc.inv().expect("nonzero leading coefficient");
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    /// Merge Gamma factors within integer-shift classes using Γ(z+1) = zΓ(z).
    fn normalize_gammas(&mut self) {
        if self.gammas.is_empty() {
            return;
        }
        let old = std::mem::take(&mut self.gammas);
        let mut classes: BTreeMap<AffineExp, i32> = BTreeMap::new();
        for (arg, e) in old {
            if e == 0 {
                continue;
            }
            let fl = floor_q(&arg.c);
            let rep = AffineExp::new(arg.lam.clone(), arg.nu.clone(), &arg.c - &fl);
            let m: i64 = i64::try_from(fl.to_integer()).expect("gamma shift fits in i64");
            if rep.is_constant() && rep.c.is_zero() {
                // Γ at an integer constant
                let k = m;
                if k >= 1 {
                    let mut fact = G::one();
                    for t in 1..k {
                        fact = fact * G::from_int(t);
                    }
                    self.apply_factor(&ParamPoly::constant(fact), e);
                } else if e < 0 {
                    // reciprocal Gamma at a pole
                    self.num = ParamPoly::zero();
                } else {
                    // keep a genuine pole as a formal token
                    *classes.entry(arg).or_insert(0) += e;
                }
                continue;
            }
            // Γ(rep + m) = Γ(rep) · P with P = (rep)_m or 1/((rep-|m|)_{|m|})
            if m >= 0 {
                for t in 0..m {
                    self.apply_factor(&rep.shift(&qi(t)).to_poly(), e);
                }
            } else {
                for t in 1..=(-m) {
                    self.apply_factor(&rep.shift(&qi(-t)).to_poly(), -e);
                }
            }
            *classes.entry(rep).or_insert(0) += e;
        }
        classes.retain(|_, e| *e != 0);
        self.gammas = classes;
        if self.num.is_zero() {
            self.gammas.clear();
        }
    }

    /// Multiply by `p^e` (e may be negative).
    fn apply_factor(&mut self, p: &ParamPoly, e: i32) {
        if e > 0 {
            self.num = self.num.mul(&p.pow(e as u32));
        } else if e < 0 {
            self.den = self.den.mul(&p.pow((-e) as u32));
        }
    }

    pub fn mul(&self, o: &ParamScalar) -> ParamScalar {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut g = self.gammas.clone();
        for (a, e) in &o.gammas {
            *g.entry(a.clone()).or_insert(0) += e;
        }
        g.retain(|_, e| *e != 0);
        Self::build(self.num.mul(&o.num), self.den.mul(&o.den), g)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<ParamScalar, ParamError> {
        if self.is_zero() {
            return Err(ParamError::ZeroDenominator);
        }
        let g = self.gammas.iter().map(|(a, e)| (a.clone(), -e)).collect();
        Ok(Self::build(self.den.clone(), self.num.clone(), g))
    }

    pub fn div(&self, o: &ParamScalar) -> Result<ParamScalar, ParamError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Sum; defined when both summands carry the same Gamma factors (or one is zero).
    pub fn try_add(&self, o: &ParamScalar) -> Result<ParamScalar, ParamError> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.gammas != o.gammas {
            return Err(ParamError::GammaMismatch);
        }
        let num = if self.den == o.den {
            self.num.add(&o.num)
        } else {
            self.num.mul(&o.den).add(&o.num.mul(&self.den))
        };
        let den = if self.den == o.den { self.den.clone() } else { self.den.mul(&o.den) };
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let mut s = ParamScalar { num, den, gammas: self.gammas.clone() };
        s.reduce();
        Ok(s)
    }

    pub fn neg(&self) -> ParamScalar {
        ParamScalar { num: self.num.neg(), den: self.den.clone(), gammas: self.gammas.clone() }
    }

    pub fn scale(&self, c: &G) -> ParamScalar {
        if c.is_zero() {
            return Self::zero();
        }
        ParamScalar { num: self.num.scale(c), den: self.den.clone(), gammas: self.gammas.clone() }
    }

    pub fn pow(&self, e: u32) -> ParamScalar {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Apply the affine substitution to numerator, denominator and Gamma arguments.
    pub fn substitute(&self, s: &Substitution) -> Result<ParamScalar, ParamError> {
        let num = self.num.substitute(s);
        let den = self.den.substitute(s);
        if den.is_zero() {
            return Err(ParamError::ZeroDenominator);
        }
        let mut g: BTreeMap<AffineExp, i32> = BTreeMap::new();
        for (a, e) in &self.gammas {
            *g.entry(a.substitute(s)).or_insert(0) += e;
        }
        Ok(Self::build(num, den, g))
    }

    /// Exact value at `(λ0, ν0)`; Gamma factors are never evaluated.
    pub fn evaluate(&self, lam: &G, nu: &G) -> Result<G, ParamError> {
        if !self.gammas.is_empty() {
            return Err(ParamError::GammaResidual(
                self.gamma_tokens().iter().map(|t| format!("Gamma({})^{}", t.arg, t.sign)).collect(),
            ));
        }
        let d = self.den.eval(lam, nu);
        if d.is_zero() {
            return Err(ParamError::Pole);
        }
        Ok(self.num.eval(lam, nu) / d)
    }

    /// Whether the rational part is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den == ParamPoly::one()
    }
}

/// `x (x+1) ··· (x+n-1)`; 1 for `n = 0`.
pub fn pochhammer(x: &ParamScalar, n: u32) -> ParamScalar {
    let mut acc = ParamScalar::one();
    for t in 0..n {
        let term = x.try_add(&ParamScalar::from_int(t as i64)).expect("pochhammer needs a gamma-free argument");
        acc = acc.mul(&term);
    }
    acc
}

/// Re-canonicalize Gamma factors. Scalars are kept canonical on construction,
/// so this is the identity on values; it exists as an explicit entry point.
pub fn gamma_normalize(s: &ParamScalar) -> ParamScalar {
    ParamScalar::build(s.num.clone(), s.den.clone(), s.gammas.clone())
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = if self.den == ParamPoly::one() {
            format!("{}", self.num)
        } else {
            format!("({})/({})", self.num, self.den)
        };
        for (a, e) in &self.gammas {
            if *e > 0 {
                s.push_str(&format!("*Gamma({a})"));
            } else {
                s.push_str(&format!("/Gamma({a})"));
            }
            if e.abs() > 1 {
                s.push_str(&format!("^{}", e.abs()));
            }
        }
        write!(f, "{s}")
    }
}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON form `{num, den, gammas}`.
#[derive(Serialize, Deserialize)]
struct ScalarJson {
    num: String,
    den: String,
    gammas: Vec<GammaToken>,
}

impl Serialize for ParamScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarJson { num: self.num.to_string(), den: self.den.to_string(), gammas: self.gamma_tokens() }.serialize(s)
    }
}

impl From<G> for ParamScalar {
    fn from(c: G) -> Self {
        ParamScalar::constant(c)
    }
}

impl Add for &ParamScalar {
    type Output = ParamScalar;
    /// # Panics
    /// If the summands carry different Gamma factors; use [`ParamScalar::try_add`].
    fn add(self, o: &ParamScalar) -> ParamScalar {
        self.try_add(o).expect("sum of scalars with different Gamma factors")
    }
}

impl Sub for &ParamScalar {
    type Output = ParamScalar;
    fn sub(self, o: &ParamScalar) -> ParamScalar {
        self.try_add(&o.neg()).expect("difference of scalars with different Gamma factors")
    }
}

impl Mul for &ParamScalar {
    type Output = ParamScalar;
    fn mul(self, o: &ParamScalar) -> ParamScalar {
        ParamScalar::mul(self, o)
    }
}

impl Div for &ParamScalar {
    type Output = ParamScalar;
    fn div(self, o: &ParamScalar) -> ParamScalar {
        ParamScalar::div(self, o).expect("division by zero scalar")
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar::neg(self)
    }
}


#[cfg(test)]
mod tests {
    use super::super::gaussian::q;
    use super::*;

    fn half(a: AffineExp) -> AffineExp {
        a.scale(&q(1, 2))
    }

    #[test]
    fn pochhammer_examples() {
        let l = ParamScalar::lambda();
        assert!(pochhammer(&l, 0).is_one());
        let p3 = pochhammer(&l, 3);
        let lit = l.mul(&(&l + &ParamScalar::from_int(1))).mul(&(&l + &ParamScalar::from_int(2)));
        assert_eq!(p3, lit);
        assert!(pochhammer(&ParamScalar::from_int(-2), 3).is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let l = ParamScalar::lambda();
        let v = ParamScalar::nu();
        let s = (&(&l - &v)) / &(&l + &v);
        assert_eq!(s.evaluate(&G::from_int(3), &G::from_int(1)).unwrap(), G::from_frac(1, 2));
        let sq = l.mul(&l);
        assert_eq!(sq.evaluate(&G::i(), &G::zero()).unwrap(), G::from_int(-1));
        let p = &ParamScalar::one() / &(&l - &v);
        assert!(matches!(p.evaluate(&G::one(), &G::one()), Err(ParamError::Pole)));
        let g = ParamScalar::gamma(AffineExp::lambda());
        assert!(matches!(g.evaluate(&G::one(), &G::one()), Err(ParamError::GammaResidual(_))));
    }

    #[test]
    fn gamma_functional_equation() {
        // z = (λ-ν+1/2)/2
        let z = half(AffineExp::new(qi(1), qi(-1), q(1, 2)));
        let r = ParamScalar::gamma(z.shift(&qi(1))).mul(&ParamScalar::inv_gamma(z.clone()));
        assert_eq!(r, ParamScalar::from_affine(&z));
        let one = ParamScalar::gamma(z.clone()).mul(&ParamScalar::inv_gamma(z.clone()));
        assert!(one.is_one());
        // the two arguments differ by exactly one
        let a = half(AffineExp::new(qi(1), qi(-1), q(3, 2)));
        let b = half(AffineExp::new(qi(1), qi(-1), q(-1, 2)));
        let r = ParamScalar::gamma(a).mul(&ParamScalar::inv_gamma(b.clone()));
        assert_eq!(r, ParamScalar::from_affine(&b));
        // a genuine two-step shift
        let c = half(AffineExp::new(qi(1), qi(-1), q(7, 2)));
        let r = ParamScalar::gamma(c).mul(&ParamScalar::inv_gamma(b.clone()));
        let expect = ParamScalar::from_affine(&b).mul(&ParamScalar::from_affine(&b.shift(&qi(1))));
        assert_eq!(r, expect);
    }

    #[test]
    fn canonical_representative_has_fractional_constant() {
        let t = ParamScalar::inv_gamma(AffineExp::new(qi(0), qi(-1), q(7, 2)));
        let (arg, e) = t.gammas().iter().next().unwrap();
        assert_eq!(*e, -1);
        assert_eq!(arg.c, q(1, 2));
    }

    #[test]
    fn constant_integer_gamma() {
        assert_eq!(ParamScalar::gamma(AffineExp::constant(qi(4))), ParamScalar::from_int(6));
        assert!(ParamScalar::inv_gamma(AffineExp::constant(qi(-2))).is_zero());
    }

    #[test]
    fn mismatched_gamma_sum_is_rejected() {
        let a = ParamScalar::gamma(AffineExp::lambda());
        let b = ParamScalar::gamma(AffineExp::nu());
        assert!(matches!(a.try_add(&b), Err(ParamError::GammaMismatch)));
    }
}
