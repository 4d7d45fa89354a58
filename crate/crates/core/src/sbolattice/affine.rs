use std::fmt;

use serde::{Serialize, Serializer};

use crate::paramfield::{AffineExp, GaussianRational, ParamScalar};

type G = GaussianRational;

/// `l·λ + v·ν + c` with Gaussian rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    pub l: G,
    pub v: G,
    pub c: G,
}

impl Affine {
    pub fn constant(c: G) -> Self {
        Affine { l: G::zero(), v: G::zero(), c }
    }

    /// `a·λ + s`.
    pub fn lambda_form(a: i64, s: i64) -> Self {
        Affine { l: G::from_int(a), v: G::zero(), c: G::from_int(s) }
    }

    /// `a·ν + s`.
    pub fn nu_form(a: i64, s: i64) -> Self {
        Affine { l: G::zero(), v: G::from_int(a), c: G::from_int(s) }
    }

    pub fn is_zero(&self) -> bool {
        self.l.is_zero() && self.v.is_zero() && self.c.is_zero()
    }

    pub fn scale(&self, k: &G) -> Affine {
        Affine { l: &self.l * k, v: &self.v * k, c: &self.c * k }
    }

    pub fn add(&self, o: &Affine) -> Affine {
        Affine { l: &self.l + &o.l, v: &self.v + &o.v, c: &self.c + &o.c }
    }

    pub fn eval(&self, lam: &G, nu: &G) -> G {
        &(&(&self.l * lam) + &(&self.v * nu)) + &self.c
    }

    pub fn to_param(&self) -> ParamScalar {
        let part = |k: &G, e: AffineExp| ParamScalar::from_affine(&e).scale(k);
        let one = crate::paramfield::qi(1);
        let zero = crate::paramfield::qi(0);
        part(&self.l, AffineExp::new(one.clone(), zero.clone(), zero.clone()))
            .try_add(&part(&self.v, AffineExp::new(zero.clone(), one, zero)))
            .and_then(|s| s.try_add(&ParamScalar::constant(self.c.clone())))
            .expect("polynomial scalars always add")
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.l.is_zero() {
            parts.push(format!("({})*lambda", self.l));
        }
        if !self.v.is_zero() {
            parts.push(format!("({})*nu", self.v));
        }
        if !self.c.is_zero() || parts.is_empty() {
            parts.push(format!("({})", self.c));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for Affine {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
