//! Exact arithmetic in the Gaussian rationals ℚ(√−1).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::fastq::Rat;
use super::ParamError;

/// Shorthand for an arbitrary-precision rational.
pub type Q = BigRational;

/// Build a rational from a small numerator and denominator.
pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integral rational.
pub fn qi(v: i64) -> Q {
    BigRational::from_integer(BigInt::from(v))
}

/// Parse a fraction string such as `-5/2` or `3`. Decimal notation is rejected.
pub fn parse_q(s: &str) -> Result<Q, ParamError> {
    let t = s.trim().replace('−', "-");
    let bad = || ParamError::Parse(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => {
            let a: BigInt = t.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(a))
        }
    }
}

/// Render a rational as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// An element `re + im·√−1` of ℚ(√−1), always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: Rat,
    im: Rat,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        GaussianRational { re: Rat::from_big(re), im: Rat::from_big(im) }
    }

    pub fn real(re: Q) -> Self {
        GaussianRational { re: Rat::from_big(re), im: Rat::default() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit √−1.
    pub fn i() -> Self {
        GaussianRational { re: Rat::default(), im: Rat::int(1) }
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational { re: Rat::int(v), im: Rat::default() }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::real(q(num, den))
    }

    pub fn re(&self) -> Q {
        self.re.to_big()
    }

    pub fn im(&self) -> Q {
        self.im.to_big()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sq(&self) -> Q {
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).to_big()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussianRational { re: self.re.inv()?, im: Rat::default() });
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im)).inv()?;
        Some(GaussianRational { re: self.re.mul(&n), im: self.im.mul(&n).neg() })
    }

    pub fn scale(&self, k: &Q) -> Self {
        let k = Rat::from(k);
        GaussianRational { re: self.re.mul(&k), im: self.im.mul(&k) }
    }

    /// Multiply by √−1.
    pub fn mul_i(&self) -> Self {
        GaussianRational { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The integer value if this element is a real integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_big().to_integer())
        } else {
            None
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_q(&self.re.to_big()));
        }
        let im_part = if self.im.is_one() {
            "i".to_string()
        } else if self.im.is_minus_one() {
            "-i".to_string()
        } else {
            format!("{}i", fmt_q(&self.im.to_big()))
        };
        if self.re.is_zero() {
            write!(f, "{im_part}")
        } else if self.im.is_positive() {
            write!(f, "{}+{}", fmt_q(&self.re.to_big()), im_part)
        } else {
            write!(f, "{}{}", fmt_q(&self.re.to_big()), im_part)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussianRational {
    type Err = ParamError;

    /// Accepts `p/q`, `p/qi`, `i`, `-i` and `a+bi` / `a-bi` with fraction parts.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.trim().replace('−', "-").chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(ParamError::Parse(s.to_string()));
        }
        if !t.ends_with('i') {
            return Ok(Self::real(parse_q(&t)?));
        }
        let body = &t[..t.len() - 1];
        // split at the last sign that is not at position 0
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .next_back();
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => Q::one(),
            "-" => -Q::one(),
            other => parse_q(other.trim_start_matches('+'))?,
        };
        Ok(GaussianRational::new(parse_q(re)?, im))
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Q> for GaussianRational {
    fn from(q: Q) -> Self {
        Self::real(q)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

fn add(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    GaussianRational { re: a.re.add(&b.re), im: a.im.add(&b.im) }
}

fn sub(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    GaussianRational { re: a.re.sub(&b.re), im: a.im.sub(&b.im) }
}

fn mul(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational { re: a.re.mul(&b.re), im: Rat::default() };
    }
    GaussianRational {
        re: a.re.mul(&b.re).sub(&a.im.mul(&b.im)),
        im: a.re.mul(&b.im).add(&a.im.mul(&b.re)),
    }
}

fn div(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    mul(a, &b.inv().expect("division by zero in Q(i)"))
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $m(self, r: &GaussianRational) -> GaussianRational {
                $f(self, r)
            }
        }
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, r: GaussianRational) -> GaussianRational {
                $f(&self, &r)
            }
        }
        impl $tr<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, r: &GaussianRational) -> GaussianRational {
                $f(&self, r)
            }
        }
        impl $tr<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $m(self, r: GaussianRational) -> GaussianRational {
                $f(self, &r)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: self.re.neg(), im: self.im.neg() }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: self.re.neg(), im: self.im.neg() }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, r: &GaussianRational) {
        self.re = self.re.add(&r.re);
        self.im = self.im.add(&r.im);
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, r: &GaussianRational) {
        self.re = self.re.sub(&r.re);
        self.im = self.im.sub(&r.im);
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, r: &GaussianRational) {
        *self = mul(self, r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["-5/2", "3", "i", "-i", "1/2+3/4i", "2-i", "-7/3i", "0"] {
            let g: GaussianRational = s.parse().unwrap();
            let back: GaussianRational = g.to_string().parse().unwrap();
            assert_eq!(g, back, "{s}");
        }
        assert_eq!("−5/2".parse::<GaussianRational>().unwrap(), GaussianRational::from_frac(-5, 2));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("abc".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn inverse() {
        let z = GaussianRational::new(q(3, 2), q(-1, 5));
        assert!((&z * &z.inv().unwrap()).is_one());
        assert!(GaussianRational::zero().inv().is_none());
    }
}
