//! A rational number that stays on machine integers while it fits and falls
//! back to arbitrary precision otherwise. The representation is canonical:
//! a value uses the small form exactly when numerator and denominator fit.

use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Clone, Debug)]
pub(crate) enum Rat {
    /// `n / d` with `d > 0` and `gcd(n, d) = 1`.
    Small(i64, i64),
    Big(BigRational),
}

impl Default for Rat {
    fn default() -> Self {
        Rat::Small(0, 1)
    }
}

fn from_i128(n: i128, d: i128) -> Rat {
    debug_assert!(d != 0);
    let g = n.gcd(&d);
    let (mut n, mut d) = (n / g, d / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Rat::Small(a, b),
        _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
    }
}

impl Rat {
    pub(crate) fn from_big(q: BigRational) -> Rat {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(a), Some(b)) => Rat::Small(a, b),
            _ => Rat::Big(q),
        }
    }

    pub(crate) fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(q) => q.clone(),
        }
    }

    pub(crate) fn int(v: i64) -> Rat {
        Rat::Small(v, 1)
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub(crate) fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub(crate) fn is_positive(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n > 0,
            Rat::Big(q) => q.is_positive(),
        }
    }

    pub(crate) fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => from_i128(-(*n as i128), *d as i128),
            Rat::Big(q) => Rat::from_big(-q.clone()),
        }
    }

    pub(crate) fn add(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(0, _), _) => o.clone(),
            (_, Rat::Small(0, _)) => self.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if b == d {
                    from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
                }
            }
            _ => Rat::from_big(self.to_big() + o.to_big()),
        }
    }

    pub(crate) fn sub(&self, o: &Rat) -> Rat {
        self.add(&o.neg())
    }

    pub(crate) fn mul(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(0, _), _) | (_, Rat::Small(0, _)) => Rat::Small(0, 1),
            (Rat::Small(1, 1), _) => o.clone(),
            (_, Rat::Small(1, 1)) => self.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                // cross-cancel keeps the product reduced
                let g1 = (*a as i128).gcd(&(*d as i128));
                let g2 = (*c as i128).gcd(&(*b as i128));
                let n = (*a as i128 / g1) * (*c as i128 / g2);
                let m = (*b as i128 / g2) * (*d as i128 / g1);
                match (i64::try_from(n), i64::try_from(m)) {
                    (Ok(x), Ok(y)) => Rat::Small(x, y),
                    _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(m))),
                }
            }
            _ => Rat::from_big(self.to_big() * o.to_big()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub(crate) fn inv(&self) -> Option<Rat> {
        match self {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => Some(from_i128(*d as i128, *n as i128)),
            Rat::Big(q) => Some(Rat::from_big(q.recip())),
        }
    }

    pub(crate) fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(q) => q.is_integer(),
        }
    }

    pub(crate) fn is_minus_one(&self) -> bool {
        matches!(self, Rat::Small(-1, 1))
    }
}

impl PartialEq for Rat {
    fn eq(&self, o: &Rat) -> bool {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(x), Rat::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match self {
            Rat::Small(a, b) => {
                0u8.hash(h);
                a.hash(h);
                b.hash(h);
            }
            Rat::Big(q) => {
                1u8.hash(h);
                q.hash(h);
            }
        }
    }
}

impl From<&BigRational> for Rat {
    fn from(q: &BigRational) -> Rat {
        Rat::from_big(q.clone())
    }
}

#[allow(dead_code)]
fn _assert_one_is_small() -> bool {
    Rat::from_big(BigRational::one()).is_one()
}
