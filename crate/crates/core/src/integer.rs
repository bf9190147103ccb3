//! Exact integers with an `i64` fast path.
//!
//! Every arithmetic operation is checked; on overflow the value is promoted to
//! a heap-allocated [`BigInt`]. Values that fit back into an `i64` are demoted,
//! so equality and hashing see a single canonical representation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64),
    Big(Box<BigInt>),
}

/// An exact integer of unbounded magnitude.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Integer(Repr);

impl Integer {
    pub const ZERO: Integer = Integer(Repr::Small(0));
    pub const ONE: Integer = Integer(Repr::Small(1));

    pub fn from_big(b: BigInt) -> Self {
        match b.to_i64() {
            Some(v) => Integer(Repr::Small(v)),
            None => Integer(Repr::Big(Box::new(b))),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(v) => Some(*v),
            Repr::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => *v < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &Integer) {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(s) = a.checked_add(*b) {
                self.0 = Repr::Small(s);
                return;
            }
        }
        *self = Integer::from_big(self.to_big() + rhs.to_big());
    }

    /// `self += a * b`, the inner step of every convolution.
    pub fn add_product(&mut self, a: &Integer, b: &Integer) {
        if let (Repr::Small(s), Repr::Small(x), Repr::Small(y)) = (&self.0, &a.0, &b.0) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(r) = s.checked_add(p) {
                    self.0 = Repr::Small(r);
                    return;
                }
            }
        }
        *self = Integer::from_big(self.to_big() + a.to_big() * b.to_big());
    }

    pub fn mul_ref(&self, rhs: &Integer) -> Integer {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(p) = a.checked_mul(*b) {
                return Integer(Repr::Small(p));
            }
        }
        Integer::from_big(self.to_big() * rhs.to_big())
    }

    pub fn sub_ref(&self, rhs: &Integer) -> Integer {
        let mut out = self.clone();
        out.add_assign_ref(&-rhs.clone());
        out
    }

    /// Binomial coefficient `C(n, k)` for `n, k >= 0`.
    pub fn binomial(n: u64, k: u64) -> Integer {
        if k > n {
            return Integer::ZERO;
        }
        let k = k.min(n - k);
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        Integer::from_big(acc)
    }
}

impl Default for Integer {
    fn default() -> Self {
        Integer::ZERO
    }
}

impl From<i64> for Integer {
    fn from(v: i64) -> Self {
        Integer(Repr::Small(v))
    }
}

impl From<BigInt> for Integer {
    fn from(b: BigInt) -> Self {
        Integer::from_big(b)
    }
}

impl Neg for Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        match self.0 {
            Repr::Small(v) => match v.checked_neg() {
                Some(n) => Integer(Repr::Small(n)),
                None => Integer::from_big(-BigInt::from(v)),
            },
            Repr::Big(b) => Integer::from_big(-*b),
        }
    }
}

impl Ord for Integer {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Integer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Zero for Integer {
    fn zero() -> Self {
        Integer::ZERO
    }
    fn is_zero(&self) -> bool {
        Integer::is_zero(self)
    }
}

impl std::ops::Add for Integer {
    type Output = Integer;
    fn add(mut self, rhs: Integer) -> Integer {
        self.add_assign_ref(&rhs);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let mut a = Integer::from(i64::MAX);
        a.add_assign_ref(&Integer::ONE);
        assert!(a.to_i64().is_none());
        assert_eq!(a.to_big(), BigInt::from(i64::MAX) + 1);
        a.add_assign_ref(&Integer::from(-1));
        assert_eq!(a.to_i64(), Some(i64::MAX));
    }

    #[test]
    fn product_overflow_is_exact() {
        let a = Integer::from(1i64 << 40);
        let p = a.mul_ref(&a);
        assert_eq!(p.to_big(), BigInt::from(1u128 << 80));
        let mut acc = Integer::ZERO;
        acc.add_product(&a, &a);
        acc.add_product(&-a.clone(), &a);
        assert!(acc.is_zero());
    }

    #[test]
    fn min_negation() {
        let m = -Integer::from(i64::MIN);
        assert_eq!(m.to_big(), -BigInt::from(i64::MIN));
    }

    #[test]
    fn binomials() {
        assert_eq!(Integer::binomial(5, 2), Integer::from(10));
        assert_eq!(Integer::binomial(3, 5), Integer::ZERO);
        assert_eq!(Integer::binomial(0, 0), Integer::ONE);
    }
}
