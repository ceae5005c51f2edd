//! Minimal commutative-ring interface shared by the coefficient types.
//!
//! Elements carry whatever context they need (a prime and a precision, a
//! cyclotomic conductor), so constants are always produced "like" an existing
//! element.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: &BigInt) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_zero_elem(&self) -> bool;

    /// Whether `self` and `other` live in the same ring (same prime, etc).
    fn compatible(&self, _other: &Self) -> bool {
        true
    }

    /// zeta_order^exp, if the ring contains it.
    fn root_of_unity_like(&self, order: u64, exp: u64) -> Option<Self>;

    fn from_i64_like(&self, n: i64) -> Self {
        self.from_int_like(&BigInt::from(n))
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn root_of_unity_like(&self, order: u64, exp: u64) -> Option<Self> {
        match (order, exp % order.max(1)) {
            (_, 0) => Some(BigRational::one()),
            (o, e) if 2 * e == o => Some(-BigRational::one()),
            _ => None,
        }
    }
}
