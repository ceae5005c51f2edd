//! p-adic integers known modulo p^M.

use crate::error::{Error, Result};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

/// An element of Z_p known modulo p^prec. The residue is kept in [0, p^prec).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    p: u64,
    prec: u32,
    residue: BigInt,
}

pub fn pow_big(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

impl PadicApprox {
    pub fn new(p: u64, prec: u32, value: impl Into<BigInt>) -> Self {
        let m = pow_big(p, prec);
        let residue = value.into().mod_floor(&m);
        PadicApprox { p, prec, residue }
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        PadicApprox { p, prec, residue: BigInt::zero() }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicApprox::new(p, prec, 1)
    }

    /// Image of a rational with p-integral denominator.
    pub fn from_rational(x: &BigRational, p: u64, prec: u32) -> Result<Self> {
        let den = PadicApprox::new(p, prec, x.denom().clone());
        if !den.is_unit() {
            return Err(Error::NotIntegral(format!("{x} at p = {p}")));
        }
        Ok(PadicApprox::new(p, prec, x.numer().clone()).times(&den.inverse()?))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> BigInt {
        pow_big(self.p, self.prec)
    }

    /// Representative in (-p^M/2, p^M/2].
    pub fn symmetric(&self) -> BigInt {
        let m = self.modulus();
        if &self.residue * 2 > m {
            &self.residue - m
        } else {
            self.residue.clone()
        }
    }

    /// v_p of the residue, capped at the precision (a known zero has
    /// valuation equal to the precision).
    pub fn valuation(&self) -> u32 {
        if self.residue.is_zero() {
            return self.prec;
        }
        let p = BigInt::from(self.p);
        let mut r = self.residue.clone();
        let mut v = 0;
        while (&r % &p).is_zero() {
            r /= &p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self) -> bool {
        self.prec > 0 && self.valuation() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        PadicApprox::new(self.p, prec.min(self.prec), self.residue.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotIntegral(format!(
                "{} is not a unit mod {}^{}",
                self.residue, self.p, self.prec
            )));
        }
        let m = self.modulus();
        let e = self.residue.extended_gcd(&m);
        Ok(PadicApprox::new(self.p, self.prec, e.x))
    }

    /// Division with precision bookkeeping: dividing by an element of
    /// valuation v costs v digits, and the numerator must be divisible by p^v.
    pub fn divide(&self, other: &Self) -> Result<Self> {
        self.check(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let v = other.valuation();
        let prec = self.prec.min(other.prec);
        if prec <= v {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by an element of valuation {v} at precision {prec}"
            )));
        }
        let new_prec = prec - v;
        let pv = pow_big(self.p, v);
        let num = self.with_precision(prec);
        if !(num.residue() % &pv).is_zero() {
            return Err(Error::NotIntegral(format!(
                "{} is not divisible by {}^{}",
                num.residue, self.p, v
            )));
        }
        let a = PadicApprox::new(self.p, new_prec, num.residue() / &pv);
        let b = PadicApprox::new(self.p, new_prec, other.residue() / &pv);
        Ok(a.times(&b.inverse()?))
    }

    /// Agreement modulo the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let prec = self.prec.min(other.prec);
        self.p == other.p && self.with_precision(prec) == other.with_precision(prec)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing p-adic numbers for different primes");
    }

    fn binop(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        self.check(other);
        PadicApprox::new(self.p, self.prec.min(other.prec), f(&self.residue, &other.residue))
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p, self.prec)
    }
}

impl Ring for PadicApprox {
    fn zero_like(&self) -> Self {
        PadicApprox::zero(self.p, self.prec)
    }
    fn one_like(&self) -> Self {
        PadicApprox::one(self.p, self.prec)
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        PadicApprox::new(self.p, self.prec, n.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a + b)
    }
    fn minus(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a - b)
    }
    fn times(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a * b)
    }
    fn negated(&self) -> Self {
        PadicApprox::new(self.p, self.prec, -&self.residue)
    }
    fn is_zero_elem(&self) -> bool {
        self.residue.is_zero()
    }
    fn compatible(&self, other: &Self) -> bool {
        self.p == other.p
    }
    fn root_of_unity_like(&self, order: u64, exp: u64) -> Option<Self> {
        let e = exp % order.max(1);
        if e == 0 {
            Some(self.one_like())
        } else if 2 * e == order {
            Some(self.one_like().negated())
        } else {
            None
        }
    }
}
