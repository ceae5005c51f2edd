//! T2 -> zeta - 1 for a character of order p^n.

use super::{PowerSeries1, PowerSeries2};
use crate::arith::{gcd, CycElement, PadicApprox};
use crate::error::{Error, Result};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

/// The character gamma2 -> zeta_{p^n}^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharSpec {
    pub p: u64,
    pub level: u32,
    pub exponent: u64,
}

impl CharSpec {
    pub fn new(p: u64, level: u32, exponent: u64) -> Result<Self> {
        let order = p.pow(level);
        if level > 0 && gcd(exponent % order, p) != 1 {
            return Err(Error::InvalidInput(format!("zeta_{order}^{exponent} is not primitive")));
        }
        Ok(CharSpec { p, level, exponent: if level == 0 { 0 } else { exponent % order } })
    }

    pub fn trivial(p: u64) -> Self {
        CharSpec { p, level: 0, exponent: 0 }
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.level)
    }

    /// Every primitive character of order p^level.
    pub fn all_of_level(p: u64, level: u32) -> Vec<CharSpec> {
        if level == 0 {
            return vec![CharSpec::trivial(p)];
        }
        let order = p.pow(level);
        (1..order).filter(|k| k % p != 0).map(|k| CharSpec { p, level, exponent: k }).collect()
    }

    /// zeta - 1 in Z/p^M[zeta_{p^n}].
    pub fn uniformizer(&self, precision: u32) -> CycElement<PadicApprox> {
        let one = PadicApprox::one(self.p, precision);
        CycElement::zeta_power(self.order(), self.exponent as i64, &one).minus(&CycElement::from_base(one).lift(self.order()))
    }
}

/// One-variable series over Z/p^M[zeta_{p^n}].
#[derive(Clone, Debug, PartialEq)]
pub struct CycSeries {
    pub p: u64,
    pub precision: u32,
    pub conductor: u64,
    pub coeffs: Vec<CycElement<PadicApprox>>,
}

impl CycSeries {
    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_elem())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.conductor != other.conductor {
            return Err(Error::RingMismatch("specializations live in different rings".into()));
        }
        let cap = self.cap().min(other.cap());
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; cap + 1];
        for i in 0..=cap {
            for j in 0..=cap - i {
                coeffs[i + j] = coeffs[i + j].plus(&self.coeffs[i].times(&other.coeffs[j]));
            }
        }
        Ok(CycSeries { p: self.p, precision: self.precision.min(other.precision), conductor: self.conductor, coeffs })
    }

    pub fn galois(&self, k: i64) -> Self {
        CycSeries { coeffs: self.coeffs.iter().map(|c| c.galois(k)).collect(), ..self.clone() }
    }

    /// The series as one over Z/p^M, when every coefficient is rational.
    pub fn to_base(&self) -> Option<PowerSeries1> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.as_base().and_then(|b| b.residue().to_u64()))
            .collect::<Option<Vec<u64>>>()?;
        Some(PowerSeries1 { p: self.p, precision: self.precision, coeffs })
    }
}

pub fn specialize(f: &PowerSeries2, psi: &CharSpec) -> Result<CycSeries> {
    if psi.p != f.p {
        return Err(Error::RingMismatch(format!("{}-adic character on a {}-adic series", psi.p, f.p)));
    }
    let prec = f.precision;
    let conductor = psi.order();
    let one = CycElement::from_base(PadicApprox::one(f.p, prec)).lift(conductor);
    let u = psi.uniformizer(prec);
    let mut powers = vec![one];
    for j in 1..=f.caps.1 {
        let next = powers[j - 1].times(&u);
        powers.push(next);
    }
    let coeffs = f
        .grid
        .iter()
        .map(|row| {
            let mut acc = powers[0].zero_like();
            for (j, &c) in row.iter().enumerate() {
                if c != 0 {
                    acc = acc.plus(&powers[j].scale(&PadicApprox::new(f.p, prec, BigInt::from(c))));
                }
            }
            acc
        })
        .collect();
    Ok(CycSeries { p: f.p, precision: prec, conductor, coeffs })
}

/// prod over primitive psi of order p^n of f(T1, psi(T2)); f(T1, 0) for n = 0.
/// The product is Galois-stable, so it comes back over Z/p^M.
pub fn product_specialization(f: &PowerSeries2, level: u32) -> Result<PowerSeries1> {
    if level == 0 {
        return Ok(f.at_t2_zero());
    }
    let chars = CharSpec::all_of_level(f.p, level);
    let base = specialize(f, &chars[0])?;
    let mut acc = base.clone();
    for psi in &chars[1..] {
        acc = acc.mul(&base.galois(psi.exponent as i64))?;
    }
    acc.to_base().ok_or_else(|| Error::InvalidInput("product of conjugate specializations is not rational".into()))
}
