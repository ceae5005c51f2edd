//! Hecke eigensystems: the ingested exact record, its p-adic working copy,
//! the unit root at p and p-stabilization.

use super::{sturm_bound, QExpansion};
use crate::arith::{factor, is_prime, PadicApprox};
use crate::error::{Error, Result};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An eigenvalue as ingested: an integer, or an integer coefficient vector in
/// the power basis of Q(zeta_conductor).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HeckeValue {
    Integer(i64),
    Cyclotomic { conductor: u64, coeffs: Vec<i64> },
}

/// One line of an eigendata file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenSystem {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub ap_table: Vec<(u64, HeckeValue)>,
    pub cuspidal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// Completeness record listing the systems that span a space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenManifest {
    pub level: u64,
    pub weight: u32,
    pub dimension: usize,
    pub systems: Vec<String>,
}

impl EigenManifest {
    /// Every listed label is present at the right level and weight, and the
    /// count matches the stated dimension.
    pub fn validate(&self, systems: &[EigenSystem]) -> Result<()> {
        if self.systems.len() != self.dimension {
            return Err(Error::IncompleteEigendata(format!(
                "manifest lists {} systems for a space of dimension {}",
                self.systems.len(),
                self.dimension
            )));
        }
        for label in &self.systems {
            let sys = systems
                .iter()
                .find(|s| &s.label == label)
                .ok_or_else(|| Error::IncompleteEigendata(format!("system {label} not supplied")))?;
            if self.level % sys.level != 0 || sys.weight != self.weight {
                return Err(Error::IncompleteEigendata(format!(
                    "system {label} (level {}, weight {}) does not live in level {} weight {}",
                    sys.level, sys.weight, self.level, self.weight
                )));
            }
        }
        Ok(())
    }
}

fn int_value(v: &HeckeValue, q: u64, label: &str) -> Result<BigInt> {
    match v {
        HeckeValue::Integer(a) => Ok(BigInt::from(*a)),
        HeckeValue::Cyclotomic { conductor, coeffs } => {
            if coeffs.iter().skip(1).all(|&c| c == 0) && !coeffs.is_empty() {
                Ok(BigInt::from(coeffs[0]))
            } else {
                Err(Error::Unsupported(format!(
                    "system {label}: a_{q} lies in Q(zeta_{conductor}); only rational eigenvalues are supported here"
                )))
            }
        }
    }
}

/// a_{q^e} from a_q: a_q^e if q | N, otherwise the Hecke recursion with
/// trivial character a_{q^{j+1}} = a_q a_{q^j} - q^{k-1} a_{q^{j-1}}.
fn prime_power_coeff<R: Ring>(aq: &R, q: u64, e: u32, divides_level: bool, weight: u32) -> R {
    if divides_level {
        return aq.pow_u64(e as u64);
    }
    let qk = aq.from_int_like(&num_traits::pow(BigInt::from(q), weight.saturating_sub(1) as usize));
    let mut prev = aq.one_like();
    let mut cur = aq.clone();
    if e == 0 {
        return prev;
    }
    for _ in 1..e {
        let next = aq.times(&cur).minus(&qk.times(&prev));
        prev = cur;
        cur = next;
    }
    cur
}

impl EigenSystem {
    pub fn ap(&self, q: u64) -> Option<&HeckeValue> {
        self.ap_table.iter().find(|(r, _)| *r == q).map(|(_, v)| v)
    }

    pub fn ap_int(&self, q: u64) -> Result<BigInt> {
        let v = self
            .ap(q)
            .ok_or_else(|| Error::InvalidInput(format!("system {}: a_{q} not supplied", self.label)))?;
        int_value(v, q, &self.label)
    }

    /// Largest prime with a recorded eigenvalue.
    pub fn bound(&self) -> u64 {
        self.ap_table.iter().map(|(q, _)| *q).max().unwrap_or(0)
    }

    /// The table covers every prime up to the Sturm bound and only primes.
    pub fn validate(&self) -> Result<()> {
        for (q, _) in &self.ap_table {
            if !is_prime(*q) {
                return Err(Error::InvalidInput(format!("system {}: key {q} is not prime", self.label)));
            }
        }
        let sb = sturm_bound(self.level, self.weight);
        for q in crate::arith::primes_up_to(sb) {
            if self.ap(q).is_none() {
                return Err(Error::InvalidInput(format!(
                    "system {}: a_{q} missing below the Sturm bound {sb}",
                    self.label
                )));
            }
        }
        Ok(())
    }

    pub fn coefficient(&self, n: u64) -> Result<BigInt> {
        let mut acc = BigInt::one();
        for (q, e) in factor(n) {
            let aq = BigRational::from_integer(self.ap_int(q)?);
            let c = prime_power_coeff(&aq, q, e, self.level % q == 0, self.weight);
            acc *= c.to_integer();
        }
        Ok(acc)
    }

    /// The normalized eigenform's expansion to q^Q (cuspidal systems only;
    /// Eisenstein constant terms are not part of the record).
    pub fn q_expansion(&self, precision: usize) -> Result<QExpansion<BigRational>> {
        if !self.cuspidal {
            return Err(Error::Unsupported(format!(
                "system {} is Eisenstein and its constant term is not recorded",
                self.label
            )));
        }
        let mut coeffs = vec![BigRational::zero(); precision + 1];
        for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
            *slot = BigRational::from_integer(self.coefficient(n as u64)?);
        }
        Ok(QExpansion::new(coeffs, self.weight, self.level))
    }
}

/// Working copy of an eigensystem with p-adic eigenvalues (this is where the
/// unit root replaces a_p after stabilization).
#[derive(Clone, Debug, PartialEq)]
pub struct PadicEigenSystem {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub p: u64,
    pub precision: u32,
    ap: BTreeMap<u64, PadicApprox>,
}

impl PadicEigenSystem {
    pub fn from_exact(sys: &EigenSystem, p: u64, precision: u32) -> Result<Self> {
        let mut ap = BTreeMap::new();
        for (q, v) in &sys.ap_table {
            ap.insert(*q, PadicApprox::new(p, precision, int_value(v, *q, &sys.label)?));
        }
        Ok(PadicEigenSystem { label: sys.label.clone(), level: sys.level, weight: sys.weight, p, precision, ap })
    }

    pub fn bound(&self) -> u64 {
        self.ap.keys().copied().max().unwrap_or(0)
    }

    pub fn ap(&self, q: u64) -> Result<&PadicApprox> {
        self.ap
            .get(&q)
            .ok_or_else(|| Error::InvalidInput(format!("system {}: a_{q} not supplied", self.label)))
    }

    pub fn coefficient(&self, n: u64) -> Result<PadicApprox> {
        let mut acc = PadicApprox::one(self.p, self.precision);
        for (q, e) in factor(n) {
            let aq = self.ap(q)?;
            acc = acc.times(&prime_power_coeff(aq, q, e, self.level % q == 0, self.weight));
        }
        Ok(acc)
    }

    pub fn q_expansion(&self, precision: usize) -> Result<QExpansion<PadicApprox>> {
        let mut coeffs = vec![PadicApprox::zero(self.p, self.precision); precision + 1];
        for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
            *slot = self.coefficient(n as u64)?;
        }
        Ok(QExpansion::new(coeffs, self.weight, self.level))
    }
}

/// The unit root of x^2 - a_p x + p psi(p), lifted from the root a_p mod p by
/// Newton iteration.
pub fn unit_root(ap: &PadicApprox, p: u64, psi_p: u8, precision: u32) -> Result<PadicApprox> {
    if ap.p() != p {
        return Err(Error::RingMismatch(format!("a_p is {}-adic, expected {p}-adic", ap.p())));
    }
    if !ap.is_unit() {
        return Err(Error::NotOrdinary(format!("a_{p} = {ap} is not a unit")));
    }
    let prec = precision.min(ap.precision());
    let a = ap.with_precision(prec);
    let c = PadicApprox::new(p, prec, BigInt::from(p) * BigInt::from(psi_p));
    let two = PadicApprox::new(p, prec, 2);
    let mut alpha = PadicApprox::new(p, prec, a.residue() % BigInt::from(p));
    for _ in 0..=prec {
        let f = alpha.times(&alpha).minus(&a.times(&alpha)).plus(&c);
        if f.is_zero() {
            break;
        }
        let df = two.times(&alpha).minus(&a);
        alpha = alpha.minus(&f.divide(&df)?);
    }
    debug_assert!(alpha.times(&alpha).minus(&a.times(&alpha)).plus(&c).is_zero());
    Ok(alpha)
}

/// f0 = f - beta f(pz) with beta = a_p - alpha when p does not divide the
/// level (the level picks up p); f0 = f when it does.
pub fn p_stabilize(
    f: &QExpansion<PadicApprox>,
    sys: &PadicEigenSystem,
    p: u64,
) -> Result<(QExpansion<PadicApprox>, PadicEigenSystem)> {
    let ap = sys.ap(p)?.clone();
    if !ap.is_unit() {
        return Err(Error::NotOrdinary(format!("system {}: a_{p} = {ap}", sys.label)));
    }
    if sys.level % p == 0 {
        return Ok((f.clone(), sys.clone()));
    }
    let alpha = unit_root(&ap, p, 1, sys.precision)?;
    let beta = ap.minus(&alpha);
    let shifted = f.v_d_to(p, f.precision());
    let mut f0 = f.sub(&shifted.scale(&beta))?;
    f0.level = sys.level * p;
    let mut sys0 = sys.clone();
    sys0.level *= p;
    sys0.ap.insert(p, alpha);
    Ok((f0, sys0))
}
