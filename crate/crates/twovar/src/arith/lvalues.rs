//! L(xi, 0) through the first generalized Bernoulli number, and Gauss sums.

use super::cyclo::{power_table, CycElement};
use super::dirichlet::DirichletChar;
use super::{euler_phi, lcm};
use crate::error::{Error, Result};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// B_{1,xi} = (1/f) sum_{a=1}^{f} xi(a) a for the primitive character of
/// conductor f underlying xi.
pub fn bernoulli_b1(xi: &DirichletChar) -> CycElement<BigRational> {
    let prim = xi.primitive();
    let f = prim.modulus();
    let one = BigRational::one();
    let mut acc = CycElement::from_base(one.zero_like());
    for a in 1..=f {
        if let Some(k) = prim.value_exp(a) {
            let term = CycElement::zeta_power(prim.order_base(), k as i64, &one)
                .scale(&BigRational::from_integer(BigInt::from(a)));
            acc = acc.plus(&term);
        }
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(f)))
}

/// L(xi, 0) = -B_{1,xi}. Vanishes for even nontrivial xi; the trivial
/// character (zeta(0) with its pole bookkeeping) is refused.
pub fn dirichlet_l_at_zero(xi: &DirichletChar) -> Result<CycElement<BigRational>> {
    if xi.primitive().modulus() == 1 {
        return Err(Error::PoleUnsupported);
    }
    if xi.is_even() {
        return Ok(CycElement::from_base(BigRational::zero()));
    }
    Ok(bernoulli_b1(xi).negated())
}

/// tau(chi) = sum_{a mod f} chi(a) zeta_f^a for primitive chi of conductor f.
pub fn gauss_sum(chi: &DirichletChar) -> Result<CycElement<BigRational>> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(format!(
            "modulus {} has conductor {}",
            chi.modulus(),
            chi.conductor()
        )));
    }
    let f = chi.modulus();
    let e = chi.order_base();
    let n = lcm(f, e);
    let mut counts = vec![0i64; n as usize];
    for a in 0..f {
        if let Some(k) = chi.value_exp(a) {
            let exp = (k * (n / e) + a * (n / f)) % n;
            counts[exp as usize] += 1;
        }
    }
    let table = power_table(n);
    let mut acc = vec![0i64; euler_phi(n) as usize];
    for (exp, &c) in counts.iter().enumerate() {
        if c != 0 {
            for (slot, &r) in acc.iter_mut().zip(&table[exp]) {
                *slot += c * r;
            }
        }
    }
    CycElement::new(n, acc.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect())
}
