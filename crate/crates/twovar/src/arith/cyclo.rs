//! Elements of Z[zeta_n] ⊗ R, stored in the power basis 1, zeta, ..., zeta^(phi(n)-1).

use super::{divisors, euler_phi, gcd, lcm, mobius};
use crate::error::{Error, Result};
use crate::ring::Ring;
use num_bigint::BigInt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}: multiply the mu = +1 factors,
    // then divide out the mu = -1 ones exactly.
    let mut poly: Vec<i128> = vec![1];
    let ds = divisors(n);
    for &d in &ds {
        if mobius(n / d) == 1 {
            let mut next = vec![0i128; poly.len() + d as usize];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d as usize] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &ds {
        if mobius(n / d) == -1 {
            // Divide by x^d - 1: q_i = -(poly_i) + q_{i-d}, read from the bottom.
            let d = d as usize;
            let qlen = poly.len() - d;
            let mut q = vec![0i128; qlen];
            for i in 0..qlen {
                let prev = if i >= d { q[i - d] } else { 0 };
                q[i] = prev - poly[i];
            }
            poly = q;
        }
    }
    let v: Arc<Vec<i64>> = Arc::new(poly.into_iter().map(|c| c as i64).collect());
    cache.lock().unwrap().insert(n, v.clone());
    v
}

/// Row k holds zeta_n^k in the power basis, for 0 <= k < n.
pub fn power_table(n: u64) -> Arc<Vec<Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<Vec<i64>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    let phi_poly = cyclotomic_poly(n);
    let deg = phi_poly.len() - 1;
    let mut rows = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; deg];
    cur[0] = 1;
    for _ in 0..n {
        rows.push(cur.clone());
        // Multiply by x and reduce the overflow term.
        let top = cur[deg - 1];
        for j in (1..deg).rev() {
            cur[j] = cur[j - 1] - top * phi_poly[j];
        }
        cur[0] = -top * phi_poly[0];
    }
    let v = Arc::new(rows);
    cache.lock().unwrap().insert(n, v.clone());
    v
}

#[derive(Clone, Debug)]
pub struct CycElement<R> {
    conductor: u64,
    coeffs: Vec<R>,
}

impl<R: Ring> CycElement<R> {
    pub fn new(conductor: u64, coeffs: Vec<R>) -> Result<Self> {
        let phi = euler_phi(conductor) as usize;
        if coeffs.len() != phi {
            return Err(Error::InvalidInput(format!(
                "conductor {conductor} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CycElement { conductor, coeffs })
    }

    /// An element of the base ring viewed in Q(zeta_1).
    pub fn from_base(x: R) -> Self {
        CycElement { conductor: 1, coeffs: vec![x] }
    }

    /// zeta_n^k with coefficients shaped like `template`.
    pub fn zeta_power(n: u64, k: i64, template: &R) -> Self {
        let n = n.max(1);
        let e = k.rem_euclid(n as i64) as usize;
        let row = &power_table(n)[e];
        CycElement { conductor: n, coeffs: row.iter().map(|&c| template.from_i64_like(c)).collect() }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// The base-ring value, if the element has no irrational part.
    pub fn as_base(&self) -> Option<&R> {
        if self.coeffs[1..].iter().all(|c| c.is_zero_elem()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-express in Q(zeta_m) for a multiple m of the conductor.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.conductor == 0, "cannot lift conductor {} to {m}", self.conductor);
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let zero = self.coeffs[0].zero_like();
        let mut poly = vec![zero; (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CycElement { conductor: m, coeffs: reduce(poly, m) }
    }

    /// Galois automorphism zeta -> zeta^k, k prime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor;
        assert!(gcd(k.rem_euclid(n as i64) as u64, n) == 1 || n == 1);
        let zero = self.coeffs[0].zero_like();
        let mut poly = vec![zero; n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = (i as i64 * k).rem_euclid(n as i64) as usize;
            poly[j] = poly[j].plus(c);
        }
        CycElement { conductor: n, coeffs: reduce(poly, n) }
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> CycElement<S> {
        CycElement { conductor: self.conductor, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<CycElement<S>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(CycElement { conductor: self.conductor, coeffs })
    }

    pub fn scale(&self, s: &R) -> Self {
        CycElement { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c.times(s)).collect() }
    }

    /// Product of all Galois conjugates; lies in the base ring.
    pub fn norm(&self) -> R {
        let n = self.times(&self.adjugate());
        n.as_base().cloned().expect("norm must lie in the base ring")
    }

    /// Product of the non-identity conjugates: x * adjugate = norm(x).
    pub fn adjugate(&self) -> Self {
        let mut acc = CycElement::from_base(self.coeffs[0].one_like()).lift(self.conductor);
        for k in 2..=self.conductor as i64 {
            if gcd(k as u64, self.conductor) == 1 {
                acc = acc.times(&self.galois(k));
            }
        }
        acc
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = lcm(self.conductor, other.conductor);
        (self.lift(m), other.lift(m))
    }
}

/// Reduce a polynomial modulo Phi_n (monic, so exact over any ring).
fn reduce<R: Ring>(mut poly: Vec<R>, n: u64) -> Vec<R> {
    let deg = euler_phi(n) as usize;
    let zero = poly[0].zero_like();
    if poly.len() <= deg {
        poly.resize(deg, zero);
        return poly;
    }
    let table = power_table(n);
    let high = poly.split_off(deg);
    for (i, c) in high.into_iter().enumerate() {
        if c.is_zero_elem() {
            continue;
        }
        let row = &table[(deg + i) % n as usize];
        for (j, &r) in row.iter().enumerate() {
            if r != 0 {
                poly[j] = poly[j].plus(&c.times(&zero.from_i64_like(r)));
            }
        }
    }
    poly
}

impl<R: Ring> PartialEq for CycElement<R> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl<R: Ring> Ring for CycElement<R> {
    fn zero_like(&self) -> Self {
        CycElement::from_base(self.coeffs[0].zero_like())
    }
    fn one_like(&self) -> Self {
        CycElement::from_base(self.coeffs[0].one_like())
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        CycElement::from_base(self.coeffs[0].from_int_like(n))
    }
    fn plus(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.plus(y)).collect();
        CycElement { conductor: a.conductor, coeffs }
    }
    fn minus(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.minus(y)).collect();
        CycElement { conductor: a.conductor, coeffs }
    }
    fn times(&self, other: &Self) -> Self {
        if self.conductor == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.conductor == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let (a, b) = self.aligned(other);
        let zero = a.coeffs[0].zero_like();
        let mut poly = vec![zero; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero_elem() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero_elem() {
                    poly[i + j] = poly[i + j].plus(&x.times(y));
                }
            }
        }
        CycElement { conductor: a.conductor, coeffs: reduce(poly, a.conductor) }
    }
    fn negated(&self) -> Self {
        CycElement { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c.negated()).collect() }
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_elem())
    }
    fn compatible(&self, other: &Self) -> bool {
        self.coeffs[0].compatible(&other.coeffs[0])
    }
    fn root_of_unity_like(&self, order: u64, exp: u64) -> Option<Self> {
        Some(CycElement::zeta_power(order, exp as i64, &self.coeffs[0]))
    }
}
