//! Truncated power series over Z/p^M in one and two variables, standing in
//! for elements of Z_p[[T1, T2]], and the divisibility tooling built on them.

mod checks;
mod division;
mod specialize;
mod weierstrass;

pub use checks::{
    basechange_check, greenberg_check, BasechangeLevel, BasechangeReport, CharacterRow, GreenbergLevel,
    GreenbergReport, Verdict,
};
pub use division::{divide_with_remainder, Division};
pub use specialize::{product_specialization, specialize, CharSpec, CycSeries};
pub use weierstrass::{weierstrass_prepare, WeierstrassData};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Residues mod p^M.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Zmod {
    pub p: u64,
    pub prec: u32,
    pub modulus: u64,
}

impl Zmod {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) || prec == 0 {
            return Err(Error::InvalidInput(format!("need a prime p and M >= 1, got p = {p}, M = {prec}")));
        }
        let modulus = p
            .checked_pow(prec)
            .filter(|m| *m < (1u64 << 62))
            .ok_or_else(|| Error::Unsupported(format!("{p}^{prec} does not fit in 62 bits")))?;
        Ok(Zmod { p, prec, modulus })
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.modulus as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.modulus as u128 - b as u128) % self.modulus as u128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.prec;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        crate::arith::mod_inv(a, self.modulus).ok_or(Error::DivisionByZero)
    }

    /// The same residue read mod p^prec.
    pub fn coarsen(&self, prec: u32) -> Zmod {
        Zmod { p: self.p, prec, modulus: self.p.pow(prec) }
    }
}

/// sum c_i T^i mod (p^M, T^{cap+1}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSeries1 {
    pub p: u64,
    pub precision: u32,
    pub coeffs: Vec<u64>,
}

impl PowerSeries1 {
    pub fn new(p: u64, precision: u32, coeffs: &[i64]) -> Result<Self> {
        let z = Zmod::new(p, precision)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a series needs at least one coefficient".into()));
        }
        Ok(PowerSeries1 { p, precision, coeffs: coeffs.iter().map(|&c| z.reduce(c as i128)).collect() })
    }

    pub fn zero(p: u64, precision: u32, cap: usize) -> Result<Self> {
        Zmod::new(p, precision)?;
        Ok(PowerSeries1 { p, precision, coeffs: vec![0; cap + 1] })
    }

    pub(crate) fn ring(&self) -> Zmod {
        Zmod { p: self.p, prec: self.precision, modulus: self.p.pow(self.precision) }
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Highest nonzero index.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    fn common(&self, other: &Self) -> Result<(Zmod, usize)> {
        if self.p != other.p {
            return Err(Error::RingMismatch(format!("{}-adic vs {}-adic series", self.p, other.p)));
        }
        let z = self.ring().coarsen(self.precision.min(other.precision));
        Ok((z, self.cap().min(other.cap())))
    }

    pub fn truncate(&self, cap: usize, precision: u32) -> Self {
        let z = self.ring().coarsen(precision.min(self.precision));
        let mut coeffs: Vec<u64> = self.coeffs.iter().take(cap + 1).map(|&c| c % z.modulus).collect();
        coeffs.resize(cap + 1, 0);
        PowerSeries1 { p: self.p, precision: z.prec, coeffs }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (z, cap) = self.common(other)?;
        let coeffs = (0..=cap).map(|i| z.add(self.coeffs[i] % z.modulus, other.coeffs[i] % z.modulus)).collect();
        Ok(PowerSeries1 { p: self.p, precision: z.prec, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let z = self.ring();
        PowerSeries1 { p: self.p, precision: self.precision, coeffs: self.coeffs.iter().map(|&c| z.neg(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (z, cap) = self.common(other)?;
        let mut coeffs = vec![0u64; cap + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(cap + 1 - i) {
                coeffs[i + j] = z.add(coeffs[i + j], z.mul(a % z.modulus, b % z.modulus));
            }
        }
        Ok(PowerSeries1 { p: self.p, precision: z.prec, coeffs })
    }

    pub fn scale(&self, s: u64) -> Self {
        let z = self.ring();
        PowerSeries1 {
            p: self.p,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|&c| z.mul(c, s % z.modulus)).collect(),
        }
    }

    /// Inverse of a series with unit constant term.
    pub fn inverse(&self) -> Result<Self> {
        let z = self.ring();
        let c0 = z.inv(self.coeffs[0])?;
        let n = self.coeffs.len();
        let mut out = vec![0u64; n];
        out[0] = c0;
        for k in 1..n {
            let mut acc = 0;
            for i in 1..=k {
                acc = z.add(acc, z.mul(self.coeffs[i], out[k - i]));
            }
            out[k] = z.mul(z.neg(acc), c0);
        }
        Ok(PowerSeries1 { p: self.p, precision: self.precision, coeffs: out })
    }

    /// Minimum valuation of the coefficients, None for the zero series.
    pub fn mu(&self) -> Option<u32> {
        let z = self.ring();
        self.coeffs.iter().filter(|&&c| c != 0).map(|&c| z.valuation(c)).min()
    }
}

/// sum c[i][j] T1^i T2^j mod (p^M, T1^{d1+1}, T2^{d2+1}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSeries2 {
    pub p: u64,
    pub precision: u32,
    pub caps: (usize, usize),
    pub grid: Vec<Vec<u64>>,
}

impl PowerSeries2 {
    pub fn zero(p: u64, precision: u32, caps: (usize, usize)) -> Result<Self> {
        Zmod::new(p, precision)?;
        Ok(PowerSeries2 { p, precision, caps, grid: vec![vec![0; caps.1 + 1]; caps.0 + 1] })
    }

    /// Grid from signed entries, padded with zeros to the caps.
    pub fn from_grid(p: u64, precision: u32, caps: (usize, usize), grid: &[Vec<i64>]) -> Result<Self> {
        let mut out = Self::zero(p, precision, caps)?;
        let z = out.ring();
        if grid.len() > caps.0 + 1 || grid.iter().any(|r| r.len() > caps.1 + 1) {
            return Err(Error::InvalidInput(format!("grid exceeds caps {caps:?}")));
        }
        for (i, row) in grid.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                out.grid[i][j] = z.reduce(c as i128);
            }
        }
        Ok(out)
    }

    pub(crate) fn ring(&self) -> Zmod {
        Zmod { p: self.p, prec: self.precision, modulus: self.p.pow(self.precision) }
    }

    /// Shape and range checks for ingested grids.
    pub fn validate(&self) -> Result<()> {
        let z = Zmod::new(self.p, self.precision)?;
        if self.grid.len() != self.caps.0 + 1 || self.grid.iter().any(|r| r.len() != self.caps.1 + 1) {
            return Err(Error::InvalidInput(format!("grid shape does not match caps {:?}", self.caps)));
        }
        if self.grid.iter().flatten().any(|&c| c >= z.modulus) {
            return Err(Error::InvalidInput(format!("coefficient outside [0, {})", z.modulus)));
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.grid.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: usize, c: i64) {
        let z = self.ring();
        self.grid[i][j] = z.reduce(c as i128);
    }

    pub fn is_zero(&self) -> bool {
        self.grid.iter().flatten().all(|&c| c == 0)
    }

    fn common(&self, other: &Self) -> Result<(Zmod, (usize, usize))> {
        if self.p != other.p {
            return Err(Error::RingMismatch(format!("{}-adic vs {}-adic series", self.p, other.p)));
        }
        let z = self.ring().coarsen(self.precision.min(other.precision));
        Ok((z, (self.caps.0.min(other.caps.0), self.caps.1.min(other.caps.1))))
    }

    pub fn truncate(&self, caps: (usize, usize), precision: u32) -> Self {
        let z = self.ring().coarsen(precision.min(self.precision));
        let mut grid = vec![vec![0; caps.1 + 1]; caps.0 + 1];
        for (i, row) in grid.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = self.get(i, j) % z.modulus;
            }
        }
        PowerSeries2 { p: self.p, precision: z.prec, caps, grid }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (z, caps) = self.common(other)?;
        let mut out = self.truncate(caps, z.prec);
        for i in 0..=caps.0 {
            for j in 0..=caps.1 {
                out.grid[i][j] = z.add(out.grid[i][j], other.grid[i][j] % z.modulus);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let z = self.ring();
        let mut out = self.clone();
        out.grid.iter_mut().flatten().for_each(|c| *c = z.neg(*c));
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (z, caps) = self.common(other)?;
        let mut out = PowerSeries2::zero(self.p, z.prec, caps)?;
        for i1 in 0..=caps.0 {
            for j1 in 0..=caps.1 {
                let a = self.grid[i1][j1] % z.modulus;
                if a == 0 {
                    continue;
                }
                for i2 in 0..=caps.0 - i1 {
                    for j2 in 0..=caps.1 - j1 {
                        let b = other.grid[i2][j2];
                        if b != 0 {
                            let c = &mut out.grid[i1 + i2][j1 + j2];
                            *c = z.add(*c, z.mul(a, b % z.modulus));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: u64) -> Self {
        let z = self.ring();
        let mut out = self.clone();
        out.grid.iter_mut().flatten().for_each(|c| *c = z.mul(*c, s % z.modulus));
        out
    }

    /// f(T1, 0).
    pub fn at_t2_zero(&self) -> PowerSeries1 {
        PowerSeries1 { p: self.p, precision: self.precision, coeffs: self.grid.iter().map(|r| r[0]).collect() }
    }

    /// Coefficient of T1^i as a polynomial in T2.
    pub fn t1_coefficient(&self, i: usize) -> PowerSeries1 {
        PowerSeries1 { p: self.p, precision: self.precision, coeffs: self.grid[i].clone() }
    }

    /// T2-degree of the whole grid, None if zero.
    pub fn t2_degree(&self) -> Option<usize> {
        self.grid.iter().filter_map(|r| r.iter().rposition(|&c| c != 0)).max()
    }

    /// The layers sum_i c[i][n] T1^i, one per power of T2.
    pub fn coefficient_layers(&self) -> Vec<PowerSeries1> {
        (0..=self.caps.1)
            .map(|n| PowerSeries1 {
                p: self.p,
                precision: self.precision,
                coeffs: self.grid.iter().map(|r| r[n]).collect(),
            })
            .collect()
    }

    /// Inverse of `coefficient_layers`.
    pub fn from_layers(layers: &[PowerSeries1]) -> Result<Self> {
        let first = layers.first().ok_or_else(|| Error::InvalidInput("no layers".into()))?;
        let d1 = first.cap();
        if layers.iter().any(|l| l.cap() != d1 || l.p != first.p || l.precision != first.precision) {
            return Err(Error::InvalidInput("layers differ in cap or ring".into()));
        }
        let mut out = PowerSeries2::zero(first.p, first.precision, (d1, layers.len() - 1))?;
        for (n, l) in layers.iter().enumerate() {
            for i in 0..=d1 {
                out.grid[i][n] = l.coeffs[i];
            }
        }
        Ok(out)
    }

    /// T2 -> (1 + T2)^{-1} - 1, the inversion gamma2 -> gamma2^{-1}.
    pub fn invert_t2(&self) -> Self {
        let z = self.ring();
        let d2 = self.caps.1;
        // s = (1+T2)^{-1} - 1 = sum_{k>=1} (-1)^k T2^k; powers s^j.
        let s: Vec<u64> = (0..=d2).map(|k| if k == 0 { 0 } else if k % 2 == 0 { 1 } else { z.neg(1) }).collect();
        let mut powers = vec![{
            let mut one = vec![0u64; d2 + 1];
            one[0] = 1 % z.modulus;
            one
        }];
        for j in 1..=d2 {
            let prev = &powers[j - 1];
            let mut next = vec![0u64; d2 + 1];
            for (a, &x) in prev.iter().enumerate() {
                for (b, &y) in s.iter().enumerate().take(d2 + 1 - a) {
                    next[a + b] = z.add(next[a + b], z.mul(x, y));
                }
            }
            powers.push(next);
        }
        let mut out = self.clone();
        for (i, row) in self.grid.iter().enumerate() {
            let mut new_row = vec![0u64; d2 + 1];
            for (j, &c) in row.iter().enumerate() {
                for (k, &w) in powers[j].iter().enumerate() {
                    new_row[k] = z.add(new_row[k], z.mul(c, w));
                }
            }
            out.grid[i] = new_row;
        }
        out
    }
}
