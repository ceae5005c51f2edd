//! f = p^mu P U with P distinguished.

use super::PowerSeries1;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeierstrassData {
    pub mu: u32,
    pub lambda: usize,
    /// Monic of degree lambda, lower coefficients divisible by p. Held mod p^{M - mu}.
    pub distinguished: PowerSeries1,
    /// Unit power series, mod (p^{M - mu}, T^{cap + 1}).
    pub unit: PowerSeries1,
    pub cap: usize,
    pub precision: u32,
}

/// Division by T^k: drops the terms below k and shifts down.
fn shift_down(f: &[u64], k: usize) -> Vec<u64> {
    f.iter().skip(k).copied().collect()
}

/// Weierstrass preparation at truncation. Verdicts hold mod (p^M, T^{cap+1}):
/// a unit coefficient beyond the cap is invisible.
pub fn weierstrass_prepare(f: &PowerSeries1) -> Result<WeierstrassData> {
    let mu = f
        .mu()
        .ok_or_else(|| Error::PrecisionExhausted(format!("series is 0 mod {}^{}", f.p, f.precision)))?;
    let prec = f.precision - mu;
    let cap = f.cap();
    let z = f.ring().coarsen(prec);
    let pmu = f.p.pow(mu);
    let g: Vec<u64> = f.coeffs.iter().map(|&c| (c / pmu) % z.modulus).collect();
    let lambda = g.iter().position(|&c| z.is_unit(c)).expect("mu is attained");
    if lambda >= cap {
        return Err(Error::InvalidInput(format!(
            "degree cap {cap} does not exceed lambda = {lambda}; the unit part is not determined"
        )));
    }
    // f is read as a polynomial (zero past the cap). With g = B + T^lambda C,
    // B = 0 mod p and C a unit, solve T^lambda = q g + r through
    // q = C^{-1} (tau(T^lambda) - tau(q B)), tau = division by T^lambda dropping
    // low terms. Truncation error in q moves down lambda degrees per pass and
    // gains a factor p, so computing to degree cap + lambda (prec + 1) makes q
    // exact through degree cap.
    let ext = cap + lambda * (prec as usize + 1);
    let series = |c: Vec<u64>| PowerSeries1 { p: f.p, precision: prec, coeffs: c };
    let mut g_ext = g.clone();
    g_ext.resize(ext + lambda + 1, 0);
    let c_inv = series(shift_down(&g_ext, lambda)).inverse()?;
    let mut b = g.clone();
    b.truncate(lambda);
    b.resize(ext + lambda + 1, 0);
    let b = series(b);
    let mut q = c_inv.clone();
    for _ in 0..(ext + 2) * (prec as usize + 1) {
        let mut qb_in = q.clone();
        qb_in.coeffs.resize(ext + lambda + 1, 0);
        let qb = qb_in.mul(&b)?;
        let tau_qb = shift_down(&qb.coeffs, lambda);
        let rhs: Vec<u64> =
            (0..=ext).map(|i| z.sub(if i == 0 { 1 % z.modulus } else { 0 }, tau_qb[i])).collect();
        let next = series(rhs).mul(&c_inv.truncate(ext, prec))?;
        if next == q {
            break;
        }
        q = next;
    }
    let q = q.truncate(cap, prec);
    // r = T^lambda - q g in degrees below lambda; P = T^lambda - r.
    let qg = q.mul(&series(g.clone()))?;
    let mut p_coeffs: Vec<u64> = (0..lambda).map(|i| qg.coeffs[i]).collect();
    p_coeffs.push(1 % z.modulus);
    let distinguished = series(p_coeffs);
    debug_assert!(distinguished.coeffs[..lambda].iter().all(|&c| c % f.p == 0));
    let unit = q.inverse()?;
    Ok(WeierstrassData { mu, lambda, distinguished, unit, cap, precision: prec })
}

impl WeierstrassData {
    /// p^mu P U, reassembled at the original truncation.
    pub fn reassemble(&self, original_precision: u32) -> Result<PowerSeries1> {
        let mut p = self.distinguished.clone();
        p.coeffs.resize(self.cap + 1, 0);
        let mut u = self.unit.clone();
        u.coeffs.resize(self.cap + 1, 0);
        let prod = p.mul(&u)?;
        let scale = self.distinguished.p.pow(self.mu);
        let z = super::Zmod::new(self.distinguished.p, original_precision)?;
        Ok(PowerSeries1 {
            p: self.distinguished.p,
            precision: original_precision,
            coeffs: prod.coeffs.iter().map(|&c| z.mul(c, scale)).collect(),
        })
    }
}
