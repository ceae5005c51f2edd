//! L = h g + r with deg_{T1} r < m, dividing in T1 over R = Z/p^M[T2]/(T2^{d2+1}).

use super::{PowerSeries2, Zmod};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Division {
    pub quotient: PowerSeries2,
    /// Nonzero only in T1-degrees below m.
    pub remainder: PowerSeries2,
    /// Least i with g_i(0) a unit.
    pub m: usize,
}

/// Polynomials in T2 truncated at d2, i.e. elements of R.
struct Local {
    z: Zmod,
    d2: usize,
}

impl Local {
    fn zero(&self) -> Vec<u64> {
        vec![0; self.d2 + 1]
    }

    fn mul_add_into(&self, acc: &mut [u64], x: &[u64], y: &[u64]) {
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate().take(self.d2 + 1 - i) {
                acc[i + j] = self.z.add(acc[i + j], self.z.mul(a, b));
            }
        }
    }

    fn inverse(&self, x: &[u64]) -> Result<Vec<u64>> {
        let c0 = self.z.inv(x[0])?;
        let mut out = self.zero();
        out[0] = c0;
        for k in 1..=self.d2 {
            let mut acc = 0;
            for i in 1..=k {
                acc = self.z.add(acc, self.z.mul(x[i], out[k - i]));
            }
            out[k] = self.z.mul(self.z.neg(acc), c0);
        }
        Ok(out)
    }
}

/// Series in T1 over R: a[i] is the T1^i coefficient.
fn series_mul(r: &Local, a: &[Vec<u64>], b: &[Vec<u64>], len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![r.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.iter().all(|&c| c == 0) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            r.mul_add_into(&mut out[i + j], x, y);
        }
    }
    out
}

/// Weierstrass division in T1. L and g are read as polynomials in T1 (zero
/// past their own T1-caps) over R, where R uses the smaller T2-cap and
/// precision. The quotient is the unique power series h, returned mod T1^{d+1}
/// with d the T1-cap of L. Requires some g_i(0) to be a unit.
pub fn divide_with_remainder(l: &PowerSeries2, g: &PowerSeries2) -> Result<Division> {
    if l.p != g.p {
        return Err(Error::RingMismatch(format!("{}-adic vs {}-adic series", l.p, g.p)));
    }
    let prec = l.precision.min(g.precision);
    let d2 = l.caps.1.min(g.caps.1);
    let (d1, dg) = (l.caps.0, g.caps.0);
    let caps = (d1, d2);
    let (l, g) = (l.truncate(caps, prec), g.truncate((dg, d2), prec));
    let z = l.ring();
    let r = Local { z, d2 };
    let m = (0..=dg).find(|&i| z.is_unit(g.grid[i][0])).ok_or(Error::AnticyclotomicMu)?;

    // h_k depends on h_{k+1..k+m} through B, which lies in the maximal ideal
    // (p, T2); that ideal is nilpotent of index M + d2. Working to degree ext
    // leaves the truncation error out of degrees <= d1.
    let nil = prec as usize + d2 + 1;
    let ext = d1 + m * nil + 1;
    let c_part: Vec<Vec<u64>> = (m..=dg).map(|i| g.grid[i].clone()).collect();
    let c_inv = {
        // Inverse of C as a T1-series over R, to degree ext.
        let c0_inv = r.inverse(&c_part[0])?;
        let mut out: Vec<Vec<u64>> = vec![r.zero(); ext + 1];
        out[0] = c0_inv.clone();
        for k in 1..=ext {
            let mut acc = r.zero();
            for i in 1..=k.min(c_part.len() - 1) {
                r.mul_add_into(&mut acc, &c_part[i], &out[k - i]);
            }
            let mut neg = r.zero();
            r.mul_add_into(&mut neg, &acc, &c0_inv);
            out[k] = neg.iter().map(|&c| z.neg(c)).collect();
        }
        out
    };
    let b_part: Vec<Vec<u64>> = (0..m).map(|i| g.grid[i].clone()).collect();
    // tau(L): coefficients of L from T1^m up.
    let tau_l: Vec<Vec<u64>> = (0..=ext).map(|k| if k + m <= d1 { l.grid[k + m].clone() } else { r.zero() }).collect();
    let mut h: Vec<Vec<u64>> = series_mul(&r, &c_inv, &tau_l, ext + 1);
    for _ in 0..=(ext + 1) * nil {
        // tau(h B)_k = sum_{i<m} h_{k+m-i} B_i.
        let mut rhs = tau_l.clone();
        for (k, slot) in rhs.iter_mut().enumerate() {
            let mut acc = r.zero();
            for (i, bi) in b_part.iter().enumerate() {
                if let Some(hk) = h.get(k + m - i) {
                    r.mul_add_into(&mut acc, hk, bi);
                }
            }
            for (s, a) in slot.iter_mut().zip(&acc) {
                *s = z.sub(*s, *a);
            }
        }
        let next = series_mul(&r, &c_inv, &rhs, ext + 1);
        if next == h {
            break;
        }
        h = next;
    }

    let mut quotient = PowerSeries2::zero(l.p, prec, caps)?;
    quotient.grid.clone_from_slice(&h[..=d1]);
    let mut remainder = PowerSeries2::zero(l.p, prec, caps)?;
    for n in 0..m {
        let mut acc = l.grid[n].clone();
        let mut hg = r.zero();
        for i in 0..=n.min(dg) {
            r.mul_add_into(&mut hg, &h[n - i], &g.grid[i]);
        }
        for (a, b) in acc.iter_mut().zip(&hg) {
            *a = z.sub(*a, *b);
        }
        remainder.grid[n] = acc;
    }
    Ok(Division { quotient, remainder, m })
}
