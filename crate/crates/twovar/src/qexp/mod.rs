//! Truncated q-expansions with Hecke operators, p-stabilization and the
//! unit root of the Hecke polynomial at p.

pub mod eigen;

pub use eigen::{p_stabilize, unit_root, EigenManifest, EigenSystem, HeckeValue, PadicEigenSystem};

use crate::arith::{dedekind_psi, divisors, gcd, lcm, DirichletChar};
use crate::error::{Error, Result};
use crate::ring::Ring;
use num_bigint::BigInt;

/// sum_{n=0}^{Q} a_n q^n with weight, level and optional Nebentypus
/// (None means trivial).
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion<R> {
    coeffs: Vec<R>,
    pub weight: u32,
    pub level: u64,
    pub nebentypus: Option<DirichletChar>,
}

pub enum SeriesOp<'a, R> {
    Add(&'a QExpansion<R>),
    Sub(&'a QExpansion<R>),
    Multiply(&'a QExpansion<R>),
    Scale(&'a R),
}

impl<R: Ring> QExpansion<R> {
    pub fn new(coeffs: Vec<R>, weight: u32, level: u64) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion needs at least a_0");
        QExpansion { coeffs, weight, level, nebentypus: None }
    }

    pub fn zero(template: &R, precision: usize, weight: u32, level: u64) -> Self {
        QExpansion::new(vec![template.zero_like(); precision + 1], weight, level)
    }

    pub fn with_nebentypus(mut self, chi: Option<DirichletChar>) -> Self {
        self.nebentypus = chi.filter(|c| !c.is_trivial());
        self
    }

    /// Q: the largest index with a known coefficient.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, value: R) {
        self.coeffs[n] = value;
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(precision.min(self.precision()) + 1);
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> QExpansion<S> {
        QExpansion {
            coeffs: self.coeffs.iter().map(f).collect(),
            weight: self.weight,
            level: self.level,
            nebentypus: self.nebentypus.clone(),
        }
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<QExpansion<S>> {
        Ok(QExpansion {
            coeffs: self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?,
            weight: self.weight,
            level: self.level,
            nebentypus: self.nebentypus.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_elem())
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.coeffs[0].compatible(&other.coeffs[0]) {
            Ok(())
        } else {
            Err(Error::RingMismatch("coefficient rings differ".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        series_arith(SeriesOp::Add(other), self)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        series_arith(SeriesOp::Sub(other), self)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        series_arith(SeriesOp::Multiply(other), self)
    }

    pub fn scale(&self, s: &R) -> Self {
        self.map(|c| c.times(s))
    }

    /// V_d: a_m -> a_{m/d}. Precision and level grow by the factor d.
    pub fn v_d(&self, d: u64) -> Self {
        let d = d as usize;
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; self.precision() * d + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[n * d] = c.clone();
        }
        QExpansion { coeffs, weight: self.weight, level: self.level * d as u64, nebentypus: self.nebentypus.clone() }
    }

    /// V_d truncated to a prescribed precision.
    pub fn v_d_to(&self, d: u64, precision: usize) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; precision + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            let m = n * d as usize;
            if m > precision {
                break;
            }
            coeffs[m] = c.clone();
        }
        QExpansion { coeffs, weight: self.weight, level: self.level * d, nebentypus: self.nebentypus.clone() }
    }

    /// T_n on the q-expansion:
    /// a_m(T_n g) = sum_{d | gcd(m,n), gcd(d,N)=1} xi(d) d^{k-1} a_{mn/d^2}(g).
    /// Output precision is floor(Q/n).
    pub fn hecke(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Hecke index must be positive".into()));
        }
        let q_out = self.precision() / n as usize;
        if q_out == 0 {
            return Err(Error::PrecisionExhausted(format!(
                "T_{n} on a series known to q^{} leaves nothing",
                self.precision()
            )));
        }
        let template = &self.coeffs[0];
        // Weights xi(d) d^{k-1} for the admissible divisors of n.
        let mut dweights = Vec::new();
        for d in divisors(n) {
            if gcd(d, self.level) != 1 {
                continue;
            }
            let chi = match &self.nebentypus {
                None => template.one_like(),
                Some(c) => c.value(d, template).ok_or_else(|| {
                    Error::RingMismatch("coefficient ring cannot hold the Nebentypus values".into())
                })?,
            };
            let dk = template.from_int_like(&num_traits::pow(BigInt::from(d), self.weight.saturating_sub(1) as usize));
            dweights.push((d, chi.times(&dk)));
        }
        let zero = template.zero_like();
        let mut coeffs = vec![zero.clone(); q_out + 1];
        for (m, slot) in coeffs.iter_mut().enumerate() {
            let mut acc = zero.clone();
            for (d, w) in &dweights {
                let d = *d as usize;
                if m % d == 0 {
                    let idx = m * n as usize / (d * d);
                    acc = acc.plus(&w.times(&self.coeffs[idx]));
                }
            }
            *slot = acc;
        }
        Ok(QExpansion { coeffs, weight: self.weight, level: self.level, nebentypus: self.nebentypus.clone() })
    }

    /// U_p: a_m -> a_{mp}; coincides with T_p when p divides the level.
    pub fn u_p(&self, p: u64) -> Result<Self> {
        let q_out = self.precision() / p as usize;
        if q_out == 0 {
            return Err(Error::PrecisionExhausted(format!("U_{p} on a series known to q^{}", self.precision())));
        }
        let coeffs = (0..=q_out).map(|m| self.coeffs[m * p as usize].clone()).collect();
        Ok(QExpansion { coeffs, weight: self.weight, level: self.level, nebentypus: self.nebentypus.clone() })
    }
}

/// Coefficient-wise sum/difference/scaling, or Cauchy product truncated at
/// the smaller precision (weights add, levels combine by lcm).
pub fn series_arith<R: Ring>(op: SeriesOp<'_, R>, g: &QExpansion<R>) -> Result<QExpansion<R>> {
    match op {
        SeriesOp::Scale(s) => Ok(g.scale(s)),
        SeriesOp::Add(h) | SeriesOp::Sub(h) => {
            g.check_ring(h)?;
            let sub = matches!(op, SeriesOp::Sub(_));
            let q = g.precision().min(h.precision());
            let coeffs = (0..=q)
                .map(|n| if sub { g.coeffs[n].minus(&h.coeffs[n]) } else { g.coeffs[n].plus(&h.coeffs[n]) })
                .collect();
            let neb = if g.nebentypus.is_some() { g.nebentypus.clone() } else { h.nebentypus.clone() };
            Ok(QExpansion { coeffs, weight: g.weight, level: lcm(g.level, h.level), nebentypus: neb })
        }
        SeriesOp::Multiply(h) => {
            g.check_ring(h)?;
            let q = g.precision().min(h.precision());
            let zero = g.coeffs[0].zero_like();
            let mut coeffs = vec![zero; q + 1];
            for (i, a) in g.coeffs.iter().enumerate().take(q + 1) {
                if a.is_zero_elem() {
                    continue;
                }
                for (j, b) in h.coeffs.iter().enumerate().take(q + 1 - i) {
                    if !b.is_zero_elem() {
                        coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
                    }
                }
            }
            let neb = match (&g.nebentypus, &h.nebentypus) {
                (None, None) => None,
                (Some(a), None) | (None, Some(a)) => Some(a.clone()),
                (Some(a), Some(b)) => Some(a.mul(b)).filter(|c| !c.is_trivial()),
            };
            Ok(QExpansion { coeffs, weight: g.weight + h.weight, level: lcm(g.level, h.level), nebentypus: neb })
        }
    }
}

/// Sturm bound k [SL2(Z) : Gamma0(M)] / 12.
pub fn sturm_bound(level: u64, weight: u32) -> u64 {
    weight as u64 * dedekind_psi(level) / 12
}
