//! Divisibility verdicts from remainders at characters of p-power order. All
//! verdicts are relative to the truncation (caps, M) of the inputs.

use super::{divide_with_remainder, specialize, CharSpec, PowerSeries2};
use crate::arith::{euler_phi, CycElement, PadicApprox};
use crate::error::{Error, Result};
use crate::ring::Ring;
use serde::Serialize;

fn ser_values<S: serde::Serializer>(v: &[CycElement<PadicApprox>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        let cs: Vec<String> = x.coeffs().iter().map(|c| c.residue().to_string()).collect();
        seq.serialize_element(&cs)?;
    }
    seq.end()
}

/// c_j(psi) for every remainder coefficient c_j at one character.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterRow {
    pub level: u32,
    pub exponent: u64,
    /// Power-basis coefficients of c_j(zeta - 1), j < m.
    #[serde(serialize_with = "ser_values")]
    pub values: Vec<CycElement<PadicApprox>>,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreenbergLevel {
    pub level: u32,
    pub characters: Vec<CharacterRow>,
    /// Every remainder coefficient vanishes at every character of exact order p^level.
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    /// The remainder vanishes at more points than its T2-degree.
    Divisible,
    NotDivisible { level: u32 },
    /// The points checked cannot force r = 0 at this truncation.
    Inconclusive { points: u64, remainder_t2_degree: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreenbergReport {
    pub p: u64,
    pub precision: u32,
    pub caps: (usize, usize),
    pub m: usize,
    pub remainder_is_zero: bool,
    pub remainder_t2_degree: Option<usize>,
    pub levels: Vec<GreenbergLevel>,
    /// Characters at which every c_j vanishes, over the levels that vanish.
    pub vanishing_points: u64,
    pub verdict: Verdict,
    pub scope: String,
}

impl GreenbergReport {
    pub fn level(&self, n: u32) -> Option<&GreenbergLevel> {
        self.levels.iter().find(|l| l.level == n)
    }
}

fn remainder_rows(r: &PowerSeries2, m: usize, level: u32) -> Result<Vec<CharacterRow>> {
    CharSpec::all_of_level(r.p, level)
        .iter()
        .map(|psi| {
            let spec = specialize(r, psi)?;
            let values: Vec<_> = spec.coeffs[..m].to_vec();
            let vanishes = values.iter().all(|v| v.is_zero_elem());
            Ok(CharacterRow { level, exponent: psi.exponent, values, vanishes })
        })
        .collect()
}

/// Divide L by g, then test c_j(psi(T2)) = 0 for all psi of order up to p^n.
pub fn greenberg_check(l: &PowerSeries2, g: &PowerSeries2, max_level: u32) -> Result<GreenbergReport> {
    let div = divide_with_remainder(l, g)?;
    let r = &div.remainder;
    let mut levels = Vec::new();
    for level in 0..=max_level {
        let characters = remainder_rows(r, div.m, level)?;
        let vanishes = characters.iter().all(|c| c.vanishes);
        levels.push(GreenbergLevel { level, characters, vanishes });
    }
    let remainder_t2_degree = r.t2_degree();
    let vanishing_points: u64 =
        levels.iter().filter(|l| l.vanishes).map(|l| euler_phi(r.p.pow(l.level))).sum();
    let verdict = match levels.iter().find(|l| !l.vanishes) {
        Some(l) => Verdict::NotDivisible { level: l.level },
        None => match remainder_t2_degree {
            None => Verdict::Divisible,
            Some(d) => Verdict::Inconclusive { points: vanishing_points, remainder_t2_degree: d },
        },
    };
    Ok(GreenbergReport {
        p: r.p,
        precision: r.precision,
        caps: r.caps,
        m: div.m,
        remainder_is_zero: r.is_zero(),
        remainder_t2_degree,
        levels,
        vanishing_points,
        verdict,
        scope: format!("at truncation T1^{}, T2^{}, {}^{}", r.caps.0 + 1, r.caps.1 + 1, r.p, r.precision),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasechangeLevel {
    pub level: u32,
    /// prod over primitive psi of order p^level of r(T1, psi(T2)) is 0.
    pub product_vanishes: bool,
    /// Characters deduced divisible through Galois conjugacy.
    pub flagged_divisible: Vec<u64>,
    /// Direct per-character check, as a cross-check of the deduction.
    pub direct_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasechangeReport {
    pub p: u64,
    pub precision: u32,
    pub caps: (usize, usize),
    /// (L(T1, 0)) = (g(T1, 0)) at truncation.
    pub base_equality: bool,
    pub levels: Vec<BasechangeLevel>,
    pub scope: String,
}

/// From (L(T1,0)) = (g(T1,0)) and the product specializations at each level,
/// deduce divisibility at every nontrivial character of that level.
pub fn basechange_check(l: &PowerSeries2, g: &PowerSeries2, max_level: u32) -> Result<BasechangeReport> {
    let l0 = l.at_t2_zero();
    if l0.is_zero() {
        return Err(Error::Hypothesis(format!(
            "L(T1, 0) = 0 mod {}^{}: nothing to compare at the trivial character",
            l.p, l.precision
        )));
    }
    let as_grid = |f: &super::PowerSeries1| PowerSeries2 {
        p: f.p,
        precision: f.precision,
        caps: (f.cap(), 0),
        grid: f.coeffs.iter().map(|&c| vec![c]).collect(),
    };
    let base = divide_with_remainder(&as_grid(&l0), &as_grid(&g.at_t2_zero()))?;
    let unit_quotient = base.quotient.ring().is_unit(base.quotient.grid[0][0]);
    if !base.remainder.is_zero() || !unit_quotient {
        return Err(Error::EqkViolated(format!(
            "L(T1, 0) / g(T1, 0) leaves remainder {:?} with quotient constant {}",
            base.remainder.grid.iter().map(|r| r[0]).collect::<Vec<_>>(),
            base.quotient.grid[0][0]
        )));
    }
    let div = divide_with_remainder(l, g)?;
    let r = &div.remainder;
    let mut levels = Vec::new();
    for level in 1..=max_level {
        let chars = CharSpec::all_of_level(r.p, level);
        let first = specialize(r, &chars[0])?;
        let mut prod = first.clone();
        for psi in &chars[1..] {
            prod = prod.mul(&first.galois(psi.exponent as i64))?;
        }
        let product_vanishes = prod.is_zero();
        let flagged_divisible = if product_vanishes { chars.iter().map(|c| c.exponent).collect() } else { vec![] };
        let rows = remainder_rows(r, div.m, level)?;
        let direct: Vec<u64> = rows.iter().filter(|c| c.vanishes).map(|c| c.exponent).collect();
        levels.push(BasechangeLevel { level, product_vanishes, direct_agrees: direct == flagged_divisible, flagged_divisible });
    }
    Ok(BasechangeReport {
        p: r.p,
        precision: r.precision,
        caps: r.caps,
        base_equality: true,
        levels,
        scope: format!("at truncation T1^{}, T2^{}, {}^{}", r.caps.0 + 1, r.caps.1 + 1, r.p, r.precision),
    })
}
