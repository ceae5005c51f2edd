//! Arithmetic invariants of E over k: Euler characteristic, Sha corank, root
//! number, and lambda in the anticyclotomic layers. Curve data is ingested
//! with a source tag on every datum.

use crate::arith::{is_prime, valuation};
use crate::error::{Error, Result};
use crate::quadclass::{splitting_and_factorization, PrimeSplitting, Splitting};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Measured,
    Hypothesized,
    PaperExample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sourced<T> {
    pub value: T,
    pub source: Source,
}

/// A place v of k with its Tamagawa factor and reduction data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceRecord {
    pub place: String,
    pub tamagawa: Sourced<u64>,
    pub residue_field_size: u64,
    /// |E~_v(kappa_v)|.
    pub reduced_points: Sourced<u64>,
    pub above_p: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveArithmeticData {
    pub curve: String,
    pub p: u64,
    pub field_disc: i64,
    pub conductor: u64,
    #[serde(default)]
    pub places: Vec<PlaceRecord>,
    #[serde(default)]
    pub torsion: Option<Sourced<u64>>,
    #[serde(default)]
    pub sha: Option<Sourced<u64>>,
    #[serde(default)]
    pub mu: Option<Sourced<u32>>,
    #[serde(default)]
    pub lambda: Option<Sourced<u32>>,
    #[serde(default)]
    pub rank: Option<Sourced<u32>>,
    #[serde(default)]
    pub class_number: Option<Sourced<u64>>,
}

impl CurveArithmeticData {
    pub fn validate(&self) -> Result<()> {
        if self.p == 2 || !is_prime(self.p) {
            return Err(Error::InvalidInput(format!("p = {} must be an odd prime", self.p)));
        }
        let counts = self
            .places
            .iter()
            .flat_map(|v| [v.tamagawa.value, v.residue_field_size, v.reduced_points.value])
            .chain(self.torsion.iter().map(|t| t.value))
            .chain(self.sha.iter().map(|s| s.value))
            .chain(self.class_number.iter().map(|h| h.value));
        if counts.into_iter().any(|c| c == 0) {
            return Err(Error::InvalidInput(format!("{}: counts must be positive", self.curve)));
        }
        Ok(())
    }
}

fn need<'a, T>(x: &'a Option<Sourced<T>>, what: &str, curve: &str) -> Result<&'a T> {
    x.as_ref().map(|s| &s.value).ok_or_else(|| Error::InvalidInput(format!("{curve}: {what} not supplied")))
}

fn decimal<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCharacteristic {
    pub p: u64,
    /// chi = p^exponent.
    pub exponent: u32,
    #[serde(serialize_with = "decimal")]
    pub value: BigUint,
    /// |char(0)|_p = p^{-exponent}.
    pub augmentation_abs: String,
}

/// chi(G, Sel) = |Sha(p)| / |E(k)(p)|^2 * prod_{v|p} |E~_v(kappa_v)(p)|^2 * prod_v |c_v|_p^{-1}.
/// Only p-parts of the inputs matter. Finiteness of Sel(E/k) is the caller's.
pub fn euler_characteristic(data: &CurveArithmeticData) -> Result<EulerCharacteristic> {
    data.validate()?;
    let p = data.p;
    if p < 5 {
        return Err(Error::Hypothesis(format!("p = {p}; the formula needs p >= 5")));
    }
    let sha = *need(&data.sha, "|Sha(E/k)(p)|", &data.curve)?;
    let tors = *need(&data.torsion, "|E(k)(p)|", &data.curve)?;
    if data.places.is_empty() {
        return Err(Error::InvalidInput(format!("{}: no local data", data.curve)));
    }
    if !data.places.iter().any(|v| v.above_p) {
        return Err(Error::InvalidInput(format!("{}: no place above p", data.curve)));
    }
    let mut e: i64 = valuation(sha, p) as i64 - 2 * valuation(tors, p) as i64;
    for v in &data.places {
        if v.above_p {
            e += 2 * valuation(v.reduced_points.value, p) as i64;
        }
        e += valuation(v.tamagawa.value, p) as i64;
    }
    let exponent = u32::try_from(e)
        .map_err(|_| Error::InvalidInput(format!("{}: Euler characteristic p^{e} is not integral", data.curve)))?;
    Ok(EulerCharacteristic {
        p,
        exponent,
        value: BigUint::from(p).pow(exponent),
        augmentation_abs: format!("{p}^-{exponent}"),
    })
}

/// Lambda(H)-corank of Sha(E/k_inf)(p): lambda if eps = +1, lambda - 1 if eps = -1.
/// mu_E(k) = 0 is assumed.
pub fn sha_corank(lambda: u32, eps: i32, p: u64, class_number: u64) -> Result<u32> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Hypothesis(format!("p = {p} must be an odd prime")));
    }
    match eps {
        1 => Ok(lambda),
        -1 => {
            if class_number % p == 0 {
                return Err(Error::Hypothesis(format!("p = {p} divides the class number {class_number}")));
            }
            lambda.checked_sub(1).ok_or(Error::NegativeCorank)
        }
        _ => Err(Error::InvalidInput(format!("root number must be +1 or -1, got {eps}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootNumber {
    pub sign: i32,
    pub n_plus: u64,
    pub n_minus: u64,
    pub inert_count: usize,
    pub table: Vec<PrimeSplitting>,
}

/// +1 iff N^- is a squarefree product of an odd number of primes.
pub fn root_number(level: u64, disc: i64) -> Result<RootNumber> {
    let fac = splitting_and_factorization(level, disc).map_err(|e| match e {
        Error::RamifiedLevel { level, disc } => {
            Error::Unsupported(format!("a prime of {level} ramifies in Q(sqrt {disc})"))
        }
        other => other,
    })?;
    let inert: Vec<&PrimeSplitting> = fac.primes.iter().filter(|s| s.kind == Splitting::Inert).collect();
    if let Some(bad) = inert.iter().find(|s| s.exponent > 1) {
        return Err(Error::Unsupported(format!("N^- is not squarefree: {}^{}", bad.prime, bad.exponent)));
    }
    let sign = if inert.len() % 2 == 1 { 1 } else { -1 };
    Ok(RootNumber {
        sign,
        n_plus: fac.n_plus,
        n_minus: fac.n_minus,
        inert_count: inert.len(),
        table: fac.primes.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerInvariants {
    pub layer: u32,
    pub degree: u64,
    pub mu: u32,
    pub lambda: u64,
}

/// lambda_E(D_n) = p^n lambda_E(k) and mu_E(D_n) = 0, given mu_E(k) = 0.
pub fn lambda_basechange(lambda: u32, p: u64, layer: u32) -> Result<LayerInvariants> {
    let degree = p
        .checked_pow(layer)
        .ok_or_else(|| Error::InvalidInput(format!("{p}^{layer} overflows")))?;
    let lam = degree
        .checked_mul(lambda as u64)
        .ok_or_else(|| Error::InvalidInput(format!("{degree} * {lambda} overflows")))?;
    Ok(LayerInvariants { layer, degree, mu: 0, lambda: lam })
}

/// Corank from ingested data, with the sign computed from the conductor and k.
pub fn sha_corank_from_data(data: &CurveArithmeticData) -> Result<(u32, RootNumber)> {
    data.validate()?;
    let mu = *need(&data.mu, "mu_E(k)", &data.curve)?;
    if mu != 0 {
        return Err(Error::Hypothesis(format!("{}: mu_E(k) = {mu}, the corank formula needs 0", data.curve)));
    }
    let lambda = *need(&data.lambda, "lambda_E(k)", &data.curve)?;
    let h = *need(&data.class_number, "class number of k", &data.curve)?;
    let rn = root_number(data.conductor, data.field_disc)?;
    Ok((sha_corank(lambda, rn.sign, data.p, h)?, rn))
}
