//! Ordinary projection onto a p-stabilized eigenform, Hida's linear form, the
//! trace to the eigenform's level, and assembly of the measure values.

mod assemble;
mod trace;

pub use assemble::{
    assemble_measure, cyc_inverse, functional_involution, lp_normalize, twisted_convolution_sum, FunctionalEquationData,
    LocalFactor, LpValue, PadicCyc,
    MeasureEvaluation, MeasureInput, Provenance, RegularizerConvention,
};
pub use trace::{degeneracy_weight, oldform_coefficients, trace_project, TraceResult};

use crate::arith::{gcd, primes_up_to, CycElement, PadicApprox};
use crate::error::{Error, Result};
use crate::qexp::{PadicEigenSystem, QExpansion};
use crate::ring::Ring;
use serde::Serialize;

/// Coefficient rings the projector can act on: p-adic numbers and cyclotomic
/// elements over them.
pub trait PadicModule: Ring {
    fn scale_padic(&self, s: &PadicApprox) -> Self;
    /// Division by a p-adic scalar, losing v_p(d) digits.
    fn divide_padic(&self, d: &PadicApprox) -> Result<Self>;
}

impl PadicModule for PadicApprox {
    fn scale_padic(&self, s: &PadicApprox) -> Self {
        self.times(s)
    }
    fn divide_padic(&self, d: &PadicApprox) -> Result<Self> {
        self.divide(d)
    }
}

impl PadicModule for CycElement<PadicApprox> {
    fn scale_padic(&self, s: &PadicApprox) -> Self {
        self.scale(s)
    }
    fn divide_padic(&self, d: &PadicApprox) -> Result<Self> {
        self.try_map(|c| c.divide(d))
    }
}

/// (T_q - a_q(g)) / (a_q(f0) - a_q(g)) for one companion g.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnihilatorFactor {
    pub companion: String,
    pub prime: u64,
    #[serde(serialize_with = "ser_padic")]
    pub companion_eigenvalue: PadicApprox,
    #[serde(serialize_with = "ser_padic")]
    pub target_eigenvalue: PadicApprox,
    /// v_p of the denominator.
    pub loss: u32,
}

/// (U_p - beta) / (alpha - beta): removes the non-ordinary twin of f0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrdinaryFactor {
    #[serde(serialize_with = "ser_padic")]
    pub alpha: PadicApprox,
    #[serde(serialize_with = "ser_padic")]
    pub beta: PadicApprox,
    pub loss: u32,
}

pub(crate) fn ser_padic<S: serde::Serializer>(x: &PadicApprox, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectorSpec {
    #[serde(skip)]
    pub target: PadicEigenSystem,
    pub target_label: String,
    /// Level of the space the projector acts on.
    pub working_level: u64,
    pub p: u64,
    pub input_precision: u32,
    pub factors: Vec<AnnihilatorFactor>,
    pub ordinary: Option<OrdinaryFactor>,
    /// Whether the companions were certified complete by a manifest.
    pub eigendata_complete: bool,
}

impl ProjectorSpec {
    /// Total p-adic precision lost to denominators.
    pub fn loss(&self) -> u32 {
        self.factors.iter().map(|f| f.loss).sum::<u32>() + self.ordinary.as_ref().map_or(0, |o| o.loss)
    }

    pub fn output_precision(&self) -> u32 {
        self.input_precision.saturating_sub(self.loss())
    }

    /// Factor by which q-precision shrinks under one application.
    pub fn q_shrink(&self) -> u64 {
        let mut s: u64 = self.factors.iter().map(|f| f.prime).product();
        if self.ordinary.is_some() {
            s *= self.p;
        }
        s
    }

    /// Apply every factor in turn. The input should have level `working_level`.
    pub fn apply<R: PadicModule>(&self, g: &QExpansion<R>) -> Result<QExpansion<R>> {
        if self.output_precision() == 0 {
            return Err(Error::PrecisionExhausted(format!(
                "projector loses {} digits of {}",
                self.loss(),
                self.input_precision
            )));
        }
        let mut cur = g.clone();
        cur.level = self.working_level;
        for f in &self.factors {
            let tq = cur.hecke(f.prime)?;
            let shifted = cur.truncate(tq.precision()).map(|c| c.scale_padic(&f.companion_eigenvalue));
            let num = tq.sub(&shifted)?;
            let den = f.target_eigenvalue.minus(&f.companion_eigenvalue);
            cur = num.try_map(|c| c.divide_padic(&den))?;
        }
        if let Some(o) = &self.ordinary {
            let up = cur.u_p(self.p)?;
            let shifted = cur.truncate(up.precision()).map(|c| c.scale_padic(&o.beta));
            let den = o.alpha.minus(&o.beta);
            cur = up.sub(&shifted)?.try_map(|c| c.divide_padic(&den))?;
        }
        let out = self.output_precision();
        Ok(cur.map(|c| c.scale_padic(&PadicApprox::one(self.p, out))))
    }
}

/// Choose, for each companion, the prime q (prime to the working level, with
/// a_q known on both sides) minimizing v_p(a_q(f0) - a_q(g)); ties go to the
/// smaller q. `beta` is the U_p-eigenvalue of the non-ordinary twin when f0 is
/// a p-stabilization and the twin lives in the working space.
pub fn build_projector(
    target: &PadicEigenSystem,
    companions: &[PadicEigenSystem],
    working_level: u64,
    beta: Option<PadicApprox>,
    eigendata_complete: bool,
) -> Result<ProjectorSpec> {
    let p = target.p;
    let prec = target.precision;
    if working_level % target.level != 0 {
        return Err(Error::InvalidInput(format!(
            "target level {} does not divide the working level {working_level}",
            target.level
        )));
    }
    let alpha = target.ap(p)?.clone();
    if !alpha.is_unit() {
        return Err(Error::NotOrdinary(format!("target {}: a_{p} = {alpha}", target.label)));
    }
    let mut factors = Vec::new();
    for g in companions {
        if g.p != p {
            return Err(Error::RingMismatch(format!("companion {} is {}-adic", g.label, g.p)));
        }
        let bound = target.bound().min(g.bound());
        let mut best: Option<AnnihilatorFactor> = None;
        for q in primes_up_to(bound).into_iter().filter(|q| gcd(*q, working_level) == 1) {
            let (ft, gt) = (target.ap(q)?, g.ap(q)?);
            let diff = ft.minus(gt);
            if diff.is_zero() {
                continue;
            }
            let v = diff.valuation();
            if best.as_ref().is_none_or(|b| v < b.loss) {
                best = Some(AnnihilatorFactor {
                    companion: g.label.clone(),
                    prime: q,
                    companion_eigenvalue: gt.clone(),
                    target_eigenvalue: ft.clone(),
                    loss: v,
                });
                if v == 0 {
                    break;
                }
            }
        }
        let f = best.ok_or_else(|| {
            Error::Inseparable(format!(
                "{} and {} agree at every prime up to {bound} prime to {working_level} (mod {p}^{prec})",
                target.label, g.label
            ))
        })?;
        factors.push(f);
    }
    let ordinary = match beta {
        None => None,
        Some(beta) => {
            let v = alpha.minus(&beta).valuation();
            Some(OrdinaryFactor { alpha: alpha.clone(), beta, loss: v })
        }
    };
    let spec = ProjectorSpec {
        target: target.clone(),
        target_label: target.label.clone(),
        working_level,
        p,
        input_precision: prec,
        factors,
        ordinary,
        eigendata_complete,
    };
    if spec.output_precision() == 0 {
        return Err(Error::PrecisionExhausted(format!(
            "denominators consume all {prec} digits (loss {})",
            spec.loss()
        )));
    }
    Ok(spec)
}

/// a_1 of the projected expansion.
pub fn linear_form<R: PadicModule>(g: &QExpansion<R>, proj: &ProjectorSpec) -> Result<R> {
    let h = proj.apply(g)?;
    if h.precision() < 1 {
        return Err(Error::PrecisionExhausted("projected series has no q^1 coefficient".into()));
    }
    Ok(h.coeff(1).clone())
}
