//! l_{f0} composed with the trace to the level of f0, through the f0-old
//! isotypic component at the working level.

use super::{PadicModule, ProjectorSpec};
use crate::arith::{divisors, factor, gamma0_index, PadicApprox};
use crate::error::{Error, Result};
use crate::qexp::{PadicEigenSystem, QExpansion};
use crate::ring::Ring;
use num_bigint::BigInt;

/// l_{f0}(Tr_{N0}^{M} f0(dz)) = [Gamma0(N0 d) : Gamma0(M)] * prod over l^e || d of
/// w_l(e), with w_l(e) = (a_l l^{1-k})^e for l != p and alpha^{-e} for l = p.
/// The l != p rule is the classical trace of f(lz) when e = 1 and l does not
/// divide N0; other cases follow the same multiplicative convention.
pub fn degeneracy_weight(d: u64, target: &PadicEigenSystem, working_level: u64) -> Result<PadicApprox> {
    let n0 = target.level;
    if working_level % (n0 * d) != 0 {
        return Err(Error::InvalidInput(format!("{d} does not divide {working_level}/{n0}")));
    }
    let p = target.p;
    let prec = target.precision;
    let mut w = PadicApprox::new(p, prec, gamma0_index(n0 * d, working_level) as i64);
    for (l, e) in factor(d) {
        let local = if l == p {
            target.ap(p)?.inverse()?
        } else {
            let al = target.ap(l).map_err(|_| {
                Error::MissingOldforms(format!("a_{l} of {} is needed for the oldform at d = {d}", target.label))
            })?;
            let lk = PadicApprox::new(p, prec, BigInt::from(l).pow(target.weight.saturating_sub(1)));
            al.divide(&lk)?
        };
        w = w.times(&local.pow_u64(e as u64));
    }
    Ok(w)
}

/// Coordinates c_d of h in the basis f0(dz), d | M/N0, read off from
/// a_d(h) = sum_{d' | d} c_{d'} a_{d/d'}(f0). Also reports whether every known
/// coefficient of h is reproduced by those coordinates.
pub fn oldform_coefficients<R: PadicModule>(
    h: &QExpansion<R>,
    target: &PadicEigenSystem,
    working_level: u64,
) -> Result<(Vec<(u64, R)>, bool)> {
    let ratio = working_level / target.level;
    let ds = divisors(ratio);
    if h.precision() < ratio as usize {
        return Err(Error::PrecisionExhausted(format!(
            "oldform extraction needs q^{ratio}, projected series known to q^{}",
            h.precision()
        )));
    }
    let zero = h.coeff(0).zero_like();
    let coeff = |n: u64| -> Result<PadicApprox> { target.coefficient(n) };
    let mut cs: Vec<(u64, R)> = Vec::new();
    for &d in &ds {
        let mut c = h.coeff(d as usize).clone();
        for (dp, cp) in &cs {
            if d % dp == 0 {
                c = c.minus(&cp.scale_padic(&coeff(d / dp)?));
            }
        }
        cs.push((d, c));
    }
    let check_to = h.precision().min(target.bound() as usize);
    let mut consistent = true;
    for n in 1..=check_to as u64 {
        let mut acc = zero.clone();
        for (d, c) in &cs {
            if n % d == 0 {
                acc = acc.plus(&c.scale_padic(&coeff(n / d)?));
            }
        }
        if acc != *h.coeff(n as usize) {
            consistent = false;
            break;
        }
    }
    Ok((cs, consistent))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceResult<R> {
    pub value: R,
    pub components: Vec<(u64, R)>,
    /// The projected series lies in the f0-old span at every checked coefficient.
    pub span_consistent: bool,
    pub index: u64,
}

/// l_{f0}(Tr g): project, split into f0(dz) components, weight each component.
pub fn trace_project<R: PadicModule>(g: &QExpansion<R>, proj: &ProjectorSpec) -> Result<TraceResult<R>> {
    let h = proj.apply(g)?;
    let (components, span_consistent) = oldform_coefficients(&h, &proj.target, proj.working_level)?;
    let mut value = h.coeff(0).zero_like();
    for (d, c) in &components {
        let w = degeneracy_weight(*d, &proj.target, proj.working_level)?;
        value = value.plus(&c.scale_padic(&w));
    }
    Ok(TraceResult {
        value,
        components,
        span_consistent,
        index: gamma0_index(proj.target.level, proj.working_level),
    })
}
