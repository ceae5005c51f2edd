//! The measure value sum_a chi(a) sum_A rho(A) l_{f0}(Tr Phi_A(a)), its
//! normalization, and the functional-equation dressing.

use super::{trace_project, ProjectorSpec};
use crate::arith::{factor, gcd, kronecker, valuation, CycElement, DirichletChar, PadicApprox};
use crate::error::{Error, Result};
use crate::measures::{convolution, ConvolutionParams, Cyc};
use crate::qexp::QExpansion;
use crate::quadclass::{ClassGroup, RingClassChar};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

pub type PadicCyc = CycElement<PadicApprox>;

#[derive(Clone, Debug)]
pub struct MeasureInput<'a> {
    pub group: &'a ClassGroup,
    pub rho: &'a RingClassChar,
    /// Character of (Z/p^m)^x evaluated by the measure.
    pub chi: &'a DirichletChar,
    /// Character inside the theta series, of conductor prime to p.
    pub tame: &'a DirichletChar,
    pub p: u64,
    pub m: u32,
    /// Level N of the eigenform before p-stabilization.
    pub level: u64,
    pub regulator: u64,
    /// q-expansion precision of the convolution series.
    pub q_precision: usize,
    pub projector: &'a ProjectorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub disc: i64,
    pub class_number: usize,
    pub level: u64,
    pub tame_modulus: u64,
    pub working_level: u64,
    pub target_level: u64,
    pub target_label: String,
    pub q_precision: usize,
    pub input_precision: u32,
    pub projector_loss: u32,
    pub output_precision: u32,
    pub eigendata_complete: bool,
    pub span_consistent: bool,
    pub trace_index: u64,
}

/// Data at a prime of k above p: its norm, its class (None when inert), the
/// value W(P) and alpha_{N P}, and the candidate factor 1 - W(P)/alpha_{N P}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFactor {
    pub norm: u64,
    pub class: Option<usize>,
    #[serde(serialize_with = "ser_cyc")]
    pub w_value: PadicCyc,
    #[serde(serialize_with = "super::ser_padic")]
    pub alpha_norm: PadicApprox,
    #[serde(serialize_with = "ser_cyc")]
    pub factor: PadicCyc,
}

pub(crate) fn ser_cyc<R: Ring + std::fmt::Display, S: serde::Serializer>(
    x: &CycElement<R>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("CycElement", 2)?;
    st.serialize_field("conductor", &x.conductor())?;
    let coeffs: Vec<String> = x.coeffs().iter().map(|c| c.to_string()).collect();
    st.serialize_field("coeffs", &coeffs)?;
    st.end()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureEvaluation {
    pub rho: RingClassChar,
    pub chi_modulus: u64,
    pub chi_images: Vec<u64>,
    pub regulator: u64,
    pub p: u64,
    pub m: u32,
    #[serde(serialize_with = "ser_cyc")]
    pub value: PadicCyc,
    #[serde(serialize_with = "super::ser_padic")]
    pub alpha: PadicApprox,
    pub local_factors: Vec<LocalFactor>,
    pub provenance: Provenance,
    #[serde(skip)]
    pub chi: DirichletChar,
}

fn to_padic(x: &Cyc, p: u64, prec: u32) -> Result<PadicCyc> {
    x.try_map(|r| PadicApprox::from_rational(r, p, prec))
}

/// sum over units a mod p^m and classes A of chi(a) rho(A) Phi_A(a), exactly.
pub fn twisted_convolution_sum(
    params: &ConvolutionParams<'_>,
    rho: &RingClassChar,
    chi: &DirichletChar,
) -> Result<QExpansion<Cyc>> {
    let pm = params.p.pow(params.m);
    let mut total: Option<QExpansion<Cyc>> = None;
    for a in (1..pm).filter(|a| gcd(*a, params.p) == 1) {
        let chi_a = chi.value_cyc(a);
        for class in 0..params.group.len() {
            let w = chi_a.times(&rho.value_cyc(class));
            let term = convolution(params, class, a)?.scale(&w);
            total = Some(match total {
                None => term,
                Some(t) => t.add(&term)?,
            });
        }
    }
    total.ok_or_else(|| Error::InvalidInput("empty residue grid".into()))
}

pub fn assemble_measure(input: &MeasureInput<'_>) -> Result<MeasureEvaluation> {
    let pm = input.p.pow(input.m);
    if pm % input.chi.modulus() != 0 {
        return Err(Error::Unsupported(format!(
            "chi of modulus {} does not factor through (Z/{pm})^x",
            input.chi.modulus()
        )));
    }
    let chi = input.chi.lift(pm)?;
    let params = ConvolutionParams {
        group: input.group,
        chi: input.tame,
        p: input.p,
        m: input.m,
        level: input.level,
        regulator: input.regulator,
        precision: input.q_precision,
    };
    let proj = input.projector;
    if params.alpha_modulus() != proj.working_level {
        return Err(Error::InvalidInput(format!(
            "convolution level {} differs from the projector's working level {}",
            params.alpha_modulus(),
            proj.working_level
        )));
    }
    let exact = twisted_convolution_sum(&params, input.rho, &chi)?;
    let prec = proj.input_precision;
    let padic = exact.try_map(|c| to_padic(c, input.p, prec))?;
    let tr = trace_project(&padic, proj)?;
    let alpha = proj.target.ap(input.p)?.clone();
    let local_factors = local_factors(input.group, input.rho, &chi, input.p, &alpha)?;
    Ok(MeasureEvaluation {
        rho: input.rho.clone(),
        chi_modulus: chi.modulus(),
        chi_images: chi.images().to_vec(),
        regulator: input.regulator,
        p: input.p,
        m: input.m,
        value: tr.value,
        alpha,
        local_factors,
        provenance: Provenance {
            disc: input.group.order().fundamental_discriminant(),
            class_number: input.group.len(),
            level: input.level,
            tame_modulus: input.tame.modulus(),
            working_level: proj.working_level,
            target_level: proj.target.level,
            target_label: proj.target_label.clone(),
            q_precision: input.q_precision,
            input_precision: prec,
            projector_loss: proj.loss(),
            output_precision: proj.output_precision(),
            eigendata_complete: proj.eigendata_complete,
            span_consistent: tr.span_consistent,
            trace_index: tr.index,
        },
        chi,
    })
}

fn local_factors(
    group: &ClassGroup,
    rho: &RingClassChar,
    chi: &DirichletChar,
    p: u64,
    alpha: &PadicApprox,
) -> Result<Vec<LocalFactor>> {
    let disc = group.order().fundamental_discriminant();
    let prec = alpha.precision();
    let one = PadicApprox::one(p, prec);
    let chi_at = |n: u64| to_padic(&chi.value_cyc(n), p, prec);
    let make = |norm: u64, class: Option<usize>, w: PadicCyc| -> Result<LocalFactor> {
        let alpha_norm = alpha.pow_u64(valuation(norm, p) as u64);
        let factor = CycElement::from_base(one.clone()).minus(&w.scale(&alpha_norm.inverse()?));
        Ok(LocalFactor { norm, class, w_value: w, alpha_norm, factor })
    };
    let rho_at = |class: usize| to_padic(&rho.value_cyc(class), p, prec);
    match kronecker(disc, p as i64) {
        1 => {
            let c = group.prime_class(p).ok_or_else(|| Error::InvalidInput(format!("no prime of norm {p}")))?;
            let cbar = group.inverse(c);
            Ok(vec![
                make(p, Some(c), rho_at(c)?.times(&chi_at(p)?))?,
                make(p, Some(cbar), rho_at(cbar)?.times(&chi_at(p)?))?,
            ])
        }
        -1 => Ok(vec![make(p * p, None, chi_at(p)?.times(&chi_at(p)?))?]),
        _ => {
            let c = group.prime_class(p).ok_or_else(|| Error::InvalidInput(format!("no prime of norm {p}")))?;
            Ok(vec![make(p, Some(c), rho_at(c)?.times(&chi_at(p)?))?])
        }
    }
}

/// Which sign convention the regularization factor uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegularizerConvention {
    /// (1 - C omega(C) eta^{-1}(C)).
    AsPrinted,
    /// (1 - C eta^{-1}(C)), the factor produced by the C-smoothed convolution.
    MatchingConstruction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpValue {
    #[serde(serialize_with = "ser_cyc")]
    pub value: PadicCyc,
    #[serde(serialize_with = "super::ser_padic")]
    pub euler_minus: PadicApprox,
    #[serde(serialize_with = "super::ser_padic")]
    pub euler_plus: PadicApprox,
    #[serde(serialize_with = "ser_cyc")]
    pub eta_inverse_different_level: PadicCyc,
    #[serde(serialize_with = "ser_cyc")]
    pub regularizer: PadicCyc,
    pub convention: RegularizerConvention,
}

/// Prime-to-p part.
fn prime_to(n: u64, p: u64) -> u64 {
    n / p.pow(valuation(n, p))
}

/// Inverse of a cyclotomic p-adic element through its norm.
pub fn cyc_inverse(x: &PadicCyc) -> Result<PadicCyc> {
    let adj = x.adjugate();
    let n = x.norm();
    Ok(adj.scale(&n.inverse()?))
}

/// eta(n) = chi(n)^2 for a rational integer n viewed as an ideal of k.
fn eta_rational(chi: &DirichletChar, n: u64) -> Cyc {
    let v = chi.value_cyc(n);
    v.times(&v)
}

/// Multiply by the two Euler factors at p, by eta^{-1}(D' N') and by the
/// inverse regularization factor.
pub fn lp_normalize(eval: &MeasureEvaluation, convention: RegularizerConvention) -> Result<LpValue> {
    let p = eval.p;
    let prec = eval.value.coeffs()[0].precision().min(eval.alpha.precision());
    let level = eval.provenance.level;
    let disc = eval.provenance.disc;
    let psi_p: i64 = if level % p == 0 { 0 } else { 1 };
    let alpha2 = eval.alpha.times(&eval.alpha).with_precision(prec);
    let ratio = PadicApprox::new(p, prec, psi_p).divide(&alpha2)?;
    let one = PadicApprox::one(p, prec);
    let euler_minus = one.minus(&ratio);
    let euler_plus = one.plus(&ratio.times(&PadicApprox::new(p, prec, p as i64)));
    let chi = &eval.chi;
    let d_prime = prime_to(disc.unsigned_abs(), p);
    let n_prime = prime_to(level, p);
    let eta_dn = chi.value_cyc(d_prime).times(&eta_rational(chi, n_prime));
    let eta_inv = to_padic(&eta_dn.conj(), p, prec)?;
    let c = eval.regulator;
    let omega_c = match convention {
        RegularizerConvention::AsPrinted => kronecker(disc, c as i64) as i64,
        RegularizerConvention::MatchingConstruction => 1,
    };
    let c_term = eta_rational(chi, c).conj().scale(&BigRational::from_integer(BigInt::from(c as i64 * omega_c)));
    let reg_exact = CycElement::from_base(BigRational::one()).minus(&c_term);
    let regularizer = to_padic(&reg_exact, p, prec)?;
    let reg_inv = cyc_inverse(&regularizer).map_err(|_| {
        Error::NonInvertibleRegularizer(format!(
            "1 - C omega(C) eta^-1(C) is not a unit for C = {c}, chi of modulus {} with images {:?}",
            chi.modulus(),
            chi.images()
        ))
    })?;
    let value = eval
        .value
        .scale(&euler_minus)
        .scale(&euler_plus)
        .times(&eta_inv)
        .times(&reg_inv);
    Ok(LpValue { value, euler_minus, euler_plus, eta_inverse_different_level: eta_inv, regularizer, convention })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalEquationData {
    /// -omega(N').
    pub sign: i32,
    /// eta^{1/2}(N') eta(D'), with the p-power-order square root.
    #[serde(serialize_with = "ser_cyc")]
    pub dressing: Cyc,
    /// eta is trivial and the sign is -1, so Lambda_p(eta) = -Lambda_p(eta).
    pub forces_vanishing: bool,
}

fn is_p_power(n: u64, p: u64) -> bool {
    n == 1 || factor(n).iter().all(|&(q, _)| q == p)
}

/// Value-level data of Lambda_p(eta^{-1}) = -omega(N') Lambda_p(eta) with
/// Lambda_p(eta) = eta^{1/2}(N') eta(D') L_p(eta), for eta = rho * (chi o N).
pub fn functional_involution(
    group: &ClassGroup,
    rho: &RingClassChar,
    chi: &DirichletChar,
    level: u64,
    p: u64,
) -> Result<FunctionalEquationData> {
    if p == 2 {
        return Err(Error::Unsupported("the square root needs an odd prime".into()));
    }
    let rho_order = rho.exponents().iter().map(|&e| rho.order_base() / gcd(e, rho.order_base())).max().unwrap_or(1);
    if !is_p_power(chi.order(), p) || !is_p_power(rho_order, p) {
        return Err(Error::NotPPowerOrder(format!(
            "eta has chi of order {} and rho of order {rho_order}",
            chi.order()
        )));
    }
    let disc = group.order().fundamental_discriminant();
    if disc.unsigned_abs() % p == 0 {
        return Err(Error::Unsupported(format!("p = {p} ramifies in k")));
    }
    let n_prime = prime_to(level, p);
    // eta(N') = chi(N')^2 and chi(N') has p-power order, so it is the square root.
    let half = chi.value_cyc(n_prime);
    let dressing = half.times(&chi.value_cyc(prime_to(disc.unsigned_abs(), p)));
    let omega = kronecker(disc, n_prime as i64);
    let sign = -omega;
    let trivial = rho.is_trivial() && chi.is_trivial();
    Ok(FunctionalEquationData { sign, dressing, forces_vanishing: trivial && sign == -1 })
}
