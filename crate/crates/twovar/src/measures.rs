//! Finite-level theta, Eisenstein and convolution families of q-expansions.
//!
//! All coefficients live in Q(zeta) as `CycElement<BigRational>`.

use crate::arith::{dirichlet_l_at_zero, divisors, euler_phi, gcd, is_prime, lcm, CycElement, DirichletChar};
use crate::error::{Error, Result};
use crate::qexp::QExpansion;
use crate::quadclass::{rep_count, ClassGroup};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

pub type Cyc = CycElement<BigRational>;

fn cyc_int(n: i64) -> Cyc {
    CycElement::from_base(BigRational::from_integer(BigInt::from(n)))
}

fn cyc_zero() -> Cyc {
    CycElement::from_base(BigRational::zero())
}

/// Level of the theta series attached to (A, chi): |D| times the square of
/// lcm(order conductor, conductor of chi).
pub fn theta_level(group: &ClassGroup, chi: &DirichletChar) -> u64 {
    let m = lcm(group.order().conductor(), chi.conductor());
    group.order().fundamental_discriminant().unsigned_abs() * m * m
}

/// omega chi^2, the Nebentypus of the theta series.
pub fn theta_nebentypus(group: &ClassGroup, chi: &DirichletChar) -> DirichletChar {
    group.order().quadratic_character().mul(&chi.pow(2))
}

/// chi(0)/u + sum chi(n) r_A(n) q^n.
pub fn theta_full(group: &ClassGroup, class: usize, chi: &DirichletChar, precision: usize) -> QExpansion<Cyc> {
    let u = group.order().unit_count() as i64;
    let mut coeffs = Vec::with_capacity(precision + 1);
    coeffs.push(chi.value_cyc(0).scale(&BigRational::new(BigInt::one(), BigInt::from(u))));
    for n in 1..=precision as u64 {
        coeffs.push(theta_coeff(group, class, chi, n));
    }
    QExpansion::new(coeffs, 1, theta_level(group, chi)).with_nebentypus(Some(theta_nebentypus(group, chi)))
}

fn theta_coeff(group: &ClassGroup, class: usize, chi: &DirichletChar, n: u64) -> Cyc {
    if chi.value_exp(n).is_none() {
        return cyc_zero();
    }
    let r = rep_count(group, class, n);
    if r == 0 {
        cyc_zero()
    } else {
        chi.value_cyc(n).scale(&BigRational::from_integer(BigInt::from(r)))
    }
}

/// The part of theta_full supported on n = a mod p^m, without constant term.
pub fn theta_partial(
    group: &ClassGroup,
    class: usize,
    chi: &DirichletChar,
    a: u64,
    p: u64,
    m: u32,
    precision: usize,
) -> QExpansion<Cyc> {
    let pm = p.pow(m);
    let a = a % pm;
    let mut coeffs = vec![cyc_zero(); precision + 1];
    for n in (1..=precision as u64).filter(|n| n % pm == a) {
        coeffs[n as usize] = theta_coeff(group, class, chi, n);
    }
    let level = lcm(theta_level(group, chi), pm * pm);
    QExpansion::new(coeffs, 1, level).with_nebentypus(Some(theta_nebentypus(group, chi)))
}

fn check_odd(xi: &DirichletChar) -> Result<()> {
    if !xi.is_odd() {
        return Err(Error::Parity(format!(
            "weight-one Eisenstein series needs an odd character, got one of modulus {}",
            xi.modulus()
        )));
    }
    Ok(())
}

fn half_l_value(xi: &DirichletChar) -> Result<Cyc> {
    Ok(dirichlet_l_at_zero(xi)?.scale(&BigRational::new(BigInt::one(), BigInt::from(2))))
}

/// L(xi,0)/2 + sum_n (sum_{d | n} xi(d)) q^n.
pub fn eisenstein_full(xi: &DirichletChar, precision: usize) -> Result<QExpansion<Cyc>> {
    check_odd(xi)?;
    let mut coeffs = vec![half_l_value(xi)?];
    for n in 1..=precision as u64 {
        let mut acc = cyc_zero();
        for d in divisors(n) {
            acc = acc.plus(&xi.value_cyc(d));
        }
        coeffs.push(acc);
    }
    Ok(QExpansion::new(coeffs, 1, xi.modulus()).with_nebentypus(Some(xi.clone())))
}

/// Divisor sums restricted to d = a mod M; the constant L(xi,0)/2 is kept on every partial.
pub fn eisenstein_partial(xi: &DirichletChar, a: u64, modulus: u64, precision: usize) -> Result<QExpansion<Cyc>> {
    check_odd(xi)?;
    let a = a % modulus;
    let mut coeffs = vec![half_l_value(xi)?];
    for n in 1..=precision as u64 {
        let mut acc = cyc_zero();
        for d in divisors(n).into_iter().filter(|d| d % modulus == a) {
            acc = acc.plus(&xi.value_cyc(d));
        }
        coeffs.push(acc);
    }
    Ok(QExpansion::new(coeffs, 1, lcm(modulus, xi.modulus())).with_nebentypus(Some(xi.clone())))
}

/// E(xi)(a, M) - C E(xi)(C^{-1} a, M).
pub fn eisenstein_regularized(
    xi: &DirichletChar,
    a: u64,
    modulus: u64,
    precision: usize,
    regulator: u64,
) -> Result<QExpansion<Cyc>> {
    check_odd(xi)?;
    check_regulator(regulator, modulus)?;
    let a = a % modulus;
    let c = regulator % modulus;
    let cc = cyc_int(regulator as i64);
    let mut coeffs = vec![half_l_value(xi)?.scale(&BigRational::from_integer(BigInt::from(1 - regulator as i64)))];
    for n in 1..=precision as u64 {
        let mut acc = cyc_zero();
        for d in divisors(n) {
            let hit = d % modulus == a;
            let hit_c = (c * (d % modulus)) % modulus == a;
            if hit {
                acc = acc.plus(&xi.value_cyc(d));
            }
            if hit_c {
                acc = acc.minus(&xi.value_cyc(d).times(&cc));
            }
        }
        coeffs.push(acc);
    }
    Ok(QExpansion::new(coeffs, 1, lcm(modulus, xi.modulus())).with_nebentypus(Some(xi.clone())))
}

fn check_regulator(c: u64, modulus: u64) -> Result<()> {
    if c <= 1 || gcd(c, modulus) != 1 {
        return Err(Error::InvalidInput(format!("regulator C = {c} must exceed 1 and be prime to {modulus}")));
    }
    Ok(())
}

/// Parameters shared by every convolution value of one family.
#[derive(Clone, Debug)]
pub struct ConvolutionParams<'a> {
    pub group: &'a ClassGroup,
    pub chi: &'a DirichletChar,
    pub p: u64,
    pub m: u32,
    /// The level N of the eigenform.
    pub level: u64,
    pub regulator: u64,
    pub precision: usize,
}

impl ConvolutionParams<'_> {
    pub fn delta(&self) -> u64 {
        theta_level(self.group, self.chi)
    }

    /// Modulus of the alpha-sum: lcm(N Delta, p^m), so alpha^2 a mod p^m is defined.
    pub fn alpha_modulus(&self) -> u64 {
        lcm(self.level * self.delta(), self.p.pow(self.m))
    }

    /// xi = omega chi^2.
    pub fn eisenstein_character(&self) -> DirichletChar {
        theta_nebentypus(self.group, self.chi)
    }

    pub fn validate(&self) -> Result<()> {
        let disc = self.group.order().fundamental_discriminant();
        if !is_prime(self.p) || self.m == 0 {
            return Err(Error::InvalidInput(format!("need a prime p and m >= 1, got p = {}, m = {}", self.p, self.m)));
        }
        if gcd(self.level, disc.unsigned_abs()) != 1 {
            return Err(Error::RamifiedLevel { level: self.level, disc });
        }
        if self.delta() % self.p == 0 || self.level % self.p == 0 {
            return Err(Error::InvalidInput(format!(
                "p = {} must be prime to N Delta = {} for the p-power grid",
                self.p,
                self.level * self.delta()
            )));
        }
        check_regulator(self.regulator, self.p * self.level * disc.unsigned_abs())
    }
}

/// Phi_A(a) = sum_{alpha in (Z/L)^x} Theta_A(alpha^2 a, p^m)(Nz) E^C(xi)(alpha, L)(z),
/// evaluated by grouping alpha according to b = alpha^2 a mod p^m.
pub fn convolution(params: &ConvolutionParams<'_>, class: usize, a: u64) -> Result<QExpansion<Cyc>> {
    params.validate()?;
    let pm = params.p.pow(params.m);
    let big = params.alpha_modulus();
    let q = params.precision;
    let xi = params.eisenstein_character();
    check_odd(&xi)?;
    let a = a % pm;
    let c = params.regulator;
    let half_l = half_l_value(&xi)?;
    let reg_const = half_l.scale(&BigRational::from_integer(BigInt::from(1 - c as i64)));
    // Number of alpha mod L over each unit beta mod p^m.
    let fibre = euler_phi(big) / euler_phi(pm);
    let mut counts = vec![0u64; pm as usize];
    for beta in (1..pm).filter(|b| gcd(*b, params.p) == 1) {
        counts[((beta * beta % pm) * a % pm) as usize] += fibre;
    }
    let xi_vals: Vec<Option<Cyc>> =
        (0..=q as u64).map(|d| if gcd(d, big) == 1 { Some(xi.value_cyc(d)) } else { None }).collect();
    let cc = BigRational::from_integer(BigInt::from(c));
    let mut total = QExpansion::zero(&cyc_zero(), q, 2, big);
    for b in 0..pm {
        // Theta part: sum_{N k <= Q} theta_b(k) q^{N k}.
        let theta = theta_partial(params.group, class, params.chi, b, params.p, params.m, q / params.level as usize);
        if theta.is_zero() {
            continue;
        }
        let mut s = vec![cyc_zero(); q + 1];
        s[0] = reg_const.scale(&BigRational::from_integer(BigInt::from(counts[b as usize])));
        for (n, slot) in s.iter_mut().enumerate().skip(1) {
            let mut acc = cyc_zero();
            for d in divisors(n as u64) {
                if let Some(v) = &xi_vals[d as usize] {
                    let dd = d % pm;
                    if (dd * dd % pm) * a % pm == b {
                        acc = acc.plus(v);
                    }
                    let cd = (c % pm) * dd % pm;
                    if (cd * cd % pm) * a % pm == b {
                        acc = acc.minus(&v.scale(&cc));
                    }
                }
            }
            *slot = acc;
        }
        let s = QExpansion::new(s, 1, big);
        let prod = theta.v_d_to(params.level, q).mul(&s)?;
        total = total.add(&prod)?;
    }
    let mut out = total;
    out.weight = 2;
    out.level = big;
    Ok(out.with_nebentypus(Some(xi.pow(2))))
}

/// Which construction a family records.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FamilyKind {
    ThetaPartial { class: usize },
    EisensteinRegularized { base: u64, regulator: u64 },
    Convolution { class: usize, level: u64, regulator: u64 },
}

/// Values indexed by residues a mod base * p^m.
#[derive(Clone, Debug)]
pub struct FiniteLevelFamily {
    pub p: u64,
    pub m: u32,
    pub base: u64,
    pub kind: FamilyKind,
    pub values: BTreeMap<u64, QExpansion<Cyc>>,
}

impl FiniteLevelFamily {
    pub fn grid(&self) -> u64 {
        self.base * self.p.pow(self.m)
    }

    pub fn theta(
        group: &ClassGroup,
        class: usize,
        chi: &DirichletChar,
        p: u64,
        m: u32,
        precision: usize,
    ) -> FiniteLevelFamily {
        let values =
            (0..p.pow(m)).map(|a| (a, theta_partial(group, class, chi, a, p, m, precision))).collect();
        FiniteLevelFamily { p, m, base: 1, kind: FamilyKind::ThetaPartial { class }, values }
    }

    /// E^C(xi)(a, base p^m) for every residue a.
    pub fn eisenstein(
        xi: &DirichletChar,
        base: u64,
        p: u64,
        m: u32,
        precision: usize,
        regulator: u64,
    ) -> Result<FiniteLevelFamily> {
        let grid = base * p.pow(m);
        let values = (0..grid)
            .map(|a| Ok((a, eisenstein_regularized(xi, a, grid, precision, regulator)?)))
            .collect::<Result<_>>()?;
        Ok(FiniteLevelFamily { p, m, base, kind: FamilyKind::EisensteinRegularized { base, regulator }, values })
    }

    pub fn convolution(params: &ConvolutionParams<'_>, class: usize) -> Result<FiniteLevelFamily> {
        let values =
            (0..params.p.pow(params.m)).map(|a| Ok((a, convolution(params, class, a)?))).collect::<Result<_>>()?;
        Ok(FiniteLevelFamily {
            p: params.p,
            m: params.m,
            base: 1,
            kind: FamilyKind::Convolution { class, level: params.level, regulator: params.regulator },
            values,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionReport {
    pub holds: bool,
    pub checked_coefficients: usize,
    /// (coarse residue, coefficient index) pairs that disagree.
    pub mismatches: Vec<(u64, usize)>,
}

/// For each coarse residue a, compare value(a) with the sum of the fine values
/// over the lifts of a, on coefficients q^1 onward.
pub fn distribution_check(coarse: &FiniteLevelFamily, fine: &FiniteLevelFamily) -> Result<DistributionReport> {
    if coarse.p != fine.p || coarse.base != fine.base || coarse.kind_tag() != fine.kind_tag() || fine.m != coarse.m + 1
    {
        return Err(Error::InvalidInput("families are not consecutive levels of one construction".into()));
    }
    let grid = coarse.grid();
    let mut mismatches = Vec::new();
    let mut checked = usize::MAX;
    for (&a, val) in &coarse.values {
        let lifts: Vec<&QExpansion<Cyc>> = (0..fine.p).map(|k| &fine.values[&(a + k * grid)]).collect();
        let q = lifts.iter().map(|s| s.precision()).min().unwrap_or(0).min(val.precision());
        checked = checked.min(q);
        for n in 1..=q {
            let mut acc = cyc_zero();
            for s in &lifts {
                acc = acc.plus(s.coeff(n));
            }
            if acc != *val.coeff(n) {
                mismatches.push((a, n));
            }
        }
    }
    Ok(DistributionReport { holds: mismatches.is_empty(), checked_coefficients: checked, mismatches })
}

impl FiniteLevelFamily {
    fn kind_tag(&self) -> std::mem::Discriminant<FamilyKind> {
        std::mem::discriminant(&self.kind)
    }
}
