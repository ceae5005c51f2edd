//! Dirichlet characters with a fixed generator choice for (Z/M)^×.
//!
//! Generators are chosen per prime-power component, primes ascending: the
//! smallest primitive root modulo q^e for odd q, and -1, 5 for the 2-part.
//! Each is lifted by CRT to be 1 modulo the other components, so a character
//! is determined by the exponents of its values on these generators.

use super::cyclo::CycElement;
use super::{divisors, factor, gcd, kronecker, lcm, mod_inv, mod_pow};
use crate::error::{Error, Result};
use crate::ring::Ring;
use num_rational::BigRational;
use num_traits::One;
use std::sync::Arc;

const NOT_UNIT: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub residue: u64,
    pub order: u64,
    pub prime: u64,
}

#[derive(Clone, Debug)]
pub struct DirichletChar {
    modulus: u64,
    gens: Vec<Generator>,
    images: Vec<u64>,
    order_base: u64,
    table: Arc<Vec<u32>>,
}

impl PartialEq for DirichletChar {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.images == other.images
    }
}

impl Eq for DirichletChar {}

fn crt_one_elsewhere(g: u64, local: u64, modulus: u64) -> u64 {
    let other = modulus / local;
    if other == 1 {
        return g % modulus;
    }
    // x = 1 + other * t with other * t = g - 1 (mod local)
    let inv = mod_inv(other % local, local).expect("coprime components");
    let t = ((g + local - 1) % local) as u128 * inv as u128 % local as u128;
    ((1 + other as u128 * t) % modulus as u128) as u64
}

fn smallest_primitive_root(q: u64, e: u32) -> u64 {
    let m = q.pow(e);
    let phi = m / q * (q - 1);
    let primes: Vec<u64> = factor(phi).into_iter().map(|(r, _)| r).collect();
    (2..m)
        .find(|&g| g % q != 0 && primes.iter().all(|&r| mod_pow(g, phi / r, m) != 1))
        .unwrap_or(1)
}

pub fn generators(modulus: u64) -> Vec<Generator> {
    let mut gens = Vec::new();
    for (q, e) in factor(modulus) {
        let local = q.pow(e);
        if q == 2 {
            if e >= 2 {
                gens.push(Generator { residue: crt_one_elsewhere(local - 1, local, modulus), order: 2, prime: 2 });
            }
            if e >= 3 {
                gens.push(Generator { residue: crt_one_elsewhere(5, local, modulus), order: local / 4, prime: 2 });
            }
        } else {
            let g = smallest_primitive_root(q, e);
            gens.push(Generator { residue: crt_one_elsewhere(g, local, modulus), order: local / q * (q - 1), prime: q });
        }
    }
    gens
}

impl DirichletChar {
    /// Character sending the i-th generator to zeta_{ord_i}^{images[i]}.
    pub fn new(modulus: u64, images: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let gens = generators(modulus);
        if images.len() != gens.len() {
            return Err(Error::InvalidInput(format!(
                "modulus {modulus} has {} generators, got {} images",
                gens.len(),
                images.len()
            )));
        }
        for (g, &k) in gens.iter().zip(&images) {
            if k >= g.order {
                return Err(Error::InvalidInput(format!("image {k} out of range for generator of order {}", g.order)));
            }
        }
        let order_base = gens.iter().fold(1, |acc, g| lcm(acc, g.order));
        let mut table = vec![NOT_UNIT; modulus as usize];
        // Walk every exponent vector of the generators in mixed radix.
        let mut t = vec![0u64; gens.len()];
        let mut elem = 1 % modulus;
        let mut exp = 0u64;
        loop {
            table[elem as usize] = exp as u32;
            let mut i = 0;
            loop {
                if i == gens.len() {
                    if modulus == 1 {
                        table[0] = 0;
                    }
                    return Ok(DirichletChar { modulus, gens, images, order_base, table: Arc::new(table) });
                }
                let step = images[i] * (order_base / gens[i].order) % order_base;
                t[i] += 1;
                elem = (elem as u128 * gens[i].residue as u128 % modulus as u128) as u64;
                exp = (exp + step) % order_base;
                if t[i] < gens[i].order {
                    break;
                }
                t[i] = 0;
                // g_i^{ord_i} = 1, and the exponent wrapped back as well.
                i += 1;
            }
        }
    }

    pub fn trivial(modulus: u64) -> Self {
        let n = generators(modulus).len();
        DirichletChar::new(modulus, vec![0; n]).expect("trivial character")
    }

    /// Build from a value function returning (order, exp) for zeta_order^exp.
    pub fn from_fn(modulus: u64, f: impl Fn(u64) -> (u64, u64)) -> Result<Self> {
        let gens = generators(modulus);
        let mut images = Vec::with_capacity(gens.len());
        for g in &gens {
            let (o, e) = f(g.residue);
            let num = e as u128 * g.order as u128;
            if num % o as u128 != 0 {
                return Err(Error::InvalidInput(format!(
                    "value zeta_{o}^{e} at generator {} is not of order dividing {}",
                    g.residue, g.order
                )));
            }
            images.push(((num / o as u128) % g.order as u128) as u64);
        }
        DirichletChar::new(modulus, images)
    }

    /// a -> (D | a) as a character modulo |D|.
    pub fn kronecker(disc: i64) -> Result<Self> {
        let m = disc.unsigned_abs();
        let chi = DirichletChar::from_fn(m, |a| {
            let k = kronecker(disc, a as i64);
            (2, if k == -1 { 1 } else { 0 })
        })?;
        for a in 1..m {
            if gcd(a, m) == 1 {
                let want = kronecker(disc, a as i64);
                let got = if chi.value_exp(a) == Some(0) { 1 } else { -1 };
                if want != got {
                    return Err(Error::InvalidInput(format!("(D | .) is not periodic mod |D| for D = {disc}")));
                }
            }
        }
        Ok(chi)
    }

    /// All characters modulo M, in lexicographic order of images.
    pub fn all(modulus: u64) -> Vec<DirichletChar> {
        let gens = generators(modulus);
        let mut out = Vec::new();
        let mut imgs = vec![0u64; gens.len()];
        loop {
            out.push(DirichletChar::new(modulus, imgs.clone()).expect("valid images"));
            let mut i = gens.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                imgs[i] += 1;
                if imgs[i] < gens[i].order {
                    break;
                }
                imgs[i] = 0;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// Values are powers of zeta_E for this E (the exponent of the group).
    pub fn order_base(&self) -> u64 {
        self.order_base
    }

    /// chi(a) = zeta_E^k, or None when gcd(a, M) > 1.
    pub fn value_exp(&self, a: u64) -> Option<u64> {
        let t = self.table[(a % self.modulus) as usize];
        (t != NOT_UNIT).then_some(t as u64)
    }

    pub fn value_exp_signed(&self, a: i64) -> Option<u64> {
        self.value_exp(a.rem_euclid(self.modulus as i64) as u64)
    }

    pub fn value<R: Ring>(&self, a: u64, template: &R) -> Option<R> {
        match self.value_exp(a) {
            None => Some(template.zero_like()),
            Some(k) => template.root_of_unity_like(self.order_base, k),
        }
    }

    /// chi(a) as an exact cyclotomic number.
    pub fn value_cyc(&self, a: u64) -> CycElement<BigRational> {
        let one = BigRational::one();
        match self.value_exp(a) {
            None => CycElement::from_base(one.zero_like()),
            Some(0) => CycElement::from_base(one),
            Some(k) => CycElement::zeta_power(self.order_base, k as i64, &one),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&k| k == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.modulus > 2 && self.value_exp(self.modulus - 1) != Some(0)
    }

    pub fn is_even(&self) -> bool {
        !self.is_odd()
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.gens
            .iter()
            .zip(&self.images)
            .fold(1, |acc, (g, &k)| lcm(acc, g.order / gcd(k, g.order)))
    }

    pub fn conductor(&self) -> u64 {
        for d in divisors(self.modulus) {
            let ok = (0..self.modulus / d)
                .map(|t| 1 + d * t)
                .filter(|&a| gcd(a, self.modulus) == 1)
                .all(|a| self.value_exp(a) == Some(0));
            if ok {
                return d;
            }
        }
        self.modulus
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> DirichletChar {
        let f = self.conductor();
        if f == self.modulus {
            return self.clone();
        }
        DirichletChar::from_fn(f, |a| {
            let lift = (0..self.modulus)
                .map(|t| a + f * t)
                .find(|&b| gcd(b, self.modulus) == 1)
                .expect("unit lift exists");
            (self.order_base, self.value_exp(lift).expect("unit"))
        })
        .expect("primitive character")
    }

    /// The same character viewed modulo a multiple of the modulus.
    pub fn lift(&self, modulus: u64) -> Result<DirichletChar> {
        if modulus % self.modulus != 0 {
            return Err(Error::InvalidInput(format!("{} does not divide {modulus}", self.modulus)));
        }
        DirichletChar::from_fn(modulus, |a| (self.order_base, self.value_exp(a).unwrap_or(0)))
    }

    pub fn conj(&self) -> DirichletChar {
        let images = self.gens.iter().zip(&self.images).map(|(g, &k)| (g.order - k) % g.order).collect();
        DirichletChar::new(self.modulus, images).expect("conjugate")
    }

    /// Pointwise product, as a character modulo the lcm of the moduli.
    pub fn mul(&self, other: &DirichletChar) -> DirichletChar {
        let m = lcm(self.modulus, other.modulus);
        let base = lcm(self.order_base, other.order_base);
        DirichletChar::from_fn(m, |a| {
            let x = self.value_exp(a).unwrap_or(0) * (base / self.order_base);
            let y = other.value_exp(a).unwrap_or(0) * (base / other.order_base);
            (base, (x + y) % base)
        })
        .expect("product character")
    }

    pub fn pow(&self, k: u64) -> DirichletChar {
        let images = self.gens.iter().zip(&self.images).map(|(g, &i)| i * k % g.order).collect();
        DirichletChar::new(self.modulus, images).expect("power")
    }
}
