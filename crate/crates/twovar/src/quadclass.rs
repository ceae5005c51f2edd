//! Imaginary quadratic orders through positive definite binary quadratic forms.

use crate::arith::{factor, gcd, isqrt, kronecker, CycElement, DirichletChar};
use crate::error::{Error, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// D is a fundamental discriminant (negative or positive, D != 1).
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |n: i64| factor(n.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// The order Z + cO_k in k = Q(sqrt(D)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImagQuadOrder {
    fundamental: i64,
    conductor: u64,
}

impl ImagQuadOrder {
    pub fn new(fundamental: i64, conductor: u64) -> Result<Self> {
        if fundamental >= 0 {
            return Err(Error::InvalidInput(format!("discriminant {fundamental} is not negative")));
        }
        if !is_fundamental(fundamental) {
            return Err(Error::NonFundamental(fundamental));
        }
        if conductor == 0 {
            return Err(Error::InvalidInput("conductor must be positive".into()));
        }
        Ok(ImagQuadOrder { fundamental, conductor })
    }

    pub fn fundamental_discriminant(&self) -> i64 {
        self.fundamental
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// c^2 D.
    pub fn discriminant(&self) -> i64 {
        (self.conductor * self.conductor) as i64 * self.fundamental
    }

    pub fn unit_count(&self) -> u64 {
        unit_count(self)
    }

    /// The quadratic character of k as a Dirichlet character mod |D|.
    pub fn quadratic_character(&self) -> DirichletChar {
        DirichletChar::kronecker(self.fundamental).expect("fundamental discriminants give primitive characters")
    }
}

/// Number of roots of unity in the order.
pub fn unit_count(order: &ImagQuadOrder) -> u64 {
    match order.discriminant() {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// a x^2 + b xy + c y^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a.unsigned_abs(), self.b.unsigned_abs()), self.c.unsigned_abs()) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// The reduced form in the proper equivalence class (positive definite input).
    pub fn reduce(&self) -> QuadForm {
        assert!(self.a > 0 && self.discriminant() < 0, "reduce needs a positive definite form");
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        let normalize = |a: i128, b: i128, c: i128| {
            let r = (a - b).div_euclid(2 * a);
            (a, b + 2 * a * r, a * r * r + b * r + c)
        };
        (a, b, c) = normalize(a, b, c);
        loop {
            if a > c {
                (a, b, c) = normalize(c, -b, a);
            } else if a == c && b < 0 {
                b = -b;
            } else {
                break;
            }
        }
        QuadForm { a: a as i64, b: b as i64, c: c as i64 }
    }

    /// Gaussian composition of primitive forms of equal discriminant.
    pub fn compose(&self, other: &QuadForm) -> QuadForm {
        let disc = self.discriminant();
        assert_eq!(disc, other.discriminant(), "composition needs equal discriminants");
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1, _c1) = (f1.a as i128, f1.b as i128, f1.c as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let (d, u, _v) = ext_gcd(a2, a1);
            (u, d)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let (d1, u, v) = ext_gcd(s, d);
            (u, -v, d1)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let num = b3 * b3 - disc as i128;
        debug_assert_eq!(num % (4 * a3), 0);
        let c3 = num / (4 * a3);
        QuadForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce()
    }

    /// The opposite form, representing the inverse class.
    pub fn opposite(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// All representations (x, y) of n; the search box is |y| <= sqrt(4an/|disc|).
    pub fn representations(&self, n: u64) -> u64 {
        let disc = self.discriminant() as i128;
        let (a, b) = (self.a as i128, self.b as i128);
        let n = n as i128;
        let ymax = isqrt(((4 * a * n) / -disc) as u64) as i128 + 1;
        let mut count = 0;
        for y in -ymax..=ymax {
            // a x^2 + (b y) x + (c y^2 - n) = 0 has discriminant disc y^2 + 4 a n.
            let delta = disc * y * y + 4 * a * n;
            if delta < 0 {
                continue;
            }
            let s = isqrt(delta as u64) as i128;
            if s * s != delta {
                continue;
            }
            for root in if s == 0 { vec![-b * y] } else { vec![-b * y + s, -b * y - s] } {
                if root % (2 * a) == 0 {
                    count += 1;
                }
            }
        }
        count
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // Returns (g, u, v) with u a + v b = g >= 0.
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Pic of an imaginary quadratic order: reduced primitive forms with their
/// composition table. Index 0 is the principal class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    order: ImagQuadOrder,
    forms: Vec<QuadForm>,
    table: Vec<Vec<usize>>,
}

/// Reduced primitive forms of discriminant disc < 0, sorted principal first.
pub fn reduced_forms(disc: i64) -> Vec<QuadForm> {
    let amax = isqrt((-disc / 3) as u64) as i64;
    let mut out = Vec::new();
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), -f.b));
    out
}

impl ClassGroup {
    pub fn new(order: ImagQuadOrder) -> Self {
        let forms = reduced_forms(order.discriminant());
        let index = |f: &QuadForm| forms.iter().position(|g| g == f).expect("composition stays in the form list");
        let table = forms.iter().map(|f| forms.iter().map(|g| index(&f.compose(g))).collect()).collect();
        ClassGroup { order, forms, table }
    }

    /// Rebuild from stored parts, checking them against a fresh computation.
    pub fn from_parts(order: ImagQuadOrder, forms: Vec<QuadForm>, table: Vec<Vec<usize>>) -> Result<Self> {
        let g = ClassGroup { order, forms, table };
        if g != ClassGroup::new(order) {
            return Err(Error::InvalidInput(format!(
                "stored class group for D = {}, c = {} is inconsistent",
                order.fundamental, order.conductor
            )));
        }
        Ok(g)
    }

    pub fn order(&self) -> &ImagQuadOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &QuadForm {
        &self.forms[i]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index_of(&self.forms[i].opposite()).expect("opposite form is reduced and primitive")
    }

    /// Class index of any primitive form of the right discriminant.
    pub fn index_of(&self, f: &QuadForm) -> Option<usize> {
        if f.discriminant() != self.order.discriminant() {
            return None;
        }
        let r = f.reduce();
        self.forms.iter().position(|g| *g == r)
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.table[cur][i];
            k += 1;
        }
        k
    }

    /// Class of a prime ideal of norm q (q split or ramified, prime to the conductor).
    pub fn prime_class(&self, q: u64) -> Option<usize> {
        let disc = self.order.discriminant();
        let q = q as i64;
        (0..2 * q).find_map(|b| {
            let num = b * b - disc;
            if num % (4 * q) == 0 {
                self.index_of(&QuadForm::new(q, b, num / (4 * q)))
            } else {
                None
            }
        })
    }
}

pub fn class_group(fundamental: i64, conductor: u64) -> Result<ClassGroup> {
    Ok(ClassGroup::new(ImagQuadOrder::new(fundamental, conductor)?))
}

/// r_A(n): representations of n by the form of class A divided by the unit count.
pub fn rep_count(group: &ClassGroup, class: usize, n: u64) -> u64 {
    let raw = group.form(class).representations(n);
    let w = group.order().unit_count();
    debug_assert_eq!(raw % w, 0);
    raw / w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSplitting {
    pub prime: u64,
    pub exponent: u32,
    pub kind: Splitting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFactorization {
    pub n_plus: u64,
    pub n_minus: u64,
    pub primes: Vec<PrimeSplitting>,
}

/// N = N+ N- with N+ supported on split primes and N- on inert ones.
pub fn splitting_and_factorization(level: u64, disc: i64) -> Result<LevelFactorization> {
    if gcd(level, disc.unsigned_abs()) != 1 {
        return Err(Error::RamifiedLevel { level, disc });
    }
    let mut out = LevelFactorization { n_plus: 1, n_minus: 1, primes: Vec::new() };
    for (q, e) in factor(level) {
        let kind = if kronecker(disc, q as i64) == 1 { Splitting::Split } else { Splitting::Inert };
        let qe = q.pow(e);
        match kind {
            Splitting::Split => out.n_plus *= qe,
            Splitting::Inert => out.n_minus *= qe,
        }
        out.primes.push(PrimeSplitting { prime: q, exponent: e, kind });
    }
    Ok(out)
}

/// A character of Pic(O_c): class i maps to zeta_E^{exps[i]}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingClassChar {
    order_base: u64,
    exps: Vec<u64>,
}

impl RingClassChar {
    pub fn new(group: &ClassGroup, order_base: u64, exps: Vec<u64>) -> Result<Self> {
        if exps.len() != group.len() || order_base == 0 {
            return Err(Error::InvalidInput(format!(
                "ring class character needs {} exponents and a positive order",
                group.len()
            )));
        }
        let exps: Vec<u64> = exps.into_iter().map(|e| e % order_base).collect();
        for i in 0..group.len() {
            for j in 0..group.len() {
                if exps[group.compose(i, j)] != (exps[i] + exps[j]) % order_base {
                    return Err(Error::InvalidInput(format!("values are not multiplicative at classes {i}, {j}")));
                }
            }
        }
        Ok(RingClassChar { order_base, exps })
    }

    pub fn trivial(group: &ClassGroup) -> Self {
        RingClassChar { order_base: 1, exps: vec![0; group.len()] }
    }

    /// The characters of a cyclic class group, indexed by k: generator -> zeta_h^k.
    pub fn cyclic(group: &ClassGroup) -> Result<Vec<Self>> {
        let h = group.len();
        let gen = (0..h)
            .find(|&i| group.element_order(i) == h)
            .ok_or_else(|| Error::Unsupported(format!("class group of order {h} is not cyclic")))?;
        let mut log = vec![0u64; h];
        let mut cur = 0;
        for k in 0..h {
            log[cur] = k as u64;
            cur = group.compose(cur, gen);
        }
        (0..h as u64).map(|k| RingClassChar::new(group, h as u64, log.iter().map(|l| l * k).collect())).collect()
    }

    pub fn order_base(&self) -> u64 {
        self.order_base
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn value_cyc(&self, class: usize) -> CycElement<BigRational> {
        CycElement::zeta_power(self.order_base, self.exps[class] as i64, &num_traits::One::one())
    }

    pub fn conj(&self) -> Self {
        RingClassChar {
            order_base: self.order_base,
            exps: self.exps.iter().map(|&e| (self.order_base - e) % self.order_base).collect(),
        }
    }
}
