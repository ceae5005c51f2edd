use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use twovar::arith::{divisors, gcd, kronecker};
use twovar::cache::ClassGroupCache;
use twovar::quadclass::{
    class_group, is_fundamental, rep_count, splitting_and_factorization, unit_count, ClassGroup, ImagQuadOrder,
    QuadForm, RingClassChar, Splitting,
};
use twovar::ring::Ring;
use twovar::Error;

/// Class number oracle: h(D) = (w/2) L(0, chi_D) with L(0, chi_D) = -(1/|D|) sum a chi_D(a),
/// and h(c^2 D) = h(D) c / [O_k^x : O^x] prod_{q | c} (1 - chi_D(q)/q).
fn class_number_oracle(d: i64, c: u64) -> u64 {
    let n = d.unsigned_abs() as i64;
    let s: i64 = (1..n).map(|a| a * kronecker(d, a) as i64).sum();
    let w: i64 = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let hd = BigRational::new(BigInt::from(-s * w), BigInt::from(2 * n));
    let mut h = hd * BigRational::from_integer(BigInt::from(c));
    let w_order = if c == 1 { w } else { 2 };
    h /= BigRational::from_integer(BigInt::from(w / w_order));
    for (q, _) in twovar::arith::factor(c) {
        let q = q as i64;
        h *= BigRational::new(BigInt::from(q - kronecker(d, q) as i64), BigInt::from(q));
    }
    assert!(h.is_integer());
    h.to_integer().try_into().unwrap()
}

/// Dirichlet composition oracle. The second form is first moved by an SL2(Z)
/// substitution to one whose leading coefficient is prime to f.a; then
/// B = f.b mod 2 f.a, B = g.b mod 2 g.a, B^2 = disc mod 4 f.a g.a is found by search.
fn compose_oracle(f: &QuadForm, g: &QuadForm) -> QuadForm {
    let disc = f.discriminant();
    let g = concordant(g, f.a);
    let a3 = f.a * g.a;
    for b in 0..2 * a3 {
        if (b - f.b).rem_euclid(2 * f.a) == 0
            && (b - g.b).rem_euclid(2 * g.a) == 0
            && (b * b - disc).rem_euclid(4 * a3) == 0
        {
            return QuadForm::new(a3, b, (b * b - disc) / (4 * a3)).reduce();
        }
    }
    panic!("no united form for {f:?} {g:?}");
}

fn concordant(g: &QuadForm, a1: i64) -> QuadForm {
    for p in 0..20i64 {
        for r in 0..20i64 {
            if gcd(p as u64, r as u64) != 1 {
                continue;
            }
            let a = g.eval(p, r);
            if gcd(a as u64, a1 as u64) != 1 {
                continue;
            }
            // Complete (p, r) to a determinant-one matrix [[p, q], [r, s]].
            let (q, s) = (0..40i64)
                .flat_map(|q| (-40..40i64).map(move |s| (q - 20, s)))
                .find(|&(q, s)| p * s - q * r == 1)
                .unwrap();
            let b = 2 * g.a * p * q + g.b * (p * s + q * r) + 2 * g.c * r * s;
            return QuadForm::new(a, b, g.eval(q, s));
        }
    }
    panic!("no concordant representative");
}

fn representation_oracle(f: &QuadForm, n: i64) -> u64 {
    let disc = -f.discriminant();
    let ymax = ((4 * f.a * n) as f64 / disc as f64).sqrt() as i64 + 2;
    let xmax = ((4 * f.c * n) as f64 / disc as f64).sqrt() as i64 + 2;
    let mut cnt = 0;
    for x in -xmax..=xmax {
        for y in -ymax..=ymax {
            if f.eval(x, y) == n {
                cnt += 1;
            }
        }
    }
    cnt
}

fn orders_up_to(bound: i64) -> Vec<ImagQuadOrder> {
    let mut out = Vec::new();
    for d in (-bound..0).rev() {
        if !is_fundamental(d) {
            continue;
        }
        let mut c = 1u64;
        while (c * c) as i64 * -d <= bound {
            out.push(ImagQuadOrder::new(d, c).unwrap());
            c += 1;
        }
    }
    out
}

#[test]
fn minus_31_example() {
    let g = class_group(-31, 1).unwrap();
    assert_eq!(g.forms(), &[QuadForm::new(1, 1, 8), QuadForm::new(2, 1, 4), QuadForm::new(2, -1, 4)]);
    assert_eq!(g.compose(1, 2), 0);
    assert_eq!(compose_oracle(g.form(1), g.form(2)), QuadForm::new(1, 1, 8));
    assert_eq!(class_group(-4, 1).unwrap().forms(), &[QuadForm::new(1, 0, 1)]);
    assert_eq!(rep_count(&g, 0, 1), 1);
    assert_eq!(rep_count(&g, 0, 2), 0);
    assert_eq!(rep_count(&g, 1, 2), 1);
    assert_eq!(rep_count(&g, 2, 2), 1);
    // The norm-2 primes lie in the two non-principal classes.
    assert_ne!(g.prime_class(2), Some(0));
}

#[test]
fn rejects_bad_discriminants() {
    assert_eq!(class_group(-12, 1).unwrap_err(), Error::NonFundamental(-12));
    assert!(matches!(class_group(5, 1), Err(Error::InvalidInput(_))));
    assert!(is_fundamental(-3) && is_fundamental(-4) && is_fundamental(-8) && !is_fundamental(-16));
}

#[test]
fn class_numbers_match_analytic_formula() {
    for o in orders_up_to(2000) {
        let g = ClassGroup::new(o);
        assert_eq!(
            g.len() as u64,
            class_number_oracle(o.fundamental_discriminant(), o.conductor()),
            "D = {}, c = {}",
            o.fundamental_discriminant(),
            o.conductor()
        );
    }
}

#[test]
fn composition_is_an_abelian_group_and_matches_oracle() {
    for o in orders_up_to(500) {
        let g = ClassGroup::new(o);
        let h = g.len();
        for i in 0..h {
            assert_eq!(g.compose(0, i), i);
            assert_eq!(g.compose(i, g.inverse(i)), 0);
            assert_eq!(*g.form(g.inverse(i)), g.form(i).opposite());
            for j in 0..h {
                assert_eq!(g.compose(i, j), g.compose(j, i));
                assert_eq!(*g.form(g.compose(i, j)), compose_oracle(g.form(i), g.form(j)));
                for k in 0..h {
                    assert_eq!(g.compose(g.compose(i, j), k), g.compose(i, g.compose(j, k)));
                }
            }
        }
    }
}

#[test]
fn representation_counts() {
    for o in orders_up_to(300) {
        let g = ClassGroup::new(o);
        let disc = o.fundamental_discriminant();
        for n in 1..=200u64 {
            for i in 0..g.len() {
                let raw = representation_oracle(g.form(i), n as i64);
                assert_eq!(g.form(i).representations(n), raw);
            }
            if gcd(n, o.conductor() * disc.unsigned_abs()) != 1 {
                continue;
            }
            let total: u64 = (0..g.len()).map(|i| rep_count(&g, i, n)).sum();
            let zeta: i64 = divisors(n).iter().map(|&d| kronecker(disc, d as i64) as i64).sum();
            assert_eq!(total as i64, zeta, "D = {disc}, c = {}, n = {n}", o.conductor());
        }
    }
}

#[test]
fn unit_counts() {
    assert_eq!(unit_count(&ImagQuadOrder::new(-3, 1).unwrap()), 6);
    assert_eq!(unit_count(&ImagQuadOrder::new(-4, 1).unwrap()), 4);
    assert_eq!(unit_count(&ImagQuadOrder::new(-31, 1).unwrap()), 2);
    assert_eq!(unit_count(&ImagQuadOrder::new(-3, 2).unwrap()), 2);
}

#[test]
fn level_splitting() {
    let s = splitting_and_factorization(53, -31).unwrap();
    assert_eq!((s.n_plus, s.n_minus), (1, 53));
    assert_eq!(s.primes[0].kind, Splitting::Inert);
    let s = splitting_and_factorization(2, -31).unwrap();
    assert_eq!((s.n_plus, s.n_minus), (2, 1));
    let s = splitting_and_factorization(2 * 2 * 53 * 7, -31).unwrap();
    assert_eq!((s.n_plus, s.n_minus), (28, 53));
    assert!(matches!(splitting_and_factorization(62, -31), Err(Error::RamifiedLevel { .. })));
}

#[test]
fn ring_class_characters() {
    for (d, c) in [(-31i64, 1u64), (-23, 1), (-47, 1), (-4, 5), (-3, 7), (-71, 1)] {
        let g = class_group(d, c).unwrap();
        let chars = RingClassChar::cyclic(&g).unwrap();
        assert_eq!(chars.len(), g.len());
        for rho in &chars {
            for i in 0..g.len() {
                for j in 0..g.len() {
                    assert_eq!(rho.value_cyc(g.compose(i, j)), rho.value_cyc(i).times(&rho.value_cyc(j)));
                }
            }
            assert!(chars.contains(&rho.conj()));
        }
        // Orthogonality: sum over characters is h at the identity, 0 elsewhere.
        for i in 0..g.len() {
            let mut s = chars[0].value_cyc(0).zero_like();
            for rho in &chars {
                s = s.plus(&rho.value_cyc(i));
            }
            let want = if i == 0 { g.len() as i64 } else { 0 };
            assert_eq!(s.as_base().cloned(), Some(BigRational::from_integer(want.into())));
        }
    }
    let g = class_group(-31, 1).unwrap();
    assert!(RingClassChar::new(&g, 3, vec![0, 1, 1]).is_err());
    assert!(RingClassChar::new(&g, 3, vec![0, 1, 2]).is_ok());
    // Z/2 x Z/2 is not cyclic.
    let klein = class_group(-84, 1).unwrap();
    assert_eq!(klein.len(), 4);
    assert!(matches!(RingClassChar::cyclic(&klein), Err(Error::Unsupported(_))));
    assert!(BigRational::zero().is_zero_elem());
}

#[test]
fn cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("twovar-cache-test-{}", std::process::id()));
    let cache = ClassGroupCache::new(&dir);
    let o = ImagQuadOrder::new(-31, 3).unwrap();
    let fresh = cache.load_or_compute(o).unwrap();
    assert!(cache.path_for(&o).exists());
    let loaded = cache.load_or_compute(o).unwrap();
    assert_eq!(fresh, loaded);
    std::fs::write(cache.path_for(&o), "{\"index\":0,\"form\":{\"a\":1,\"b\":1,\"c\":8},\"products\":[0]}\n").unwrap();
    assert!(cache.load_or_compute(o).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}
