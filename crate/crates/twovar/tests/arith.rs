use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use twovar::arith::cyclo::cyclotomic_poly;
use twovar::arith::lvalues::bernoulli_b1;
use twovar::arith::{
    dirichlet_l_at_zero, euler_phi, gauss_sum, kronecker, CycElement, DirichletChar, PadicApprox,
};
use twovar::ring::Ring;
use twovar::Error;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// Legendre symbol by brute-force search for square roots.
fn legendre_brute(a: i64, p: i64) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    if (1..p).any(|x| x * x % p == a) {
        1
    } else {
        -1
    }
}

#[test]
fn kronecker_examples() {
    assert_eq!(kronecker(-31, 2), 1);
    assert_eq!(kronecker(-31, 53), -1);
    for a in -20..20 {
        assert_eq!(kronecker(a, 1), 1);
    }
    assert_eq!(legendre_brute(-31, 53), -1);
}

#[test]
fn kronecker_matches_brute_force_at_odd_primes_and_two() {
    for p in [3i64, 5, 7, 11, 13, 53, 97] {
        for a in -150..150 {
            assert_eq!(kronecker(a, p), legendre_brute(a, p), "({a} | {p})");
        }
    }
    for a in -100i64..100 {
        let want = match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
        assert_eq!(kronecker(a, 2), want);
    }
    assert_eq!(kronecker(-1, -1), -1);
    assert_eq!(kronecker(5, -1), 1);
}

proptest! {
    #[test]
    fn kronecker_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, n in 1i64..10_000) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }

    #[test]
    fn kronecker_multiplicative_in_bottom(a in -10_000i64..10_000, m in 1i64..10_000, n in 1i64..10_000) {
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }

    #[test]
    fn padic_ring_laws(a in any::<i64>(), b in any::<i64>(), c in any::<i64>(), m in 1u32..12) {
        let p = 5;
        let (x, y, z) = (PadicApprox::new(p, m, a), PadicApprox::new(p, m, b), PadicApprox::new(p, m, c));
        prop_assert_eq!(x.plus(&y), y.plus(&x));
        prop_assert_eq!(x.times(&y.plus(&z)), x.times(&y).plus(&x.times(&z)));
        prop_assert_eq!(x.times(&y).times(&z), x.times(&y.times(&z)));
        prop_assert_eq!(x.minus(&x), PadicApprox::zero(p, m));
    }

    #[test]
    fn padic_division_by_unit_roundtrips(a in any::<i64>(), b in any::<i64>(), m in 1u32..12) {
        let p = 7;
        let x = PadicApprox::new(p, m, a);
        let y = PadicApprox::new(p, m, b);
        prop_assume!(y.is_unit());
        prop_assert_eq!(x.times(&y).divide(&y).unwrap(), x);
    }
}

#[test]
fn padic_precision_is_min_and_division_costs_valuation() {
    let x = PadicApprox::new(5, 6, 50);
    let y = PadicApprox::new(5, 4, 3);
    assert_eq!(x.plus(&y).precision(), 4);
    let d = x.divide(&PadicApprox::new(5, 6, 25)).unwrap();
    assert_eq!(d.precision(), 4);
    assert_eq!(d, PadicApprox::new(5, 4, 2));
    assert!(matches!(
        PadicApprox::new(5, 2, 1).divide(&PadicApprox::new(5, 2, 5)),
        Err(Error::NotIntegral(_))
    ));
    assert!(matches!(
        PadicApprox::new(5, 2, 0).divide(&PadicApprox::new(5, 2, 25)),
        Err(Error::DivisionByZero)
    ));
    assert!(matches!(
        PadicApprox::new(5, 2, 25 * 3).divide(&PadicApprox::new(5, 3, 25)),
        Err(Error::PrecisionExhausted(_)) | Err(Error::DivisionByZero)
    ));
    let r = PadicApprox::from_rational(&q(1, 2), 5, 3).unwrap();
    assert_eq!(r.times(&PadicApprox::new(5, 3, 2)), PadicApprox::one(5, 3));
}

#[test]
fn cyclotomic_polynomials() {
    assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
    assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
    assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
    assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    assert!(cyclotomic_poly(105).contains(&-2));
    for n in 1..60u64 {
        assert_eq!(cyclotomic_poly(n).len() as u64 - 1, euler_phi(n));
    }
}

#[test]
fn cyclotomic_arithmetic() {
    let one = BigRational::one();
    for n in [3u64, 4, 5, 8, 9, 12, 15, 25] {
        let z = CycElement::zeta_power(n, 1, &one);
        assert_eq!(z.pow_u64(n), z.one_like(), "zeta_{n}^{n}");
        // 1 + zeta + ... + zeta^{n-1} = 0 for n > 1.
        let mut s = z.zero_like();
        for k in 0..n {
            s = s.plus(&CycElement::zeta_power(n, k as i64, &one));
        }
        assert!(s.is_zero_elem());
        assert_eq!(z.times(&z.conj()), z.one_like());
        // Lifting preserves arithmetic.
        assert_eq!(z.lift(3 * n).times(&z), z.times(&z));
    }
    // Norm of 1 - zeta_p is p; of 1 - zeta_{p^2} also p.
    for (n, want) in [(5u64, 5i64), (7, 7), (25, 5), (9, 3)] {
        let x = CycElement::from_base(one.clone()).minus(&CycElement::zeta_power(n, 1, &one));
        assert_eq!(x.norm(), BigRational::from_integer(want.into()));
    }
    // zeta_4 and zeta_8^2 agree.
    assert_eq!(CycElement::zeta_power(4, 1, &one), CycElement::zeta_power(8, 2, &one));
}

#[test]
fn dirichlet_generators_and_counts() {
    let chars = DirichletChar::all(31);
    assert_eq!(chars[0].generators()[0].residue, 3);
    for m in [1u64, 2, 3, 4, 8, 12, 15, 16, 31, 45, 100] {
        let all = DirichletChar::all(m);
        assert_eq!(all.len() as u64, euler_phi(m));
        for chi in &all {
            // Orthogonality over residues.
            let mut s = CycElement::from_base(BigRational::zero());
            for a in 0..m {
                s = s.plus(&chi.value_cyc(a));
            }
            if chi.is_trivial() {
                assert_eq!(s.as_base().cloned(), Some(BigRational::from_integer(euler_phi(m).into())));
            } else {
                assert!(s.is_zero_elem());
            }
            for a in 0..m {
                for b in 0..m {
                    assert_eq!(chi.value_cyc(a * b), chi.value_cyc(a).times(&chi.value_cyc(b)));
                }
            }
        }
    }
}

#[test]
fn dirichlet_conductor_parity_kronecker() {
    let omega = DirichletChar::kronecker(-31).unwrap();
    assert!(omega.is_odd() && omega.is_primitive() && omega.order() == 2);
    assert_eq!(omega.value_exp(2), Some(0));
    let four = DirichletChar::kronecker(-4).unwrap();
    assert_eq!(four.value_exp(3), Some(1));
    let lifted = four.lift(12).unwrap();
    assert_eq!(lifted.conductor(), 4);
    assert_eq!(lifted.primitive(), four);
    let prod = omega.mul(&omega);
    assert!(prod.is_trivial());
    assert_eq!(prod.conductor(), 1);
    assert!(DirichletChar::trivial(1).value_exp(0) == Some(0));
}

#[test]
fn l_value_examples() {
    let chi4 = DirichletChar::kronecker(-4).unwrap();
    assert_eq!(dirichlet_l_at_zero(&chi4).unwrap().as_base().cloned(), Some(q(1, 2)));
    let chi3 = DirichletChar::kronecker(-3).unwrap();
    assert_eq!(dirichlet_l_at_zero(&chi3).unwrap().as_base().cloned(), Some(q(1, 3)));
    // L(omega, 0) = 2h/w = 3 for Q(sqrt(-31)).
    let omega = DirichletChar::kronecker(-31).unwrap();
    assert_eq!(dirichlet_l_at_zero(&omega).unwrap().as_base().cloned(), Some(q(3, 1)));
    let even = DirichletChar::kronecker(5).unwrap();
    assert!(dirichlet_l_at_zero(&even).unwrap().is_zero_elem());
    assert_eq!(dirichlet_l_at_zero(&DirichletChar::trivial(7)), Err(Error::PoleUnsupported));
    assert_eq!(dirichlet_l_at_zero(&DirichletChar::trivial(1)), Err(Error::PoleUnsupported));
}

/// Independent oracle: for odd primitive chi of conductor f,
/// (conj(chi)(2) - 2) B_{1,chi} = sum_{0 < a < f/2} chi(a).
fn half_sum_oracle(chi: &DirichletChar) -> (CycElement<BigRational>, CycElement<BigRational>) {
    let f = chi.modulus();
    let mut s = CycElement::from_base(BigRational::zero());
    for a in 1..f {
        if 2 * a < f {
            s = s.plus(&chi.value_cyc(a));
        }
    }
    let two = CycElement::from_base(BigRational::from_integer(2.into()));
    let lhs = chi.conj().value_cyc(2).minus(&two).times(&bernoulli_b1(chi));
    (lhs, s)
}

#[test]
fn l_at_zero_matches_half_sum_oracle_up_to_conductor_100() {
    let mut checked = 0;
    for f in 3..=100u64 {
        for chi in DirichletChar::all(f) {
            if !chi.is_odd() || !chi.is_primitive() {
                continue;
            }
            let (lhs, rhs) = half_sum_oracle(&chi);
            assert_eq!(lhs, rhs, "conductor {f}, images {:?}", chi.images());
            // The library value is -B_1.
            let l = dirichlet_l_at_zero(&chi).unwrap();
            assert_eq!(l.plus(&bernoulli_b1(&chi)), l.zero_like());
            checked += 1;
        }
    }
    assert!(checked > 900, "only {checked} characters");
}

#[test]
fn gauss_sum_examples_and_identity() {
    let chi4 = DirichletChar::kronecker(-4).unwrap();
    let two = BigRational::from_integer(2.into());
    assert_eq!(gauss_sum(&chi4).unwrap(), CycElement::zeta_power(4, 1, &two.one_like()).scale(&two));
    assert_eq!(gauss_sum(&DirichletChar::trivial(1)).unwrap().as_base().cloned(), Some(BigRational::one()));
    assert!(matches!(gauss_sum(&chi4.lift(8).unwrap()), Err(Error::NotPrimitive(_))));
    for f in 1..=36u64 {
        for chi in DirichletChar::all(f) {
            if !chi.is_primitive() {
                continue;
            }
            let t = gauss_sum(&chi).unwrap();
            let tb = gauss_sum(&chi.conj()).unwrap();
            let sign = if chi.is_odd() { -1 } else { 1 };
            let want = BigRational::from_integer((sign * f as i64).into());
            assert_eq!(t.times(&tb).as_base().cloned(), Some(want), "f = {f}");
        }
    }
}
