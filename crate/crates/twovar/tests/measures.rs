use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use twovar::arith::{divisors, gcd, kronecker, lcm, CycElement, DirichletChar};
use twovar::measures::{
    convolution, distribution_check, eisenstein_full, eisenstein_partial, eisenstein_regularized, theta_full,
    theta_partial, ConvolutionParams, Cyc, FiniteLevelFamily,
};
use twovar::quadclass::{class_group, ClassGroup, QuadForm};
use twovar::ring::Ring;
use twovar::Error;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn base(c: &Cyc) -> BigRational {
    c.as_base().cloned().expect("rational coefficient")
}

/// Lattice points with f(x, y) = n, by scanning a box.
fn lattice_count(f: &QuadForm, n: i64) -> i64 {
    let disc = -f.discriminant();
    let r = (((4 * f.a.max(f.c) * n) as f64) / disc as f64).sqrt() as i64 + 2;
    let mut cnt = 0;
    for x in -r..=r {
        for y in -r..=r {
            if f.eval(x, y) == n {
                cnt += 1;
            }
        }
    }
    cnt
}

fn g31() -> ClassGroup {
    class_group(-31, 1).unwrap()
}

#[test]
fn theta_examples() {
    let g = g31();
    let one = DirichletChar::trivial(1);
    let th = theta_full(&g, 0, &one, 3);
    let want = [rat(1, 2), rat(1, 1), rat(0, 1), rat(0, 1)];
    for n in 0..=3 {
        assert_eq!(base(th.coeff(n)), want[n]);
        if n > 0 {
            assert_eq!(base(th.coeff(n)), rat(lattice_count(g.form(0), n as i64), 2));
        }
    }
    assert_eq!(th.weight, 1);
    assert_eq!(th.level, 31);
    // Characters vanish off the units.
    let chi5 = DirichletChar::all(5).into_iter().find(|c| c.order() == 4).unwrap();
    let tw = theta_full(&g, 1, &chi5, 60);
    for n in 0..=60usize {
        if n % 5 == 0 {
            assert!(tw.coeff(n).is_zero_elem());
        }
    }
    assert_eq!(tw.level, 31 * 25);
    // a = 1, m = 1: only norms = 1 mod 5 survive.
    let part = theta_partial(&g, 0, &one, 1, 5, 1, 10);
    assert_eq!(base(part.coeff(1)), rat(1, 1));
    assert_eq!(base(part.coeff(2)), rat(0, 1));
    assert!(part.coeff(0).is_zero_elem());
}

#[test]
fn theta_coefficients_match_lattice_oracle() {
    for (d, c) in [(-31i64, 1u64), (-23, 1), (-4, 1), (-3, 1), (-31, 2)] {
        let g = class_group(d, c).unwrap();
        let u = g.order().unit_count() as i64;
        let one = DirichletChar::trivial(1);
        let mut sum: Vec<BigRational> = vec![BigRational::zero(); 101];
        for i in 0..g.len() {
            let th = theta_full(&g, i, &one, 100);
            assert_eq!(base(th.coeff(0)), rat(1, u));
            for n in 1..=100usize {
                let v = base(th.coeff(n));
                assert_eq!(v, rat(lattice_count(g.form(i), n as i64), u));
                // Integrality away from the constant term.
                assert!(v.is_integer());
                sum[n] += v;
            }
        }
        for n in 1..=100u64 {
            if gcd(n, c) != 1 {
                continue;
            }
            let z: i64 = divisors(n).iter().map(|&e| kronecker(d, e as i64) as i64).sum();
            assert_eq!(sum[n as usize], rat(z, 1), "D = {d}, c = {c}, n = {n}");
        }
    }
}

#[test]
fn full_theta_is_hecke_eigen_at_two() {
    let g = g31();
    let one = DirichletChar::trivial(1);
    let mut th = theta_full(&g, 0, &one, 200);
    for i in 1..g.len() {
        th = th.add(&theta_full(&g, i, &one, 200)).unwrap();
    }
    let t2 = th.hecke(2).unwrap();
    let omega2 = kronecker(-31, 2) as i64;
    for m in 1..=t2.precision() {
        let brute = base(th.coeff(2 * m)) + if m % 2 == 0 { base(th.coeff(m / 2)) * rat(omega2, 1) } else { rat(0, 1) };
        assert_eq!(base(t2.coeff(m)), brute);
        assert_eq!(base(t2.coeff(m)), base(th.coeff(m)) * rat(2, 1));
    }
}

#[test]
fn theta_partials_partition_and_refine() {
    let g = g31();
    let chi3 = DirichletChar::kronecker(-3).unwrap();
    for chi in [DirichletChar::trivial(1), chi3] {
        for class in 0..g.len() {
            let full = theta_full(&g, class, &chi, 80);
            let mut acc = theta_partial(&g, class, &chi, 0, 5, 1, 80);
            for a in 1..5 {
                acc = acc.add(&theta_partial(&g, class, &chi, a, 5, 1, 80)).unwrap();
            }
            for n in 1..=80 {
                assert_eq!(acc.coeff(n), full.coeff(n));
            }
            let coarse = FiniteLevelFamily::theta(&g, class, &chi, 5, 1, 80);
            let fine = FiniteLevelFamily::theta(&g, class, &chi, 5, 2, 80);
            let rep = distribution_check(&coarse, &fine).unwrap();
            assert!(rep.holds && rep.checked_coefficients == 80);
        }
    }
}

#[test]
fn eisenstein_examples() {
    let chi4 = DirichletChar::kronecker(-4).unwrap();
    let e = eisenstein_full(&chi4, 40).unwrap();
    assert_eq!(base(e.coeff(0)), rat(1, 4));
    assert_eq!(base(e.coeff(1)), rat(1, 1));
    assert_eq!(base(e.coeff(2)), rat(1, 1));
    assert_eq!(base(e.coeff(3)), rat(0, 1));
    for q in [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        assert_eq!(base(e.coeff(q as usize)), rat(1 + kronecker(-4, q) as i64, 1));
    }
    assert!(matches!(eisenstein_full(&DirichletChar::kronecker(5).unwrap(), 5), Err(Error::Parity(_))));
    assert!(matches!(eisenstein_full(&DirichletChar::trivial(7), 5), Err(Error::Parity(_))));
    // Partials over the units mod M give the divisor sums over d prime to M.
    let xi = DirichletChar::all(7).into_iter().find(|c| c.is_odd() && c.order() == 6).unwrap();
    for modulus in [7u64, 35, 14] {
        let mut acc: Option<twovar::qexp::QExpansion<Cyc>> = None;
        for a in (0..modulus).filter(|a| gcd(*a, modulus) == 1) {
            let p = eisenstein_partial(&xi, a, modulus, 60).unwrap();
            acc = Some(match acc {
                None => p,
                Some(s) => s.add(&p).unwrap(),
            });
        }
        let acc = acc.unwrap();
        for n in 1..=60u64 {
            let mut want = CycElement::from_base(BigRational::zero());
            for d in divisors(n).into_iter().filter(|d| gcd(*d, modulus) == 1) {
                want = want.plus(&xi.value_cyc(d));
            }
            assert_eq!(*acc.coeff(n as usize), want);
        }
    }
}

#[test]
fn regularized_eisenstein() {
    let omega = DirichletChar::kronecker(-31).unwrap();
    let l_half = rat(3, 2);
    for c in [2u64, 3] {
        for a in [1u64, 7, 100] {
            let e = eisenstein_regularized(&omega, a, 155, 30, c).unwrap();
            assert_eq!(base(e.coeff(0)), l_half.clone() * rat(1 - c as i64, 1));
        }
    }
    assert!(eisenstein_regularized(&omega, 1, 155, 30, 5).is_err());
    assert!(eisenstein_regularized(&omega, 1, 155, 30, 1).is_err());
    // C = 1 mod M with xi(C) = 1 collapses to (1 - C) E.
    let chi4 = DirichletChar::kronecker(-4).unwrap();
    for a in [1u64, 3] {
        let reg = eisenstein_regularized(&chi4, a, 4, 40, 5).unwrap();
        let plain = eisenstein_partial(&chi4, a, 4, 40).unwrap();
        for n in 0..=40 {
            assert_eq!(base(reg.coeff(n)), base(plain.coeff(n)) * rat(-4, 1));
        }
    }
}

#[test]
fn regularized_eisenstein_families_refine() {
    let omega = DirichletChar::kronecker(-31).unwrap();
    for c in [2u64, 3] {
        let coarse = FiniteLevelFamily::eisenstein(&omega, 31, 5, 1, 50, c).unwrap();
        let fine = FiniteLevelFamily::eisenstein(&omega, 31, 5, 2, 50, c).unwrap();
        let rep = distribution_check(&coarse, &fine).unwrap();
        assert!(rep.holds, "{:?}", &rep.mismatches[..rep.mismatches.len().min(5)]);
        assert_eq!(rep.checked_coefficients, 50);
    }
}

/// The defining alpha-sum, term by term, over all alpha in (Z/L)^x with
/// L = lcm(N * 31, 5^m); chi trivial so xi = omega is real.
fn convolution_oracle(g: &ClassGroup, class: usize, a: u64, m: u32, level: u64, c: u64, q: usize) -> Vec<BigRational> {
    let pm = 5u64.pow(m);
    let big = lcm(level * 31, pm);
    let omega = |d: u64| kronecker(-31, d as i64) as i64;
    let mut out = vec![BigRational::zero(); q + 1];
    // theta_b(k), memoized per residue.
    let theta: Vec<Vec<i64>> = (0..pm)
        .map(|b| {
            (0..=q as u64 / level)
                .map(|k| if k >= 1 && k % pm == b { lattice_count(g.form(class), k as i64) / 2 } else { 0 })
                .collect()
        })
        .collect();
    for alpha in (1..big).filter(|x| gcd(*x, big) == 1) {
        let b = (alpha * alpha % pm) * a % pm;
        let cinv = (1..big).find(|y| y * c % big == 1).unwrap();
        let mut e = vec![BigRational::zero(); q + 1];
        e[0] = rat(3 * (1 - c as i64), 2);
        for (n, slot) in e.iter_mut().enumerate().skip(1) {
            let mut s = 0i64;
            for d in divisors(n as u64) {
                if d % big == alpha {
                    s += omega(d);
                }
                if d % big == cinv * alpha % big {
                    s -= c as i64 * omega(d);
                }
            }
            *slot = rat(s, 1);
        }
        for k in 1..theta[b as usize].len() {
            let t = theta[b as usize][k];
            if t == 0 {
                continue;
            }
            for j in 0..=q - level as usize * k {
                out[level as usize * k + j] += e[j].clone() * rat(t, 1);
            }
        }
    }
    out
}

#[test]
fn convolution_matches_alpha_sum_oracle() {
    let g = g31();
    let one = DirichletChar::trivial(1);
    for (level, q, c) in [(53u64, 120usize, 2u64), (2, 40, 3), (53, 10, 7)] {
        let params = ConvolutionParams { group: &g, chi: &one, p: 5, m: 1, level, regulator: c, precision: q };
        for class in 0..g.len() {
            for a in [1u64, 2, 3, 4, 0] {
                let phi = convolution(&params, class, a).unwrap();
                assert_eq!(phi.weight, 2);
                assert_eq!(phi.level, lcm(level * 31, 5));
                let want = convolution_oracle(&g, class, a, 1, level, c, q);
                for n in 0..=q {
                    assert_eq!(base(phi.coeff(n)), want[n], "N = {level}, class {class}, a = {a}, n = {n}");
                }
            }
        }
    }
}

#[test]
fn convolution_is_linear_in_theta() {
    // Doubling the theta part doubles the output: compare against the oracle with theta scaled.
    let g = g31();
    let one = DirichletChar::trivial(1);
    let params = ConvolutionParams { group: &g, chi: &one, p: 5, m: 1, level: 2, regulator: 3, precision: 30 };
    let phi0 = convolution(&params, 0, 1).unwrap();
    let phi1 = convolution(&params, 1, 1).unwrap();
    let sum = phi0.add(&phi1).unwrap();
    let o0 = convolution_oracle(&g, 0, 1, 1, 2, 3, 30);
    let o1 = convolution_oracle(&g, 1, 1, 1, 2, 3, 30);
    for n in 0..=30 {
        assert_eq!(base(sum.coeff(n)), o0[n].clone() + o1[n].clone());
        assert_eq!(base(phi0.scale(&CycElement::from_base(rat(2, 1))).coeff(n)), o0[n].clone() * rat(2, 1));
    }
}

#[test]
fn convolution_refinement_defect_is_the_eisenstein_constant() {
    // The fine-level sum agrees with the coarse value except at n = N k, where
    // each lift contributes the printed constant (1 - C) L(xi, 0)/2 again.
    let g = g31();
    let one = DirichletChar::trivial(1);
    let chi3 = DirichletChar::kronecker(-3).unwrap();
    for (chi, level, q) in [(&one, 2u64, 40usize), (&chi3, 2, 24)] {
        let coarse_p = ConvolutionParams { group: &g, chi, p: 5, m: 1, level, regulator: 7, precision: q };
        let fine_p = ConvolutionParams { m: 2, ..coarse_p.clone() };
        for class in 0..g.len() {
            let coarse = FiniteLevelFamily::convolution(&coarse_p, class).unwrap();
            let fine = FiniteLevelFamily::convolution(&fine_p, class).unwrap();
            let rep = distribution_check(&coarse, &fine).unwrap();
            for &(_, n) in &rep.mismatches {
                assert_eq!(n as u64 % level, 0);
            }
            let xi = coarse_p.eisenstein_character();
            let k_const = twovar::arith::dirichlet_l_at_zero(&xi).unwrap().scale(&rat(1 - 7, 2));
            let big = coarse_p.alpha_modulus();
            let fibre = (twovar::arith::euler_phi(big) / 4) as i64;
            for a in 0..5u64 {
                for n in (1..=q).filter(|n| *n as u64 % level == 0) {
                    let k = n as u64 / level;
                    let mut fine_sum = fine.values[&a].coeff(n).zero_like();
                    for j in 0..5 {
                        fine_sum = fine_sum.plus(fine.values[&(a + 5 * j)].coeff(n));
                    }
                    let diff = fine_sum.minus(coarse.values[&a].coeff(n));
                    // sum over unit beta mod 5 of theta_{beta^2 a}(k) times the fibre size.
                    let mut want = diff.zero_like();
                    for beta in 1..5u64 {
                        let b = beta * beta * a % 5;
                        let th = theta_partial(&g, class, chi, b, 5, 1, k as usize);
                        want = want.plus(&th.coeff(k as usize).scale(&rat(fibre * 4, 1)));
                    }
                    assert_eq!(diff, want.times(&k_const), "class {class}, a = {a}, n = {n}");
                }
            }
        }
    }
}

#[test]
fn convolution_rejects_bad_parameters() {
    let g = g31();
    let one = DirichletChar::trivial(1);
    let ok = ConvolutionParams { group: &g, chi: &one, p: 5, m: 1, level: 53, regulator: 2, precision: 10 };
    assert!(convolution(&ok, 0, 1).is_ok());
    assert!(convolution(&ConvolutionParams { regulator: 5, ..ok.clone() }, 0, 1).is_err());
    assert!(convolution(&ConvolutionParams { regulator: 53, ..ok.clone() }, 0, 1).is_err());
    assert!(matches!(convolution(&ConvolutionParams { level: 62, ..ok.clone() }, 0, 1), Err(Error::RamifiedLevel { .. })));
    assert!(convolution(&ConvolutionParams { p: 31, ..ok.clone() }, 0, 1).is_err());
    assert!(BigRational::one().is_integer());
}
