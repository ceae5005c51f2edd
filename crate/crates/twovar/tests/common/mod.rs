//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twovar::arith::{gcd, primes_up_to, PadicApprox};
use twovar::io::parse_jsonl;
use twovar::qexp::{p_stabilize, EigenSystem, HeckeValue, PadicEigenSystem, QExpansion};
use twovar::ring::Ring;

pub const EIGEN_53: &str = include_str!("../../data/eigen_53.jsonl");
pub const COMPANIONS_8215: &str = include_str!("../../data/companions_8215.jsonl");

pub fn system(label: &str) -> EigenSystem {
    parse_jsonl::<EigenSystem>(EIGEN_53).unwrap().into_iter().find(|s| s.label == label).unwrap()
}

/// (f, f0, data of f0, beta) for 53a-ord5 stabilized at 5.
pub struct Stabilized {
    pub f: QExpansion<PadicApprox>,
    pub f0: QExpansion<PadicApprox>,
    pub sys0: PadicEigenSystem,
    pub beta: PadicApprox,
}

pub fn stabilized(prec: u32, q: usize) -> Stabilized {
    let sys = PadicEigenSystem::from_exact(&system("53a-ord5"), 5, prec).unwrap();
    let f = sys.q_expansion(q).unwrap();
    let (f0, sys0) = p_stabilize(&f, &sys, 5).unwrap();
    let beta = sys.ap(5).unwrap().minus(sys0.ap(5).unwrap());
    Stabilized { f, f0, sys0, beta }
}

/// A system with pseudo-random a_q for primes up to `bound` and the given
/// overrides.
pub fn synthetic(label: &str, level: u64, seed: u64, bound: u64, fixed: &[(u64, i64)]) -> EigenSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ap_table = primes_up_to(bound)
        .into_iter()
        .map(|q| {
            let v = fixed.iter().find(|(f, _)| *f == q).map(|(_, v)| *v).unwrap_or_else(|| {
                if gcd(q, level) == 1 {
                    rng.gen_range(-20..=20)
                } else {
                    rng.gen_range(-1..=1)
                }
            });
            (q, HeckeValue::Integer(v))
        })
        .collect();
    EigenSystem {
        label: label.into(),
        level,
        weight: 2,
        ap_table,
        cuspidal: true,
        source: Some("synthetic".into()),
    }
}

/// Division oracle: Gauss-Seidel sweeps over the banded system
/// L_n = sum_i h_{n-i} g_i (n >= m), solving each row for h_{n-m} through the
/// unit g_m, on an extended range of h; then r_n for n < m by subtraction.
/// Coefficients are T2-polynomials mod (p^M, T2^{d2+1}) as plain vectors.
pub fn division_oracle(
    p: u64,
    prec: u32,
    d2: usize,
    l: &[Vec<u64>],
    g: &[Vec<u64>],
) -> Option<(Vec<Vec<u64>>, Vec<Vec<u64>>, usize)> {
    let md = p.pow(prec) as i128;
    let red = |x: i128| x.rem_euclid(md) as u64;
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0i128; d2 + 1];
        for i in 0..=d2 {
            for j in 0..=d2 - i {
                out[i + j] = (out[i + j] + a[i] as i128 * b[j] as i128) % md;
            }
        }
        out.into_iter().map(red).collect()
    };
    let sub = |a: &[u64], b: &[u64]| -> Vec<u64> { a.iter().zip(b).map(|(&x, &y)| red(x as i128 - y as i128)).collect() };
    // Inverse of a unit of R by undetermined coefficients.
    let inv = |a: &[u64]| -> Vec<u64> {
        let c0 = (1..md as u64).find(|x| (a[0] as i128 * *x as i128) % md == 1).unwrap();
        let mut out = vec![0u64; d2 + 1];
        out[0] = c0;
        for k in 1..=d2 {
            let s: i128 = (1..=k).map(|i| a[i] as i128 * out[k - i] as i128 % md).sum();
            out[k] = red(-s * c0 as i128);
        }
        out
    };
    let zero = vec![0u64; d2 + 1];
    let m = g.iter().position(|c| c[0] % p != 0)?;
    let d1 = l.len() - 1;
    // Longer than the library's range, so agreement also shows the low terms are settled.
    let ext = d1 + m * (prec as usize + d2 + 2) + 5;
    let gm_inv = inv(&g[m]);
    let mut h = vec![zero.clone(); ext + 1];
    loop {
        let mut changed = false;
        for k in 0..=ext {
            let n = k + m;
            let mut rhs = l.get(n).cloned().unwrap_or_else(|| zero.clone());
            for (i, gi) in g.iter().enumerate() {
                if i == m || i > n || n - i > ext {
                    continue;
                }
                rhs = sub(&rhs, &mul(&h[n - i], gi));
            }
            let new = mul(&rhs, &gm_inv);
            if new != h[k] {
                h[k] = new;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut r = Vec::new();
    for n in 0..m {
        let mut acc = l[n].clone();
        for (i, gi) in g.iter().enumerate().take(n + 1) {
            acc = sub(&acc, &mul(&h[n - i], gi));
        }
        r.push(acc);
    }
    h.truncate(d1 + 1);
    Some((h, r, m))
}
