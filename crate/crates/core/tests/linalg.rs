mod common;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use stabcoh::linalg::{
    cokernel_structure, complex_cohomology, snf, Base, CochainComplex, IntMatrix, LinalgError,
    PadicContext, TruncatedMatrix,
};
use stabcoh::ModuleExpr;

use common::{all_vectors, apply, exponents_from_counts, log_p};

/// Determinant by permutation expansion.
fn det(m: &[Vec<i64>]) -> i64 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.len();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            sign * (0..n).map(|i| m[i][p[i]]).product::<i64>()
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|b| b.count_ones() as usize == k)
        .map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect())
        .collect()
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of the
/// `k x k` minors and the factors are `d_k / d_(k-1)`.
fn invariant_factors_oracle(m: &[Vec<i64>]) -> Vec<i64> {
    let (rows, cols) = (m.len(), m[0].len());
    let mut out = Vec::new();
    let mut prev = 1i64;
    for k in 1..=rows.min(cols) {
        let mut g = 0i64;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-12i64..13, c), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn integer_snf_matches_determinantal_divisors(m in small_matrix()) {
        let a = IntMatrix::from_rows(&m);
        let s = snf(&a, Base::Integers).unwrap();
        prop_assert!(s.verify(&a));
        let got: Vec<i64> = s
            .invariant_factors()
            .iter()
            .map(|f| i64::try_from(f.abs()).unwrap())
            .collect();
        prop_assert_eq!(got, invariant_factors_oracle(&m));
    }

    #[test]
    fn modular_snf_transforms_are_consistent(m in small_matrix(), p in prop_oneof![Just(2u64), Just(3)], n in 1u32..5) {
        let a = IntMatrix::from_rows(&m);
        let s = snf(&a, Base::Modular { p, n }).unwrap();
        prop_assert!(s.verify(&a));
        let q = BigInt::from(p).pow(n);
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[1].mod_floor(&q).is_zero() || (&w[1] % &w[0]).is_zero());
        }
    }
}

#[test]
fn spot_snf() {
    let s = snf(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]), Base::Integers).unwrap();
    assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    let id = IntMatrix::identity(3);
    assert_eq!(snf(&id, Base::Integers).unwrap().d, id);
    let z = IntMatrix::zeros(2, 3);
    assert_eq!(snf(&z, Base::Integers).unwrap().d, z);
}

#[test]
fn cokernels() {
    assert_eq!(cokernel_structure(&IntMatrix::from_rows(&[vec![4]]), 2).to_string(), "Z/2^2");
    assert_eq!(cokernel_structure(&IntMatrix::from_rows(&[vec![6]]), 2).to_string(), "Z/2");
    assert_eq!(cokernel_structure(&IntMatrix::zeros(1, 0), 2).to_string(), "Z(2)");
}

/// `ker d1 / im d0` over `Z/q` by listing elements.
fn enumerate_middle(d0: &[Vec<i64>], d1: &[Vec<i64>], mid: usize, q: u64, p: u64, n: u32) -> Vec<u32> {
    let src = d0.first().map_or(0, |r| r.len());
    let image: HashSet<Vec<u64>> = all_vectors(q, src).iter().map(|x| apply(d0, x, q)).collect();
    let kernel: Vec<Vec<u64>> = all_vectors(q, mid)
        .into_iter()
        .filter(|x| d1.is_empty() || apply(d1, x, q).iter().all(|&y| y == 0))
        .collect();
    let image = if src == 0 { HashSet::from([vec![0; mid]]) } else { image };
    // counts[k] = log_p |H[p^k]| = log_p |{x in ker : p^k x in im}| - log_p |im|
    let counts: Vec<u32> = (0..=n)
        .map(|k| {
            let pk = p.pow(k);
            let hits = kernel
                .iter()
                .filter(|x| image.contains(&x.iter().map(|&a| a * pk % q).collect::<Vec<_>>()))
                .count();
            log_p(hits, p as usize) - log_p(image.len(), p as usize)
        })
        .collect();
    exponents_from_counts(&counts)
}

fn kernel_columns(d1: &[Vec<i64>], mid: usize, q: u64) -> Vec<Vec<u64>> {
    all_vectors(q, mid)
        .into_iter()
        .filter(|x| apply(d1, x, q).iter().all(|&y| y == 0))
        .collect()
}

fn complex_case() -> impl Strategy<Value = (u64, u32, usize, usize, usize, Vec<Vec<i64>>, Vec<usize>)> {
    (prop_oneof![Just(2u64), Just(3)], 1u32..5)
        .prop_filter("small modulus", |(p, n)| p.pow(*n) <= 16)
        .prop_flat_map(|(p, n)| {
            (Just(p), Just(n), 0usize..3, 1usize..4, 0usize..3).prop_flat_map(move |(p, n, a, b, c)| {
                let q = p.pow(n) as i64;
                (
                    Just(p),
                    Just(n),
                    Just(a),
                    Just(b),
                    Just(c),
                    prop::collection::vec(prop::collection::vec(0..q, b), c),
                    prop::collection::vec(0usize..10_000, a),
                )
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn modular_cohomology_matches_enumeration(case in complex_case()) {
        let (p, n, a, b, c, d1, picks) = case;
        let q = p.pow(n);
        // d0 takes its columns from ker d1, so d1 d0 = 0
        let ker = if c == 0 { all_vectors(q, b) } else { kernel_columns(&d1, b, q) };
        let cols: Vec<&Vec<u64>> = picks.iter().map(|&i| &ker[i % ker.len()]).collect();
        let d0: Vec<Vec<i64>> = (0..b).map(|i| cols.iter().map(|col| col[i] as i64).collect()).collect();
        let mut ranks = vec![a, b];
        let mut diffs = vec![IntMatrix::new(b, a, d0.iter().flatten().map(|&x| BigInt::from(x)).collect()).unwrap()];
        if c > 0 {
            ranks.push(c);
            diffs.push(IntMatrix::from_rows(&d1));
        } else {
            ranks.push(0);
            diffs.push(IntMatrix::zeros(0, b));
        }
        let cx = CochainComplex::new(Base::Modular { p, n }, 0, ranks, diffs).unwrap();
        let got = complex_cohomology(&cx, 1).unwrap();
        let d0_rows: Vec<Vec<i64>> = if a == 0 { vec![] } else { d0 };
        let d1_rows: Vec<Vec<i64>> = if c == 0 { vec![] } else { d1 };
        let expected = enumerate_middle(&d0_rows, &d1_rows, b, q, p, n);
        prop_assert_eq!(got, ModuleExpr::torsion(p, &expected));
    }
}

#[test]
fn times_two_on_z8_by_enumeration() {
    let d = IntMatrix::from_rows(&[vec![2]]);
    let c = CochainComplex::new(Base::Modular { p: 2, n: 3 }, 0, vec![1, 1], vec![d]).unwrap();
    let kernel = (0..8u64).filter(|x| 2 * x % 8 == 0).count();
    assert_eq!(kernel, 2);
    assert_eq!(complex_cohomology(&c, 0).unwrap(), ModuleExpr::cyclic(2, 1));
}

#[test]
fn sixteen_over_z2_cross_checked_mod_64() {
    let d = IntMatrix::from_rows(&[vec![16]]);
    let c = CochainComplex::new(Base::Padic { p: 2, precision: 8 }, 0, vec![1, 1], vec![d.clone()]).unwrap();
    assert_eq!(complex_cohomology(&c, 1).unwrap().to_string(), "Z/2^4");
    // the cokernel of x16 on Z/64 has 16 elements and is cyclic
    let image: HashSet<u64> = (0..64u64).map(|x| 16 * x % 64).collect();
    assert_eq!(64 / image.len(), 16);
    let c = CochainComplex::new(Base::Modular { p: 2, n: 6 }, 0, vec![1, 1], vec![d]).unwrap();
    assert_eq!(complex_cohomology(&c, 1).unwrap().to_string(), "Z/2^4");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn raising_precision_keeps_certified_answers(
        m in prop::collection::vec(prop::collection::vec(-300i64..300, 2), 2),
        n in 2u32..10,
    ) {
        let a = IntMatrix::from_rows(&m);
        let at = |n: u32| {
            let ctx = PadicContext::new(2, n);
            let d = TruncatedMatrix::from_int(ctx.clone(), &a);
            let c = CochainComplex::truncated(ctx, 0, vec![2, 2], vec![d]).unwrap();
            (complex_cohomology(&c, 0), complex_cohomology(&c, 1))
        };
        let (h0, h1) = at(n);
        let (g0, g1) = at(n + 7);
        for (lo, hi) in [(h0, g0), (h1, g1)] {
            match lo {
                Ok(m) => prop_assert_eq!(Ok(m), hi),
                Err(e) => {
                    let exhausted = matches!(e, LinalgError::PrecisionExhausted { .. });
                    prop_assert!(exhausted)
                },
            }
        }
    }
}

#[test]
fn nonzero_composite_is_rejected() {
    let one = IntMatrix::from_rows(&[vec![1]]);
    assert!(matches!(
        CochainComplex::new(Base::Modular { p: 3, n: 2 }, 0, vec![1, 1, 1], vec![one.clone(), one]),
        Err(LinalgError::NonzeroComposite { .. })
    ));
}
