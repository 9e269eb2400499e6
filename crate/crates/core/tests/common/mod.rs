#![allow(dead_code)]

use proptest::prelude::*;
use stabcoh::{Atom, ModuleExpr};

pub fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::LocalFree),
        Just(Atom::Padic),
        (1u32..7).prop_map(Atom::Cyclic),
        Just(Atom::PruferQuotient),
    ]
}

pub fn module_at(p: u64) -> impl Strategy<Value = ModuleExpr> {
    prop::collection::vec(atom(), 0..6).prop_map(move |a| ModuleExpr::from_atoms(p, a))
}

pub fn module() -> impl Strategy<Value = ModuleExpr> {
    prop_oneof![Just(2u64), Just(3), Just(5)].prop_flat_map(module_at)
}

/// Sums of `Z(p)` and `Z/p^k`.
pub fn fg_module_at(p: u64) -> impl Strategy<Value = ModuleExpr> {
    let a = prop_oneof![Just(Atom::LocalFree), (1u32..7).prop_map(Atom::Cyclic)];
    prop::collection::vec(a, 0..5).prop_map(move |a| ModuleExpr::from_atoms(p, a))
}

/// Exponents (descending) of a finite abelian p-group from
/// `counts[k] = log_p |G[p^k]|`, `counts[0] = 0`.
pub fn exponents_from_counts(counts: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    for k in (1..counts.len()).rev() {
        let at_least_k = counts[k] - counts[k - 1];
        let at_least_next = if k + 1 < counts.len() { counts[k + 1] - counts[k] } else { 0 };
        for _ in 0..at_least_k - at_least_next {
            out.push(k as u32);
        }
    }
    out
}

pub fn log_p(mut x: usize, p: usize) -> u32 {
    let mut v = 0;
    while x > 1 {
        assert_eq!(x % p, 0, "not a power of p");
        x /= p;
        v += 1;
    }
    v
}

/// Every vector of `(Z/q)^len`.
pub fn all_vectors(q: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn apply(m: &[Vec<i64>], x: &[u64], q: u64) -> Vec<u64> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0i128, |acc, (&a, &b)| acc + a as i128 * b as i128)
                .rem_euclid(q as i128) as u64
        })
        .collect()
}
