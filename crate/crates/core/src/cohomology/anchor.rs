use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::weight::procyclic_generator;
use super::CohomologyError;

/// Weights checked by [`verify_anchor`]: `1 <= |w| <= ANCHOR_RANGE`.
pub const ANCHOR_RANGE: i64 = 4096;

fn vp_u64(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn vp_big(x: &BigInt, p: u64) -> u32 {
    if p == 2 {
        return x.trailing_zeros().map_or(u32::MAX, |v| v as u32);
    }
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    if x.is_zero() {
        u32::MAX
    } else {
        v
    }
}

/// Closed form for `v_p(gamma^w - 1)`: `v_2(w) + 2` for even `w` and `2` for
/// odd `w` at p = 2, `1 + v_p(w)` at odd p. `None` for `w = 0`.
pub fn predicted_valuation(p: u64, w: i64) -> Option<u32> {
    if w == 0 {
        return None;
    }
    let v = vp_u64(w.unsigned_abs(), p);
    Some(if p == 2 {
        if v == 0 {
            2
        } else {
            v + 2
        }
    } else {
        1 + v
    })
}

/// `v_p(gamma^w - 1)` by exact integer arithmetic. For negative `w` this is
/// `v_p(1 - gamma^|w|) - v_p(gamma^|w|)`, the second term being zero.
pub fn anchor_valuation(p: u64, w: i64) -> Option<u32> {
    if w == 0 {
        return None;
    }
    let g = BigInt::from(procyclic_generator(p));
    let x = num_traits::pow(g.clone(), w.unsigned_abs() as usize) - BigInt::one();
    let v = vp_big(&x, p);
    if w < 0 {
        let gv = vp_big(&num_traits::pow(g, w.unsigned_abs() as usize), p);
        Some(v - gv)
    } else {
        Some(v)
    }
}

fn check(p: u64) -> Result<(), CohomologyError> {
    let g = BigInt::from(procyclic_generator(p));
    let mut power = BigInt::one();
    for w in 1..=ANCHOR_RANGE {
        power *= &g;
        let found = vp_big(&(&power - 1u32), p);
        // gamma^-w - 1 = -(gamma^w - 1) / gamma^w and gamma is a unit
        let found_neg = found - vp_big(&power, p);
        for (w, found) in [(w, found), (-w, found_neg)] {
            let expected = predicted_valuation(p, w).expect("nonzero weight");
            if found != expected {
                return Err(CohomologyError::AnchorFailed { w, expected, found });
            }
        }
    }
    Ok(())
}

/// Checks the closed form against direct computation for every
/// `1 <= |w| <= ANCHOR_RANGE`; the result is cached per prime.
pub fn verify_anchor(p: u64) -> Result<(), CohomologyError> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Result<(), CohomologyError>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("anchor cache").get(&p) {
        return r.clone();
    }
    let r = check(p);
    cache.lock().expect("anchor cache").insert(p, r.clone());
    r
}
