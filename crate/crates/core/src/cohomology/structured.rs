use num_bigint::BigInt;

use super::anchor::{predicted_valuation, verify_anchor, ANCHOR_RANGE};
use super::weight::{procyclic_generator, torsion_generator, unit_power};
use super::{Certificate, CohomologyError, CohomologyResult, Route};
use crate::linalg::{
    complex_cohomology, CochainComplex, PadicContext, TruncatedEntry, TruncatedMatrix,
};
use crate::module::is_prime;

/// Precision schedule: start at `start` (or higher when the valuation of
/// `gamma^w - 1` is known to need it), double on exhaustion up to `max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    pub start: u32,
    pub max: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { start: 8, max: 256 }
    }
}

/// `H^s_c(Zp^x, Zp(w))` for `s <= s_max` from the total complex of the
/// two-term procyclic complex and the periodic resolution of the torsion
/// factor.
pub fn units_cohomology(
    p: u64,
    w: i64,
    s_max: u32,
    config: PrecisionConfig,
) -> Result<CohomologyResult, CohomologyError> {
    if !is_prime(p) {
        return Err(CohomologyError::Precondition(format!("{p} is not prime")));
    }
    let mut n = config.start.max(1);
    if w != 0 && w.abs() <= ANCHOR_RANGE {
        verify_anchor(p)?;
        let v = predicted_valuation(p, w).expect("nonzero weight");
        n = n.max(v + 2);
    }
    loop {
        match at_precision(p, w, s_max, n) {
            Err(CohomologyError::PrecisionExhausted { .. }) if n < config.max => {
                log::debug!("p={p} w={w}: precision {n} exhausted");
                n = (n * 2).min(config.max);
            }
            Err(CohomologyError::PrecisionExhausted { .. }) => {
                return Err(CohomologyError::PrecisionExhausted { precision: n })
            }
            other => return other,
        }
    }
}

fn at_precision(p: u64, w: i64, s_max: u32, n: u32) -> Result<CohomologyResult, CohomologyError> {
    let ctx = PadicContext::new(p, n);
    let m = ctx.modulus().clone();
    let c_minus_one = if w == 0 {
        TruncatedEntry::Zero
    } else {
        let c = unit_power(&BigInt::from(procyclic_generator(p)), w, &m);
        ctx.from_residue(&(c - 1))
    };
    // the torsion generator acts by a root of unity: exactly one of a - 1
    // and the norm vanishes
    let (a_minus_one, norm) = if p == 2 {
        if w % 2 == 0 {
            (TruncatedEntry::Zero, ctx.exact_i64(2))
        } else {
            (ctx.exact_i64(-2), TruncatedEntry::Zero)
        }
    } else if w.rem_euclid(p as i64 - 1) == 0 {
        (TruncatedEntry::Zero, ctx.exact_i64(p as i64 - 1))
    } else {
        let (tau, _) = torsion_generator(p, n);
        let a = unit_power(&tau, w, &m);
        (ctx.from_residue(&(a - 1)), TruncatedEntry::Zero)
    };
    let t = |i: usize| if i % 2 == 0 { a_minus_one.clone() } else { norm.clone() };
    let top = s_max as usize + 1;
    let mut ranks = vec![1];
    ranks.extend(std::iter::repeat(2).take(top));
    let mut diffs = Vec::with_capacity(top);
    diffs.push(TruncatedMatrix::new(ctx.clone(), 2, 1, vec![t(0), c_minus_one.clone()])?);
    for k in 1..top {
        let signed = if k % 2 == 0 { c_minus_one.clone() } else { ctx.neg(&c_minus_one) };
        diffs.push(TruncatedMatrix::new(
            ctx.clone(),
            2,
            2,
            vec![t(k), TruncatedEntry::Zero, signed, t(k - 1)],
        )?);
    }
    let complex = CochainComplex::truncated(ctx, 0, ranks, diffs)?;
    let degrees = (0..=s_max as i64)
        .map(|s| complex_cohomology(&complex, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CohomologyResult {
        p,
        route: Route::Structured,
        certificates: vec![Certificate::precision(n); degrees.len()],
        degrees,
    })
}
