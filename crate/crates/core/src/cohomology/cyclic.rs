use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Certificate, CohomologyError, CohomologyResult, Route};
use crate::linalg::{
    complex_cohomology, Base, CochainComplex, IntMatrix, PadicContext, TruncatedEntry,
    TruncatedMatrix,
};

/// Cohomology of `Z/m` acting on a rank-one module by `a`, from the periodic
/// resolution: `H^0` is the fixed points, odd degrees `ker(norm)/im(a - 1)`,
/// even positive degrees `ker(a - 1)/im(norm)`.
///
/// Over `Zp` the residue `a` stands for the root of unity congruent to it.
pub fn cyclic_cohomology(
    m: u64,
    a: &BigInt,
    base: Base,
    s_max: u32,
) -> Result<CohomologyResult, CohomologyError> {
    let (p, n) = match base {
        Base::Modular { p, n } => (p, n),
        Base::Padic { p, precision } => (p, precision),
        Base::Integers => {
            return Err(CohomologyError::Precondition("cyclic cohomology needs a local base".into()))
        }
    };
    if m == 0 {
        return Err(CohomologyError::Precondition("group order must be positive".into()));
    }
    let q = BigInt::from(p).pow(n);
    let a = a.mod_floor(&q);
    if (&a % p).is_zero() {
        return Err(CohomologyError::Precondition(format!("{a} is not a unit mod {q}")));
    }
    if !a.modpow(&BigInt::from(m), &q).is_one() {
        return Err(CohomologyError::Precondition(format!("{a}^{m} is not 1 mod {q}")));
    }
    let is_one = a.is_one();
    let norm = (0..m).fold(BigInt::zero(), |acc, i| acc + a.modpow(&BigInt::from(i), &q)) % &q;
    let len = s_max as usize + 2;
    let complex = match base {
        Base::Modular { .. } => {
            let diffs = (0..len - 1)
                .map(|k| {
                    let e = if k % 2 == 0 { &a - 1 } else { norm.clone() };
                    IntMatrix::new(1, 1, vec![e]).expect("1x1")
                })
                .collect();
            CochainComplex::new(base, 0, vec![1; len], diffs)?
        }
        _ => {
            if !is_one && !is_root_of_unity_residue(&a, p, n) {
                return Err(CohomologyError::Precondition(format!(
                    "{a} is not congruent to a root of unity in Z{p}"
                )));
            }
            let ctx = PadicContext::new(p, n);
            // a root of unity other than 1 has vanishing norm
            let (minus, nm) = if is_one {
                (TruncatedEntry::Zero, ctx.exact(&BigInt::from(m)))
            } else {
                (ctx.from_residue(&(&a - 1)), TruncatedEntry::Zero)
            };
            let diffs = (0..len - 1)
                .map(|k| {
                    let e = if k % 2 == 0 { minus.clone() } else { nm.clone() };
                    TruncatedMatrix::new(ctx.clone(), 1, 1, vec![e]).expect("1x1")
                })
                .collect();
            CochainComplex::truncated(ctx, 0, vec![1; len], diffs)?
        }
    };
    let degrees = (0..=s_max as i64)
        .map(|s| complex_cohomology(&complex, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CohomologyResult {
        p,
        route: Route::Cyclic,
        certificates: vec![Certificate::precision(n); degrees.len()],
        degrees,
    })
}

fn is_root_of_unity_residue(a: &BigInt, p: u64, n: u32) -> bool {
    let q = BigInt::from(p).pow(n);
    if p == 2 {
        return a.is_one() || *a == &q - 1;
    }
    // the Teichmuller representative of a mod p
    let teich = a.modpow(&BigInt::from(p).pow(n), &q);
    teich == *a
}
