use num_bigint::BigInt;

use super::weight::{procyclic_generator, unit_power};
use super::{Certificate, CohomologyError, CohomologyResult, Route};
use crate::linalg::{complex_cohomology, CochainComplex, PadicContext, TruncatedEntry, TruncatedMatrix};

/// `H^0`, `H^1` of the procyclic factor on `Zp(w)`: kernel and cokernel of
/// `gamma^w - 1`, with the difference known to precision `p^N`.
pub fn procyclic_cohomology(p: u64, w: i64, n: u32) -> Result<CohomologyResult, CohomologyError> {
    let ctx = PadicContext::new(p, n);
    let entry = if w == 0 {
        TruncatedEntry::Zero
    } else {
        let g = unit_power(&BigInt::from(procyclic_generator(p)), w, ctx.modulus());
        ctx.from_residue(&(g - 1))
    };
    let d = TruncatedMatrix::new(ctx.clone(), 1, 1, vec![entry])?;
    let c = CochainComplex::truncated(ctx, 0, vec![1, 1], vec![d])?;
    let degrees = vec![complex_cohomology(&c, 0)?, complex_cohomology(&c, 1)?];
    Ok(CohomologyResult {
        p,
        route: Route::Procyclic,
        certificates: vec![Certificate::precision(n); 2],
        degrees,
    })
}
