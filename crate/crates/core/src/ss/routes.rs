use rayon::prelude::*;

use super::{apply_l_functors, assemble_abutment, hovey_sadofsky_table};
use super::{BigradedTable, SsError, TableRoute, Window};
use crate::cohomology::{
    continuous_via_quotients_partial, units_cohomology, BruteConfig, CohomologyError,
    CohomologyResult, PrecisionConfig,
};

/// A cell a route could not certify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncoveredCell {
    pub s: u32,
    pub t: i64,
    pub error: CohomologyError,
}

/// A route's table together with the cells it left open; those cells are
/// empty in `table` and must not be read as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteTable {
    pub table: BigradedTable,
    pub uncovered: Vec<UncoveredCell>,
}

impl RouteTable {
    pub fn covers(&self, s: u32, t: i64) -> bool {
        self.table.window().contains(s, t) && !self.uncovered.iter().any(|c| c.s == s && c.t == t)
    }
}

/// Run the spectral sequence on the tabulated `Ext` input. The input needs
/// one more row than the output.
pub fn ss_table(window: Window, t0_even_row: bool) -> Result<BigradedTable, SsError> {
    let input = hovey_sadofsky_table(2, window.with_s_max(window.s_max + 1), t0_even_row)?;
    let out = assemble_abutment(&apply_l_functors(&input));
    debug_assert_eq!(out.window(), window);
    Ok(out)
}

fn per_weight(
    p: u64,
    window: Window,
    route: TableRoute,
    run: impl Fn(i64) -> (CohomologyResult, Option<CohomologyError>) + Sync,
) -> RouteTable {
    // odd internal degrees carry no weight module and stay zero
    let evens: Vec<i64> = window.ts().filter(|t| t % 2 == 0).collect();
    let results: Vec<(i64, CohomologyResult, Option<CohomologyError>)> = evens
        .par_iter()
        .map(|&t| {
            let (r, e) = run(t / 2);
            (t, r, e)
        })
        .collect();
    let mut table = BigradedTable::new(p, window, route);
    let mut uncovered = Vec::new();
    for (t, result, err) in results {
        for (s, m) in result.degrees.iter().enumerate() {
            log::debug!("{route} (s={s}, t={t}) = {m} [{}]", result.certificates[s]);
            table.insert(s as u32, t, m.clone()).expect("inside window");
        }
        if let Some(e) = err {
            for s in result.degrees.len() as u32..=window.s_max {
                uncovered.push(UncoveredCell { s, t, error: e.clone() });
            }
        }
    }
    uncovered.sort_by_key(|c| (c.s, c.t));
    RouteTable { table, uncovered }
}

/// `H^s_c(Zp^x, E_t)` on the window from the total complex.
pub fn structured_table(p: u64, window: Window, config: PrecisionConfig) -> RouteTable {
    per_weight(p, window, TableRoute::Structured, |w| {
        match units_cohomology(p, w, window.s_max, config) {
            Ok(r) => (r, None),
            Err(e) => (empty_result(p), Some(e)),
        }
    })
}

/// `H^s_c(Zp^x, E_t)` on the window from finite quotients; degrees past the
/// first failure in a column are uncovered.
pub fn brute_table(p: u64, window: Window, config: BruteConfig) -> RouteTable {
    per_weight(p, window, TableRoute::Brute, |w| {
        continuous_via_quotients_partial(p, w, window.s_max, config)
    })
}

fn empty_result(p: u64) -> CohomologyResult {
    CohomologyResult {
        p,
        route: crate::cohomology::Route::Structured,
        degrees: Vec::new(),
        certificates: Vec::new(),
    }
}
