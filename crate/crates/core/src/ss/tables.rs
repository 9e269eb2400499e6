use super::{BigradedTable, SsError, TableRoute, Window};
use crate::module::{Atom, ModuleExpr};

/// The `s = 1`, `t != 0` rows shared by both tables: `Z/2^(k+2)` at
/// `t = 2^(k+1) m` with `m` odd and `k != 0`, and `Z/2` at `t = 4t' + 2`.
fn first_row(t: i64) -> ModuleExpr {
    if t == 0 || t % 2 != 0 {
        return ModuleExpr::zero(2);
    }
    match t.trailing_zeros() - 1 {
        0 => ModuleExpr::cyclic(2, 1),
        k => ModuleExpr::cyclic(2, k + 2),
    }
}

fn even_row(s: u32, t: i64, t0_even_row: bool) -> ModuleExpr {
    if s >= 2 && t % 2 == 0 && (t != 0 || t0_even_row) {
        ModuleExpr::cyclic(2, 1)
    } else {
        ModuleExpr::zero(2)
    }
}

/// `Ext^{s,t}` at p = 2, the input of the spectral sequence. With
/// `t0_even_row` the `s >= 2, t even` row also covers `t = 0`, so
/// `Ext^{2,0} = Q/Z(2) + Z/2`.
pub fn hovey_sadofsky_table(
    p: u64,
    window: Window,
    t0_even_row: bool,
) -> Result<BigradedTable, SsError> {
    if p != 2 {
        return Err(SsError::UnsupportedPrime(p));
    }
    let mut table = BigradedTable::new(2, window, TableRoute::HoveySadofsky);
    for (s, t) in window.cells() {
        let mut m = match (s, t) {
            (0, 0) => ModuleExpr::atom(2, Atom::LocalFree),
            (2, 0) => ModuleExpr::atom(2, Atom::PruferQuotient),
            (1, _) => first_row(t),
            _ => ModuleExpr::zero(2),
        };
        m = m.sum(&even_row(s, t, t0_even_row));
        table.insert(s, t, m)?;
    }
    Ok(table)
}

/// `H^s_c(Zp^x, E_t)` at p = 2 as tabulated; `t0_even_row` as in
/// [`hovey_sadofsky_table`].
pub fn golden_table(p: u64, window: Window, t0_even_row: bool) -> Result<BigradedTable, SsError> {
    if p != 2 {
        return Err(SsError::UnsupportedPrime(p));
    }
    let mut table = BigradedTable::new(2, window, TableRoute::Golden);
    for (s, t) in window.cells() {
        let m = match (s, t) {
            (0 | 1, 0) => ModuleExpr::atom(2, Atom::Padic),
            (1, _) => first_row(t),
            _ => even_row(s, t, t0_even_row),
        };
        table.insert(s, t, m)?;
    }
    Ok(table)
}
