use std::collections::BTreeMap;

use super::{BigradedTable, Cell, SsError, TableRoute, Window};
use crate::lfunctor::{l0, l1};
use crate::module::ModuleExpr;

/// `E_2^{i,s,t}` for `i` in `{0, 1}`; the window is that of the source table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSPage {
    p: u64,
    window: Window,
    entries: BTreeMap<(u8, u32, i64), ModuleExpr>,
}

impl SSPage {
    pub fn new(p: u64, window: Window) -> Self {
        SSPage { p, window, entries: BTreeMap::new() }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn insert(&mut self, i: u8, s: u32, t: i64, m: ModuleExpr) -> Result<(), SsError> {
        if i > 1 {
            return Err(SsError::InvalidColumn(i));
        }
        if !self.window.contains(s, t) {
            return Err(SsError::OutsideWindow { s, t });
        }
        if m.is_zero() {
            self.entries.remove(&(i, s, t));
        } else {
            self.entries.insert((i, s, t), m);
        }
        Ok(())
    }

    pub fn get(&self, i: u8, s: u32, t: i64) -> ModuleExpr {
        self.entries.get(&(i, s, t)).cloned().unwrap_or_else(|| ModuleExpr::zero(self.p))
    }

    /// Nonzero entries keyed by `(i, s, t)`.
    pub fn entries(&self) -> impl Iterator<Item = ((u8, u32, i64), &ModuleExpr)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every `d_r`, `r >= 2`, leaves column `i` for column `i + r >= 2`,
    /// which is empty, so no differential has a nonzero source and target.
    pub fn collapses(&self) -> bool {
        self.entries.keys().all(|&(i, _, _)| i <= 1)
    }
}

/// `E_2^{i,s,t} = L_i T(s, t)`.
pub fn apply_l_functors(table: &BigradedTable) -> SSPage {
    let mut page = SSPage::new(table.prime(), table.window());
    for ((s, t), cell) in table.cells() {
        for (i, m) in [(0, l0(&cell.module)), (1, l1(&cell.module))] {
            page.insert(i, s, t, m).expect("same window");
        }
    }
    page
}

/// Abutment cell `(n, t)` with its contributions `E_2^{0,n,t}` and
/// `E_2^{1,n+1,t}` and their direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbutmentCell {
    pub n: u32,
    pub t: i64,
    pub contributions: Vec<((u8, u32), ModuleExpr)>,
    pub assembled: ModuleExpr,
    pub collision: bool,
}

/// Every abutment cell with a nonzero contribution. Row `n` reads page rows
/// `n` and `n + 1`, so the last page row only feeds column 1.
pub fn abutment_cells(page: &SSPage) -> Vec<AbutmentCell> {
    assert!(page.collapses(), "a differential d_r with r >= 2 has a nonzero source and target");
    let mut cells: BTreeMap<(u32, i64), Vec<((u8, u32), ModuleExpr)>> = BTreeMap::new();
    for ((i, s), t, m) in page.entries().map(|((i, s, t), m)| ((i, s), t, m)) {
        let Some(n) = s.checked_sub(i as u32) else { continue };
        cells.entry((n, t)).or_default().push(((i, s), m.clone()));
    }
    cells
        .into_iter()
        .map(|((n, t), contributions)| {
            debug_assert!(contributions.iter().all(|&((i, s), _)| s == n + i as u32));
            let assembled = contributions
                .iter()
                .fold(ModuleExpr::zero(page.prime()), |acc, (_, m)| acc.sum(m));
            AbutmentCell { n, t, collision: contributions.len() > 1, contributions, assembled }
        })
        .collect()
}

/// The associated graded of the abutment, flagging cells fed by both
/// columns. The window drops the last page row, whose column-1
/// contribution would come from outside the page.
pub fn assemble_abutment(page: &SSPage) -> BigradedTable {
    let w = page.window();
    let window = w.with_s_max(w.s_max.saturating_sub(1));
    let mut table = BigradedTable::new(page.prime(), window, TableRoute::Ss);
    for cell in abutment_cells(page) {
        if window.contains(cell.n, cell.t) {
            table
                .insert_cell(cell.n, cell.t, Cell { module: cell.assembled, collision: cell.collision })
                .expect("inside window");
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::Atom;
    use crate::ss::hovey_sadofsky_table;

    #[test]
    fn prufer_feeds_column_one() {
        let w = Window::new(0, 8, 3).unwrap();
        let page = apply_l_functors(&hovey_sadofsky_table(2, w, true).unwrap());
        assert_eq!(page.get(1, 2, 0), ModuleExpr::atom(2, Atom::Padic));
        assert_eq!(page.get(0, 2, 0), ModuleExpr::cyclic(2, 1));
        assert_eq!(page.get(0, 1, 8), ModuleExpr::cyclic(2, 4));
        assert!(page.get(1, 1, 8).is_zero());
        let out = assemble_abutment(&page);
        assert_eq!(out.get(1, 0).unwrap().to_string(), "Zp");
        assert_eq!(out.get(0, 0).unwrap().to_string(), "Zp");
        assert_eq!(out.get(1, 8).unwrap().to_string(), "Z/2^4");
        assert_eq!(out.window().s_max, 2);
        assert!(out.collisions().is_empty());
    }

    #[test]
    fn empty_page() {
        let w = Window::new(0, 0, 1).unwrap();
        let page = apply_l_functors(&BigradedTable::new(2, w, TableRoute::HoveySadofsky));
        assert!(page.is_empty());
        assert_eq!(assemble_abutment(&page).cells().count(), 0);
    }

    #[test]
    fn collision_is_flagged() {
        let mut page = SSPage::new(2, Window::new(0, 0, 2).unwrap());
        page.insert(0, 1, 0, ModuleExpr::cyclic(2, 1)).unwrap();
        page.insert(1, 2, 0, ModuleExpr::atom(2, Atom::Padic)).unwrap();
        let cells = abutment_cells(&page);
        assert_eq!(cells.len(), 1);
        assert!(cells[0].collision);
        assert_eq!(cells[0].assembled.to_string(), "Zp + Z/2");
        assert!(page.insert(2, 0, 0, ModuleExpr::cyclic(2, 1)).is_err());
    }
}
