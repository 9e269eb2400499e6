//! Bigraded tables and the two-column derived-completion spectral sequence
//! `E_2^{i,s,t} = L_i Ext^{s,t} => H^{s-i}`, which collapses because only
//! `i = 0, 1` can be nonzero.

mod io;
mod page;
mod routes;
mod tables;

pub use page::{abutment_cells, apply_l_functors, assemble_abutment, AbutmentCell, SSPage};
pub use routes::{brute_table, ss_table, structured_table, RouteTable, UncoveredCell};
pub use tables::{golden_table, hovey_sadofsky_table};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::module::ModuleExpr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SsError {
    #[error("no table is known at p = {0}")]
    UnsupportedPrime(u64),
    #[error("windows differ: {left} vs {right}")]
    WindowMismatch { left: Window, right: Window },
    #[error("primes differ: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("cell (s={s}, t={t}) lies outside the window")]
    OutsideWindow { s: u32, t: i64 },
    #[error("derived index {0} is not 0 or 1")]
    InvalidColumn(u8),
    #[error("empty window: t from {0} to {1}")]
    EmptyWindow(i64, i64),
    #[error("malformed table: {0}")]
    Format(String),
}

/// Cells `0 <= s <= s_max`, `t_lo <= t <= t_hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub t_lo: i64,
    pub t_hi: i64,
    pub s_max: u32,
}

impl Window {
    pub fn new(t_lo: i64, t_hi: i64, s_max: u32) -> Result<Self, SsError> {
        if t_lo > t_hi {
            return Err(SsError::EmptyWindow(t_lo, t_hi));
        }
        Ok(Window { t_lo, t_hi, s_max })
    }

    pub fn contains(&self, s: u32, t: i64) -> bool {
        s <= self.s_max && (self.t_lo..=self.t_hi).contains(&t)
    }

    pub fn ts(&self) -> std::ops::RangeInclusive<i64> {
        self.t_lo..=self.t_hi
    }

    /// All cells in `(s, t)` order.
    pub fn cells(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        (0..=self.s_max).flat_map(move |s| self.ts().map(move |t| (s, t)))
    }

    pub fn with_s_max(self, s_max: u32) -> Self {
        Window { s_max, ..self }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { t_lo: -48, t_hi: 48, s_max: 5 }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t in [{}, {}], s in [0, {}]", self.t_lo, self.t_hi, self.s_max)
    }
}

/// Where a table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableRoute {
    /// Assembled from the spectral sequence.
    Ss,
    Structured,
    Brute,
    Golden,
    /// The `Ext` input of the spectral sequence.
    HoveySadofsky,
}

impl fmt::Display for TableRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableRoute::Ss => "ss",
            TableRoute::Structured => "structured",
            TableRoute::Brute => "brute",
            TableRoute::Golden => "golden",
            TableRoute::HoveySadofsky => "hovey-sadofsky",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub module: ModuleExpr,
    /// Both spectral sequence columns contributed to this cell.
    pub collision: bool,
}

/// `(s, t) -> ModuleExpr` on a window. Only nonzero cells are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedTable {
    p: u64,
    window: Window,
    route: TableRoute,
    cells: BTreeMap<(u32, i64), Cell>,
}

impl BigradedTable {
    pub fn new(p: u64, window: Window, route: TableRoute) -> Self {
        BigradedTable { p, window, route, cells: BTreeMap::new() }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn route(&self) -> TableRoute {
        self.route
    }

    pub fn set_route(&mut self, route: TableRoute) {
        self.route = route;
    }

    pub fn insert(&mut self, s: u32, t: i64, module: ModuleExpr) -> Result<(), SsError> {
        self.insert_cell(s, t, Cell { module, collision: false })
    }

    pub fn insert_cell(&mut self, s: u32, t: i64, cell: Cell) -> Result<(), SsError> {
        if !self.window.contains(s, t) {
            return Err(SsError::OutsideWindow { s, t });
        }
        if cell.module.prime() != self.p && !cell.module.is_zero() {
            return Err(SsError::PrimeMismatch(self.p, cell.module.prime()));
        }
        if cell.module.is_zero() && !cell.collision {
            self.cells.remove(&(s, t));
        } else {
            self.cells.insert((s, t), cell);
        }
        Ok(())
    }

    /// The module at `(s, t)`; zero for empty cells inside the window.
    pub fn get(&self, s: u32, t: i64) -> Option<ModuleExpr> {
        if !self.window.contains(s, t) {
            return None;
        }
        Some(self.cells.get(&(s, t)).map_or_else(|| ModuleExpr::zero(self.p), |c| c.module.clone()))
    }

    pub fn collision(&self, s: u32, t: i64) -> bool {
        self.cells.get(&(s, t)).is_some_and(|c| c.collision)
    }

    /// Stored cells in `(s, t)` order.
    pub fn cells(&self) -> impl Iterator<Item = ((u32, i64), &Cell)> {
        self.cells.iter().map(|(k, v)| (*k, v))
    }

    pub fn collisions(&self) -> Vec<(u32, i64)> {
        self.cells.iter().filter(|(_, c)| c.collision).map(|(k, _)| *k).collect()
    }
}

/// A cell where two tables disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDiff {
    pub s: u32,
    pub t: i64,
    pub left: ModuleExpr,
    pub right: ModuleExpr,
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, t={}): {} vs {}", self.s, self.t, self.left, self.right)
    }
}

/// Cells where the modules differ, in `(s, t)` order.
pub fn compare_tables(a: &BigradedTable, b: &BigradedTable) -> Result<Vec<CellDiff>, SsError> {
    if a.window != b.window {
        return Err(SsError::WindowMismatch { left: a.window, right: b.window });
    }
    if a.p != b.p {
        return Err(SsError::PrimeMismatch(a.p, b.p));
    }
    Ok(a
        .window
        .cells()
        .filter_map(|(s, t)| {
            let (l, r) = (a.get(s, t).expect("in window"), b.get(s, t).expect("in window"));
            (l != r).then_some(CellDiff { s, t, left: l, right: r })
        })
        .collect())
}
