use stabcoh::ss::{self, BigradedTable, CellDiff, RouteTable};
use stabcoh::{Atom, ModuleExpr};

use crate::{render, Failure, RunArgs};

pub fn parse_cell(text: &str) -> Result<(u32, i64), Failure> {
    let bad = || Failure::Usage(format!("--inject-fault expects S,T, got {text:?}"));
    let (s, t) = text.split_once(',').ok_or_else(bad)?;
    Ok((s.trim().parse().map_err(|_| bad())?, t.trim().parse().map_err(|_| bad())?))
}

/// A different module: one fewer power of 2, or `Z/2` in place of zero.
fn corrupt(m: &ModuleExpr) -> ModuleExpr {
    match m.atoms().first() {
        None => ModuleExpr::cyclic(2, 1),
        Some(Atom::Cyclic(k)) if *k > 1 => {
            let rest = m.remove(&ModuleExpr::cyclic(2, *k)).expect("present");
            rest.sum(&ModuleExpr::cyclic(2, k - 1))
        }
        Some(&a) => m.remove(&ModuleExpr::atom(2, a)).expect("present"),
    }
}

fn mark(route: &RouteTable, golden: &BigradedTable, s: u32, t: i64) -> Option<bool> {
    route.covers(s, t).then(|| route.table.get(s, t) == golden.get(s, t))
}

pub fn verify(run: &RunArgs, fault: Option<(u32, i64)>) -> Result<(), Failure> {
    let window = run.window()?;
    let mut golden = ss::golden_table(2, window, run.t0_even_row)?;
    if let Some((s, t)) = fault {
        let old = golden.get(s, t).ok_or(ss::SsError::OutsideWindow { s, t })?;
        golden.insert(s, t, corrupt(&old))?;
        log::warn!("golden cell (s={s}, t={t}) changed from {old}");
    }
    let spectral = ss::ss_table(window, run.t0_even_row)?;
    let spectral = RouteTable { table: spectral, uncovered: Vec::new() };
    let structured = ss::structured_table(2, window, run.precision());
    let brute = ss::brute_table(2, window, run.brute());
    let routes = [("ss", &spectral), ("structured", &structured), ("brute", &brute)];

    // agreement matrix: one character per cell, rows s, columns t
    println!("agreement with golden, {window}");
    println!("  '.' zero, '=' nonzero, '-' brute uncovered, 'X' disagreement");
    for s in 0..=window.s_max {
        let row: String = window
            .ts()
            .map(|t| {
                let marks: Vec<Option<bool>> =
                    routes.iter().map(|(_, r)| mark(r, &golden, s, t)).collect();
                if marks.contains(&Some(false)) {
                    'X'
                } else if marks.contains(&None) {
                    '-'
                } else if golden.get(s, t).is_some_and(|m| m.is_zero()) {
                    '.'
                } else {
                    '='
                }
            })
            .collect();
        println!("  s={s:<2} {row}");
    }
    if window.t_lo == window.t_hi {
        print!("{}", render::pretty(&golden));
    }

    let mut first: Option<(String, CellDiff)> = None;
    for (name, route) in routes {
        let diffs: Vec<CellDiff> = ss::compare_tables(&route.table, &golden)?
            .into_iter()
            .filter(|d| route.covers(d.s, d.t))
            .collect();
        println!("{name}: {} cells differ from golden, {} uncovered", diffs.len(), route.uncovered.len());
        for d in &diffs {
            println!("  {d}");
        }
        if first.is_none() {
            first = diffs.into_iter().next().map(|d| (name.to_string(), d));
        }
    }
    let stray: Vec<(u32, i64)> =
        spectral.table.collisions().into_iter().filter(|&(_, t)| t != 0).collect();
    if let Some((name, d)) = first {
        return Err(Failure::Disagreement(format!("{name} route differs from golden at {d}")));
    }
    if let Some(&(s, t)) = stray.first() {
        return Err(Failure::Disagreement(format!("collision at (s={s}, t={t})")));
    }
    if let Some(c) = structured.uncovered.first() {
        return Err(Failure::Uncertified(format!(
            "structured route: cell (s={}, t={}) not certified: {}",
            c.s, c.t, c.error
        )));
    }
    println!("all routes agree");
    Ok(())
}
