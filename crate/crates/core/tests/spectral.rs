mod common;

use proptest::prelude::*;
use stabcoh::cohomology::PrecisionConfig;
use stabcoh::ss::{
    abutment_cells, apply_l_functors, assemble_abutment, compare_tables, golden_table,
    hovey_sadofsky_table, ss_table, structured_table, BigradedTable, Cell, SsError, TableRoute,
    Window,
};
use stabcoh::{Atom, ModuleExpr};

#[test]
fn abutment_degree_bookkeeping() {
    let w = Window::new(-4, 4, 3).unwrap();
    let page = apply_l_functors(&hovey_sadofsky_table(2, w, true).unwrap());
    assert!(page.collapses());
    let cells = abutment_cells(&page);
    // row n collects column 0 of row n and column 1 of row n + 1
    for c in &cells {
        for ((i, s), _) in &c.contributions {
            assert_eq!(*s, c.n + *i as u32);
        }
    }
    let h1 = cells.iter().find(|c| (c.n, c.t) == (1, 0)).unwrap();
    assert_eq!(h1.contributions, vec![((1, 2), ModuleExpr::atom(2, Atom::Padic))]);
    let h2 = cells.iter().find(|c| (c.n, c.t) == (2, 0)).unwrap();
    assert_eq!(h2.assembled, ModuleExpr::cyclic(2, 1));
    assert_eq!(assemble_abutment(&page).window(), Window::new(-4, 4, 2).unwrap());
}

#[test]
fn ss_matches_golden_on_default_window() {
    let w = Window::default();
    let ss = ss_table(w, true).unwrap();
    let golden = golden_table(2, w, true).unwrap();
    assert_eq!(compare_tables(&ss, &golden).unwrap(), vec![]);
    assert_eq!(ss.collisions(), vec![]);
    assert_eq!(ss.get(0, 0).unwrap().to_string(), "Zp");
    assert_eq!(ss.get(1, 16).unwrap(), ModuleExpr::cyclic(2, 5));
    assert_eq!(ss.get(1, -6).unwrap(), ModuleExpr::cyclic(2, 1));
    assert!(ss.get(3, 7).unwrap().is_zero());
    assert_eq!(ss.get(6, 0), None);
}

#[test]
fn dropping_the_t0_row_still_agrees() {
    let w = Window::new(-8, 8, 4).unwrap();
    let ss = ss_table(w, false).unwrap();
    assert_eq!(compare_tables(&ss, &golden_table(2, w, false).unwrap()).unwrap(), vec![]);
    assert!(ss.get(2, 0).unwrap().is_zero());
}

#[test]
fn structured_route_matches_golden() {
    let w = Window::default();
    let st = structured_table(2, w, PrecisionConfig::default());
    assert!(st.uncovered.is_empty());
    assert_eq!(compare_tables(&st.table, &golden_table(2, w, true).unwrap()).unwrap(), vec![]);
}

#[test]
fn single_cell_difference_is_reported() {
    let w = Window::new(-8, 8, 3).unwrap();
    let golden = golden_table(2, w, true).unwrap();
    let mut bad = golden.clone();
    bad.insert(1, 8, ModuleExpr::cyclic(2, 3)).unwrap();
    let diffs = compare_tables(&bad, &golden).unwrap();
    assert_eq!(diffs.len(), 1);
    assert_eq!((diffs[0].s, diffs[0].t), (1, 8));
    assert_eq!(diffs[0].right, ModuleExpr::cyclic(2, 4));
    let other = golden_table(2, Window::new(-8, 8, 2).unwrap(), true).unwrap();
    assert!(matches!(compare_tables(&golden, &other), Err(SsError::WindowMismatch { .. })));
}

#[test]
fn odd_primes_have_no_table() {
    assert_eq!(golden_table(3, Window::default(), true).unwrap_err(), SsError::UnsupportedPrime(3));
    assert!(Window::new(4, -4, 1).is_err());
}

#[test]
fn csv_rejects_repeated_cells() {
    let text = "s,t,module,collision\n0,0,Zp,false\n0,0,Z/2,false\n";
    let w = Window::new(0, 0, 0).unwrap();
    assert!(BigradedTable::read_csv(text.as_bytes(), 2, w, TableRoute::Golden).is_err());
}

fn table() -> impl Strategy<Value = BigradedTable> {
    (-6i64..=0, 0i64..6, 0u32..4, prop_oneof![Just(2u64), Just(3)]).prop_flat_map(|(lo, hi, s_max, p)| {
        let w = Window::new(lo, hi, s_max).unwrap();
        let n = w.cells().count();
        let route = prop_oneof![
            Just(TableRoute::Ss),
            Just(TableRoute::Structured),
            Just(TableRoute::Brute),
            Just(TableRoute::Golden),
            Just(TableRoute::HoveySadofsky),
        ];
        (prop::collection::vec((common::module_at(p), any::<bool>()), n), route).prop_map(
            move |(cells, route)| {
                let mut t = BigradedTable::new(p, w, route);
                for ((s, tt), (module, collision)) in w.cells().zip(cells) {
                    t.insert_cell(s, tt, Cell { module, collision }).unwrap();
                }
                t
            },
        )
    })
}

fn same(a: &BigradedTable, b: &BigradedTable) -> bool {
    a.prime() == b.prime()
        && a.window() == b.window()
        && a.route() == b.route()
        && a.cells().collect::<Vec<_>>() == b.cells().collect::<Vec<_>>()
}

proptest! {
    #[test]
    fn json_round_trip(t in table()) {
        let back = BigradedTable::from_json(&t.to_json()).unwrap();
        prop_assert!(same(&t, &back));
    }

    #[test]
    fn csv_round_trip(t in table()) {
        let back = BigradedTable::read_csv(t.to_csv().as_bytes(), t.prime(), t.window(), t.route()).unwrap();
        prop_assert!(same(&t, &back));
    }

    #[test]
    fn page_columns_are_completions(t in table()) {
        let page = apply_l_functors(&t);
        for ((s, tt), cell) in t.cells() {
            prop_assert_eq!(page.get(0, s, tt), stabcoh::lfunctor::l0(&cell.module));
            prop_assert_eq!(page.get(1, s, tt), stabcoh::lfunctor::l1(&cell.module));
        }
    }
}
