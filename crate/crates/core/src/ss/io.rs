use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{BigradedTable, Cell, SsError, TableRoute, Window};
use crate::module::ModuleExpr;

#[derive(Serialize, Deserialize)]
struct TableDoc {
    p: u64,
    window: WindowDoc,
    route: TableRoute,
    cells: Vec<CellRecord>,
}

#[derive(Serialize, Deserialize)]
struct WindowDoc {
    t: [i64; 2],
    s: [u32; 2],
}

#[derive(Serialize, Deserialize)]
struct CellRecord {
    s: u32,
    t: i64,
    module: String,
    collision: bool,
}

fn format_err(e: impl std::fmt::Display) -> SsError {
    SsError::Format(e.to_string())
}

impl BigradedTable {
    fn records(&self) -> Vec<CellRecord> {
        self.cells()
            .map(|((s, t), c)| CellRecord {
                s,
                t,
                module: c.module.to_string(),
                collision: c.collision,
            })
            .collect()
    }

    fn from_records(
        p: u64,
        window: Window,
        route: TableRoute,
        records: impl IntoIterator<Item = CellRecord>,
    ) -> Result<Self, SsError> {
        let mut table = BigradedTable::new(p, window, route);
        for r in records {
            let module = ModuleExpr::parse(&r.module, Some(p)).map_err(format_err)?;
            if table.cells.contains_key(&(r.s, r.t)) {
                return Err(SsError::Format(format!("cell (s={}, t={}) repeated", r.s, r.t)));
            }
            table.insert_cell(r.s, r.t, Cell { module, collision: r.collision })?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        let w = self.window();
        let doc = TableDoc {
            p: self.prime(),
            window: WindowDoc { t: [w.t_lo, w.t_hi], s: [0, w.s_max] },
            route: self.route(),
            cells: self.records(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self, SsError> {
        let doc: TableDoc = serde_json::from_str(text).map_err(format_err)?;
        if doc.window.s[0] != 0 {
            return Err(SsError::Format("window must start at s = 0".into()));
        }
        let window = Window::new(doc.window.t[0], doc.window.t[1], doc.window.s[1])?;
        Self::from_records(doc.p, window, doc.route, doc.cells)
    }

    /// Rows `s,t,module,collision` under a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SsError> {
        let mut w = csv::Writer::from_writer(out);
        for r in self.records() {
            w.serialize(r).map_err(format_err)?;
        }
        if self.cells().next().is_none() {
            w.write_record(["s", "t", "module", "collision"]).map_err(format_err)?;
        }
        w.flush().map_err(format_err)
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }

    /// CSV carries no header data, so prime, window and route are supplied.
    pub fn read_csv<R: Read>(
        input: R,
        p: u64,
        window: Window,
        route: TableRoute,
    ) -> Result<Self, SsError> {
        let mut r = csv::Reader::from_reader(input);
        let records = r
            .deserialize::<CellRecord>()
            .collect::<Result<Vec<_>, _>>()
            .map_err(format_err)?;
        Self::from_records(p, window, route, records)
    }
}
