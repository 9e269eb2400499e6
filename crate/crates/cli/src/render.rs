use clap::ValueEnum;
use stabcoh::ss::BigradedTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

pub fn pretty(t: &BigradedTable) -> String {
    let mut out = format!("p = {}, route {}, {}\n", t.prime(), t.route(), t.window());
    let mut any = false;
    for ((s, tt), cell) in t.cells() {
        any = true;
        let flag = if cell.collision { "  (collision)" } else { "" };
        out.push_str(&format!("  s={s:<2} t={tt:<4} {}{flag}\n", cell.module));
    }
    if !any {
        out.push_str("  all cells zero\n");
    }
    out
}

/// Writes the tables to stdout; several JSON tables form an array.
pub fn emit(tables: &[&BigradedTable], format: Format) {
    match format {
        Format::Pretty => {
            for t in tables {
                print!("{}", pretty(t));
            }
        }
        Format::Json if tables.len() == 1 => println!("{}", tables[0].to_json()),
        Format::Json => {
            let docs: Vec<String> = tables.iter().map(|t| t.to_json()).collect();
            println!("[\n{}\n]", docs.join(",\n"));
        }
        Format::Csv => {
            for t in tables {
                print!("{}", t.to_csv());
            }
        }
    }
}
