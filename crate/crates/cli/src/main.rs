//! `stabcoh`: derived completion functors, cohomology of `Zp^x` with weight
//! coefficients, and the derived-completion spectral sequence.

mod render;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stabcoh::cohomology::{BruteConfig, PrecisionConfig};
use stabcoh::lfunctor::ls;
use stabcoh::ss::{self, BigradedTable, RouteTable, Window};
use stabcoh::ModuleExpr;

use render::Format;

#[derive(Parser)]
#[command(name = "stabcoh", version, about)]
struct Cli {
    /// Trace precision certificates on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply L_s to a module expression.
    L {
        #[arg(long, default_value_t = 0)]
        s: u32,
        /// Prime for expressions such as `Zp` that do not name one.
        #[arg(long)]
        p: Option<u64>,
        expr: String,
    },
    /// Compute H^s_c(Zp^x, E_t) by one or more routes.
    Cohomology {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated: structured, brute.
        #[arg(long, value_delimiter = ',', default_value = "structured")]
        route: Vec<RouteArg>,
    },
    /// Run the spectral sequence on the tabulated Ext input (p = 2).
    SsRun {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print a tabulated table (p = 2).
    Table {
        #[command(flatten)]
        run: RunArgs,
        /// Continuous cohomology H^s_c(Zp^x, E_t)
        #[arg(long, conflicts_with = "hovey_sadofsky", required_unless_present = "hovey_sadofsky")]
        golden: bool,
        /// The Ext input of the spectral sequence
        #[arg(long)]
        hovey_sadofsky: bool,
    },
    /// Compare the spectral sequence, structured and brute routes with the
    /// golden table; exit 1 on any disagreement.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Replace the golden cell at `s,t` by a wrong value.
        #[arg(long, value_name = "S,T")]
        inject_fault: Option<String>,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Internal degree `t` or range `lo:hi`.
    #[arg(long, default_value = "-48:48", allow_hyphen_values = true)]
    t: String,
    #[arg(long, default_value_t = 5)]
    smax: u32,
    #[arg(long, default_value_t = PrecisionConfig::default().max)]
    precision_max: u32,
    /// Dense entries allowed in one bar-complex computation.
    #[arg(long, default_value_t = BruteConfig::default().budget)]
    bar_budget: usize,
    /// Highest quotient level (Z/p^r)^x tried by the brute route.
    #[arg(long, default_value_t = BruteConfig::default().max_level)]
    max_level: u32,
    /// Highest coefficient precision Z/p^N tried by the brute route.
    #[arg(long, default_value_t = BruteConfig::default().max_precision)]
    brute_precision_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Whether the `s >= 2, t even` row includes `t = 0`.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    t0_even_row: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Structured,
    Brute,
}

/// Failure classes, one per exit code.
enum Failure {
    Usage(String),
    Disagreement(String),
    Uncertified(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Disagreement(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Uncertified(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Disagreement(m) | Failure::Uncertified(m) => m,
        }
    }
}

impl From<ss::SsError> for Failure {
    fn from(e: ss::SsError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl RunArgs {
    fn window(&self) -> Result<Window, Failure> {
        let bad = || Failure::Usage(format!("--t expects T or LO:HI, got {:?}", self.t));
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
        let (lo, hi) = match self.t.split_once(':') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let t = parse(&self.t)?;
                (t, t)
            }
        };
        Ok(Window::new(lo, hi, self.smax)?)
    }

    fn precision(&self) -> PrecisionConfig {
        PrecisionConfig { max: self.precision_max, ..PrecisionConfig::default() }
    }

    fn brute(&self) -> BruteConfig {
        BruteConfig {
            budget: self.bar_budget,
            max_level: self.max_level,
            max_precision: self.brute_precision_max,
        }
    }

    fn check(&self) -> Result<(), Failure> {
        if !is_prime(self.p) {
            return Err(Failure::Usage(format!("{} is not prime", self.p)));
        }
        if self.precision_max == 0 || self.bar_budget == 0 || self.brute_precision_max == 0 {
            return Err(Failure::Usage("budgets must be positive".into()));
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn lfunctor(s: u32, p: Option<u64>, expr: &str) -> Result<(), Failure> {
    let m = ModuleExpr::parse(expr, p).map_err(|e| {
        Failure::Usage(format!("{e}\n  {expr}\n  {}^", " ".repeat(e.position)))
    })?;
    println!("{}", ls(&m, s));
    Ok(())
}

fn uncertified(route: &RouteTable) -> Option<Failure> {
    let c = route.uncovered.first()?;
    Some(Failure::Uncertified(format!(
        "{} route: cell (s={}, t={}) not certified: {}",
        route.table.route(),
        c.s,
        c.t,
        c.error
    )))
}

fn cohomology(run: &RunArgs, routes: &[RouteArg]) -> Result<(), Failure> {
    run.check()?;
    let window = run.window()?;
    let mut routes = routes.to_vec();
    routes.dedup();
    if routes.len() > 1 && run.format == Format::Csv {
        return Err(Failure::Usage("csv output holds one route".into()));
    }
    let tables: Vec<RouteTable> = routes
        .iter()
        .map(|r| match r {
            RouteArg::Structured => ss::structured_table(run.p, window, run.precision()),
            RouteArg::Brute => ss::brute_table(run.p, window, run.brute()),
        })
        .collect();
    let plain: Vec<&BigradedTable> = tables.iter().map(|r| &r.table).collect();
    render::emit(&plain, run.format);
    if let Some(f) = tables.iter().find_map(uncertified) {
        return Err(f);
    }
    for pair in tables.windows(2) {
        let diff = ss::compare_tables(&pair[0].table, &pair[1].table)?;
        if let Some(d) = diff.first() {
            return Err(Failure::Disagreement(format!("routes disagree at {d}")));
        }
    }
    Ok(())
}

fn require_two(run: &RunArgs) -> Result<(), Failure> {
    if run.p != 2 {
        return Err(Failure::Usage(format!("tables are only known at p = 2, not {}", run.p)));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::L { s, p, expr } => lfunctor(s, p, &expr),
        Command::Cohomology { run, route } => cohomology(&run, &route),
        Command::SsRun { run } => {
            require_two(&run)?;
            let t = ss::ss_table(run.window()?, run.t0_even_row)?;
            render::emit(&[&t], run.format);
            Ok(())
        }
        Command::Table { run, golden, .. } => {
            require_two(&run)?;
            let w = run.window()?;
            let t = if golden {
                ss::golden_table(2, w, run.t0_even_row)?
            } else {
                ss::hovey_sadofsky_table(2, w, run.t0_even_row)?
            };
            render::emit(&[&t], run.format);
            Ok(())
        }
        Command::Verify { run, inject_fault } => {
            require_two(&run)?;
            run.check()?;
            let fault = inject_fault.as_deref().map(verify::parse_cell).transpose()?;
            verify::verify(&run, fault)
        }
    }
}

fn threads() -> Option<usize> {
    std::env::var("STABCOH_THREADS").ok()?.parse().ok().filter(|&n| n > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();
    if let Some(n) = threads() {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
