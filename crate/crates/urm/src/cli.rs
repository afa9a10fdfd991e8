use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use urm_core::bounds::{bounds_report, exact_value};
use urm_core::constructions::{
    best_construction, central_construction, mixed_construction, pair_construction, shift_construction,
    singleton_construction, trivial_construction, two_class_construction, ConstructedInstance,
};
use urm_core::oracle::{g_exact_search_with, p_k_search_with, ExactResult, SearchBudget};
use urm_core::zebra::{
    generate_minimal_puzzle, puzzle_to_multiset, solve_puzzle, Puzzle, MAX_SOLVE_M, MAX_SOLVE_N,
};
use urm_core::{Error, Multiset, Resolver, MAX_M};

use crate::formats::{
    from_json, parse_resolvable, to_json, BoundsRow, ExactDoc, InstanceDoc, PuzzleDoc, ResolutionDoc,
    SolutionDoc,
};

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_REGIME: u8 = 3;
pub const EXIT_MALFORMED: u8 = 4;
pub const EXIT_CAPACITY: u8 = 5;
pub const EXIT_INCONSISTENT: u8 = 6;

#[derive(Parser, Debug)]
#[command(
    name = "urm",
    version,
    about = "Uniquely resolvable multisets: constructions, resolution, bounds, puzzles"
)]
pub struct Cli {
    /// Output style. `structured` prints JSON documents.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Best,
    Trivial,
    Singletons,
    TwoClass,
    Pair,
    Central,
    Mixed,
    Shift,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a uniquely resolvable multiset.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Class size, for `--kind central`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Kind::Best)]
        kind: Kind,
    },
    /// Decide whether a multiset file (or `-` for stdin) resolves uniquely.
    Resolve {
        input: PathBuf,
        /// Number of classes. Defaults to the instance's `n`, else to the
        /// common element multiplicity.
        #[arg(long)]
        n: Option<usize>,
        /// Most witnesses to report.
        #[arg(long, default_value_t = 2)]
        limit: usize,
    },
    /// Lower, upper and exact values of g(n, m).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Bounds rows over ranges such as `--m 2-8 --n 1-20`.
    Table {
        #[arg(long, value_parser = parse_range)]
        m: (usize, usize),
        /// Defaults to `1` through `2^(m-1) - 1` for each `m`.
        #[arg(long, value_parser = parse_range)]
        n: Option<(usize, usize)>,
    },
    /// Exhaustive search for g(n, m).
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exhaustive search for P_k(m).
    Pk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Logic puzzles built from multisets.
    #[command(subcommand)]
    Zebra(ZebraCommand),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BudgetArgs {
    /// Search-tree node budget, e.g. `1e6`.
    #[arg(long, value_parser = parse_count)]
    pub max_nodes: Option<u64>,
    /// Uniqueness checks allowed.
    #[arg(long, value_parser = parse_count)]
    pub max_candidates: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub time_cap: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum ZebraCommand {
    /// Puzzle with the fewest rules the constructions allow.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve a puzzle file.
    Solve {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        limit: usize,
    },
    /// Compare a puzzle's rule count with n m - g(n, m).
    Check { input: PathBuf },
}

/// `A` or `A-B`, inclusive.
fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once('-') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// Positive integer, also written like `1e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return if v > 0 {
            Ok(v)
        } else {
            Err("must be positive".into())
        };
    }
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !(v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64) {
        return Err(format!("not a positive integer: {s}"));
    }
    Ok(v as u64)
}

/// Ground-set cap: [`MAX_M`], or lower if `URM_MAX_M` says so.
pub fn max_m_from_env() -> anyhow::Result<usize> {
    match std::env::var("URM_MAX_M") {
        Ok(v) => {
            let cap: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("URM_MAX_M must be an integer, got {v:?}")))?;
            Ok(cap.min(MAX_M))
        }
        Err(_) => Ok(MAX_M),
    }
}

fn check_cap(m: usize, cap: usize) -> anyhow::Result<()> {
    if m > cap {
        return Err(Error::Capacity(format!("m = {m} exceeds the cap of {cap}")).into());
    }
    Ok(())
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Regime(_) | Error::Domain(_) => EXIT_REGIME,
                Error::Malformed(_) => EXIT_MALFORMED,
                Error::Capacity(_) => EXIT_CAPACITY,
                Error::Inconsistent(_) => EXIT_INCONSISTENT,
            };
        }
    }
    EXIT_OTHER
}

/// Everything a command needs besides its flags.
pub struct Session {
    pub max_m: usize,
    /// Set by Ctrl-C; long searches stop and report their best so far.
    pub cancel: Arc<AtomicBool>,
}

impl Session {
    pub fn new(max_m: usize) -> Self {
        Self {
            max_m,
            cancel: Arc::new(AtomicBool::new(false)),
        }
    }
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn render<T: Serialize>(format: Format, doc: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Structured => to_json(doc),
        Format::Text => text(),
    }
}

fn classes_text(inst: &ConstructedInstance) -> String {
    let mut s = String::new();
    for (i, class) in inst.partition.classes().iter().enumerate() {
        let _ = write!(s, "class {}:", i + 1);
        for &j in class {
            let _ = write!(s, " {}", inst.ms.components()[j]);
        }
        s.push('\n');
    }
    s
}

fn construct(n: usize, m: usize, k: Option<usize>, kind: Kind) -> urm_core::Result<ConstructedInstance> {
    if k.is_some() && kind != Kind::Central {
        return Err(Error::Malformed("--k only applies to --kind central".into()));
    }
    match kind {
        Kind::Best => best_construction(n, m),
        Kind::Trivial => trivial_construction(n, m),
        Kind::Singletons if n == 1 => singleton_construction(m),
        Kind::Singletons => Err(Error::Regime(format!("singletons need n = 1, got n = {n}"))),
        Kind::TwoClass if n == 2 => two_class_construction(m),
        Kind::TwoClass => Err(Error::Regime(format!("two-class needs n = 2, got n = {n}"))),
        Kind::Pair => pair_construction(n, m),
        Kind::Central => {
            let k = k.ok_or_else(|| Error::Malformed("--kind central needs --k".into()))?;
            central_construction(n, m, k)
        }
        Kind::Mixed => mixed_construction(n, m),
        Kind::Shift => shift_construction(n, m),
    }
}

/// Class count implied by a balanced multiset.
fn infer_n(ms: &Multiset) -> anyhow::Result<usize> {
    let mult = ms.element_multiplicities();
    match mult.first() {
        Some(&n) if n > 0 && mult.iter().all(|&x| x == n) => Ok(n),
        _ => Err(Error::Malformed(format!(
            "cannot infer n: element multiplicities are {mult:?}; pass --n"
        ))
        .into()),
    }
}

fn budget(args: &BudgetArgs) -> anyhow::Result<SearchBudget> {
    let time_cap = match args.time_cap {
        Some(t) if !(t > 0.0 && t.is_finite()) => {
            return Err(Error::Malformed(format!("--time-cap must be positive, got {t}")).into())
        }
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    let b = SearchBudget {
        max_candidates: args.max_candidates.unwrap_or(u64::MAX),
        max_nodes: args.max_nodes.unwrap_or(u64::MAX),
        time_cap,
    };
    b.validate()?;
    Ok(b)
}

fn run_search(
    ctx: &Session,
    b: &SearchBudget,
    search: impl FnOnce(&mut dyn FnMut() -> bool) -> urm_core::Result<ExactResult>,
) -> anyhow::Result<ExactResult> {
    let deadline = b.time_cap.map(|t| Instant::now() + t);
    let cancel = Arc::clone(&ctx.cancel);
    let mut stop = move || cancel.load(Ordering::Relaxed) || deadline.is_some_and(|d| Instant::now() >= d);
    Ok(search(&mut stop)?)
}

fn exact_text(label: &str, r: &ExactResult) -> String {
    let mut s = format!(
        "{label} {} {}\nnodes {}, candidates {}\n",
        if r.exhausted { "=" } else { ">=" },
        r.value,
        r.stats.nodes,
        r.stats.candidates
    );
    s.push_str(if r.exhausted {
        "certified: search exhausted\n"
    } else {
        "not certified: budget or cancellation hit\n"
    });
    s.push_str(&classes_text(&r.witness));
    s
}

fn load_puzzle(path: &Path, ctx: &Session) -> anyhow::Result<Puzzle> {
    let doc: PuzzleDoc = from_json(&read_input(path)?)?;
    let pz = doc.to_puzzle()?;
    check_cap(pz.m, ctx.max_m)?;
    Ok(pz)
}

#[derive(Serialize)]
struct CheckDoc {
    n: usize,
    m: usize,
    rules: usize,
    multiset_size: usize,
    /// `rules = n m - multiset_size`: no rule is implied by the others.
    irredundant: bool,
    best_known: u64,
    exact_g: Option<u64>,
    /// `n m - g(n, m)` when `g` is known.
    minimum_rules: Option<usize>,
    /// Unique solution, when the puzzle fits the solver.
    unique: Option<bool>,
}

/// Runs one command and returns what it prints.
pub fn run(cli: &Cli, ctx: &Session) -> anyhow::Result<String> {
    let f = cli.format;
    let out = match &cli.command {
        Command::Construct { n, m, k, kind } => {
            check_cap(*m, ctx.max_m)?;
            let inst = construct(*n, *m, *k, *kind)?;
            render(f, &InstanceDoc::from_instance(&inst), || {
                format!(
                    "{} construction: n = {}, m = {}, {} components\n{}",
                    inst.provenance,
                    inst.n(),
                    inst.m(),
                    inst.size(),
                    classes_text(&inst)
                )
            })
        }
        Command::Resolve { input, n, limit } => {
            let (ms, doc_n) = parse_resolvable(&read_input(input)?)?;
            let n = match (n, doc_n) {
                (Some(n), _) => *n,
                (None, Some(n)) => n,
                (None, None) => infer_n(&ms)?,
            };
            let report = Resolver::new().with_max_m(ctx.max_m).enumerate(&ms, n, *limit)?;
            render(f, &ResolutionDoc::from_report(&report, n), || {
                let mut s = format!("{}\n", report.status);
                for (i, w) in report.witnesses.iter().enumerate() {
                    let _ = writeln!(s, "witness {}: {w}", i + 1);
                }
                let _ = writeln!(s, "nodes explored: {}", report.nodes_explored);
                s
            })
        }
        Command::Bounds { n, m } => {
            let row = BoundsRow::from(&bounds_report(*n, *m)?);
            render(f, &row, || {
                let mut s = format!("g({n}, {m}): lower {}, upper {}", row.lower, row.upper);
                if let Some(e) = row.exact {
                    let _ = write!(s, ", exact {e}");
                }
                if let Some(a) = row.lower_analytic {
                    let _ = write!(s, ", analytic lower {a:.3}");
                }
                let _ = write!(s, "\nregime {}\nsources {}\n", row.regime, row.sources.join(" "));
                s
            })
        }
        Command::Table { m, n } => {
            let mut rows = Vec::new();
            for mm in m.0..=m.1 {
                let (lo, hi) = match n {
                    Some(r) => *r,
                    None if mm >= 2 => (1, (1usize << (mm - 1)) - 1),
                    None => (1, 1),
                };
                for nn in lo.max(1)..=hi {
                    rows.push(BoundsRow::from(&bounds_report(nn, mm)?));
                }
            }
            render(f, &rows, || {
                let mut s = format!(
                    "{:>4} {:>3} {:>8} {:>8} {:>8}  {:<20} sources\n",
                    "n", "m", "lower", "upper", "exact", "regime"
                );
                for r in &rows {
                    let exact = r.exact.map_or_else(|| "-".to_string(), |e| e.to_string());
                    let _ = writeln!(
                        s,
                        "{:>4} {:>3} {:>8} {:>8} {:>8}  {:<20} {}",
                        r.n,
                        r.m,
                        r.lower,
                        r.upper,
                        exact,
                        r.regime,
                        r.sources.join(" ")
                    );
                }
                s
            })
        }
        Command::Exact { n, m, budget: args } => {
            check_cap(*m, ctx.max_m)?;
            let b = budget(args)?;
            let r = run_search(ctx, &b, |stop| g_exact_search_with(*n, *m, &b, stop))?;
            render(f, &ExactDoc::from(&r), || exact_text(&format!("g({n}, {m})"), &r))
        }
        Command::Pk { k, m, budget: args } => {
            check_cap(*m, ctx.max_m)?;
            let b = budget(args)?;
            let r = run_search(ctx, &b, |stop| p_k_search_with(*k, *m, &b, stop))?;
            render(f, &ExactDoc::from(&r), || exact_text(&format!("P_{k}({m})"), &r))
        }
        Command::Zebra(z) => run_zebra(z, f, ctx)?,
    };
    Ok(out)
}

fn run_zebra(cmd: &ZebraCommand, f: Format, ctx: &Session) -> anyhow::Result<String> {
    Ok(match cmd {
        ZebraCommand::Gen { n, m, seed } => {
            check_cap(*m, ctx.max_m)?;
            let pz = generate_minimal_puzzle(*n, *m, *seed)?;
            render(f, &PuzzleDoc::from_puzzle(&pz), || puzzle_text(&pz))
        }
        ZebraCommand::Solve { input, limit } => {
            let pz = load_puzzle(input, ctx)?;
            let sols = solve_puzzle(&pz, *limit)?;
            let docs: Vec<SolutionDoc> = sols.iter().map(|s| SolutionDoc::from_solution(&pz, s)).collect();
            render(f, &docs, || {
                let mut s = format!("{} solution(s)\n", docs.len());
                for (i, d) in docs.iter().enumerate() {
                    let _ = writeln!(s, "solution {}:", i + 1);
                    for (p, values) in d.people.iter().enumerate() {
                        let _ = writeln!(s, "  person {}: {}", p + 1, values.join(", "));
                    }
                }
                s
            })
        }
        ZebraCommand::Check { input } => {
            let pz = load_puzzle(input, ctx)?;
            let ms = puzzle_to_multiset(&pz)?;
            let nm = pz.n * pz.m;
            let exact_g = exact_value(pz.n, pz.m);
            let best_known = match exact_g {
                Some(g) => g,
                None => bounds_report(pz.n, pz.m)?.lower,
            };
            let unique = if pz.n <= MAX_SOLVE_N && pz.m <= MAX_SOLVE_M {
                Some(solve_puzzle(&pz, 2)?.len() == 1)
            } else {
                None
            };
            let doc = CheckDoc {
                n: pz.n,
                m: pz.m,
                rules: pz.rules.len(),
                multiset_size: ms.len(),
                irredundant: pz.rules.len() + ms.len() == nm,
                best_known,
                exact_g,
                minimum_rules: exact_g.map(|g| nm - g as usize),
                unique,
            };
            render(f, &doc, || {
                let mut s = format!(
                    "{} rules over {} people and {} categories; multiset of {} components\n",
                    doc.rules, doc.n, doc.m, doc.multiset_size
                );
                if !doc.irredundant {
                    s.push_str("some rules are implied by others\n");
                }
                match doc.minimum_rules {
                    Some(min) => {
                        let _ = writeln!(s, "minimum possible: {min} rules (n m - g = {nm} - {})", nm - min);
                    }
                    None => {
                        let _ = writeln!(
                            s,
                            "best known: {} rules (n m - {best_known})",
                            nm as u64 - best_known
                        );
                    }
                }
                match doc.unique {
                    Some(true) => s.push_str("unique solution\n"),
                    Some(false) => s.push_str("not uniquely solvable\n"),
                    None => s.push_str("too large to solve\n"),
                }
                s
            })
        }
    })
}

fn puzzle_text(pz: &Puzzle) -> String {
    let mut s = format!(
        "{} people, {} categories, {} rules (seed {})\n",
        pz.n,
        pz.m,
        pz.rules.len(),
        pz.seed
    );
    for c in &pz.categories {
        let _ = writeln!(s, "{}: {}", c.name, c.values.join(", "));
    }
    for r in &pz.rules {
        let _ = writeln!(
            s,
            "the person with {} has {}",
            pz.categories[r.cat_a].values[r.val_a], pz.categories[r.cat_b].values[r.val_b]
        );
    }
    s
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = max_m_from_env().and_then(|max_m| {
        let ctx = Session::new(max_m);
        let flag = Arc::clone(&ctx.cancel);
        // Only long searches poll the flag; a second Ctrl-C still kills us.
        ctrlc::set_handler(move || {
            if flag.swap(true, Ordering::Relaxed) {
                std::process::exit(130);
            }
        })
        .map_err(|e| anyhow!("installing the Ctrl-C handler: {e}"))?;
        let text = run(&cli, &ctx)?;
        emit(cli.output.as_deref(), &text)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
