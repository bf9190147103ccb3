//! `wmilnor`: welded Milnor invariants from the command line.
//!
//! Inputs are file paths, `-` for stdin, or inline text such as
//! `"1: U1+ / 2: O1+"`. Results go to stdout, one-line diagnostics to stderr.
//! Exit status is 0 on success, 2 on any error; `compare` exits 1 when the
//! links are distinct.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use welded_milnor::action::{action, KReducedAction};
use welded_milnor::arrows::{parse_realizer, realize_sorted};
use welded_milnor::gauss::{applicable_moves, parse_code, Code, LinkCode, StringLinkCode};
use welded_milnor::hall::{factorize_in, generate_basic};
use welded_milnor::invariants::{
    k_equal, link_vanishing_at, milnor, milnor_table, table_from_longitudes, InvariantTable, MilnorIndex, Mode,
};
use welded_milnor::{Integer, TruncatedSeries, Word};

#[derive(Parser)]
#[command(name = "wmilnor", version, about = "Welded Milnor invariants of string links and links")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Table,
    Longitude,
    Action,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Table => Mode::Table,
            ModeArg::Longitude => Mode::Longitude,
            ModeArg::Action => Mode::Action,
        }
    }
}

#[derive(Args)]
struct TableArgs {
    /// Keep indices with r(I) <= k.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Longest index length; defaults to nk.
    #[arg(long)]
    max_len: Option<usize>,
    /// Total truncation degree of the longitude series; defaults to nk.
    #[arg(long)]
    degree: Option<usize>,
    /// Read the input as a closed link and cut it at the first gap.
    #[arg(long)]
    closed: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Nonzero invariants with r(I) <= k, or the values at given indices.
    Milnor {
        input: String,
        /// An index such as `2,3,1`; repeatable.
        #[arg(long = "index", short = 'I')]
        indices: Vec<String>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// The r(I) <= k table.
    Table {
        input: String,
        #[command(flatten)]
        table: TableArgs,
        /// Print zero entries too.
        #[arg(long)]
        all: bool,
    },
    /// Decide whether two codes share every invariant with r(I) <= k.
    Compare {
        a: String,
        b: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Table)]
        mode: ModeArg,
        #[arg(long)]
        closed: bool,
    },
    /// The k-reduced free action.
    Action {
        input: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        closed: bool,
    },
    /// Build a sorted string link from `i: WORD` lines.
    Realize {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Basic commutators, or the Hall exponents of a word.
    Hall {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        max_len: usize,
        /// Also print the Hall exponents of this word (e.g. `a1 A2`).
        #[arg(long, alias = "word")]
        factor: Option<String>,
    },
    /// List applicable R1/R2/OC deletions and swaps, or apply one.
    Moves {
        input: String,
        /// Apply the move with this 1-based number and print the result.
        #[arg(long)]
        apply: Option<usize>,
    },
    /// Whether every r(I) <= k invariant of a closed link vanishes.
    LinkVanishing {
        input: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Accepted for symmetry; the input is always read as closed.
        #[arg(long)]
        closed: bool,
        /// Comma-separated gap index per component.
        #[arg(long)]
        basepoints: Option<String>,
    },
}

type CliResult<T> = Result<T, String>;

fn read_input(arg: &str) -> CliResult<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        return Ok(s);
    }
    match fs::read_to_string(arg) {
        Ok(s) => Ok(s),
        Err(_) if arg.contains(':') => Ok(arg.to_string()),
        Err(e) => Err(format!("{arg}: {e}")),
    }
}

fn load_code(arg: &str, closed: bool) -> CliResult<StringLinkCode> {
    let text = read_input(arg)?;
    match parse_code(&text, closed).map_err(|e| format!("{arg}: {e}"))? {
        Code::StringLink(c) => Ok(c),
        Code::Link(l) => l.cut(&vec![0; l.component_count()]).map_err(|e| e.to_string()),
    }
}

fn int_json(c: &Integer) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

fn series_json(s: &TruncatedSeries) -> Value {
    Value::Array(
        s.terms()
            .iter()
            .map(|(m, c)| json!({ "monomial": m.indices().collect::<Vec<_>>(), "coefficient": int_json(c) }))
            .collect(),
    )
}

fn print_json(v: Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
}

fn compute_table(code: &StringLinkCode, t: &TableArgs) -> CliResult<InvariantTable> {
    let n = code.component_count();
    let max_len = t.max_len.unwrap_or(n * t.k);
    match t.degree {
        None => milnor_table(code, t.k, max_len).map_err(|e| e.to_string()),
        Some(q) => {
            let lams = code.longitude_series(q).map_err(|e| e.to_string())?;
            table_from_longitudes(&lams, t.k, max_len.min(q + 1)).map_err(|e| e.to_string())
        }
    }
}

fn emit_table(table: &InvariantTable, all: bool, format: Format) {
    let rows: Vec<(&MilnorIndex, &Integer)> = table.entries().iter().filter(|(_, v)| all || !v.is_zero()).collect();
    match format {
        Format::Text => {
            for (i, v) in rows {
                println!("{i} = {v}");
            }
        }
        Format::Json => print_json(json!({
            "schema": 1,
            "k": table.k(),
            "max_len": table.max_len(),
            "entries": rows.iter().map(|(i, v)| json!({ "I": i.indices(), "mu": int_json(v) })).collect::<Vec<_>>(),
        })),
    }
}

fn cmd_milnor(input: &str, indices: &[String], t: &TableArgs, format: Format) -> CliResult<()> {
    let code = load_code(input, t.closed)?;
    if indices.is_empty() {
        emit_table(&compute_table(&code, t)?, false, format);
        return Ok(());
    }
    let n = code.component_count();
    let mut rows = Vec::new();
    for s in indices {
        let parsed: MilnorIndex = s.parse().map_err(|e| format!("index `{s}`: {e}"))?;
        let idx = MilnorIndex::new(parsed.indices().to_vec(), n).map_err(|e| e.to_string())?;
        let v = milnor(&code, &idx).map_err(|e| e.to_string())?;
        rows.push((idx, v));
    }
    match format {
        Format::Text => {
            for (i, v) in &rows {
                println!("{i} = {v}");
            }
        }
        Format::Json => print_json(json!({
            "schema": 1,
            "entries": rows.iter().map(|(i, v)| json!({ "I": i.indices(), "mu": int_json(v) })).collect::<Vec<_>>(),
        })),
    }
    Ok(())
}

fn cmd_compare(a: &str, b: &str, k: usize, mode: ModeArg, closed: bool, format: Format) -> CliResult<bool> {
    let la = load_code(a, closed)?;
    let lb = load_code(b, closed)?;
    let c = k_equal(&la, &lb, k, mode.into()).map_err(|e| e.to_string())?;
    match format {
        Format::Text => {
            println!("{}", if c.equal { "equal" } else { "distinct" });
            if let Some(w) = &c.witness {
                println!("witness {w}");
            }
        }
        Format::Json => print_json(json!({
            "schema": 1,
            "k": k,
            "equal": c.equal,
            "witness": c.witness.as_ref().map(|w| w.indices().to_vec()),
        })),
    }
    Ok(c.equal)
}

fn cmd_action(input: &str, k: usize, closed: bool, format: Format) -> CliResult<()> {
    let code = load_code(input, closed)?;
    let phi: KReducedAction = action(&code, k).map_err(|e| e.to_string())?;
    match format {
        Format::Text => {
            println!("k = {k}");
            if phi.is_identity() {
                println!("identity");
                return Ok(());
            }
            for (i, r) in phi.residues().iter().enumerate() {
                println!("lambda{}:", i + 1);
                for line in r.to_string().lines() {
                    println!("  {line}");
                }
            }
            for (i, g) in phi.images().iter().enumerate() {
                println!("image a{}:", i + 1);
                for line in g.to_string().lines() {
                    println!("  {line}");
                }
            }
        }
        Format::Json => print_json(json!({
            "schema": 1,
            "k": k,
            "identity": phi.is_identity(),
            "residues": phi.residues().iter().map(series_json).collect::<Vec<_>>(),
            "images": phi.images().iter().map(series_json).collect::<Vec<_>>(),
        })),
    }
    Ok(())
}

fn cmd_realize(input: &str, output: Option<&PathBuf>, format: Format) -> CliResult<()> {
    let words = parse_realizer(&read_input(input)?).map_err(|e| format!("{input}: {e}"))?;
    let code = realize_sorted(&words).map_err(|e| e.to_string())?;
    let text = code.to_string();
    if let Some(path) = output {
        fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    match (format, output) {
        (Format::Json, _) => print_json(json!({ "schema": 1, "crossings": code.crossing_count(), "code": text })),
        (Format::Text, None) => print!("{text}"),
        (Format::Text, Some(_)) => {}
    }
    Ok(())
}

fn cmd_hall(rank: usize, max_len: usize, factor: Option<&str>, format: Format) -> CliResult<()> {
    let basis = generate_basic(rank, max_len).map_err(|e| e.to_string())?;
    let factored = match factor {
        None => None,
        Some(text) => {
            let w = Word::parse(rank, text).map_err(|e| e.to_string())?;
            Some(factorize_in(&basis, &w).map_err(|e| e.to_string())?)
        }
    };
    match format {
        Format::Text => {
            print!("{basis}");
            if let Some(f) = &factored {
                let es: Vec<String> = f.exponents.iter().map(ToString::to_string).collect();
                println!("exponents {}", es.join(" "));
                println!("remainder certified {}", f.remainder_certified);
            }
        }
        Format::Json => {
            let mut v = json!({
                "schema": 1,
                "rank": rank,
                "basis": basis.elements().iter().map(|c| json!({
                    "ordinal": c.ordinal + 1,
                    "length": c.length,
                    "bracket": basis.bracket_string(c.ordinal),
                })).collect::<Vec<_>>(),
            });
            if let Some(f) = &factored {
                v["exponents"] = json!(f.exponents);
                v["remainder_certified"] = json!(f.remainder_certified);
            }
            print_json(v);
        }
    }
    Ok(())
}

fn cmd_moves(input: &str, apply: Option<usize>, format: Format) -> CliResult<()> {
    let code = load_code(input, false)?;
    let moves = applicable_moves(&code);
    if let Some(n) = apply {
        let mv = n
            .checked_sub(1)
            .and_then(|i| moves.get(i))
            .ok_or_else(|| format!("no move number {n}; {} available", moves.len()))?;
        let out = code.apply_move(mv).map_err(|e| e.to_string())?;
        match format {
            Format::Text => print!("{out}"),
            Format::Json => print_json(json!({ "schema": 1, "move": mv.to_string(), "code": out.to_string() })),
        }
        return Ok(());
    }
    match format {
        Format::Text => {
            for (i, m) in moves.iter().enumerate() {
                println!("{} {m}", i + 1);
            }
        }
        Format::Json => print_json(json!({
            "schema": 1,
            "moves": moves.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
    }
    Ok(())
}

fn cmd_link_vanishing(input: &str, k: usize, basepoints: Option<&str>, format: Format) -> CliResult<()> {
    let text = read_input(input)?;
    let link: LinkCode = text.parse().map_err(|e| format!("{input}: {e}"))?;
    let points = match basepoints {
        None => vec![0; link.component_count()],
        Some(s) => s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad basepoint `{p}`")))
            .collect::<CliResult<Vec<_>>>()?,
    };
    let v = link_vanishing_at(&link, k, &points).map_err(|e| e.to_string())?;
    match format {
        Format::Text => println!("{}", if v { "vanishing" } else { "not vanishing" }),
        Format::Json => print_json(json!({ "schema": 1, "k": k, "vanishing": v })),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let f = cli.format;
    match cli.command {
        Command::Milnor { input, indices, table } => cmd_milnor(&input, &indices, &table, f)?,
        Command::Table { input, table, all } => {
            let code = load_code(&input, table.closed)?;
            emit_table(&compute_table(&code, &table)?, all, f);
        }
        Command::Compare { a, b, k, mode, closed } => {
            let equal = cmd_compare(&a, &b, k, mode, closed, f)?;
            return Ok(if equal { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Action { input, k, closed } => cmd_action(&input, k, closed, f)?,
        Command::Realize { input, output } => cmd_realize(&input, output.as_ref(), f)?,
        Command::Hall { rank, max_len, factor } => cmd_hall(rank, max_len, factor.as_deref(), f)?,
        Command::Moves { input, apply } => cmd_moves(&input, apply, f)?,
        Command::LinkVanishing { input, k, closed: _, basepoints } => {
            cmd_link_vanishing(&input, k, basepoints.as_deref(), f)?
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
