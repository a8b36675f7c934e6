//! The `lawforge` command line.
//!
//! Exit codes: 0 success, 1 a law failed (or a shape cannot be built),
//! 2 usage, input or parse error.

mod bench;
mod check;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lawforge_core::{parse_schema, parse_type_expr, LawId, PrimType, Schema, TypeExpr};

pub use report::{ReportDocument, Summary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lawforge", version, about = "Generic instances and bounded law checking for algebraic data types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a schema, then print it normalized.
    Parse { file: PathBuf },
    /// Print the representation shape of a type.
    Rep(RepArgs),
    /// Derive instances and check their laws.
    Check(CheckArgs),
    /// Print the number of cases a hand-written proof of a law needs.
    Cases {
        #[arg(long, value_parser = parse_law)]
        law: LawId,
        #[arg(long)]
        constructors: u32,
    },
    /// Compare derived and hand-written instances on random inputs.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct RepArgs {
    file: PathBuf,
    #[arg(long = "type")]
    type_name: String,
    /// Comma-separated ground type arguments.
    #[arg(long)]
    args: Option<String>,
    /// Print the shape over the last parameter instead.
    #[arg(long)]
    rep1: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum ConceptArg {
    Eq,
    Ord,
    Semigroup,
    Monoid,
    Functor,
    Iso,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum ElementArg {
    Int,
    Bool,
    Char,
    Unit,
}

impl From<ElementArg> for PrimType {
    fn from(e: ElementArg) -> PrimType {
        match e {
            ElementArg::Int => PrimType::Int,
            ElementArg::Bool => PrimType::Bool,
            ElementArg::Char => PrimType::Char,
            ElementArg::Unit => PrimType::Unit,
        }
    }
}

#[derive(Debug, Args)]
pub(crate) struct CheckArgs {
    file: PathBuf,
    /// Type to check; every declaration when omitted.
    #[arg(long = "type")]
    type_name: Option<String>,
    /// Comma-separated ground type arguments (default: Int for each).
    #[arg(long)]
    args: Option<String>,
    #[arg(long, value_enum, default_value = "all")]
    concept: ConceptArg,
    /// Maximum constructor nesting of enumerated values (default 3).
    #[arg(long)]
    depth: Option<usize>,
    /// Inclusive integer range such as `-2..2`.
    #[arg(long, value_parser = parse_int_range, allow_hyphen_values = true)]
    int_domain: Option<RangeInclusive<i64>>,
    /// Add NaN to the Double domain.
    #[arg(long)]
    include_nan: bool,
    /// Cases checked per law before the search stops (default 200000).
    #[arg(long)]
    max_cases: Option<u64>,
    /// Element type substituted for the mapped parameter in functor laws.
    #[arg(long, value_enum, default_value = "bool")]
    element: ElementArg,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Include per-law wall time in the JSON report.
    #[arg(long)]
    timings: bool,
    /// Threads per law; results do not depend on it.
    #[arg(long, env = "LAWFORGE_WORKERS", default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Args)]
pub(crate) struct BenchArgs {
    /// Optional schema file; built-in types are always available.
    file: Option<PathBuf>,
    #[arg(long = "type")]
    type_name: String,
    #[arg(long)]
    args: Option<String>,
    #[arg(long, value_enum, default_value = "ord")]
    concept: ConceptArg,
    /// Number of random pairs.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum constructor nesting of generated values.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, value_parser = parse_int_range, allow_hyphen_values = true)]
    int_domain: Option<RangeInclusive<i64>>,
}

fn parse_law(s: &str) -> Result<LawId, String> {
    LawId::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = LawId::ALL.iter().map(|l| l.name()).collect();
        format!("unknown law `{s}` (one of {})", names.join(", "))
    })
}

pub(crate) fn parse_int_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("bad lower bound `{a}`: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("bad upper bound `{b}`: {e}"))?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    if b.abs_diff(a) >= 4096 {
        return Err(format!("range `{s}` is too wide to enumerate"));
    }
    Ok(a..=b)
}

/// Errors that end a command, with the exit code they map to.
#[derive(Debug)]
pub(crate) struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    pub(crate) fn fail(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_FAIL, message: message.into() }
    }
}

pub(crate) type CmdResult = Result<i32, Failure>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Parse { file } => cmd_parse(&file, out),
        Command::Rep(a) => cmd_rep(&a, out),
        Command::Check(a) => check::cmd_check(&a, out),
        Command::Cases { law, constructors } => {
            let _ = writeln!(out, "{}", lawforge_core::proof_case_count(law, constructors));
            Ok(EXIT_OK)
        }
        Command::Bench(a) => bench::cmd_bench(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "lawforge: {}", f.message);
            f.code
        }
    }
}

pub(crate) fn load_schema(path: &Path) -> Result<Schema, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_schema(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

/// Splits a comma-separated argument list at top-level commas.
pub(crate) fn parse_args_list(text: &str, schema: &Schema) -> Result<Vec<TypeExpr>, Failure> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut current));
                continue;
            }
            _ => {}
        }
        current.push(c);
    }
    parts.push(current);
    if parts.len() == 1 && parts[0].trim().is_empty() {
        return Ok(Vec::new());
    }
    parts
        .iter()
        .map(|p| parse_type_expr(p.trim(), schema).map_err(|e| Failure::usage(format!("--args `{}`: {e}", p.trim()))))
        .collect()
}

/// The ground arguments for `decl`: explicit ones, or `Int` for each
/// parameter.
pub(crate) fn resolve_args(schema: &Schema, name: &str, args: Option<&str>) -> Result<Vec<TypeExpr>, Failure> {
    let decl = schema.decl(name).map_err(|e| Failure::usage(e.to_string()))?;
    match args {
        Some(text) => parse_args_list(text, schema),
        None => Ok(vec![TypeExpr::int(); decl.param_count()]),
    }
}

fn cmd_parse(file: &Path, out: &mut dyn Write) -> CmdResult {
    let schema = load_schema(file)?;
    let _ = write!(out, "{}", schema.pretty());
    Ok(EXIT_OK)
}

fn cmd_rep(a: &RepArgs, out: &mut dyn Write) -> CmdResult {
    let schema = load_schema(&a.file)?;
    let decl = schema.decl(&a.type_name).map_err(|e| Failure::usage(e.to_string()))?;
    let shape = if a.rep1 {
        let shape = lawforge_core::build_rep1(decl).map_err(|e| match e {
            lawforge_core::RepError::UnsupportedOccurrence { .. } => Failure::fail(e.to_string()),
            other => Failure::usage(other.to_string()),
        })?;
        match &a.args {
            None => shape,
            Some(text) => {
                let args = parse_args_list(text, &schema)?;
                let prefix = args.get(..decl.param_count() - 1).unwrap_or(&args);
                if prefix.len() + 1 != decl.param_count() {
                    return Err(Failure::usage(format!(
                        "`{}` takes {} argument(s) before the mapped parameter",
                        decl.name,
                        decl.param_count() - 1
                    )));
                }
                shape.instantiate(prefix).map_err(|e| Failure::usage(e.to_string()))?
            }
        }
    } else {
        let args = resolve_args(&schema, &a.type_name, a.args.as_deref())?;
        lawforge_core::build_rep(decl, &args).map_err(|e| Failure::usage(e.to_string()))?
    };
    let _ = writeln!(out, "{shape}");
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_ranges() {
        assert_eq!(parse_int_range("-2..2").unwrap(), -2..=2);
        assert_eq!(parse_int_range("0..0").unwrap(), 0..=0);
        assert!(parse_int_range("3..1").is_err());
        assert!(parse_int_range("1-2").is_err());
        assert!(parse_int_range("0..100000").is_err());
    }

    #[test]
    fn args_split_at_top_level_commas() {
        let s = Schema::with_builtins();
        let args = parse_args_list("Maybe Int, (Either Int Bool),Bool", &s).unwrap();
        let text: Vec<String> = args.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["Maybe Int", "Either Int Bool", "Bool"]);
        assert!(parse_args_list("", &s).unwrap().is_empty());
        assert!(parse_args_list("Maybe", &s).is_err());
    }
}
