//! Command-line frontend.
//!
//! Exit status: 0 success, 1 expectation failure, 2 usage or parse error,
//! 3 search size out of range.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::claims::{
    check_claim, claim_registry, default_budget, get_claim, size_limit, ClaimsReport,
};
use crate::classes::{check_proper, classify_proper, is_member, registry};
use crate::core::{Claim, ClaimStatus, EvalResult, PropSet, PropertyId, Table};
use crate::corpus::{load_corpus, load_corpus_from, run_regression};
use crate::io::{emit_table, parse_any, write_record, Format};
use crate::props::{eval_all, eval_property};
use crate::search::{
    census_filtered, enumerate, find_minimal_model, map_units, BaseConstraint, CensusReport,
    ModelQuery, SearchError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXPECTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIZE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "impalg",
    version,
    about = "Check, classify, count and search finite implication algebras"
)]
pub struct Cli {
    /// Worker threads for searches.
    #[arg(long, global = true, env = "ALG_JOBS")]
    pub jobs: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Suppress diagnostics and timings on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate properties on a table.
    Check {
        file: PathBuf,
        /// Comma-separated property keys (default: all).
        #[arg(long, value_delimiter = ',')]
        props: Vec<String>,
    },
    /// List the classes a table belongs to.
    Classify {
        file: PathBuf,
        /// Also report proper membership with the forbidden-property verdicts.
        #[arg(long)]
        proper: bool,
    },
    /// Stream every table of a size.
    Enumerate {
        #[command(flatten)]
        space: Space,
        /// Comma-separated properties every table must satisfy.
        #[arg(long, value_delimiter = ',')]
        filter: Vec<String>,
        /// Print only the number of tables.
        #[arg(long)]
        count_only: bool,
        /// Write the stream to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count members and proper members of every class.
    Census {
        #[command(flatten)]
        space: Space,
        /// Comma-separated properties every counted table must satisfy.
        #[arg(long, value_delimiter = ',')]
        filter: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Structured census report to compare against.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Check the registered claims.
    Claims {
        #[command(subcommand)]
        action: ClaimsAction,
    },
    /// Work with the example corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Smallest table in a class.
    Find {
        #[arg(long)]
        class: String,
        #[arg(long)]
        proper: bool,
        #[arg(long)]
        max_size: usize,
        /// Extra comma-separated properties the table must satisfy.
        #[arg(long, value_delimiter = ',')]
        extra: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct Space {
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value = "ANY")]
    pub base: BaseConstraint,
}

#[derive(Debug, Subcommand)]
pub enum ClaimsAction {
    /// Search for counterexamples to theorem claims.
    Verify(ClaimArgs),
    /// Search for counterexamples establishing non-implications.
    Refute(ClaimArgs),
    /// List the registered claims.
    List,
}

#[derive(Debug, Args)]
pub struct ClaimArgs {
    /// Only this claim.
    #[arg(long)]
    pub claim: Option<String>,
    /// Largest table size to search (capped per claim when no claim is named).
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Structured report whose outcomes must be reproduced.
    #[arg(long)]
    pub expect: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// Recompute every entry and report disagreements.
    Test {
        /// Directory with manifest.toml (default: the built-in corpus).
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// List entry ids.
    List,
}

/// A failure that ends the command with a specific exit status.
struct Fail(i32, String);

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Fail {
        Fail(EXIT_USAGE, e.to_string())
    }
}

impl From<SearchError> for Fail {
    fn from(e: SearchError) -> Fail {
        let code = match e {
            SearchError::SizeTooLarge(_) | SearchError::NeedsPruning => EXIT_SIZE,
            _ => EXIT_USAGE,
        };
        Fail(code, e.to_string())
    }
}

struct Ctx<'a> {
    jobs: usize,
    format: OutputFormat,
    quiet: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn note(&mut self, msg: &str) {
        if !self.quiet {
            let _ = writeln!(self.err, "{msg}");
        }
    }

    fn structured(&self) -> bool {
        self.format == OutputFormat::Structured
    }
}

/// Parses `std::env::args` and runs; returns the exit status.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(cli, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs a parsed command against the given streams.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let jobs = cli
        .jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    let mut ctx = Ctx {
        jobs,
        format: cli.format,
        quiet: cli.quiet,
        out,
        err,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<i32, Fail> {
    match cmd {
        Command::Check { file, props } => cmd_check(&file, &props, ctx),
        Command::Classify { file, proper } => cmd_classify(&file, proper, ctx),
        Command::Enumerate {
            space,
            filter,
            count_only,
            out,
        } => cmd_enumerate(&space, &filter, count_only, out.as_deref(), ctx),
        Command::Census {
            space,
            filter,
            out,
            expect,
        } => cmd_census(&space, &filter, out.as_deref(), expect.as_deref(), ctx),
        Command::Claims { action } => cmd_claims(action, ctx),
        Command::Corpus { action } => cmd_corpus(action, ctx),
        Command::Find {
            class,
            proper,
            max_size,
            extra,
        } => cmd_find(&class, proper, max_size, &extra, ctx),
    }
}

fn parse_props(list: &[String]) -> Result<Vec<PropertyId>, Fail> {
    list.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<PropertyId>()
                .map_err(|e| Fail(EXIT_USAGE, e.to_string()))
        })
        .collect()
}

fn read_table(path: &Path, ctx: &mut Ctx) -> Result<Table, Fail> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let parsed =
        parse_any(&text).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        ctx.note(&format!("warning: {}: {w}", path.display()));
    }
    Ok(parsed.table)
}

fn eval_json(t: &Table, r: &EvalResult) -> Value {
    json!({
        "property": r.property.key(),
        "applicable": r.applicable,
        "satisfied": r.satisfied,
        "witness": r.witness.map(|w| w.vars().iter().map(|&e| t.name(e).to_string()).collect::<Vec<_>>()),
    })
}

fn print_json(ctx: &mut Ctx, v: &Value) -> Result<(), Fail> {
    writeln!(
        ctx.out,
        "{}",
        serde_json::to_string(v).expect("serializable")
    )?;
    Ok(())
}

fn cmd_check(file: &Path, props: &[String], ctx: &mut Ctx) -> Result<i32, Fail> {
    let t = read_table(file, ctx)?;
    let mut list = parse_props(props)?;
    if list.is_empty() {
        list = PropertyId::ALL.to_vec();
    }
    let results: Vec<EvalResult> = list.iter().map(|&p| eval_property(&t, p)).collect();
    if ctx.structured() {
        let v: Vec<Value> = results.iter().map(|r| eval_json(&t, r)).collect();
        print_json(ctx, &Value::Array(v))?;
    } else {
        for r in &results {
            writeln!(ctx.out, "{}", r.describe(&t))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_classify(file: &Path, proper: bool, ctx: &mut Ctx) -> Result<i32, Fail> {
    let t = read_table(file, ctx)?;
    let sig = eval_all(&t);
    let member: Vec<&str> = registry()
        .defs()
        .iter()
        .filter(|d| is_member(&sig, d))
        .map(|d| d.id)
        .collect();
    let propers = classify_proper(&sig);
    if ctx.structured() {
        let mut v = json!({ "member": member });
        if proper {
            let mut details = Vec::new();
            for d in registry()
                .defs()
                .iter()
                .filter(|d| d.proper_forbidden.is_some() && is_member(&sig, d))
            {
                let rep = check_proper(&t, d.id).expect("registered class with proper variant");
                details.push(json!({
                    "class": d.id,
                    "proper": rep.is_proper,
                    "forbidden": rep.forbidden.iter().map(|r| eval_json(&t, r)).collect::<Vec<_>>(),
                }));
            }
            v["proper"] = json!(propers);
            v["details"] = Value::Array(details);
        }
        print_json(ctx, &v)?;
        return Ok(EXIT_OK);
    }
    writeln!(ctx.out, "member ({}): {}", member.len(), member.join(", "))?;
    if proper {
        writeln!(
            ctx.out,
            "proper: {}",
            if propers.is_empty() {
                "none".to_string()
            } else {
                propers.join(", ")
            }
        )?;
        for d in registry()
            .defs()
            .iter()
            .filter(|d| d.proper_forbidden.is_some() && is_member(&sig, d))
        {
            let rep = check_proper(&t, d.id).expect("registered class with proper variant");
            writeln!(
                ctx.out,
                "{}: {}",
                d.id,
                if rep.is_proper {
                    "proper"
                } else {
                    "not proper"
                }
            )?;
            for r in &rep.forbidden {
                writeln!(ctx.out, "  {}", r.describe(&t))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn filter_set(filter: &[String]) -> Result<PropSet, Fail> {
    Ok(parse_props(filter)?.into_iter().collect())
}

fn cmd_enumerate(
    space: &Space,
    filter: &[String],
    count_only: bool,
    out: Option<&Path>,
    ctx: &mut Ctx,
) -> Result<i32, Fail> {
    let filter = filter_set(filter)?;
    let start = Instant::now();
    let (n, base) = (space.size, space.base);
    if count_only {
        let counts = map_units(n, base, filter, ctx.jobs, |unit| {
            crate::search::enumerate_unit(n, base, filter, unit, |_| ControlFlow::Continue(()))
        })?;
        let total: u64 = counts.iter().sum();
        if ctx.structured() {
            print_json(
                ctx,
                &json!({ "size": n, "base": base, "filter": filter.to_vec(), "count": total }),
            )?;
        } else {
            writeln!(ctx.out, "{total}")?;
        }
    } else {
        let format = if ctx.structured() || out.is_some() {
            Format::Structured
        } else {
            Format::Text
        };
        let mut sink: Box<dyn Write> = match out {
            Some(p) => Box::new(io::BufWriter::new(std::fs::File::create(p)?)),
            None => Box::new(io::BufWriter::new(&mut *ctx.out)),
        };
        let mut failure = None;
        enumerate(n, base, filter, |t| {
            let r = if format == Format::Structured {
                write_record(&mut sink, t)
            } else {
                sink.write_all(emit_table(t, Format::Text).as_bytes())
                    .and_then(|_| sink.write_all(b"\n"))
            };
            match r {
                Ok(()) => ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })
        .or_else(|e| match e {
            SearchError::CallbackAbort { visited } => Ok(visited),
            e => Err(e),
        })?;
        if let Some(e) = failure {
            return Err(e.into());
        }
        sink.flush()?;
    }
    ctx.note(&format!("elapsed {:.3}s", start.elapsed().as_secs_f64()));
    Ok(EXIT_OK)
}

fn census_text(r: &CensusReport) -> String {
    let mut s = format!("size: {}\nbase: {}\n", r.size, r.base);
    if let Some(f) = &r.filter {
        let keys: Vec<&str> = f.iter().map(|p| p.key()).collect();
        s.push_str(&format!("filter: {}\n", keys.join(",")));
    }
    s.push_str(&format!("total: {}\n", r.total));
    let width = r
        .per_class
        .iter()
        .map(|(c, _)| c.len())
        .max()
        .unwrap_or(5)
        .max(5);
    s.push_str(&format!(
        "{:<width$}  {:>10}  {:>10}\n",
        "class", "members", "proper"
    ));
    for (c, k) in &r.per_class {
        let p = r
            .proper(c)
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".into());
        s.push_str(&format!("{c:<width$}  {k:>10}  {p:>10}\n"));
    }
    s
}

fn census_diff(got: &CensusReport, want: &Value) -> Vec<String> {
    let mut diffs = Vec::new();
    if want.get("total").and_then(Value::as_u64) != Some(got.total) {
        diffs.push(format!(
            "total: expected {}, got {}",
            want.get("total").unwrap_or(&Value::Null),
            got.total
        ));
    }
    for (key, rows) in [
        ("per_class", &got.per_class),
        ("per_proper", &got.per_proper),
    ] {
        let Some(list) = want.get(key).and_then(Value::as_array) else {
            continue;
        };
        for item in list {
            let (Some(id), Some(k)) = (
                item.get(0).and_then(Value::as_str),
                item.get(1).and_then(Value::as_u64),
            ) else {
                continue;
            };
            let have = rows.iter().find(|(c, _)| c == id).map(|&(_, v)| v);
            if have != Some(k) {
                diffs.push(format!(
                    "{key} {id}: expected {k}, got {}",
                    have.map_or("missing".into(), |v| v.to_string())
                ));
            }
        }
    }
    diffs
}

fn cmd_census(
    space: &Space,
    filter: &[String],
    out: Option<&Path>,
    expect: Option<&Path>,
    ctx: &mut Ctx,
) -> Result<i32, Fail> {
    let filter = filter_set(filter)?;
    let report = census_filtered(space.size, space.base, filter, ctx.jobs)?;
    let text = if ctx.structured() {
        format!(
            "{}\n",
            serde_json::to_string(&report).expect("serializable")
        )
    } else {
        census_text(&report)
    };
    match out {
        Some(p) => std::fs::write(p, &text)?,
        None => ctx.out.write_all(text.as_bytes())?,
    }
    ctx.note(&format!("elapsed {:.3}s", report.elapsed.as_secs_f64()));
    if let Some(p) = expect {
        let want: Value = serde_json::from_str(&std::fs::read_to_string(p)?)
            .map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", p.display())))?;
        let diffs = census_diff(&report, &want);
        if !diffs.is_empty() {
            for d in &diffs {
                let _ = writeln!(ctx.err, "mismatch: {d}");
            }
            return Ok(EXIT_EXPECTATION);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_claims(action: ClaimsAction, ctx: &mut Ctx) -> Result<i32, Fail> {
    let (args, theorems) = match action {
        ClaimsAction::List => {
            for c in claim_registry() {
                let kind = match c.status {
                    ClaimStatus::Theorem => "theorem".to_string(),
                    ClaimStatus::NonImplication { example_size } => {
                        format!("non-implication, example size {example_size}")
                    }
                };
                writeln!(ctx.out, "{}  ({kind}; {})", c.id, c.citation)?;
            }
            return Ok(EXIT_OK);
        }
        ClaimsAction::Verify(a) => (a, true),
        ClaimsAction::Refute(a) => (a, false),
    };
    let selected: Vec<&Claim> = match &args.claim {
        Some(id) => {
            let c = get_claim(id).map_err(|e| Fail(EXIT_USAGE, e.to_string()))?;
            if let Some(m) = args.max_size {
                if m > size_limit(c) || m == 0 {
                    return Err(Fail(
                        EXIT_SIZE,
                        format!("size {m} is outside 1..={} for claim `{id}`", size_limit(c)),
                    ));
                }
            }
            vec![c]
        }
        None => claim_registry()
            .iter()
            .filter(|c| matches!(c.status, ClaimStatus::Theorem) == theorems)
            .collect(),
    };
    let start = Instant::now();
    let entries = selected
        .iter()
        .map(|c| {
            let budget = args
                .max_size
                .map_or_else(|| default_budget(c), |m| m.min(size_limit(c)));
            check_claim(c, budget, ctx.jobs)
        })
        .collect();
    let report = ClaimsReport { entries };
    if ctx.structured() {
        writeln!(
            ctx.out,
            "{}",
            serde_json::to_string(&report).expect("serializable")
        )?;
    } else {
        ctx.out.write_all(report.summary().as_bytes())?;
    }
    ctx.note(&format!("elapsed {:.3}s", start.elapsed().as_secs_f64()));
    let mut code = if report.all_ok() {
        EXIT_OK
    } else {
        EXIT_EXPECTATION
    };
    if let Some(p) = &args.expect {
        let want: Value = serde_json::from_str(&std::fs::read_to_string(p)?)
            .map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", p.display())))?;
        let expected: BTreeMap<String, String> = want
            .get("entries")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
            .filter_map(|e| {
                Some((
                    e.get("id")?.as_str()?.to_string(),
                    e.get("outcome")?.as_str()?.to_string(),
                ))
            })
            .collect();
        for e in &report.entries {
            let got = serde_json::to_value(&e.outcome).expect("serializable");
            if let Some(w) = expected.get(&e.id) {
                if got.as_str() != Some(w.as_str()) {
                    let _ = writeln!(ctx.err, "mismatch: {}: expected {w}, got {got}", e.id);
                    code = EXIT_EXPECTATION;
                }
            }
        }
    }
    Ok(code)
}

fn cmd_corpus(action: CorpusAction, ctx: &mut Ctx) -> Result<i32, Fail> {
    let load = |dir: Option<&Path>| match dir {
        Some(d) => load_corpus_from(d),
        None => load_corpus(),
    };
    match action {
        CorpusAction::List => {
            let c = load(None).map_err(|e| Fail(EXIT_USAGE, e.to_string()))?;
            for e in &c.entries {
                writeln!(
                    ctx.out,
                    "{}  {}  n={}  {}",
                    e.id,
                    e.expected_class,
                    e.table.size(),
                    e.notes
                )?;
            }
            Ok(EXIT_OK)
        }
        CorpusAction::Test { dir } => {
            let c = load(dir.as_deref()).map_err(|e| Fail(EXIT_USAGE, e.to_string()))?;
            let r = run_regression(&c);
            if ctx.structured() {
                writeln!(
                    ctx.out,
                    "{}",
                    serde_json::to_string(&r).expect("serializable")
                )?;
            } else {
                ctx.out.write_all(r.summary().as_bytes())?;
            }
            Ok(if r.success() {
                EXIT_OK
            } else {
                EXIT_EXPECTATION
            })
        }
    }
}

fn cmd_find(
    class: &str,
    proper: bool,
    max_size: usize,
    extra: &[String],
    ctx: &mut Ctx,
) -> Result<i32, Fail> {
    let def = registry()
        .lookup(class)
        .map_err(|e| Fail(EXIT_USAGE, e.to_string()))?;
    if proper && def.proper_forbidden.is_none() {
        return Err(Fail(
            EXIT_USAGE,
            format!("class {class} has no proper variant"),
        ));
    }
    let query = ModelQuery {
        class: def.id,
        proper,
        extra: filter_set(extra)?,
    };
    let start = Instant::now();
    let found = find_minimal_model(&query, max_size, ctx.jobs)?;
    ctx.note(&format!("elapsed {:.3}s", start.elapsed().as_secs_f64()));
    match found {
        Some(t) => {
            if ctx.structured() {
                write_record(&mut *ctx.out, &t)?;
            } else {
                ctx.out.write_all(emit_table(&t, Format::Text).as_bytes())?;
            }
        }
        None => {
            if ctx.structured() {
                print_json(ctx, &Value::Null)?;
            } else {
                writeln!(ctx.out, "none up to size {max_size}")?;
            }
        }
    }
    Ok(EXIT_OK)
}
