//! `homcheck`: normal forms, consequence search and finite-algebra checks for
//! anticommutative multiplicative Hom-algebras.
//!
//! Exit codes: 0 success, 1 negative result (not in span, counterexample,
//! failing step), 2 usage or parse error, 3 unreadable or invalid input file.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use homcheck_core::algebra::{check_identity_concrete, load_algebra, to_json, yau_twist, Verdict, EXAMPLES};
use homcheck_core::corpus::selfcheck;
use homcheck_core::engine::{derive, verify_paper, Derivation, DEFAULT_MAX_ALPHA};
use homcheck_core::identity::{catalog, polarize, Identity, CATALOG};
use homcheck_core::normal::normalize;
use homcheck_core::term::{format_identity, format_poly, parse_expr};
use homcheck_core::{Algebra, Ident};

#[derive(Parser)]
#[command(name = "homcheck", version, about = "Identity checking for anticommutative Hom-algebras")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of an expression.
    Normalize { expr: String },
    /// Decide whether two expressions have the same canonical form.
    Equal { lhs: String, rhs: String },
    /// Search for a certificate that TARGET follows from the axioms.
    Derive {
        /// Catalog name or DSL expression.
        #[arg(long)]
        target: String,
        /// Catalog name or DSL expression; repeatable.
        #[arg(long = "axiom", required = true)]
        axioms: Vec<String>,
        /// Largest twist power substituted at a leaf.
        #[arg(short = 'K', long = "K", default_value_t = DEFAULT_MAX_ALPHA)]
        k: u32,
    },
    /// Print the full polarization of an identity.
    Polarize { identity: String },
    /// Replay the Hom-Malcev equivalence proof step by step.
    VerifyPaper {
        #[arg(short = 'K', long = "K", default_value_t = DEFAULT_MAX_ALPHA)]
        k: u32,
    },
    /// Check an identity on every basis tuple of a finite-dimensional algebra.
    Check { algebra: String, identity: String },
    /// Apply the Yau twist to an algebra and print the resulting JSON.
    Twist { algebra: String },
    /// Run the seeded property corpus.
    Selfcheck {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// List the built-in identities.
    Catalog,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

type Outcome = Result<bool, Failure>;

/// `println!` that stops quietly when stdout is closed (e.g. piped to `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        let mut stdout = std::io::stdout().lock();
        if writeln!(stdout, $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Normalize { expr } => cmd_normalize(expr, fmt),
        Command::Equal { lhs, rhs } => cmd_equal(lhs, rhs, fmt),
        Command::Derive { target, axioms, k } => cmd_derive(target, axioms, capped(*k)?, fmt),
        Command::Polarize { identity } => cmd_polarize(identity, fmt),
        Command::VerifyPaper { k } => cmd_verify_paper(capped(*k)?, fmt),
        Command::Check { algebra, identity } => cmd_check(algebra, identity, fmt),
        Command::Twist { algebra } => cmd_twist(algebra),
        Command::Selfcheck { cases } => cmd_selfcheck(cli.seed, *cases, fmt),
        Command::Catalog => cmd_catalog(fmt),
    }
}

/// Applies the `HOMCHECK_MAX_K` cap.
fn capped(k: u32) -> Result<u32, Failure> {
    match std::env::var("HOMCHECK_MAX_K") {
        Ok(v) => {
            let cap: u32 = v.trim().parse().map_err(|_| Failure::usage(format!("HOMCHECK_MAX_K={v:?} is not a number")))?;
            if k > cap {
                eprintln!("note: K lowered from {k} to {cap} by HOMCHECK_MAX_K");
            }
            Ok(k.min(cap))
        }
        Err(_) => Ok(k),
    }
}

/// A catalog name, or else a DSL expression.
fn resolve_identity(arg: &str) -> Result<(String, Ident), Failure> {
    if let Ok(id) = catalog(arg) {
        return Ok((arg.to_string(), id));
    }
    let parsed = parse_expr(arg).map_err(|e| Failure::usage(format!("cannot parse {arg:?}: {e}")))?;
    Ok((arg.to_string(), Identity::new(normalize(&parsed.expr), parsed.vars)))
}

/// Reads an algebra file. A missing path whose file name is one of the
/// shipped examples falls back to the embedded copy.
fn resolve_algebra(path: &str) -> Result<Algebra, Failure> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let file = Path::new(path).file_name().and_then(|f| f.to_str()).unwrap_or(path);
            let file = if file.ends_with(".json") { file.to_string() } else { format!("{file}.json") };
            match EXAMPLES.iter().find(|(name, _)| *name == file) {
                Some((_, text)) => text.to_string(),
                None => return Err(Failure::input(format!("{path}: {e}"))),
            }
        }
    };
    load_algebra(&text).map_err(|e| Failure::input(format!("{path}: {e}")))
}

fn print_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_normalize(expr: &str, fmt: Format) -> Outcome {
    let (_, id) = resolve_identity(expr)?;
    let text = format_poly(&id.poly, &id.vars);
    match fmt {
        Format::Text => out!("{text}"),
        Format::Json => print_json(&json!({ "normal_form": text, "terms": id.poly.len(), "vars": id.vars.names() })),
    }
    Ok(true)
}

fn cmd_equal(lhs: &str, rhs: &str, fmt: Format) -> Outcome {
    // Parse both sides against one table so equal names mean equal variables.
    let combined = parse_expr(&format!("({lhs}) - ({rhs})"));
    let (equal, diff) = match combined {
        Ok(p) => {
            let d = normalize(&p.expr);
            (d.is_zero(), format_poly(&d, &p.vars))
        }
        Err(_) => {
            let (_, a) = resolve_identity(lhs)?;
            let (_, b) = resolve_identity(rhs)?;
            if a.vars != b.vars {
                return Err(Failure::usage("catalog identities use different variable tables"));
            }
            let d = a.poly.sub(&b.poly);
            (d.is_zero(), format_poly(&d, &a.vars))
        }
    };
    match fmt {
        Format::Text if equal => out!("equal"),
        Format::Text => out!("not equal; difference: {diff}"),
        Format::Json => print_json(&json!({ "equal": equal, "difference": diff })),
    }
    Ok(equal)
}

fn cmd_derive(target: &str, axioms: &[String], k: u32, fmt: Format) -> Outcome {
    let (target_name, target) = resolve_identity(target)?;
    let axioms = axioms.iter().map(|a| resolve_identity(a)).collect::<Result<Vec<_>, _>>()?;
    let result = derive(&target, &axioms, k).map_err(|e| Failure::usage(e.to_string()))?;
    match result {
        Derivation::Proved(cert) => {
            let residual = cert.residual().map_err(|e| Failure::usage(e.to_string()))?;
            if !residual.is_zero() {
                return Err(Failure { code: 1, message: "certificate replay left a nonzero residual".into() });
            }
            match fmt {
                Format::Text => {
                    eprintln!("{target_name}: certificate with {} rows (K={k}), replay residual 0", cert.len());
                    print_json(&cert.to_json());
                }
                Format::Json => print_json(&json!({
                    "result": "certificate",
                    "target": target_name,
                    "K": k,
                    "certificate": cert.to_json(),
                })),
            }
            Ok(true)
        }
        Derivation::NotInSpan(u) => {
            let residual = format_identity(&u.residual, &u.target.vars);
            match fmt {
                Format::Text => {
                    out!("not in span within K={k}: {} instances, residual has {} terms", u.instances, u.residual.len());
                    for name in &u.skipped {
                        out!("axiom {name} has more variables than the target and was not used");
                    }
                    out!("residual: {residual}");
                }
                Format::Json => print_json(&json!({
                    "result": "not_in_span",
                    "target": target_name,
                    "K": k,
                    "instances": u.instances,
                    "residual_terms": u.residual.len(),
                    "residual": residual,
                    "skipped_axioms": u.skipped,
                })),
            }
            Ok(false)
        }
    }
}

fn cmd_polarize(identity: &str, fmt: Format) -> Outcome {
    let (_, id) = resolve_identity(identity)?;
    let pol = polarize(&id).map_err(|e| Failure::usage(e.to_string()))?;
    let text = pol.to_dsl();
    match fmt {
        Format::Text => out!("{text}"),
        Format::Json => print_json(&json!({ "polarized": text, "vars": pol.vars.names(), "terms": pol.poly.len() })),
    }
    Ok(true)
}

fn cmd_verify_paper(k: u32, fmt: Format) -> Outcome {
    let report = verify_paper(k).map_err(|e| Failure::usage(e.to_string()))?;
    match fmt {
        Format::Text => {
            for step in &report.steps {
                out!("step {} {}: {}", step.step, if step.passed { "PASS" } else { "FAIL" }, step.name);
                for c in &step.checks {
                    let rows = c.certificate_rows.map(|n| format!(" ({n} rows)")).unwrap_or_default();
                    out!("  [{}] {}{rows}", if c.passed { "ok" } else { "FAIL" }, c.label);
                    if let Some(r) = &c.residual {
                        out!("      residual: {r}");
                    }
                }
            }
            let passed = report.steps.iter().filter(|s| s.passed).count();
            out!("{passed}/{} steps passed (K={k})", homcheck_core::engine::STEP_COUNT);
        }
        Format::Json => print_json(&serde_json::to_value(&report).expect("serializable")),
    }
    Ok(report.passed())
}

fn cmd_check(algebra: &str, identity: &str, fmt: Format) -> Outcome {
    let spec = resolve_algebra(algebra)?;
    let (name, id) = resolve_identity(identity)?;
    let verdict = check_identity_concrete(&spec, &id);
    let holds = verdict.holds();
    match (&verdict, fmt) {
        (Verdict::Holds { tuples }, Format::Text) => out!("{name}: holds ({tuples} basis tuples)"),
        (Verdict::Counterexample(cx), Format::Text) => {
            let assignment: Vec<String> = cx.assignment.iter().map(|(v, e)| format!("{v}={e}")).collect();
            out!("{name}: counterexample at {}", assignment.join(", "));
            out!("residual: {}", element_text(&spec, &cx.residual.0));
        }
        (Verdict::Holds { tuples }, Format::Json) => {
            print_json(&json!({ "identity": name, "verdict": "holds", "tuples": tuples }))
        }
        (Verdict::Counterexample(cx), Format::Json) => print_json(&json!({
            "identity": name,
            "verdict": "counterexample",
            "assignment": cx.assignment.iter().map(|(v, e)| (v.clone(), Value::from(e.clone()))).collect::<serde_json::Map<_, _>>(),
            "residual": element_text(&spec, &cx.residual.0),
        })),
    }
    Ok(holds)
}

fn element_text(spec: &Algebra, coords: &[homcheck_core::Rational]) -> String {
    let parts: Vec<String> = coords
        .iter()
        .zip(spec.basis_names())
        .filter(|(c, _)| !num_is_zero(c))
        .map(|(c, e)| format!("{}*{e}", homcheck_core::scalar::format_rational(c)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn num_is_zero(c: &homcheck_core::Rational) -> bool {
    *c == homcheck_core::Rational::from_integer(0.into())
}

fn cmd_twist(algebra: &str) -> Outcome {
    let spec = resolve_algebra(algebra)?;
    let twisted = yau_twist(&spec).map_err(|e| Failure::input(format!("{algebra}: {e}")))?;
    print_json(&serde_json::to_value(to_json(&twisted)).expect("serializable"));
    Ok(true)
}

fn cmd_selfcheck(seed: u64, cases: usize, fmt: Format) -> Outcome {
    let outcomes = selfcheck(seed, cases);
    let ok = outcomes.iter().all(|o| o.passed());
    match fmt {
        Format::Text => {
            for o in &outcomes {
                let first = o.first_failure.map(|i| format!(", first failing case {i}")).unwrap_or_default();
                out!("{}: {}/{} passed{first}", o.name, o.cases - o.failures, o.cases);
            }
        }
        Format::Json => print_json(&json!({ "seed": seed, "properties": outcomes })),
    }
    Ok(ok)
}

fn cmd_catalog(fmt: Format) -> Outcome {
    match fmt {
        Format::Text => {
            for e in CATALOG {
                out!("{:<14} {}", e.name, e.summary);
                out!("{:<14} {}", "", e.source);
            }
        }
        Format::Json => print_json(&Value::Array(
            CATALOG.iter().map(|e| json!({ "name": e.name, "summary": e.summary, "source": e.source })).collect(),
        )),
    }
    Ok(true)
}
