use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use nsindex::arith::{classify_reduction, residue_partition};
use nsindex::charspace::{
    search_subspace, special_subspace, zero_pattern, CharSubspace, SearchOptions,
};
use nsindex::discform::build_disc_space;
use nsindex::oracle::{enumerate_index, DEFAULT_ORACLE_BUDGET};
use nsindex::strata::{nonsymplectic_index, render_table, table1, ZeroPattern};

mod verify;

pub const SCHEMA: &str = "nsindex/1";

#[derive(Parser)]
#[command(
    name = "nsindex",
    version,
    about = "Non-symplectic indices of supersingular K3 surfaces"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Strata table for Artin invariants 1..=10.
    Table {
        /// Substitute a prime for the symbolic p.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Index from a zero pattern of the moduli coordinates.
    Index {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        sigma: usize,
        /// Comma list of 0/1 flags for a_1..a_(sigma-1); empty means all zero.
        #[arg(long, default_value = "")]
        pattern: String,
    },
    /// Brute-force index of a constructed subspace, compared with the criterion.
    Oracle {
        #[command(flatten)]
        subspace: SubspaceArgs,
        /// Cap on the size of the enumerated eigenvalue group.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u128,
        /// Cap on candidate generators when searching.
        #[arg(long, default_value_t = SearchOptions::default().budget)]
        search_budget: u128,
        /// Include wall-clock time; output is then no longer reproducible.
        #[arg(long)]
        timing: bool,
    },
    /// Reduction type of a complex K3 with non-symplectic index N.
    #[command(group(ArgGroup::new("target").required(true).args(["p", "all_residues"])))]
    Classify {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        all_residues: bool,
    },
    /// Moduli coordinates a_i of a constructed subspace and their orbit representative.
    Psi {
        #[command(flatten)]
        subspace: SubspaceArgs,
        #[arg(long, default_value_t = SearchOptions::default().budget)]
        budget: u128,
    },
    /// Search for a characteristic subspace with a given zero pattern.
    Search {
        #[command(flatten)]
        subspace: SubspaceArgs,
        #[arg(long, default_value_t = SearchOptions::default().budget)]
        budget: u128,
    },
    /// Run invariant suites end to end.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        /// Extension degree for the fields suite.
        #[arg(long, default_value_t = 4)]
        d: usize,
        /// Smaller parameters.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").required(true).args(["pattern", "special"])))]
struct SubspaceArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    sigma: usize,
    /// Comma list of 0/1 flags for a_1..a_(sigma-1).
    #[arg(long)]
    pattern: Option<String>,
    /// Use the subspace with every a_i = 0.
    #[arg(long)]
    special: bool,
    /// Working field degree D; defaults to 2*sigma, or 4*sigma for a nonzero pattern.
    #[arg(long)]
    working_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl From<nsindex::Error> for CliError {
    fn from(e: nsindex::Error) -> Self {
        Self {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self {
            kind: "serialization".into(),
            message: e.to_string(),
        }
    }
}

/// Command output plus whether every requested check passed.
pub struct Report {
    pub body: Value,
    pub ok: bool,
    /// Preformatted text rendering; falls back to key/value lines.
    pub text: Option<String>,
}

impl Report {
    fn ok(body: Value) -> Self {
        Self {
            body,
            ok: true,
            text: None,
        }
    }
}

fn with_schema(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), SCHEMA.into());
    out.insert("command".into(), command.into());
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Value::Object(out)
}

struct Acquired {
    k: CharSubspace,
    scanned: u128,
}

fn acquire(args: &SubspaceArgs, budget: u128) -> Result<Acquired, CliError> {
    if args.special {
        let space = build_disc_space(args.p, args.sigma, args.working_degree)?;
        let k = special_subspace(&space)?;
        return Ok(Acquired { k, scanned: 0 });
    }
    let text = args.pattern.as_deref().unwrap_or_default();
    let pattern = ZeroPattern::parse(args.sigma, text)?;
    let degree = args
        .working_degree
        .or((!pattern.is_all_zero()).then_some(4 * args.sigma));
    let space = build_disc_space(args.p, args.sigma, degree)?;
    let opts = SearchOptions {
        seed: args.seed,
        budget,
        ..SearchOptions::default()
    };
    let outcome = search_subspace(&space, &pattern, opts)?;
    match outcome.found {
        Some(k) => Ok(Acquired {
            k,
            scanned: outcome.scanned,
        }),
        None => Err(CliError {
            kind: "not_found".into(),
            message: format!(
                "no characteristic subspace with pattern {pattern} over GF({}^{}) after {} candidates",
                args.p,
                space.working_degree(),
                outcome.scanned
            ),
        }),
    }
}

fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Table { p } => {
            if let Some(p) = *p {
                // validates p through the criterion's preconditions
                nonsymplectic_index(p, 1, &ZeroPattern::all_zero(1)?)?;
            }
            let rows = table1(*p);
            Ok(Report {
                body: with_schema("table", json!({ "p": p, "rows": rows })),
                ok: true,
                text: Some(render_table(&rows)),
            })
        }
        Command::Index { p, sigma, pattern } => {
            let pattern = ZeroPattern::parse(*sigma, pattern)?;
            let result = nonsymplectic_index(*p, *sigma, &pattern)?;
            Ok(Report::ok(with_schema(
                "index",
                serde_json::to_value(result)?,
            )))
        }
        Command::Oracle {
            subspace,
            budget,
            search_budget,
            timing,
        } => {
            let start = Instant::now();
            let acq = acquire(subspace, *search_budget)?;
            let report = enumerate_index(&acq.k, *budget)?;
            let pattern = zero_pattern(acq.k.a())?;
            let criterion = nonsymplectic_index(subspace.p, subspace.sigma, &pattern)?;
            let agrees = criterion.index == report.index.into();
            let mut body = json!({
                "p": report.p,
                "sigma": report.sigma,
                "D": report.working_degree,
                "pattern": pattern,
                "scanned": acq.scanned,
                "group_size": report.group_size,
                "index": report.index,
                "criterion_index": serde_json::to_value(&criterion)?["index"],
                "agrees": agrees,
                "kept_orders": report.kept_orders,
                "kept_exponents": report.kept_exponents,
                "contains_minus_identity": report.contains_minus_identity,
            });
            if *timing {
                body["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            Ok(Report {
                body: with_schema("oracle", body),
                ok: agrees,
                text: None,
            })
        }
        Command::Classify { n, p, all_residues } => {
            if *n < 3 {
                return Err(CliError {
                    kind: "invalid_argument".into(),
                    message: format!("N must be at least 3, got {n}"),
                });
            }
            let body = match (p, all_residues) {
                (Some(p), false) => serde_json::to_value(classify_reduction(*n, *p))?,
                _ => serde_json::to_value(residue_partition(*n))?,
            };
            Ok(Report::ok(with_schema("classify", body)))
        }
        Command::Psi { subspace, budget } => {
            let acq = acquire(subspace, *budget)?;
            let psi = acq.k.psi()?;
            let body = json!({
                "p": subspace.p,
                "sigma": subspace.sigma,
                "working_field": acq.k.space().working_field().record(),
                "pattern": zero_pattern(acq.k.a())?,
                "a": psi.a,
                "canonical": psi.canonical,
            });
            Ok(Report::ok(with_schema("psi", body)))
        }
        Command::Search { subspace, budget } => {
            let acq = acquire(subspace, *budget)?;
            let report = acq.k.report()?;
            let body = json!({
                "scanned": acq.scanned,
                "working_field": acq.k.space().working_field().record(),
                "subspace": acq.k.record(),
                "a": acq.k.a(),
                "pattern": zero_pattern(acq.k.a())?,
                "characteristic": report.all_hold(),
            });
            Ok(Report {
                body: with_schema("search", body),
                ok: report.all_hold(),
                text: None,
            })
        }
        Command::Verify {
            suite,
            p,
            sigma,
            d,
            quick,
        } => {
            let params = verify::Params {
                p: *p,
                sigma: *sigma,
                d: *d,
                quick: *quick,
            };
            let outcome = verify::run(*suite, &params)?;
            let ok = outcome.passed;
            Ok(Report {
                body: with_schema("verify", serde_json::to_value(outcome)?),
                ok,
                text: None,
            })
        }
    }
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = v {
        for (k, val) in m {
            if k == "schema" {
                continue;
            }
            let shown = match val {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.body).expect("json value")
                ),
                Format::Text => print!(
                    "{}",
                    report.text.unwrap_or_else(|| render_text(&report.body))
                ),
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Json => {
                    let v = json!({
                        "schema": SCHEMA,
                        "error": { "kind": e.kind, "message": e.message },
                    });
                    println!("{}", serde_json::to_string_pretty(&v).expect("json value"));
                }
                Format::Text => eprintln!("error[{}]: {}", e.kind, e.message),
            }
            ExitCode::from(2)
        }
    }
}
