//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 move precondition
//! failure, 3 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use plugpalf::catalog::{self, Catalog, CatalogObject, PlugParams};
use plugpalf::formats::{self, DocKind, KirbyDoc, PalfDoc};
use plugpalf::kirby::{self, KirbyDiagram, MoveScript};
use plugpalf::palf::PalfDescription;
use plugpalf::report::{self, Report};
use plugpalf::selftest;

#[derive(Parser)]
#[command(name = "plugpalf", version, about = "Planar Lefschetz fibrations, mapping classes and matrix-level Kirby calculus")]
struct Cli {
    /// Read catalog data from this directory instead of the built-in copy.
    #[arg(long, global = true, value_name = "DIR")]
    data: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Palf,
    Kirby,
}

#[derive(Clone, Copy, ValueEnum)]
enum FmtKind {
    Palf,
    Kirby,
    Script,
    Constraints,
    Expectations,
}

#[derive(Subcommand)]
enum Command {
    /// Print χ, H1, b2, the intersection form, parity, signature and boundary H1.
    Invariants {
        kind: Kind,
        /// A file or a catalog reference such as `catalog:A.reduced`.
        target: String,
        #[arg(long)]
        json: bool,
    },
    /// Apply a move script to a diagram, checking every move.
    RunScript {
        /// Kirby diagram file or catalog reference.
        diagram: String,
        /// Script file or catalog reference such as `catalog:reduce_A`.
        script: String,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check the W(m,n) PALF against its plug diagram.
    VerifyTheorem1 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check the six claims relating A and B.
    VerifyTheorem2 {
        #[arg(long)]
        json: bool,
    },
    /// Mapping-class relations, Kirby-move invariance and linear-algebra property suites.
    SelftestRelations {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate curve families satisfying a constraints file.
    Search {
        #[arg(long, value_name = "FILE")]
        constraints: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a file in canonical form.
    Fmt { kind: FmtKind, file: PathBuf },
    /// Catalog maintenance.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Write the data tree generated from the catalog rules.
    Export {
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
    /// Run every catalog object through the invariant suite.
    Validate {
        #[arg(long)]
        json: bool,
    },
    /// List the shipped data files.
    List,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cat = match &cli.data {
        Some(dir) => Catalog::from_dir(dir),
        None => Catalog::embedded(),
    };
    match run(cli.command, &cat) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, cat: &Catalog) -> Outcome {
    match command {
        Command::Invariants { kind, target, json } => invariants(cat, kind, &target, json),
        Command::RunScript { diagram, script, trace, json } => run_script(cat, &diagram, &script, trace, json),
        Command::VerifyTheorem1 { m, n, json } => {
            let p = PlugParams::new(m, n).map_err(|e| Failure::usage(e.to_string()))?;
            let r = report::verify_theorem1(cat, p).map_err(|e| Failure::usage(e.to_string()))?;
            emit_report(&r, json)
        }
        Command::VerifyTheorem2 { json } => emit_report(&report::verify_theorem2(cat), json),
        Command::SelftestRelations { seed, cases, json } => {
            let suites = selftest::run_all(seed, cases);
            emit_report(&report::selftest_report(seed, cases, &suites), json)
        }
        Command::Search { constraints, json } => search(&constraints, json),
        Command::Fmt { kind, file } => {
            let kind = match kind {
                FmtKind::Palf => DocKind::Palf,
                FmtKind::Kirby => DocKind::Kirby,
                FmtKind::Script => DocKind::Script,
                FmtKind::Constraints => DocKind::Constraints,
                FmtKind::Expectations => DocKind::Expectations,
            };
            let label = file.display().to_string();
            let text = read(&label)?;
            let doc = formats::parse(kind, &text).map_err(|e| Failure::usage(format!("{label}:{}:{}: {}", e.line, e.column, e.message)))?;
            print!("{}", formats::serialize(&doc));
            Ok(0)
        }
        Command::Catalog { action } => match action {
            CatalogAction::Export { out } => {
                let written = catalog::export_to(&out).map_err(|e| Failure::usage(format!("{}: {e}", out.display())))?;
                println!("wrote {} files under {}", written.len(), out.display());
                Ok(0)
            }
            CatalogAction::Validate { json } => {
                let r = catalog::validate_catalog(cat);
                if json {
                    println!("{}", serde_json::to_string_pretty(&r).expect("plain data"));
                } else {
                    for c in &r.checks {
                        println!("[{}] {} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.object, c.check, c.detail);
                    }
                    for n in &r.notes {
                        println!("note: {n}");
                    }
                    println!("result: {}", if r.pass() { "PASS" } else { "FAIL" });
                }
                Ok(if r.pass() { 0 } else { 3 })
            }
            CatalogAction::List => {
                for (path, _) in catalog::EMBEDDED {
                    println!("data/{path}");
                }
                Ok(0)
            }
        },
    }
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))
}

fn parse_error(path: &str, e: formats::ParseError) -> Failure {
    Failure::usage(format!("{path}:{}:{}: {}", e.line, e.column, e.message))
}

fn resolve(cat: &Catalog, target: &str) -> Result<Option<CatalogObject>, Failure> {
    if target.starts_with("catalog:") {
        cat.resolve(target).map(Some).map_err(|e| Failure::usage(e.to_string()))
    } else {
        Ok(None)
    }
}

fn load_palf(cat: &Catalog, target: &str) -> Result<PalfDescription, Failure> {
    match resolve(cat, target)? {
        Some(CatalogObject::Palf(p)) => Ok(p),
        Some(_) => Err(Failure::usage(format!("{target} is not a PALF"))),
        None => Ok(formats::parse_palf(&read(target)?).map_err(|e| parse_error(target, e))?.palf),
    }
}

fn load_diagram(cat: &Catalog, target: &str) -> Result<KirbyDiagram, Failure> {
    match resolve(cat, target)? {
        Some(CatalogObject::Kirby(d)) => Ok(d),
        Some(CatalogObject::Marked(m)) => Ok(m.diagram().clone()),
        Some(CatalogObject::Palf(p)) => Ok(p.to_kirby()),
        Some(CatalogObject::Script(_)) => Err(Failure::usage(format!("{target} is a script, not a diagram"))),
        None => Ok(formats::parse_kirby(&read(target)?).map_err(|e| parse_error(target, e))?.diagram),
    }
}

fn load_script(cat: &Catalog, target: &str) -> Result<MoveScript, Failure> {
    match resolve(cat, target)? {
        Some(CatalogObject::Script(s)) => Ok(s),
        Some(_) => Err(Failure::usage(format!("{target} is not a script"))),
        None => Ok(formats::parse_script(&read(target)?).map_err(|e| parse_error(target, e))?.script),
    }
}

fn emit_report(r: &Report, json: bool) -> Outcome {
    if json {
        println!("{}", r.to_json());
    } else {
        print!("{r}");
    }
    Ok(if r.pass { 0 } else { 3 })
}

fn invariants(cat: &Catalog, kind: Kind, target: &str, json: bool) -> Outcome {
    let r = match kind {
        Kind::Palf => report::palf_report(target, &load_palf(cat, target)?),
        Kind::Kirby => report::kirby_report(target, &load_diagram(cat, target)?),
    }
    .map_err(|e| Failure { code: 3, message: e })?;
    emit_report(&r, json)
}

#[derive(Serialize)]
struct ScriptOutput {
    diagram: String,
    script: String,
    trace: Vec<kirby::TraceStep>,
    result: String,
    invariants: report::InvariantRecord,
}

fn run_script(cat: &Catalog, diagram: &str, script: &str, trace: bool, json: bool) -> Outcome {
    let d = load_diagram(cat, diagram)?;
    let s = load_script(cat, script)?;
    let run = kirby::run_script(&d, &s).map_err(|e| Failure { code: e.exit_code() as u8, message: e.to_string() })?;
    let inv = run.result.invariants().map_err(|e| Failure { code: 3, message: e.to_string() })?;
    let result = KirbyDoc::new(run.result.clone()).serialize();
    if json {
        let out = ScriptOutput {
            diagram: diagram.into(),
            script: script.into(),
            trace: if trace { run.trace } else { Vec::new() },
            result,
            invariants: report::InvariantRecord::from_kirby(&inv),
        };
        println!("{}", serde_json::to_string_pretty(&out).expect("plain data"));
    } else {
        if trace {
            for t in &run.trace {
                println!("# step {}: {} -> {} dotted, {} handles, form {}", t.step, t.mv, t.dotted, t.handles, t.form);
            }
        }
        print!("{result}");
        println!("# form {} ({}, signature {}), boundary H1 {}", inv.form, inv.parity, inv.signature, inv.boundary_h1);
    }
    Ok(0)
}

#[derive(Serialize)]
struct SearchHit {
    holes: usize,
    cycles: Vec<String>,
}

fn search(path: &str, json: bool) -> Outcome {
    let c = if let Some(name) = path.strip_prefix("catalog:") {
        Catalog::embedded().constraints_file(&format!("constraints/{name}.constraints")).map_err(|e| Failure::usage(e.to_string()))?
    } else {
        formats::parse_constraints(&read(path)?).map_err(|e| parse_error(path, e))?
    };
    let found = catalog::search_curve_family(&c);
    if json {
        let hits: Vec<SearchHit> = found
            .iter()
            .map(|p| SearchHit { holes: p.holes(), cycles: p.cycles().iter().map(|c| c.to_string()).collect() })
            .collect();
        println!("{}", serde_json::to_string_pretty(&hits).expect("plain data"));
    } else {
        println!("# {} result(s)", found.len());
        for (i, p) in found.into_iter().enumerate() {
            println!("# result {}", i + 1);
            print!("{}", PalfDoc::new(p).serialize());
        }
    }
    Ok(0)
}
