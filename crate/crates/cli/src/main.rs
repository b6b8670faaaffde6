//! Command-line front end: runs the verification suites, answers ad-hoc
//! membership/factorization/polynomial queries, and emits deterministic
//! JSON (default) or text reports.
//!
//! Exit codes: 0 when everything is VERIFIED, 1 when anything is
//! FALSIFIED, 2 when anything is UNKNOWN (or on usage errors).

use clap::{Parser, Subcommand};
use puiseux_atoms::algebra::FieldSpec;
use puiseux_atoms::exactnum::PrimeSeq;
use puiseux_atoms::monoid::{GeneratorFamily, PuiseuxMonoid, SearchBudget};
use puiseux_atoms::report::Report;
use puiseux_atoms::suites;
use std::collections::BTreeMap;
use std::error::Error;
use std::process::ExitCode;
use std::sync::Arc;

/// Environment override for the DP size cap (scaled targets above the cap
/// are refused as oversized rather than searched).
const ENV_MAX_DP: &str = "PUISEUX_ATOMS_MAX_DP";

/// Negative-control hook: `<index>:<value>` deliberately corrupts one
/// prime table entry so the suites can demonstrate a FALSIFIED run.
const ENV_CORRUPT_PRIME: &str = "PUISEUX_ATOMS_CORRUPT_PRIME";

#[derive(Parser)]
#[command(
    name = "puiseux-atoms",
    version,
    about = "Exact verification suites for a Puiseux monoid whose generators are atoms \
             while its principal-ideal chains never stabilize, and for its monoid algebra"
)]
struct Cli {
    /// Emit JSON reports (the default)
    #[arg(long, global = true)]
    json: bool,

    /// Render human-readable text instead of JSON
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,

    /// Generator family: `prime-pair` or `file:<path>` with a JSON config
    /// ({"family": "prime-pair"} or {"generators": ["1/10", ...]})
    #[arg(long, global = true, default_value = "prime-pair")]
    family: String,

    /// Largest generator index searches may explore (defaults per command)
    #[arg(long, global = true)]
    max_index: Option<usize>,

    /// Cap on the number of factorizations enumerated per query
    #[arg(long, global = true, default_value_t = 512)]
    cap: usize,

    /// Coefficient field for polynomial operations: `q` or `fp:<p>`
    #[arg(long, global = true, default_value = "q")]
    field: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify that the generators 1..=N are atoms, with proof traces
    Atoms { n: usize },
    /// Verify N strict chain links in the monoid and their monomial lifts
    Chain { n: usize },
    /// Decide membership of a rational in the monoid, with a certificate
    Member { q: String },
    /// Enumerate the factorizations of Q over the first N generators
    Factor { q: String, n: usize },
    /// Parse, multiply, or exactly divide polynomials in F[X;M]
    Poly {
        #[command(subcommand)]
        op: PolyOp,
    },
    /// Run the full verification suite
    Selftest,
}

#[derive(Subcommand)]
enum PolyOp {
    /// Parse a polynomial and print its canonical form
    Parse { f: String },
    /// Multiply two polynomials
    Mul { f: String, g: String },
    /// Divide F by G exactly, checking quotient support membership
    Divide { f: String, g: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
    }
}

fn load_family(spec: &str) -> Result<GeneratorFamily, Box<dyn Error>> {
    let family = if spec == "prime-pair" {
        GeneratorFamily::prime_pair()
    } else if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read family config {path}: {e}"))?;
        GeneratorFamily::from_json_config(&text)?
    } else {
        return Err(format!("--family expects `prime-pair` or `file:<path>`, got {spec:?}").into());
    };
    if let Ok(corrupt) = std::env::var(ENV_CORRUPT_PRIME) {
        if family.is_prime_pair() {
            let (index, value) = corrupt
                .split_once(':')
                .ok_or_else(|| format!("{ENV_CORRUPT_PRIME} expects <index>:<value>"))?;
            let overrides: BTreeMap<usize, u64> =
                BTreeMap::from([(index.parse()?, value.parse()?)]);
            return Ok(GeneratorFamily::prime_pair_with(Arc::new(
                PrimeSeq::with_overrides(overrides),
            )));
        }
    }
    Ok(family)
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn Error>> {
    let family = load_family(&cli.family)?;
    let mut monoid = PuiseuxMonoid::new(family);
    if let Ok(cap) = std::env::var(ENV_MAX_DP) {
        let cap: u64 = cap
            .parse()
            .map_err(|e| format!("{ENV_MAX_DP} must be an integer: {e}"))?;
        monoid = monoid.with_dp_cap(cap);
    }
    let field = FieldSpec::parse(&cli.field)?;
    let budget = |auto: usize| SearchBudget::new(cli.max_index.unwrap_or(auto).max(1));

    let reports: Vec<Report> = match &cli.command {
        Command::Atoms { n } => vec![suites::atoms_report(&monoid, *n, &budget(8.max(*n)))?],
        Command::Chain { n } => vec![suites::chain_report(&monoid, &field, *n, &budget(*n))?],
        Command::Member { q } => vec![suites::member_report(&monoid, &q.parse()?, &budget(8))],
        Command::Factor { q, n } => {
            vec![suites::factor_report(&monoid, &q.parse()?, *n, cli.cap)?]
        }
        Command::Poly { op } => match op {
            PolyOp::Parse { f } => vec![suites::poly_parse_report(&monoid, &field, f)?],
            PolyOp::Mul { f, g } => vec![suites::poly_mul_report(&monoid, &field, f, g)?],
            PolyOp::Divide { f, g } => {
                vec![suites::poly_divide_report(&monoid, &field, f, g, &budget(8))?]
            }
        },
        Command::Selftest => suites::selftest_reports(&monoid, &budget(8))?,
    };

    let status = suites::overall_status(&reports);
    if cli.text {
        for report in &reports {
            print_text(report);
        }
        println!("overall: {status}");
    } else if reports.len() == 1 {
        println!("{}", reports[0].to_json());
    } else {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    }
    Ok(ExitCode::from(status.exit_code()))
}

fn print_text(report: &Report) {
    println!("[{}] {}", report.status, report.anchor);
    println!("  claim : {}", report.claim);
    println!(
        "  budget: max_index={}{}",
        report.budget.max_index,
        report
            .budget
            .notes
            .as_deref()
            .map(|n| format!(" ({n})"))
            .unwrap_or_default()
    );
    match report.anchor.as_str() {
        "membership.query" => {
            if let Some(cert) = report.witnesses.get("certificate") {
                println!("  certificate: {}", render_certificate(cert));
                println!(
                    "  length     : {}",
                    report.witnesses["length"].as_u64().unwrap_or(0)
                );
            } else if let Some(obstruction) = report.witnesses.get("obstruction") {
                println!("  obstruction: {}", compact(obstruction));
            } else {
                println!(
                    "  note: {}",
                    report.witnesses["note"].as_str().unwrap_or("")
                );
            }
        }
        "chain.monoid" | "chain.non-stationary" => {
            let links = report
                .witnesses
                .pointer("/chain/links")
                .or_else(|| report.witnesses.pointer("/monoid_chain/links"));
            if let Some(serde_json::Value::Array(links)) = links {
                println!("  link  c_i -> c_(i+1)            inclusion        strict");
                for link in links {
                    println!(
                        "  {:<5} {:>9} -> {:<9}    {:<16} {}",
                        link["index"],
                        link["element"].as_str().unwrap_or("?"),
                        link["successor"].as_str().unwrap_or("?"),
                        render_certificate(&link["inclusion_certificate"]),
                        if link["strict"] == true { "yes" } else { "NO" },
                    );
                }
            }
            if let Some(algebra) = report.witnesses.get("algebra_chain") {
                println!(
                    "  lifted: status {}, all_strict {}",
                    algebra["status"].as_str().unwrap_or("?"),
                    algebra["all_strict"]
                );
            }
        }
        "factor.enumeration" => {
            if let Some(serde_json::Value::Array(certs)) =
                report.witnesses.pointer("/factorizations/certificates")
            {
                for cert in certs {
                    println!("  factorization: {}", render_certificate(cert));
                }
            }
            println!("  lengths: {}", compact(&report.witnesses["lengths"]));
        }
        _ => {
            println!("  witnesses: {}", compact(&report.witnesses));
        }
    }
}

fn render_certificate(value: &serde_json::Value) -> String {
    match value.as_object() {
        Some(map) => {
            let inner: Vec<String> = map.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            format!("{{{}}}", inner.join(", "))
        }
        None => compact(value),
    }
}

fn compact(value: &serde_json::Value) -> String {
    serde_json::to_string(value).unwrap_or_else(|_| "<unprintable>".to_string())
}
