//! Batch front end: load a fixture (bundled or from disk), run the pipeline
//! for its kind, and print a deterministic report as a table or JSON.
//! Exit codes: 0 = every executed check passed (skipped and refused checks
//! do not fail a run), 1 = at least one check failed, 2 = usage or parse
//! error.

use clap::{Args, Parser, Subcommand};
use gkmzero::fixture::{self, FixtureFile};
use gkmzero::report::{run_fixture, Report, RunOptions};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gkmzero",
    about = "Exact computations on zero schemes of vector fields and moment graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Fixture to run: a file path or the name of a bundled fixture.
    #[arg(long)]
    fixture: String,
    /// Cap every per-degree computation at this degree.
    #[arg(long)]
    degree_bound: Option<i64>,
    /// Run fixtures and checks marked as long-running.
    #[arg(long)]
    long_running: bool,
    /// Emit the report as JSON.
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit the report as a text table (default).
    #[arg(long)]
    table: bool,
    /// Run only the named check; everything else is reported as skipped.
    #[arg(long)]
    check: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a zero-scheme model and verify its graded data (accepts
    /// zeroscheme and component-set fixtures).
    Zeroscheme(CommonArgs),
    /// Compare moment-graph cohomology dimensions with the formality series.
    GkmCohomology(CommonArgs),
    /// Run edge-congruence and character checks on bundle weight data.
    GkmKtheory(CommonArgs),
    /// Validate a matrix section family (weights, regularity, invariants).
    Kostant(CommonArgs),
    /// Expand declared rational series and compare them side by side.
    Series(CommonArgs),
    /// Run every bundled fixture (or one fixture of any kind).
    All(AllArgs),
    /// List bundled fixtures.
    Fixtures(FixturesArgs),
}

#[derive(Args, Clone)]
struct AllArgs {
    /// Run a single fixture instead of the whole bundled catalog.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long)]
    degree_bound: Option<i64>,
    #[arg(long)]
    long_running: bool,
    #[arg(long, conflicts_with = "table")]
    json: bool,
    #[arg(long)]
    table: bool,
    #[arg(long)]
    check: Option<String>,
}

#[derive(Args, Clone)]
struct FixturesArgs {
    /// Only list fixtures of this kind (unknown kinds give an empty list).
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    json: bool,
}

fn options(args: &CommonArgs) -> RunOptions {
    RunOptions {
        long_running: args.long_running,
        degree_bound: args.degree_bound,
        check_filter: args.check.clone(),
    }
}

fn load_fixture(name: &str) -> Result<FixtureFile, ExitCode> {
    fixture::load(name).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

fn expect_kinds(fixture: &FixtureFile, allowed: &[&str]) -> Result<(), ExitCode> {
    let kind = fixture.payload.kind_name();
    if allowed.contains(&kind) {
        Ok(())
    } else {
        eprintln!(
            "error: fixture {} has kind {kind}; this command accepts: {}",
            fixture.name,
            allowed.join(", ")
        );
        Err(ExitCode::from(2))
    }
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_table());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_kinded(args: &CommonArgs, allowed: &[&str]) -> ExitCode {
    let fixture = match load_fixture(&args.fixture) {
        Ok(f) => f,
        Err(code) => return code,
    };
    if let Err(code) = expect_kinds(&fixture, allowed) {
        return code;
    }
    let report = run_fixture(&fixture, &options(args));
    emit(&report, args.json)
}

fn run_all(args: &AllArgs) -> ExitCode {
    let opts = RunOptions {
        long_running: args.long_running,
        degree_bound: args.degree_bound,
        check_filter: args.check.clone(),
    };
    let fixtures: Vec<FixtureFile> = if let Some(name) = &args.fixture {
        match load_fixture(name) {
            Ok(f) => vec![f],
            Err(code) => return code,
        }
    } else {
        let mut all = Vec::new();
        for (file, json) in fixture::bundled() {
            match fixture::parse_fixture(json) {
                Ok(f) => all.push(f),
                Err(e) => {
                    eprintln!("error in bundled fixture {file}: {e}");
                    return ExitCode::from(2);
                }
            }
        }
        all
    };
    let reports: Vec<Report> = fixtures.iter().map(|f| run_fixture(f, &opts)).collect();
    let all_passed = reports.iter().all(Report::passed);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&reports).expect("reports serialize")
        );
    } else {
        for report in &reports {
            print!("{}", report.render_table());
        }
        let failed = reports.iter().filter(|r| !r.passed()).count();
        println!("{} fixtures, {failed} failed", reports.len());
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn list_fixtures(args: &FixturesArgs) -> ExitCode {
    let mut entries: Vec<(String, String, String)> = Vec::new();
    for (file, json) in fixture::bundled() {
        let Ok(f) = fixture::parse_fixture(json) else {
            eprintln!("error: bundled fixture {file} does not parse");
            return ExitCode::from(2);
        };
        let kind = f.payload.kind_name().to_string();
        if args.kind.as_deref().is_some_and(|k| k != kind) {
            continue;
        }
        entries.push((f.name, kind, f.description.unwrap_or_default()));
    }
    if args.json {
        let listed: Vec<serde_json::Value> = entries
            .iter()
            .map(|(name, kind, description)| {
                serde_json::json!({ "name": name, "kind": kind, "description": description })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&listed).expect("catalog serializes")
        );
    } else {
        for (name, kind, description) in &entries {
            println!("{name} ({kind}): {description}");
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Zeroscheme(args) => run_kinded(args, &["zeroscheme", "component-set"]),
        Command::GkmCohomology(args) => run_kinded(args, &["gkm-graph"]),
        Command::GkmKtheory(args) => run_kinded(args, &["bundle-data"]),
        Command::Kostant(args) => run_kinded(args, &["section"]),
        Command::Series(args) => run_kinded(args, &["series"]),
        Command::All(args) => run_all(args),
        Command::Fixtures(args) => list_fixtures(args),
    }
}
