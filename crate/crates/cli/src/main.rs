//! `lsca`: verify Lie and left-symmetric conformal algebras from the catalog
//! or from `.lsca` files.
//!
//! Exit codes: 0 every check passed, 1 some check failed, 2 the input file
//! did not parse, 3 bad usage (flags, unknown family, constraint violation).

mod report;
mod style;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lsca_core::arith::{Rational, Symbol};
use lsca_core::catalog::{families, make_family, CatalogError, ParamAssignment, ParamValue};
use lsca_core::conformal::ConformalAlgebra;
use lsca_core::checks::{default_checks, parse_assignment, CheckError, CheckOptions, CheckRegistry, Subject};
use lsca_core::dsl::parse_and_elaborate;

use report::{BracketRecord, CatalogEntry, Report, SubjectInfo};

#[derive(Debug, Parser)]
#[command(name = "lsca", version, about = "Exact checks for Lie and left-symmetric conformal algebras")]
struct Cli {
    /// Emit a `report-v1` JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Terms shown per residual in text output (JSON is never truncated).
    #[arg(long, global = true, default_value_t = 8, value_name = "N")]
    max_terms: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run axiom suites on a structure.
    Check {
        #[command(flatten)]
        input: Input,
        /// Comma-separated check names (default depends on the algebra kind).
        #[arg(long, value_delimiter = ',', value_name = "LIST")]
        axioms: Vec<String>,
        /// Index radius for coefficient checks named in --axioms.
        #[arg(long, default_value_t = 3, value_name = "N")]
        window: i64,
    },
    /// Print the fourteen functional-equation residuals.
    Equations {
        #[command(flatten)]
        input: Input,
    },
    /// Verify the coefficient algebra on an index window.
    Coeff {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3, value_name = "N")]
        window: i64,
        #[arg(long, value_enum, default_value_t = CoeffMode::LeftSymmetry)]
        mode: CoeffMode,
    },
    /// Re-evaluate every refutation witness.
    Refute,
    /// List the catalog families.
    List,
}

#[derive(Debug, Args)]
struct Input {
    /// A `.lsca` file.
    #[arg(conflicts_with = "family", required_unless_present = "family")]
    file: Option<PathBuf>,
    /// Catalog family id (T1..T11).
    #[arg(long, value_name = "ID")]
    family: Option<String>,
    /// Concrete parameter value, e.g. `--set b=1/2` (repeatable).
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CoeffMode {
    LeftSymmetry,
    Corollary,
    Lie,
}

impl CoeffMode {
    fn check_name(self) -> &'static str {
        match self {
            CoeffMode::LeftSymmetry => "coeff-left-symmetry",
            CoeffMode::Corollary => "coeff-corollary",
            CoeffMode::Lie => "coeff-lie",
        }
    }
}

/// A failure that ends the run before any report is produced.
enum Abort {
    Parse(String),
    Usage(String),
}

impl From<CatalogError> for Abort {
    fn from(e: CatalogError) -> Abort {
        Abort::Usage(e.to_string())
    }
}

impl From<CheckError> for Abort {
    fn from(e: CheckError) -> Abort {
        Abort::Usage(e.to_string())
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_USAGE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let echo: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli, echo) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text(style::Style::detect()));
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(Abort::Parse(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Abort::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli, echo: Vec<String>) -> Result<Report, Abort> {
    let started = Instant::now();
    let options = |window: i64| -> Result<CheckOptions, Abort> {
        if !(0..=64).contains(&window) {
            return Err(Abort::Usage(format!("--window must be in 0..=64, got {window}")));
        }
        Ok(CheckOptions {
            window,
            max_terms: cli.max_terms,
        })
    };
    let registry = CheckRegistry::standard();
    let mut report = match &cli.command {
        Command::Check { input, axioms, window } => {
            let (subject, set) = load(input)?;
            let names: Vec<&str> = if axioms.is_empty() {
                default_checks(&subject).to_vec()
            } else {
                axioms.iter().map(|s| s.trim()).collect()
            };
            let outcomes = registry.run_all(&names, &subject, &options(*window)?)?;
            Report::new(echo, SubjectInfo::of(&subject, &set), outcomes)
        }
        Command::Equations { input } => {
            let (subject, set) = load(input)?;
            let outcomes = registry.run_all(&["equations"], &subject, &options(0)?)?;
            Report::new(echo, SubjectInfo::of(&subject, &set), outcomes)
        }
        Command::Coeff { input, window, mode } => {
            let (subject, set) = load(input)?;
            let outcomes = registry.run_all(&[mode.check_name()], &subject, &options(*window)?)?;
            Report::new(echo, SubjectInfo::of(&subject, &set), outcomes)
        }
        Command::Refute => {
            let subject = Subject::from_algebra("witnesses", lsca_core::catalog::make_virasoro());
            let outcomes = registry.run_all(&["refute"], &subject, &options(0)?)?;
            Report::new(echo, SubjectInfo::catalog("refutation-witnesses"), outcomes)
        }
        Command::List => {
            let mut r = Report::new(echo, SubjectInfo::catalog("families"), Vec::new());
            r.catalog = Some(list_catalog()?);
            r
        }
    };
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn load(input: &Input) -> Result<(Subject, BTreeMap<String, Rational>), Abort> {
    let values = parse_assignment(input.set.iter().map(String::as_str)).map_err(Abort::Usage)?;
    match (&input.family, &input.file) {
        (Some(id), _) => {
            let assignment: ParamAssignment = values
                .iter()
                .map(|(k, v)| (k.clone(), ParamValue::Value(v.clone())))
                .collect();
            Ok((Subject::from_family(make_family(id, &assignment)?), values))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Abort::Usage(format!("cannot read {}: {e}", path.display())))?;
            let alg = parse_and_elaborate(&text).map_err(|e| Abort::Parse(e.render(&text)))?;
            let alg = concretize(alg, &values)?;
            Ok((Subject::from_algebra(path.display().to_string(), alg), values))
        }
        (None, None) => Err(Abort::Usage("give a .lsca file or --family".into())),
    }
}

/// Applies `--set` values to a file-defined algebra, enforcing its constraints.
fn concretize(
    mut alg: ConformalAlgebra,
    values: &BTreeMap<String, Rational>,
) -> Result<ConformalAlgebra, Abort> {
    let mut known = BTreeMap::new();
    for (name, value) in values {
        let sym = Symbol::new(name);
        if !alg.universe().contains(sym) {
            return Err(Abort::Usage(format!("`{}` declares no parameter `{name}`", alg.name)));
        }
        alg = alg
            .subs_param(sym, value)
            .map_err(|e| Abort::Usage(e.to_string()))?;
        known.insert(sym, value.clone());
    }
    if let Some(c) = alg.constraints().iter().find(|c| c.holds(&known) == Some(false)) {
        return Err(Abort::Usage(format!("`{}` requires {c}", alg.name)));
    }
    Ok(alg)
}

fn list_catalog() -> Result<Vec<CatalogEntry>, Abort> {
    families()
        .iter()
        .map(|spec| {
            let inst = make_family(spec.id, &ParamAssignment::new())?;
            let alg = &inst.algebra;
            let gens = alg.generators();
            let brackets = (0..alg.rank())
                .flat_map(|i| (0..alg.rank()).map(move |j| (i, j)))
                .map(|(i, j)| BracketRecord {
                    pair: format!("{} _ {}", gens[i].name, gens[j].name),
                    value: alg.render_entry(i, j),
                })
                .collect();
            Ok(CatalogEntry {
                id: spec.id.to_owned(),
                target: spec.target.to_string(),
                params: spec.params.iter().map(|p| (*p).to_owned()).collect(),
                constraints: spec.constraint_text(),
                brackets,
            })
        })
        .collect()
}
