//! The `incidence` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use incidence_core::classify::{self, Properness};
use incidence_core::oracle;
use incidence_core::structures;
use incidence_core::{Error, Field, FieldSpec, Poset, PrimeField, Radical, Rationals, DEFAULT_SEED};
use serde_json::{json, Value};

use crate::formats;
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "incidence", version, about = "Totally compatible structures on radicals of incidence algebras")]
struct Cli {
    /// Q, GF:p, GFp, GF(p) or a JSON fragment such as {"field":"GF","p":3}
    #[arg(long, global = true)]
    field: Option<String>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized self-checks
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order-theoretic data of a poset
    #[command(subcommand)]
    Poset(PosetCommand),
    /// Checks and classification of a bilinear product
    #[command(subcommand)]
    Structure(StructureCommand),
    /// Centroid of the radical
    #[command(subcommand)]
    Centroid(CentroidCommand),
    /// Linear-algebra cross-checks of the closed forms
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Flags for every poset up to a given size
    Survey(SurveyArgs),
}

#[derive(Debug, Subcommand)]
enum PosetCommand {
    /// Length, extremal elements and counts
    Info { file: PathBuf },
    /// The ~ and ≈ partitions
    Classes { file: PathBuf },
    /// Whether each ~ class lies under at most one ≈ class
    Suffcond { file: PathBuf },
}

#[derive(Debug, Args)]
struct StructureArgs {
    file: PathBuf,
    /// Poset the product lives on
    #[arg(long)]
    against: PathBuf,
}

#[derive(Debug, Subcommand)]
enum StructureCommand {
    /// Associativity, total compatibility and annihilator-valuedness
    Check(StructureArgs),
    /// Split into class products and an annihilator-valued part
    Decompose(StructureArgs),
    /// Properness certificate or witness
    Proper(StructureArgs),
}

#[derive(Debug, Subcommand)]
enum CentroidCommand {
    /// Spanning family of the centroid
    Basis { poset: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Totcomp,
    Centroid,
    Radical,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Compare solved spaces with closed forms
    Verify {
        poset: PathBuf,
        /// Run one check instead of all three
        #[arg(long, value_enum)]
        check: Option<Check>,
    },
}

#[derive(Debug, Args)]
struct SurveyArgs {
    /// Largest poset size; sizes 1..=N are surveyed
    #[arg(long)]
    n: usize,
    /// One row per isomorphism class
    #[arg(long)]
    iso: bool,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: String,
    detail: String,
    exit: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.code().to_string(),
            detail: e.to_string(),
            exit: if e.is_internal() { 2 } else { 1 },
        }
    }
}

fn input_failure(code: &str, detail: String) -> Failure {
    Failure {
        code: code.to_string(),
        detail,
        exit: 1,
    }
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    exit: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => Outcome {
                    exit: 1,
                    stdout: render_error(&input_failure("UsageError", e.to_string())),
                    stderr: e.to_string(),
                },
            }
        }
    };
    match dispatch(&cli) {
        Ok((exit, stdout)) => Outcome {
            exit,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            exit: f.exit,
            stdout: render_error(&f),
            stderr: String::new(),
        },
    }
}

fn render_error(f: &Failure) -> String {
    let mut s = json!({"error": f.code, "detail": f.detail}).to_string();
    s.push('\n');
    s
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_failure("IoError", format!("{}: {}", path.display(), e)))?;
    Ok(formats::parse_json(&text)?)
}

fn read_poset(path: &Path) -> Result<Poset, Failure> {
    Ok(formats::parse_poset(&read_json(path)?)?)
}

fn field_spec(cli: &Cli) -> Result<FieldSpec, Failure> {
    match &cli.field {
        None => Ok(FieldSpec::Rationals),
        Some(s) => Ok(formats::parse_field_flag(s)?),
    }
}

macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $f = PrimeField::new(p as u64)?;
                $body
            }
        }
    };
}

/// Renders a list of JSON documents in the requested format.
fn render(docs: &[Value], format: Format) -> Result<String, Failure> {
    let mut out = String::new();
    match format {
        Format::Json => {
            for d in docs {
                out.push_str(&d.to_string());
                out.push('\n');
            }
        }
        Format::Text => {
            for d in docs {
                match d {
                    Value::Object(map) => {
                        for (k, v) in map {
                            let shown = match v {
                                Value::String(s) => s.clone(),
                                other => other.to_string(),
                            };
                            out.push_str(&format!("{}: {}\n", k, shown));
                        }
                    }
                    other => {
                        out.push_str(&other.to_string());
                        out.push('\n');
                    }
                }
            }
        }
        Format::Csv => {
            return Err(input_failure(
                "UnsupportedFormat",
                String::from("csv output is only available for survey"),
            ))
        }
    }
    Ok(out)
}

fn dispatch(cli: &Cli) -> Result<(i32, String), Failure> {
    let spec = field_spec(cli)?;
    let format = cli.format;
    match &cli.command {
        Command::Poset(cmd) => {
            let doc = poset_command(cmd)?;
            Ok((0, render(&[doc], format.unwrap_or(Format::Json))?))
        }
        Command::Structure(cmd) => {
            let doc = with_field!(spec, |f| structure_command(cmd, f)?);
            Ok((0, render(&[doc], format.unwrap_or(Format::Json))?))
        }
        Command::Centroid(CentroidCommand::Basis { poset }) => {
            let p = read_poset(poset)?;
            let doc = with_field!(spec, |f| {
                let rad = Radical::new(&p, f)?;
                let maps: Vec<Value> = rad.centroid_basis().iter().map(|m| formats::endo_json(&rad, m)).collect();
                json!({"dim": rad.dim(), "spanning": maps.len(), "maps": maps})
            });
            Ok((0, render(&[doc], format.unwrap_or(Format::Json))?))
        }
        Command::Oracle(OracleCommand::Verify { poset, check }) => {
            let p = read_poset(poset)?;
            let checks = match check {
                Some(c) => vec![*c],
                None => vec![Check::Radical, Check::Centroid, Check::Totcomp],
            };
            let (docs, ok) = with_field!(spec, |f| oracle_command(&p, f, &checks, cli.seed)?);
            let exit = if ok { 0 } else { 2 };
            Ok((exit, render(&docs, format.unwrap_or(Format::Json))?))
        }
        Command::Survey(args) => {
            let spec = if cli.field.is_some() { spec } else { FieldSpec::Prime(2) };
            let rows = with_field!(spec, |f| parallel::survey(args.n, args.iso, &f, cli.seed, args.jobs)?);
            let out = match format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = formats::survey_csv_header();
                    s.push('\n');
                    for r in &rows {
                        s.push_str(&formats::survey_csv_row(r));
                        s.push('\n');
                    }
                    s
                }
                other => render(&rows.iter().map(formats::survey_json_row).collect::<Vec<_>>(), other)?,
            };
            Ok((0, out))
        }
    }
}

fn poset_command(cmd: &PosetCommand) -> Result<Value, Failure> {
    match cmd {
        PosetCommand::Info { file } => {
            let p = read_poset(file)?;
            Ok(json!({
                "n": p.size(),
                "length": p.length(),
                "min": p.min_elements(),
                "max": p.max_elements(),
                "pairs": p.pair_count(),
                "triples": p.triples().len(),
                "hasse": formats::poset_json(&p)["hasse"].clone(),
            }))
        }
        PosetCommand::Classes { file } => {
            let p = read_poset(file)?;
            let sim = p.sim_partition();
            let approx = p.approx_partition(&sim)?;
            let sim_json: Vec<Value> = (0..sim.len())
                .map(|d| {
                    let pairs: Vec<Value> = sim
                        .members(d)
                        .iter()
                        .map(|&i| {
                            let q = p.pair(i);
                            json!([q.x, q.y])
                        })
                        .collect();
                    json!({"id": d, "pairs": pairs})
                })
                .collect();
            let approx_json: Vec<Value> = (0..approx.len())
                .map(|c| {
                    let triples: Vec<Value> = approx
                        .members(c)
                        .iter()
                        .map(|&i| {
                            let t = p.triples()[i];
                            json!([t.x, t.y, t.z])
                        })
                        .collect();
                    json!({"id": c, "triples": triples, "proj": approx.proj(c)})
                })
                .collect();
            Ok(json!({"sim": sim_json, "approx": approx_json}))
        }
        PosetCommand::Suffcond { file } => {
            let p = read_poset(file)?;
            Ok(json!({"sufficient_condition": p.sufficient_condition_holds()}))
        }
    }
}

fn structure_command<F: Field>(cmd: &StructureCommand, f: F) -> Result<Value, Failure> {
    let args = match cmd {
        StructureCommand::Check(a) | StructureCommand::Decompose(a) | StructureCommand::Proper(a) => a,
    };
    let p = read_poset(&args.against)?;
    let rad = Radical::new(&p, f)?;
    let b = formats::parse_product(&rad, &read_json(&args.file)?)?;
    Ok(match cmd {
        StructureCommand::Check(_) => json!({
            "associative": structures::is_associative(&rad, &b),
            "totally_compatible": structures::is_totally_compatible_with(&rad, &rad.dot_table(), &b),
            "annihilator_valued": structures::is_annihilator_valued(&rad, &b),
        }),
        StructureCommand::Decompose(_) => formats::decomposition_json(&rad, &classify::decompose(&rad, &b)?),
        StructureCommand::Proper(_) => match classify::decide_proper(&rad, &b)? {
            Properness::Proper(c) => formats::certificate_json(&rad, &c),
            Properness::NotProper(w) => formats::witness_json(&rad, &w),
        },
    })
}

fn oracle_command<F: Field>(p: &Poset, f: F, checks: &[Check], seed: u64) -> Result<(Vec<Value>, bool), Failure> {
    let rad = Radical::new(p, f.clone())?;
    let mut docs = Vec::new();
    let mut ok = true;
    for c in checks {
        let report = match c {
            Check::Totcomp => oracle::verify_totcomp_span(&rad, &mut incidence_core::rng_from_seed(seed))?,
            Check::Centroid => oracle::verify_centroid_span(&rad),
            Check::Radical => oracle::verify_radical_closed_forms(&rad),
        };
        ok &= report.is_ok();
        docs.push(formats::report_json(p, &f, &report));
    }
    Ok((docs, ok))
}
