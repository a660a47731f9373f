use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use resmin::arith::{fmt_rational, parse_rational, PrecisionPolicy, Rational};
use resmin::body::ConvexBody;
use resmin::bounds;
use resmin::engine::{self, EngineSettings, ForbiddenKind, DEFAULT_BUDGET};
use resmin::harness::{self, Instance, VerifyConfig, REPORT_SCHEMA_VERSION};
use resmin::json::parse_int_matrix;
use resmin::lattice::Lattice;
use resmin::Error;

const EXIT_VIOLATION: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "resmin", version, about = "Exact restricted successive minima and their upper bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Maximum number of coordinate-box cells per enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Target width of irrational enclosures, as a power of two.
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file (JSON with body, lattice and forbidden sublattices).
    #[arg(long, conflicts_with_all = ["box_widths", "diagonal", "forbid"])]
    instance: Option<PathBuf>,
    /// Box half-widths, comma separated rationals.
    #[arg(long = "box", value_name = "A1,A2,...")]
    box_widths: Option<String>,
    /// Diagonal lattice entries, comma separated rationals (default: the integer lattice).
    #[arg(long)]
    diagonal: Option<String>,
    /// Forbidden sublattice basis, rows separated by ';', e.g. "1,0;0,2". Repeatable.
    #[arg(long)]
    forbid: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Successive minima of the body with respect to the lattice.
    Minima {
        #[command(flatten)]
        input: InstanceArgs,
        /// Number of minima (default: the lattice rank).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Successive minima avoiding the forbidden sublattices.
    Restricted {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        k: Option<usize>,
        /// Use doubling radii instead of the bound-certified radius.
        #[arg(long)]
        doubling: bool,
    },
    /// Every applicable upper bound with its intermediate quantities.
    Bounds {
        #[command(flatten)]
        input: InstanceArgs,
    },
    /// Kernel lattice bound for an integer matrix, e.g. '[["1","1","1"]]'.
    Siegel {
        /// Matrix as JSON rows, or @file.
        matrix: String,
    },
    /// Random instances checked against every applicable bound.
    Verify {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3])]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', value_enum, default_values_t = [KindArg::Lower, KindArg::Full])]
        kinds: Vec<KindArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Golden fixtures with known values.
    Examples,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Lower,
    Full,
    Mixed,
}

impl From<KindArg> for ForbiddenKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lower => ForbiddenKind::Lower,
            KindArg::Full => ForbiddenKind::Full,
            KindArg::Mixed => ForbiddenKind::Mixed,
        }
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::IndexOverflow { .. } => EXIT_BUDGET,
            Error::CertificateViolated { .. } => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let settings = EngineSettings::default()
        .with_budget(cli.common.budget)
        .with_precision(PrecisionPolicy::bits(cli.common.precision));
    let format = cli.common.format;
    match cli.command {
        Command::Minima { input, k } => {
            let inst = load_instance(&input)?;
            let k = k.unwrap_or(inst.lattice.rank());
            let r = engine::successive_minima(&inst.body, &inst.lattice, k, &settings)?;
            emit_minima(&inst, &r, format)
        }
        Command::Restricted { input, k, doubling } => {
            let inst = load_instance(&input)?;
            let k = k.unwrap_or(inst.lattice.rank());
            let r = if doubling {
                engine::restricted_minima_doubling(&inst.body, &inst.lattice, &inst.forbidden, k, &settings)?
            } else {
                engine::restricted_minima(&inst.body, &inst.lattice, &inst.forbidden, k, &settings)?
            };
            emit_minima(&inst, &r, format)
        }
        Command::Bounds { input } => {
            let inst = load_instance(&input)?;
            let list = harness::applicable_bounds(&inst, &settings)?;
            let exact = if inst.forbidden.is_empty() {
                engine::successive_minima(&inst.body, &inst.lattice, inst.lattice.rank(), &settings)?
            } else {
                engine::restricted_minima_doubling(&inst.body, &inst.lattice, &inst.forbidden, inst.n(), &settings)?
            };
            let free = engine::successive_minima(&inst.body, &inst.lattice, 1, &settings)?;
            let mut violated = false;
            let mut rows = Vec::new();
            for b in &list {
                let value = target_value(&b.target, &exact.values, &free.values[0]);
                let holds = value.as_ref().is_none_or(|v| b.bound.dominates(v));
                violated |= !holds;
                rows.push((b, value));
            }
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        schema_version: u32,
                        id: &'a str,
                        minima: Vec<String>,
                        bounds: Vec<&'a harness::TargetedBound>,
                    }
                    let out = Out {
                        schema_version: REPORT_SCHEMA_VERSION,
                        id: &inst.id,
                        minima: exact.values.iter().map(fmt_rational).collect(),
                        bounds: list.iter().collect(),
                    };
                    println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    let write = |w: &mut csv::Writer<_>, rec: Vec<String>| {
                        w.write_record(rec).map_err(|e| input_error(e.to_string()))
                    };
                    write(&mut w, CSV_HEADER.iter().map(|s| s.to_string()).collect())?;
                    for (b, value) in rows {
                        let exact = value.as_ref().map(fmt_rational).unwrap_or_default();
                        let ratio = value
                            .filter(|v| *v != Rational::from_integer(0.into()))
                            .map(|v| fmt_rational(&(b.bound.hi() / v)))
                            .unwrap_or_default();
                        write(
                            &mut w,
                            vec![
                                inst.id.clone(),
                                inst.n().to_string(),
                                inst.forbidden.len().to_string(),
                                kind_name(inst.forbidden.kind()).into(),
                                exact,
                                format!("{}[{}]", b.bound.name, b.target),
                                fmt_rational(b.bound.hi()),
                                ratio,
                            ],
                        )?;
                    }
                    w.flush().map_err(|e| input_error(e.to_string()))?;
                }
            }
            Ok(if violated { EXIT_VIOLATION } else { 0 })
        }
        Command::Siegel { matrix } => {
            let text = match matrix.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path).map_err(Error::from)?,
                None => matrix,
            };
            let a = parse_int_matrix(&text)?;
            let b = bounds::siegel_bound(&a, &settings)?;
            println!("{}", serde_json::to_string_pretty(&b).expect("serializes"));
            let min = b.exact("min_sup_norm").cloned();
            Ok(if min.is_some_and(|m| !b.dominates(&m)) { EXIT_VIOLATION } else { 0 })
        }
        Command::Verify { trials, dims, kinds, seed } => {
            let kinds = kinds.into_iter().map(ForbiddenKind::from).collect();
            let report = harness::verify(&VerifyConfig::new(trials, dims, kinds, seed), &settings)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => print!("{}", report.to_csv()?),
            }
            Ok(if report.summary.violations > 0 {
                EXIT_VIOLATION
            } else if report.summary.budget_exceeded > 0 {
                EXIT_BUDGET
            } else if report.summary.errors > 0 {
                EXIT_INPUT
            } else {
                0
            })
        }
        Command::Examples => {
            let report = harness::run_examples(&settings);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializes")),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    let io = |e: csv::Error| input_error(e.to_string());
                    w.write_record(["fixture", "check", "expected", "actual", "pass"]).map_err(io)?;
                    for f in &report.fixtures {
                        for c in &f.checks {
                            w.write_record([&f.id, &c.label, &c.expected, &c.actual, &c.pass.to_string()])
                                .map_err(io)?;
                        }
                    }
                    w.flush().map_err(|e| input_error(e.to_string()))?;
                }
            }
            Ok(if report.passed() { 0 } else { EXIT_VIOLATION })
        }
    }
}

const CSV_HEADER: [&str; 8] = ["instance_id", "n", "s", "kind", "exact_lambda", "bound_name", "bound_hi", "ratio_hi"];

fn kind_name(kind: ForbiddenKind) -> &'static str {
    match kind {
        ForbiddenKind::Lower => "lower",
        ForbiddenKind::Full => "full",
        ForbiddenKind::Mixed => "mixed",
    }
}

/// Exact value for a target label such as `lambda_2` or `unrestricted lambda_1`.
fn target_value(target: &str, restricted: &[Rational], free_first: &Rational) -> Option<Rational> {
    if target == "unrestricted lambda_1" {
        return Some(free_first.clone());
    }
    let i: usize = target.strip_prefix("lambda_")?.parse().ok()?;
    restricted.get(i.checked_sub(1)?).cloned()
}

fn emit_minima(inst: &Instance, r: &engine::MinimaResult, format: Format) -> Result<u8, Failure> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(r).expect("serializes")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let io = |e: csv::Error| input_error(e.to_string());
            w.write_record(["instance_id", "i", "lambda", "witness"]).map_err(io)?;
            for (i, (v, x)) in r.values.iter().zip(&r.witnesses).enumerate() {
                let x: Vec<String> = x.iter().map(fmt_rational).collect();
                w.write_record([inst.id.clone(), (i + 1).to_string(), fmt_rational(v), x.join(" ")])
                    .map_err(io)?;
            }
            w.flush().map_err(|e| input_error(e.to_string()))?;
        }
    }
    Ok(0)
}

fn parse_list(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',').map(|t| parse_rational(t.trim()).map_err(Failure::from)).collect()
}

fn load_instance(args: &InstanceArgs) -> Result<Instance, Failure> {
    if let Some(path) = &args.instance {
        let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        return Ok(harness::parse_instance(&text)?);
    }
    let widths = args.box_widths.as_deref().ok_or_else(|| input_error("give --instance or --box"))?;
    let body = ConvexBody::new_box(parse_list(widths)?)?;
    let n = body.dim();
    let lattice = match &args.diagonal {
        Some(d) => Lattice::diagonal(&parse_list(d)?)?,
        None => Lattice::integer(n),
    };
    let parts = args
        .forbid
        .iter()
        .map(|rows_text| {
            let rows = rows_text.split(';').map(parse_list).collect::<Result<Vec<_>, _>>()?;
            Ok(Lattice::from_generators(n, rows)?)
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(Instance::new("cli", body, lattice, parts)?)
}
