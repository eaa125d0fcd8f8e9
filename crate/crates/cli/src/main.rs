//! `nadyn`: zeta functions, entropy and realizations from the command line.
//!
//! Data goes to stdout as JSON, diagnostics to stderr. Exit codes: 0 success,
//! 1 example mismatch, 2 malformed input, 3 refinement cap exceeded,
//! 4 matrix not primitive, 5 verification failure.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nadyn::fixtures;
use nadyn::json::BigIntNumber;
use nadyn::markov::{analyze, AnalyzeOptions, RefineOptions, SystemJson};
use nadyn::realize::{
    arrange, check_admissible, hierarchy, verify_realization, GlueSpec, Placement, RationalMapExpr,
    RealizeOptions,
};
use nadyn::roots::RootCertificate;
use nadyn::{
    augment, det_i_minus_ta, leading_root, parse_tol, realize, realize_admissible, zeta_quotient,
    BigRational, Error, FieldContext, IntMatrix, PiecewiseSystem,
};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "nadyn",
    version,
    about = "Exact p-adic piecewise-scaling dynamics"
)]
struct Cli {
    /// Bracket width for certified roots, e.g. 1e-12 or 1/1000.
    #[arg(long, global = true, env = "NADYN_TOL", default_value = "1e-12")]
    tol: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zeta function of a transition matrix, optionally with excluded cycle lengths.
    Zeta {
        #[arg(long)]
        matrix: String,
        /// Comma-separated cycle lengths, e.g. 1,1.
        #[arg(long, value_delimiter = ',')]
        excluded: Vec<usize>,
    },
    /// Certified leading root and entropy of a matrix or a piecewise system.
    Entropy {
        #[command(flatten)]
        input: MatrixOrSystem,
        #[command(flatten)]
        caps: Caps,
    },
    /// Build a rational map realizing a matrix.
    Realize(RealizeArgs),
    /// Markov refinement, adjacency, zeta function and entropy of a piecewise system.
    Analyze {
        /// A piecewise system, or a realization bundle.
        #[arg(long)]
        system: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Re-check a realization bundle, or the map built for a matrix with a given M.
    Verify(VerifyArgs),
    /// Subdivide every edge into a path of length n.
    Augment {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        n: usize,
    },
    /// Admissibility report and class hierarchy.
    Admissible {
        #[arg(long)]
        matrix: String,
    },
    /// Run a bundled example and compare with its expected values.
    Examples {
        #[arg(long, value_parser = fixtures::NAMES)]
        name: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MatrixOrSystem {
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long)]
    system: Option<String>,
}

#[derive(Args)]
struct Caps {
    /// Maximum number of splits during refinement.
    #[arg(long, default_value_t = 10_000)]
    cap_splits: usize,
    /// Maximum orbit length when computing m.
    #[arg(long, default_value_t = 64)]
    cap_m: u32,
}

impl Caps {
    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            refine: RefineOptions {
                cap_splits: self.cap_splits,
                cap_m: self.cap_m,
            },
        }
    }
}

#[derive(Args)]
struct RealizeArgs {
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n0: Option<u32>,
    #[arg(long)]
    j0: Option<u32>,
    /// Disk placement: lex (default) or paper.
    #[arg(long, default_value = "lex")]
    seeds: Placement,
    /// Even gluing exponent; defaults to the least one that certifies.
    #[arg(long = "M")]
    m: Option<u32>,
    /// Write the bundle here instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// A realization bundle written by `realize`.
    #[arg(long, conflicts_with_all = ["matrix", "p", "m"])]
    bundle: Option<String>,
    #[arg(long, requires_all = ["p", "m"])]
    matrix: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long = "M")]
    m: Option<u32>,
    #[arg(long, default_value = "lex")]
    seeds: Placement,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => 3,
            Error::NotPrimitive { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| malformed(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| malformed(format!("{path}: {e}")))
    }
}

fn read_matrix(path: &str) -> Result<IntMatrix, Failure> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

/// A piecewise system, either bare or inside a realization bundle.
fn read_system(path: &str) -> Result<PiecewiseSystem, Failure> {
    let mut value: Value = serde_json::from_str(&read_input(path)?)?;
    if let Some(inner) = value.get_mut("system") {
        value = inner.take();
    }
    let raw: SystemJson = serde_json::from_value(value)?;
    Ok(raw.into_system()?)
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn write_stdout(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure {
            code: 2,
            message: format!("stdout: {e}"),
        }),
        _ => Ok(()),
    }
}

fn emit(value: &impl serde::Serialize) -> Result<(), Failure> {
    write_stdout(&serde_json::to_string_pretty(value)?)
}

/// `x` to 9 significant digits.
fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn entropy_json(root: &RootCertificate) -> Value {
    let positive = root.hi.to_f64() > 1.0;
    let (entropy, bracket) = match root.log() {
        Some((lo, hi, mid)) if positive => (mid, [lo.max(0.0), hi]),
        _ => (0.0, [0.0, 0.0]),
    };
    json!({
        "leading_root": root,
        "leading_root_decimal": sig9(root.decimal),
        "entropy": sig9(entropy),
        "entropy_bracket": [sig9(bracket[0]), sig9(bracket[1])],
        "exact": root.exact.is_some(),
    })
}

fn run(cli: Cli) -> Outcome {
    let tol = parse_tol(&cli.tol)?;
    match cli.command {
        Command::Zeta { matrix, excluded } => {
            let a = read_matrix(&matrix)?;
            let q = zeta_quotient(&a, &excluded)?;
            emit(&json!({
                "det": det_i_minus_ta(&a),
                "det_human": det_i_minus_ta(&a).to_string(),
                "zeta": q.zeta,
                "human": q.zeta.to_string(),
                "numerator_divides_product": q.numerator_cyclotomic,
                "coprime": q.zeta.is_coprime(),
            }))?;
            Ok(0)
        }
        Command::Entropy { input, caps } => {
            if let Some(path) = input.matrix {
                let a = read_matrix(&path)?;
                emit(&entropy_json(&leading_root(&a, &tol)))?;
            } else if let Some(path) = input.system {
                let system = read_system(&path)?;
                let report = analyze(&system, caps.options(), &tol)?;
                let mut out = entropy_json(&report.leading_root);
                out["adjacency"] = serde_json::to_value(&report.adjacency)?;
                out["warnings"] = serde_json::to_value(&report.warnings)?;
                emit(&out)?;
            }
            Ok(0)
        }
        Command::Realize(args) => realize_cmd(args, tol),
        Command::Analyze { system, caps } => {
            let system = read_system(&system)?;
            let report = analyze(&system, caps.options(), &tol)?;
            let mut out = serde_json::to_value(&report)?;
            out["entropy_decimal"] = json!(sig9(report.entropy));
            emit(&out)?;
            Ok(0)
        }
        Command::Verify(args) => verify_cmd(args),
        Command::Augment { matrix, n } => {
            let a = read_matrix(&matrix)?;
            emit(&augment(&a, n)?)?;
            Ok(0)
        }
        Command::Admissible { matrix } => {
            let a = read_matrix(&matrix)?;
            let report = check_admissible(&a);
            let h = hierarchy(&a).ok();
            emit(&json!({ "report": report, "hierarchy": h }))?;
            Ok(0)
        }
        Command::Examples { name } => {
            let fixture = fixtures::load(&name)?;
            let outcome = fixtures::run(&fixture, &tol)?;
            emit(&outcome)?;
            if outcome.ok {
                Ok(0)
            } else {
                for c in outcome.diff() {
                    eprintln!("{}: expected {}, got {}", c.field, c.expected, c.actual);
                }
                Ok(1)
            }
        }
    }
}

fn realize_cmd(args: RealizeArgs, tol: BigRational) -> Outcome {
    let a = read_matrix(&args.matrix)?;
    let ctx = FieldContext::new(args.p)?;
    let opts = RealizeOptions {
        placement: args.seeds,
        m: args.m,
        tol,
    };
    // Without n0/j0 a (0,1) matrix that is admissible up to the Markov
    // condition is realized as is; anything else goes through B^j0.
    let direct = args.n0.is_none()
        && args.j0.is_none()
        && a.is_zero_one()
        && check_admissible(&a).structurally_ok();
    let r = if direct {
        realize_admissible(&a, &ctx, &opts)?
    } else {
        realize(&a, args.n0.unwrap_or(1), args.j0.unwrap_or(1), &ctx, &opts)?
    };
    for w in &r.warnings {
        eprintln!("warning: {}", serde_json::to_string(w)?);
    }
    let text = serde_json::to_string_pretty(&r)?;
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|e| malformed(format!("{path}: {e}")))?,
        None => write_stdout(&text)?,
    }
    let spectral_ok = r.spectral.as_ref().is_none_or(|s| s.ok);
    if r.verification.ok && spectral_ok {
        Ok(0)
    } else {
        for c in r.verification.failed() {
            eprintln!(
                "certificate failed: {} {:?} margin {:?}",
                c.name, c.index, c.margin
            );
        }
        if !spectral_ok {
            eprintln!("spectral check failed");
        }
        Ok(5)
    }
}

#[derive(Deserialize)]
struct BundleArrangement {
    p: BigIntNumber,
    placement: Placement,
}

#[derive(Deserialize)]
struct Bundle {
    matrix: IntMatrix,
    arrangement: BundleArrangement,
    m: u32,
    map: RationalMapExpr,
}

fn verify_cmd(args: VerifyArgs) -> Outcome {
    let (a, ctx, placement, m, map) = match (&args.bundle, &args.matrix) {
        (Some(path), _) => {
            let b: Bundle = serde_json::from_str(&read_input(path)?)?;
            let ctx = FieldContext::new(b.arrangement.p.0)?;
            (b.matrix, ctx, b.arrangement.placement, b.m, Some(b.map))
        }
        (None, Some(path)) => {
            let ctx = FieldContext::new(args.p.expect("required by clap"))?;
            (
                read_matrix(path)?,
                ctx,
                args.seeds,
                args.m.expect("required by clap"),
                None,
            )
        }
        (None, None) => return Err(malformed("either --bundle or --matrix is required")),
    };
    let arr = arrange(&hierarchy(&a)?, &ctx, placement)?;
    let spec = GlueSpec::from_arrangement(&arr, m)?;
    let map = map.unwrap_or_else(|| nadyn::realize::glue(&spec));
    let report = verify_realization(&arr, &spec, &map, &a);
    emit(&report)?;
    Ok(if report.ok { 0 } else { 5 })
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
