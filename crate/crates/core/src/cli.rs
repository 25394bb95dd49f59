//! `kummer` command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::closed_forms::{certify_family, ClosedFormFamily, FamilyId};
use crate::error::Error;
use crate::frobenius::{
    frobenius_basis, indicial_roots, ode_residual, reduce_kummer, solve_frobenius, FrobeniusSolution, Offset,
};
use crate::identity::{connection_constants, verify_identity, IdentityId};
use crate::rational::{parse_rational, parse_real, to_fraction_string, Rational, Scalar};
use crate::report::Report;
use crate::series::{eval_0f1, eval_0f1_exact, eval_1f1, eval_1f1_exact, EvalResult};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Function {
    #[value(name = "0f1")]
    #[serde(rename = "0f1")]
    Hyp0F1,
    #[value(name = "1f1")]
    #[serde(rename = "1f1")]
    Hyp1F1,
}

#[derive(Debug, Parser)]
#[command(name = "kummer", version, about = "Evaluate 1F1/0F1, solve the reduced Kummer equations by Frobenius series, and verify Kummer's second transformation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Arithmetic mode (default: exact for frobenius/certify, float otherwise).
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,

    /// Series / verification tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Truncation order (default: 8 for frobenius, 64 for certify, 16 for
    /// connection matching).
    #[arg(long = "N", visible_alias = "order", global = true)]
    pub order: Option<usize>,

    /// Seed for the randomized z grid.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate 0F1(; b; x) or 1F1(a; b; x).
    Eval(EvalArgs),
    /// Frobenius coefficients of the reduced equation for b = 2a + offset.
    Frobenius(FrobeniusArgs),
    /// Certify closed-form coefficient families against the recurrence.
    Certify(CertifyArgs),
    /// Check one of the transformations numerically on an (a, z) grid.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub function: Function,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Debug, Args)]
pub struct FrobeniusArgs {
    /// -1, 0 or +1.
    #[arg(long, allow_hyphen_values = true)]
    pub offset: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Indicial exponent; both roots when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub c0: String,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Family name (e.g. P1-λ0 or P1-l0) or `all`.
    #[arg(long, required = true, value_delimiter = ',')]
    pub family: Vec<String>,
    #[arg(long, required = true, allow_hyphen_values = true, value_delimiter = ',')]
    pub a: Vec<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// kummer2, contig-plus or contig-minus.
    #[arg(long)]
    pub identity: String,
    #[arg(long, required = true, allow_hyphen_values = true, value_delimiter = ',')]
    pub a: Vec<String>,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub z: Vec<String>,
    /// Add this many uniform z values from [-5, 5] drawn with --seed.
    #[arg(long, default_value_t = 0)]
    pub random_z: usize,
}

/// A failure that maps to exit status 2.
#[derive(Debug)]
pub struct UsageError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "--{}: {}", self.field, self.message)
    }
}

fn usage(field: &str) -> impl Fn(Error) -> UsageError + '_ {
    move |e| UsageError {
        field: field.to_string(),
        message: e.to_string(),
    }
}

pub fn run(cli: &Cli) -> Result<Report, UsageError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(usage("tol")(Error::InvalidTolerance(cli.tol)));
    }
    if let Some(n) = cli.order {
        if n < 2 {
            return Err(usage("N")(Error::InvalidArgument(format!("N must be at least 2, got {n}"))));
        }
    }
    match &cli.command {
        Command::Eval(args) => run_eval(cli, args),
        Command::Frobenius(args) => run_frobenius(cli, args),
        Command::Certify(args) => run_certify(cli, args),
        Command::Verify(args) => run_verify(cli, args),
    }
}

fn base_config(cli: &Cli, mode: Mode) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("mode".into(), json!(mode));
    m.insert("tol".into(), json!(cli.tol));
    m.insert("seed".into(), json!(cli.seed));
    m
}

fn run_eval(cli: &Cli, args: &EvalArgs) -> Result<Report, UsageError> {
    let mode = cli.mode.unwrap_or(Mode::Float);
    let mut config = base_config(cli, mode);
    config.insert("function".into(), json!(args.function));
    config.insert("a".into(), json!(args.a));
    config.insert("b".into(), json!(args.b));
    config.insert("x".into(), json!(args.x));
    let mut report = Report::new("eval", config);

    let a_str = match (args.function, &args.a) {
        (Function::Hyp1F1, None) => {
            return Err(UsageError {
                field: "a".into(),
                message: "1f1 needs an upper parameter".into(),
            })
        }
        (_, a) => a.clone(),
    };

    #[derive(Serialize)]
    struct Row {
        #[serde(flatten)]
        result: EvalResult,
        exact_value: Option<String>,
    }

    let row = match mode {
        Mode::Float => {
            let b = parse_real(&args.b).map_err(usage("b"))?;
            let x = parse_real(&args.x).map_err(usage("x"))?;
            let r = match args.function {
                Function::Hyp0F1 => eval_0f1(b, x, cli.tol).map_err(usage("b")),
                Function::Hyp1F1 => {
                    let a = parse_real(a_str.as_deref().unwrap_or_default()).map_err(usage("a"))?;
                    eval_1f1(a, b, x, cli.tol).map_err(usage("b"))
                }
            }?;
            Row {
                result: r,
                exact_value: None,
            }
        }
        Mode::Exact => {
            let b = parse_rational(&args.b).map_err(usage("b"))?;
            let x = parse_rational(&args.x).map_err(usage("x"))?;
            let r = match args.function {
                Function::Hyp0F1 => eval_0f1_exact(&b, &x, cli.tol).map_err(usage("b")),
                Function::Hyp1F1 => {
                    let a = parse_rational(a_str.as_deref().unwrap_or_default()).map_err(usage("a"))?;
                    eval_1f1_exact(&a, &b, &x, cli.tol).map_err(usage("b"))
                }
            }?;
            Row {
                result: r.rounded(),
                exact_value: Some(to_fraction_string(&r.value)),
            }
        }
    };
    report.push("evaluation", &row);
    Ok(report)
}

#[derive(Serialize)]
struct SolutionRow {
    lambda: String,
    log_case: bool,
    order: usize,
    coefficients: usize,
    max_abs_residual: f64,
}

#[derive(Serialize)]
struct CoefficientRow {
    lambda: String,
    n: usize,
    coefficient: Value,
    residual: Value,
}

fn scalar_value<T: Scalar>(x: &T, exact: bool) -> Value {
    if exact {
        Value::String(x.to_string())
    } else {
        json!(x.to_f64())
    }
}

fn push_solution<T: Scalar>(report: &mut Report, sol: &FrobeniusSolution<T>, residuals: &[T], exact: bool, tol: f64) {
    let max_res = residuals.iter().map(|r| r.to_f64().abs()).fold(0.0, f64::max);
    let ok = if exact {
        residuals.iter().all(|r| r.is_zero())
    } else {
        max_res <= tol
    };
    if !ok {
        report.fail();
    }
    let lambda = sol.lambda.to_string();
    report.push(
        "solution",
        &SolutionRow {
            lambda: lambda.clone(),
            log_case: sol.log_case,
            order: sol.order,
            coefficients: sol.coeffs.len(),
            max_abs_residual: max_res,
        },
    );
    for (n, c) in sol.coeffs.iter().enumerate() {
        report.push(
            "coefficient",
            &CoefficientRow {
                lambda: lambda.clone(),
                n,
                coefficient: scalar_value(c, exact),
                residual: residuals.get(n).map_or(Value::Null, |r| scalar_value(r, exact)),
            },
        );
    }
}

#[allow(clippy::too_many_arguments)]
fn frobenius_in<T: Scalar>(
    report: &mut Report,
    a: T,
    offset: Offset,
    lambda: Option<T>,
    c0: T,
    order: usize,
    exact: bool,
    tol: f64,
) -> Result<(), UsageError> {
    let ode = reduce_kummer(&a, offset);
    let roots = indicial_roots(&ode);
    report.push(
        "indicial",
        &json!({
            "beta": scalar_value(&ode.beta, exact),
            "gamma": scalar_value(&ode.gamma, exact),
            "delta": scalar_value(&ode.delta, exact),
            "root_zero": scalar_value(&roots.root_zero, exact),
            "root_other": scalar_value(&roots.root_other, exact),
            "integer_gap": roots.integer_gap,
        }),
    );
    let sols = match lambda {
        Some(l) => vec![solve_frobenius(&ode, &l, order, &c0).map_err(usage("lambda"))?],
        None => frobenius_basis(&ode, order, &c0).map_err(usage("a"))?.to_vec(),
    };
    for sol in &sols {
        let residuals = ode_residual(&ode, sol);
        push_solution(report, sol, &residuals, exact, tol);
    }
    Ok(())
}

fn run_frobenius(cli: &Cli, args: &FrobeniusArgs) -> Result<Report, UsageError> {
    let mode = cli.mode.unwrap_or(Mode::Exact);
    let order = cli.order.unwrap_or(8);
    let offset: Offset = args.offset.parse().map_err(usage("offset"))?;
    let mut config = base_config(cli, mode);
    config.insert("offset".into(), json!(offset));
    config.insert("a".into(), json!(args.a));
    config.insert("lambda".into(), json!(args.lambda));
    config.insert("c0".into(), json!(args.c0));
    config.insert("N".into(), json!(order));
    let mut report = Report::new("frobenius", config);
    match mode {
        Mode::Exact => {
            let a = parse_rational(&args.a).map_err(usage("a"))?;
            let lambda = args.lambda.as_deref().map(parse_rational).transpose().map_err(usage("lambda"))?;
            let c0 = parse_rational(&args.c0).map_err(usage("c0"))?;
            frobenius_in::<Rational>(&mut report, a, offset, lambda, c0, order, true, cli.tol)?;
        }
        Mode::Float => {
            let a = parse_real(&args.a).map_err(usage("a"))?;
            let lambda = args.lambda.as_deref().map(parse_real).transpose().map_err(usage("lambda"))?;
            let c0 = parse_real(&args.c0).map_err(usage("c0"))?;
            frobenius_in::<f64>(&mut report, a, offset, lambda, c0, order, false, cli.tol)?;
        }
    }
    Ok(report)
}

fn run_certify(cli: &Cli, args: &CertifyArgs) -> Result<Report, UsageError> {
    if cli.mode == Some(Mode::Float) {
        return Err(UsageError {
            field: "mode".into(),
            message: "certification is exact-only".into(),
        });
    }
    let order = cli.order.unwrap_or(64);
    let families: Vec<FamilyId> = if args.family.iter().any(|f| f.eq_ignore_ascii_case("all")) {
        FamilyId::ALL.to_vec()
    } else {
        args.family
            .iter()
            .map(|f| f.parse())
            .collect::<Result<_, _>>()
            .map_err(usage("family"))?
    };
    let a_values = args
        .a
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage("a"))?;
    let mut config = base_config(cli, Mode::Exact);
    config.insert("family".into(), json!(families));
    config.insert("a".into(), json!(args.a));
    config.insert("N".into(), json!(order));
    let mut report = Report::new("certify", config);
    let explicit = families.len() == 1 && a_values.len() == 1;
    for &id in &families {
        for a in &a_values {
            let fam = match ClosedFormFamily::new(id, a.clone()) {
                Ok(f) => f,
                Err(e) if !explicit => {
                    report.push(
                        "skipped",
                        &json!({"family": id, "a": to_fraction_string(a), "reason": e.to_string()}),
                    );
                    continue;
                }
                Err(e) => return Err(usage("a")(e)),
            };
            let c = certify_family(&fam, order).map_err(usage("a"))?;
            if !c.certified {
                report.fail();
            }
            report.push("certification", &c);
        }
    }
    Ok(report)
}

fn random_grid(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(-5.0..=5.0)).collect()
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> Result<Report, UsageError> {
    let mode = cli.mode.unwrap_or(Mode::Float);
    let id: IdentityId = args.identity.parse().map_err(usage("identity"))?;
    let a_grid = args
        .a
        .iter()
        .map(|s| parse_real(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage("a"))?;
    let mut z_grid = args
        .z
        .iter()
        .map(|s| parse_real(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage("z"))?;
    z_grid.extend(random_grid(cli.seed, args.random_z));
    if z_grid.is_empty() {
        return Err(UsageError {
            field: "z".into(),
            message: "give --z values or --random-z".into(),
        });
    }
    let mut config = base_config(cli, mode);
    config.insert("identity".into(), json!(id));
    config.insert("a".into(), json!(args.a));
    config.insert("z".into(), json!(z_grid));
    let mut report = Report::new("verify", config);
    let r = verify_identity(id, &a_grid, &z_grid, cli.tol).map_err(usage("a"))?;
    for p in &r.points {
        report.push("point", &{
            let mut m = serde_json::to_value(p).expect("point serializes");
            m["identity"] = json!(id);
            m
        });
    }
    if !r.pass {
        report.fail();
    }
    if mode == Mode::Exact {
        let order = cli.order.unwrap_or(16);
        for s in &args.a {
            let a = parse_rational(s).map_err(usage("a"))?;
            match connection_constants(id, &a, order) {
                Ok(c) => {
                    if !(c.a.is_one() && c.b.is_zero()) {
                        report.fail();
                    }
                    report.push("connection", &{
                        let mut m = serde_json::to_value(&c).expect("constants serialize");
                        m["a"] = json!(to_fraction_string(&a));
                        m["status"] = json!("matched");
                        m
                    });
                }
                Err(Error::ResonantParameter { .. }) => report.push(
                    "connection",
                    &json!({"a": to_fraction_string(&a), "status": "deferred-log-case"}),
                ),
                Err(e) => {
                    report.fail();
                    report.push(
                        "connection",
                        &json!({"a": to_fraction_string(&a), "status": "error", "error": e.to_string()}),
                    );
                }
            }
        }
    }
    Ok(report)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    }
}

/// Parse `args`, run, write the report and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = render(&report, cli.format);
    let written = match &cli.out {
        Some(path) => fs::write(path, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
