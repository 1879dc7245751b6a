//! Argument parsing and the five commands.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lmk_core::exact::{parse_rational, Rational};
use lmk_core::expand::{eigen_series, eval_function};
use lmk_core::oracle::{eigen_oracle, Eigenfunction, OracleConfig};
use lmk_core::uniform::{B0Sign, UniformApprox, UniformOptions};
use lmk_core::{gen_lame_tables, gen_mathieu_tables, Branch, CoeffTables, Family, ProblemSpec, Real};
use serde_json::{json, Value};

use crate::format::{num, short, tables_from_json, tables_to_json, to_json_string, write_tables_csv};
use crate::suites::{resolved_b0_sign, Suite};
use crate::CliError;

/// Largest order the commands generate tables for.
pub const ORDER_LIMIT: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "lmk", version, about = "Large-parameter Lamé and Mathieu eigenvalues and eigenfunctions")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate coefficient tables.
    Coeffs(CoeffsArgs),
    /// Eigenvalue from the asymptotic series, optionally against the oracle.
    Eigen(EigenArgs),
    /// Eigenfunction expansion near the centre of oscillation.
    Eval(EvalArgs),
    /// One- or two-term uniform approximation.
    Uniform(UniformArgs),
    /// Run verification suites and write reports.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    Lame,
    Mathieu,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Lame => Family::Lame,
            FamilyArg::Mathieu => Family::Mathieu,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BranchArg {
    A,
    B,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TextFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SignArg {
    AsPrinted,
    Flipped,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SuiteArg {
    Coeffs,
    Orders,
    Pqr,
    Uniform,
    Splitting,
    Norm,
    All,
}

#[derive(Args, Debug)]
struct ProblemArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    m: u32,
    #[arg(long, value_enum, default_value = "a")]
    branch: BranchArg,
    /// Large Lamé parameter; pair with --k or --k2.
    #[arg(long)]
    kappa: Option<f64>,
    /// Lamé degree; pair with --k.
    #[arg(long)]
    nu: Option<f64>,
    /// Elliptic modulus.
    #[arg(long)]
    k: Option<f64>,
    /// Exact squared modulus, e.g. 1/2.
    #[arg(long)]
    k2: Option<String>,
    /// Mathieu parameter (q = h²).
    #[arg(long)]
    h: Option<f64>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_k2(s: &str) -> Result<Rational, CliError> {
    let k2 = parse_rational(s).map_err(|e| usage(format!("--k2: {e}")))?;
    if k2 < Rational::from_integer(0.into()) || k2 >= Rational::from_integer(1.into()) {
        return Err(usage(format!("--k2 must lie in [0, 1), got {k2}")));
    }
    Ok(k2)
}

impl ProblemArgs {
    fn spec(&self) -> Result<ProblemSpec, CliError> {
        let branch = match self.branch {
            BranchArg::A => Branch::A,
            BranchArg::B => Branch::B,
        };
        match self.family {
            FamilyArg::Mathieu => {
                if self.kappa.is_some() || self.nu.is_some() || self.k.is_some() || self.k2.is_some() {
                    return Err(usage("mathieu takes --h only"));
                }
                let h = self.h.ok_or_else(|| usage("mathieu needs --h"))?;
                Ok(ProblemSpec::mathieu(self.m, branch, h)?)
            }
            FamilyArg::Lame => {
                if self.h.is_some() {
                    return Err(usage("--h applies to mathieu only"));
                }
                match (self.kappa, self.nu, self.k, &self.k2) {
                    (None, Some(nu), Some(k), None) => Ok(ProblemSpec::lame_nu_k(self.m, branch, nu, k)?),
                    (Some(kappa), None, Some(k), None) => Ok(ProblemSpec::lame_k(self.m, branch, k, kappa)?),
                    (Some(kappa), None, None, Some(k2)) => Ok(ProblemSpec::lame(self.m, branch, parse_k2(k2)?, kappa)?),
                    _ => Err(usage("lame needs --kappa with one of --k, --k2, or --nu with --k")),
                }
            }
        }
    }
}

fn check_order(order: usize) -> Result<(), CliError> {
    if order > ORDER_LIMIT {
        return Err(usage(format!("--order {order} exceeds the supported {ORDER_LIMIT}")));
    }
    Ok(())
}

fn tables_for(spec: &ProblemSpec, order: usize) -> Result<CoeffTables, CliError> {
    Ok(match spec.family {
        Family::Lame => gen_lame_tables(spec.m, &spec.k2, order)?,
        Family::Mathieu => gen_mathieu_tables(spec.m, order)?,
    })
}

fn emit(out: Option<&Path>, content: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, content)?,
        None => std::io::stdout().write_all(content)?,
    }
    Ok(())
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value = "0")]
    k2: String,
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_coeffs(a: &CoeffsArgs) -> Result<i32, CliError> {
    check_order(a.order)?;
    let k2 = parse_k2(&a.k2)?;
    let tables = match a.family {
        FamilyArg::Lame => gen_lame_tables(a.m, &k2, a.order),
        FamilyArg::Mathieu if k2 == Rational::from_integer(0.into()) => gen_mathieu_tables(a.m, a.order),
        FamilyArg::Mathieu => return Err(usage("mathieu tables have no modulus")),
    }
    .map_err(|e| CliError::Failure(e.to_string()))?;
    let bytes = match a.format {
        TableFormat::Json => to_json_string(&tables_to_json(&tables)).into_bytes(),
        TableFormat::Csv => {
            let mut buf = Vec::new();
            write_tables_csv(&tables, &mut buf)?;
            buf
        }
    };
    emit(a.out.as_deref(), &bytes)?;
    Ok(0)
}

#[derive(Args, Debug)]
struct EigenArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    order: usize,
    /// Also run the reference solver.
    #[arg(long)]
    oracle: bool,
    /// Use tables from a JSON file written by `coeffs`.
    #[arg(long)]
    tables: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: TextFormat,
}

fn load_tables(path: &Path) -> Result<CoeffTables, CliError> {
    let text = fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    tables_from_json(&v)
}

fn cmd_eigen(a: &EigenArgs) -> Result<i32, CliError> {
    let spec = a.problem.spec()?;
    let tables = match &a.tables {
        Some(p) => load_tables(p)?,
        None => {
            check_order(a.order)?;
            // One extra order so the estimate is the first omitted term.
            tables_for(&spec, a.order + 1)?
        }
    };
    let series = eigen_series(&spec, &tables, a.order)?;
    let oracle = if a.oracle { Some(eigen_oracle(&spec, &OracleConfig::default())?) } else { None };
    let value = series.value.to_f64();
    match a.format {
        TextFormat::Text => {
            let mut s = format!("series {}\nomitted_term {}\n", short(value), short(series.err_estimate));
            if let Some(o) = &oracle {
                let diff = (series.value - o.value).to_f64();
                s += &format!(
                    "oracle {}\noracle_error {}\ndifference {}\n",
                    short(o.value.to_f64()),
                    short(o.err_estimate),
                    short(diff)
                );
            }
            emit(None, s.as_bytes())?;
        }
        TextFormat::Json => {
            let mut v = json!({
                "family": spec.family.name(),
                "m": spec.m,
                "branch": spec.branch.name(),
                "k2": spec.k2.to_string(),
                "param": num(spec.param),
                "order": a.order,
                "series": num(value),
                "omitted_term": num(series.err_estimate),
            });
            if let Some(o) = &oracle {
                v["oracle"] = num(o.value.to_f64());
                v["oracle_error"] = num(o.err_estimate);
                v["difference"] = num((series.value - o.value).to_f64());
            }
            emit(None, to_json_string(&v).as_bytes())?;
        }
    }
    Ok(0)
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    order: usize,
    /// Points, comma separated.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    z: Vec<f64>,
    /// Also evaluate the reference eigenfunction.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_rows(header: &[&str], rows: &[Vec<f64>], format: TableFormat, out: Option<&Path>) -> Result<(), CliError> {
    let bytes = match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header)?;
            for r in rows {
                w.write_record(r.iter().map(|&x| short(x)))?;
            }
            w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?
        }
        TableFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(header.iter().zip(r).map(|(h, &x)| (h.to_string(), num(x))).collect()))
                .collect();
            to_json_string(&Value::Array(items)).into_bytes()
        }
    };
    emit(out, &bytes)
}

fn cmd_eval(a: &EvalArgs) -> Result<i32, CliError> {
    check_order(a.order)?;
    let spec = a.problem.spec()?;
    let tables = tables_for(&spec, a.order)?;
    let reference = if a.oracle { Some(Eigenfunction::new(&spec, &OracleConfig::default())?) } else { None };
    let mut rows = Vec::with_capacity(a.z.len());
    for &z in &a.z {
        let (t, _) = spec.t_of_z(z)?;
        let mut row = vec![z, t, eval_function(&spec, &tables, z, a.order)?];
        if let Some(f) = &reference {
            row.push(f.eval(z));
        }
        rows.push(row);
    }
    let header: &[&str] = if a.oracle { &["z", "t", "series", "oracle"] } else { &["z", "t", "series"] };
    write_rows(header, &rows, a.format, a.out.as_deref())?;
    Ok(0)
}

#[derive(Args, Debug)]
struct UniformArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 2)]
    terms: u8,
    /// Sign of the two-term correction; defaults to the resolved one.
    #[arg(long, value_enum)]
    b0_sign: Option<SignArg>,
    /// Evenly spaced points on [0, s + 0.2] when --x is absent.
    #[arg(long, default_value_t = 41)]
    points: usize,
    /// Points in x = sn z (Lamé) or cos z (Mathieu), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_uniform(a: &UniformArgs) -> Result<i32, CliError> {
    let spec = a.problem.spec()?;
    let b0_sign = match a.b0_sign {
        Some(SignArg::AsPrinted) => B0Sign::AsPrinted,
        Some(SignArg::Flipped) => B0Sign::Flipped,
        None => resolved_b0_sign(spec.family),
    };
    let approx = UniformApprox::new(&spec, UniformOptions { b0_sign, ..Default::default() })?;
    let xs: Vec<f64> = if a.x.is_empty() {
        if a.points < 2 {
            return Err(usage("--points must be at least 2"));
        }
        let top = approx.map.s + 0.2;
        (0..a.points).map(|i| top * i as f64 / (a.points - 1) as f64).collect()
    } else {
        a.x.clone()
    };
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        rows.push(vec![x, approx.map.forward(x)?, approx.eval_x(x, a.terms)?]);
    }
    write_rows(&["x", "zeta", "value"], &rows, a.format, a.out.as_deref())?;
    Ok(0)
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    /// Directory for `<suite>.json` and `<suite>.csv`.
    #[arg(long, default_value = "lmk-report")]
    out: PathBuf,
    /// Cap parameter grids at 800.
    #[arg(long)]
    fast: bool,
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32, CliError> {
    let suites: Vec<Suite> = match a.suite {
        SuiteArg::Coeffs => vec![Suite::Coeffs],
        SuiteArg::Orders => vec![Suite::Orders],
        SuiteArg::Pqr => vec![Suite::Pqr],
        SuiteArg::Uniform => vec![Suite::Uniform],
        SuiteArg::Splitting => vec![Suite::Splitting],
        SuiteArg::Norm => vec![Suite::Norm],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut all = true;
    let mut out = String::new();
    for s in suites {
        let report = s.run(a.fast);
        let (json_path, _) = report.write(&a.out)?;
        for c in s.criteria() {
            let pass = report.case(c).is_some_and(|c| c.pass);
            out += &format!("{c:<4}{}  {}\n", if pass { "PASS" } else { "FAIL" }, s.name());
        }
        for (k, v) in &report.resolved_choices {
            out += &format!("    {k} = {v}\n");
        }
        out += &format!("    report {}\n", json_path.display());
        all &= report.pass();
    }
    emit(None, out.as_bytes())?;
    Ok(if all { 0 } else { 1 })
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("LMK_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage(format!("LMK_THREADS must be a positive integer, got {v:?}")))?;
        // A pool may already exist when embedded; the first one wins.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    init_threads()?;
    match &cli.command {
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Eigen(a) => cmd_eigen(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Uniform(a) => cmd_uniform(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
