use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dgegen::expansion::{
    coeff_table, integral_b_variant, truncation_order, BVariant, CoeffTable, ExpansionParams, SeriesEvaluator,
};
use dgegen::verify::{check_b, run_suite, Suite, VerifyOptions, DEFAULT_CASES, DEFAULT_SEED, TOL_2D};
use dgegen::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_ORACLE: u8 = 4;

/// Double Gegenbauer expansion of |s-t|^{2 nu} sgn^eps(s-t): coefficients,
/// series evaluation and closed-form checks against quadrature.
#[derive(Parser)]
#[command(name = "dgegen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the coefficient table b_{l,m}.
    Coeffs(CoeffsArgs),
    /// Evaluate the truncated series on an N x N grid of [-1,1]^2.
    Eval(EvalArgs),
    /// Compare closed forms with the quadrature oracle.
    Verify(VerifyArgs),
    /// Print the sheared integral B_{l,m}(x).
    Bx(BxArgs),
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, default_value_t = 0)]
    eps: u8,
}

impl ParamArgs {
    fn params(&self) -> Result<ExpansionParams, Error> {
        ExpansionParams::new(self.lambda, self.mu, self.nu, self.eps)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    lmax: usize,
    #[arg(long)]
    mmax: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Truncation `L` or `L,M`.
    #[arg(long, conflicts_with = "tol")]
    order: Option<String>,
    /// Choose the truncation from the tail bound instead of `--order`.
    #[arg(long, required_unless_present = "order")]
    tol: Option<f64>,
    #[arg(long)]
    grid: usize,
    /// Evaluate even when the convergence hypothesis fails.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Pass tolerance for every identity; per-identity defaults otherwise.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CASES)]
    cases: usize,
    /// Record per-case wall-clock seconds (reports are then not reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Plus,
    Minus,
    Abs,
    Abssgn,
}

impl From<Variant> for BVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Plus => BVariant::PlusPart,
            Variant::Minus => BVariant::MinusPart,
            Variant::Abs => BVariant::Abs,
            Variant::Abssgn => BVariant::AbsSgn,
        }
    }
}

#[derive(Args)]
struct BxArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, value_enum, default_value = "plus")]
    variant: Variant,
    /// Also integrate numerically and print the difference.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = TOL_2D)]
    tol: f64,
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    Usage(String),
    /// Verification ran but some case failed.
    Failed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct TableJson<'a> {
    params: &'a ExpansionParams,
    #[serde(rename = "L")]
    l: usize,
    #[serde(rename = "M")]
    m: usize,
    parity_zeroed: bool,
    values: &'a [f64],
}

fn write_table(table: &CoeffTable, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Csv => {
            writeln!(out, "ell,m,b")?;
            for ell in 0..=table.l_max {
                for m in 0..=table.m_max {
                    if table.parity_allows(ell, m) {
                        writeln!(out, "{ell},{m},{:?}", table.get(ell, m))?;
                    }
                }
            }
        }
        Format::Json => {
            let doc = TableJson {
                params: &table.params,
                l: table.l_max,
                m: table.m_max,
                parity_zeroed: table.parity_zeroed,
                values: &table.values,
            };
            serde_json::to_writer(&mut *out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn cmd_coeffs(a: &CoeffsArgs) -> Result<(), Failure> {
    let table = coeff_table(&a.params.params()?, a.lmax, a.mmax)?;
    let mut out = open_out(&a.out)?;
    write_table(&table, a.format, &mut *out)?;
    out.flush()?;
    Ok(())
}

fn parse_order(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--order expects L or L,M (got '{s}')"));
    let mut it = s.split(',').map(|p| p.trim().parse::<usize>());
    let l = it.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let m = match it.next() {
        Some(m) => m.map_err(|_| bad())?,
        None => l,
    };
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((l, m))
}

fn cmd_eval(a: &EvalArgs) -> Result<(), Failure> {
    let p = a.params.params()?;
    if a.grid == 0 {
        return Err(Failure::Usage("--grid must be at least 1".into()));
    }
    let (l, m) = match (&a.order, a.tol) {
        (Some(o), _) => parse_order(o)?,
        (None, Some(tol)) => truncation_order(&p, tol)?,
        (None, None) => return Err(Failure::Usage("one of --order or --tol is required".into())),
    };
    let ev = SeriesEvaluator::new(&p, l, m, a.force)?;
    let n = a.grid;
    let coord = |i: usize| if n == 1 { -1.0 } else { -1.0 + 2.0 * i as f64 / (n - 1) as f64 };
    let mut out = open_out(&a.out)?;
    writeln!(out, "# L={l} M={m} tail_bound={:?}", ev.tail_bound())?;
    writeln!(out, "s,t,series,kernel,abs_err")?;
    for i in 0..n {
        for j in 0..n {
            let (s, t) = (coord(i), coord(j));
            let v = ev.eval(s, t);
            let k = p.kernel(s, t);
            writeln!(out, "{s:?},{t:?},{v:?},{k:?},{:?}", (v - k).abs())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = a.suite.parse()?;
    let opts = VerifyOptions { tol: a.tol, seed: a.seed, cases: a.cases, timing: a.timing };
    let report = run_suite(suite, &opts);
    let mut out = open_out(&a.out)?;
    serde_json::to_writer_pretty(&mut *out, &report)?;
    writeln!(out)?;
    out.flush()?;
    if report.overall_pass {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn cmd_bx(a: &BxArgs) -> Result<(), Failure> {
    let kind = BVariant::from(a.variant);
    let value = integral_b_variant(kind, a.lambda, a.mu, a.nu, a.ell, a.m, a.x)?;
    let mut out = io::stdout().lock();
    if !a.oracle {
        writeln!(out, "{value:?}")?;
        return Ok(());
    }
    let oracle = check_b(kind, a.lambda, a.mu, a.nu, a.ell, a.m, a.x, a.tol).oracle?;
    writeln!(out, "closed_form {value:?}")?;
    writeln!(out, "oracle {oracle:?}")?;
    writeln!(out, "abs_err {:?}", (value - oracle).abs())?;
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("GEGEN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // only fails if a pool already exists, which cannot happen this early
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bx(a) => cmd_bx(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::FAILURE,
        Err(Failure::Usage(msg)) => {
            eprintln!("dgegen: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(e)) => {
            eprintln!("dgegen: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("dgegen: {e}");
            ExitCode::from(match e {
                Error::Hypothesis { .. } => EXIT_HYPOTHESIS,
                Error::NonConvergence { .. } | Error::EigenConvergence(_) => EXIT_ORACLE,
                _ => EXIT_USAGE,
            })
        }
    }
}
