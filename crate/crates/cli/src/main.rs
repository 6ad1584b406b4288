//! Command line front end: single-config inspection, the full sweep, the
//! printed-formula audit, certified quadrature, and CDF enclosures.
//!
//! Exit codes: 0 success, 1 verification violations (or an unmet quadrature
//! target), 2 usage or input errors. All stdout/file bodies are
//! deterministic; timestamps go to stderr only.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use oqb_core::bounds::printed::printed_main_bound;
use oqb_core::report::{audit_csv, certificate_json, enclosures_json, fmt_float, EnclosureRow};
use oqb_core::{
    adaptive, bound_oracle, cdf_enclosure, composite, corpus_model, default_corpus, norm_f2,
    pdf_model, run_verify, tau_main, AuditRow, Error, Interval, KernelConfig, NormVariant,
    SweepGrid, Weights,
};

#[derive(Parser)]
#[command(
    name = "oqb",
    version,
    about = "Certified error bounds for weighted deviation functionals"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the deviation functional's value and its five terms for one
    /// configuration.
    Tau(ConfigArgs),
    /// Print the four certified bounds (and the displayed forms) for one
    /// configuration.
    Bounds(ConfigArgs),
    /// Run the full sweep and write the JSON report.
    Verify(VerifyArgs),
    /// Compare displayed special-case expressions to the oracle; write CSV.
    Audit(AuditArgs),
    /// Integrate one stock model with a certified error bound.
    Integrate(IntegrateArgs),
    /// Enclose a distribution function on a grid of evaluation points.
    Cdf(CdfArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Stock model id (sq, cube, exp, sin3, runge, log1p).
    #[arg(long = "fn")]
    function: String,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Evaluation point inside [a + s, b - s].
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    /// Endpoint offset fraction in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    h: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

impl ConfigArgs {
    fn config(&self) -> Result<KernelConfig, Error> {
        KernelConfig::new(
            Interval::new(self.a, self.b)?,
            Weights::new(self.alpha, self.beta)?,
            self.h,
            self.x,
        )
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Grid preset; only "default" is defined.
    #[arg(long, default_value = "default")]
    grid: String,
    /// "default" or a comma-separated list of stock model ids.
    #[arg(long, default_value = "default")]
    corpus: String,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed one artificial bound violation (exercises the failure path).
    #[arg(long)]
    inject_violation: bool,
}

#[derive(Args)]
struct AuditArgs {
    /// CSV file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IntegrateArgs {
    #[arg(long = "fn")]
    function: String,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 0.0)]
    h: f64,
    /// Adaptive mode: refine until the bound is at or below this target.
    #[arg(long)]
    target: Option<f64>,
    /// Composite mode: fixed number of equal panels.
    #[arg(long)]
    panels: Option<usize>,
    /// Norm variant for the bound: sup, l1, or lp:<p>.
    #[arg(long, default_value = "sup")]
    norm: String,
}

#[derive(Args)]
struct CdfArgs {
    /// Bundled density id (uniform, beta22, truncexp, cosine).
    #[arg(long)]
    density: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    h: f64,
    /// Number of equispaced interior evaluation points.
    #[arg(long, default_value_t = 9)]
    points: usize,
    #[arg(long, default_value = "sup")]
    norm: String,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Tau(args) => cmd_tau(&args),
        Cmd::Bounds(args) => cmd_bounds(&args),
        Cmd::Verify(args) => cmd_verify(&args),
        Cmd::Audit(args) => cmd_audit(&args),
        Cmd::Integrate(args) => cmd_integrate(&args),
        Cmd::Cdf(args) => cmd_cdf(&args),
    }
}

fn write_out(out: &Option<PathBuf>, body: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn stderr_header(what: &str) {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    eprintln!("# oqb {what} started at unix {secs}");
}

// Honors OQB_THREADS (0 or unset = auto) for the parallel sweep.
fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    let threads = match std::env::var("OQB_THREADS") {
        Err(_) => 0,
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            Error::InvalidArgument(format!(
                "OQB_THREADS must be a nonnegative integer, got {s:?}"
            ))
        })?,
    };
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn cmd_tau(args: &ConfigArgs) -> Result<i32, Error> {
    let m = corpus_model(&args.function)?;
    let cfg = args.config()?;
    let bd = tau_main(&m, &cfg)?;
    println!("total {}", fmt_float(bd.total));
    println!("term_fprime_x {}", fmt_float(bd.term_fprime_x));
    println!("term_f_x {}", fmt_float(bd.term_f_x));
    println!("term_endpoints_f {}", fmt_float(bd.term_endpoints_f));
    println!(
        "term_endpoints_fprime {}",
        fmt_float(bd.term_endpoints_fprime)
    );
    println!("term_means {}", fmt_float(bd.term_means));
    Ok(0)
}

fn opt_json(v: &Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => fmt_float(*x),
        _ => "null".to_string(),
    }
}

fn cmd_bounds(args: &ConfigArgs) -> Result<i32, Error> {
    let m = corpus_model(&args.function)?;
    let cfg = args.config()?;
    let mut lines = Vec::new();
    for v in NormVariant::default_set() {
        let norm_value = norm_f2(&m, cfg.iv(), &v)?;
        let rep =
            bound_oracle(&m, &cfg, &v)?.with_printed(printed_main_bound(&cfg, norm_value, &v)?);
        lines.push(format!(
            "{{\"variant\": \"{}\", \"tau\": {}, \"oracle_bound\": {}, \"slack\": {}, \"sharpness\": {}, \"printed_bound\": {}, \"printed_discrepancy\": {}}}",
            v.label(),
            fmt_float(rep.tau),
            fmt_float(rep.oracle_bound),
            fmt_float(rep.slack),
            fmt_float(rep.sharpness_ratio),
            opt_json(&rep.printed_bound),
            opt_json(&rep.printed_discrepancy),
        ));
    }
    println!("[");
    for (i, line) in lines.iter().enumerate() {
        let sep = if i + 1 == lines.len() { "" } else { "," };
        println!("{line}{sep}");
    }
    println!("]");
    Ok(0)
}

fn parse_corpus(spec: &str) -> Result<Vec<oqb_core::FunctionModel>, Error> {
    if spec == "default" {
        return Ok(default_corpus());
    }
    spec.split(',').map(|id| corpus_model(id.trim())).collect()
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, Error> {
    if args.grid != "default" {
        return Err(Error::InvalidArgument(format!(
            "unknown grid preset {:?}; only \"default\" is defined",
            args.grid
        )));
    }
    let grid = SweepGrid::default();
    let corpus = parse_corpus(&args.corpus)?;
    stderr_header("verify");
    let report = with_thread_pool(|| run_verify(&grid, &corpus, args.inject_violation))??;
    write_out(&args.out, &report.to_json_string())?;
    eprintln!(
        "# verify finished: {} cases, {} violations",
        report.summary.configs, report.summary.violations
    );
    Ok(if report.summary.violations > 0 { 1 } else { 0 })
}

fn cmd_audit(args: &AuditArgs) -> Result<i32, Error> {
    stderr_header("audit");
    let rows = oqb_core::run_audit(&SweepGrid::default())?;
    let json_rows: Vec<_> = rows.iter().map(AuditRow::to_json_row).collect();
    write_out(&args.out, &audit_csv(&json_rows))?;
    let disagreements = rows
        .iter()
        .filter(|r| r.verdict == oqb_core::Verdict::Disagree)
        .count();
    eprintln!(
        "# audit finished: {} rows, {} disagreements",
        rows.len(),
        disagreements
    );
    Ok(0)
}

fn cmd_integrate(args: &IntegrateArgs) -> Result<i32, Error> {
    let m = corpus_model(&args.function)?;
    let iv = Interval::new(args.a, args.b)?;
    let variant = NormVariant::parse(&args.norm)?;
    let cert = match (args.target, args.panels) {
        (Some(target), None) => match adaptive(&m, &iv, target, args.h, &variant) {
            Ok(cert) => cert,
            Err(Error::BudgetExceeded { best }) => {
                print!("{}", certificate_json(&best));
                eprintln!(
                    "# target {} not reached within the panel budget; best bound {}",
                    fmt_float(target),
                    fmt_float(best.error_bound)
                );
                return Ok(1);
            }
            Err(e) => return Err(e),
        },
        (None, Some(panels)) => composite(&m, &iv, panels, args.h, &variant)?,
        (None, None) | (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument(
                "pass exactly one of --target (adaptive) or --panels (composite)".to_string(),
            ))
        }
    };
    print!("{}", certificate_json(&cert));
    Ok(0)
}

fn cmd_cdf(args: &CdfArgs) -> Result<i32, Error> {
    let pm = pdf_model(&args.density)?;
    let variant = NormVariant::parse(&args.norm)?;
    if args.points == 0 {
        return Err(Error::InvalidArgument(
            "--points must be at least 1".to_string(),
        ));
    }
    let weights = Weights::new(args.alpha, args.beta)?;
    let support = pm.support;
    let mut rows = Vec::with_capacity(args.points);
    for k in 1..=args.points {
        let x = support.a() + support.width() * k as f64 / (args.points + 1) as f64;
        let cfg = KernelConfig::new(support, weights, args.h, x)?;
        let enc = cdf_enclosure(&pm, &cfg, &variant)?;
        rows.push(EnclosureRow::new(&enc, &variant));
    }
    print!("{}", enclosures_json(&rows));
    Ok(0)
}
