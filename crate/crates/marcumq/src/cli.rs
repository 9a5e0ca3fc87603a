//! Command-line front end: point evaluation, diagnostics, the critical
//! order, property scans, and the full verification suite.
//!
//! Exit codes: 0 ok, 2 usage or domain error, 3 numerical failure,
//! 4 asserted property regression.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::concavity::{
    classify_shape, curvature_kernel, default_shape_grid, log_density_curvature, ratio_gap, slope_statistic,
    ModeLocation, PhaseConcavity,
};
use crate::critical;
use crate::error::Error;
use crate::marcum::{marcum_q, MarcumPoint, MethodChoice};
use crate::verify::{
    self, default_config, default_small_b_grid, run_scan, run_suite, Property, SuiteEntry, SuiteReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_REGRESSION: i32 = 4;

#[derive(Parser)]
#[command(
    name = "marcumq",
    about = "Generalized Marcum Q evaluation and log-concavity verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Q_nu(a, b)
    Eval(EvalArgs),
    /// Point diagnostics of the integrand (kernel, gap, slope, curvature)
    Diag(DiagArgs),
    /// Solve for the critical order
    Nu0(Nu0Args),
    /// Run one property scan
    Scan(ScanArgs),
    /// Run the full default verification suite
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Quadrature,
    PoissonSeries,
    GammaClosedForm,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Quadrature => MethodChoice::Quadrature,
            MethodArg::PoissonSeries => MethodChoice::PoissonSeries,
            MethodArg::GammaClosedForm => MethodChoice::GammaClosedForm,
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, value_enum, default_value = "plain")]
    format: FormatArg,
}

#[derive(Args)]
struct DiagArgs {
    #[arg(long, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Point at which the diagnostics are evaluated
    #[arg(long, allow_negative_numbers = true, required_unless_present = "classify")]
    t: Option<f64>,
    /// Classify the density shape over the default grid instead
    #[arg(long)]
    classify: bool,
    #[arg(long, value_enum, default_value = "plain")]
    format: FormatArg,
}

#[derive(Args)]
struct Nu0Args {
    #[arg(long, default_value_t = 1e-12, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long, value_enum, default_value = "plain")]
    format: FormatArg,
}

#[derive(Args)]
struct ScanArgs {
    /// Property id (see `verify::Property`), e.g. logconcave-q-b, tp2
    #[arg(long)]
    property: String,
    /// Override the order grid (comma-separated, increasing)
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Override the noncentrality grid
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Rebuild the scanned b axis as `points` uniform samples of [lo, hi]
    #[arg(long, allow_negative_numbers = true)]
    b_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b_hi: Option<f64>,
    #[arg(long)]
    b_points: Option<usize>,
    /// Fixed b coordinates for the nu- and a-axis scans
    #[arg(long, allow_hyphen_values = true)]
    fixed_b: Option<String>,
    /// TP2 kernel arguments
    #[arg(long, allow_negative_numbers = true)]
    t1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t2: Option<f64>,
    #[arg(long, default_value_t = 200)]
    s_points: usize,
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Write the per-cell CSV here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Run the default property set (the only set; flag kept for clarity)
    #[arg(long, default_value_t = true)]
    default: bool,
    /// Write the per-cell CSV here
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| part.trim().parse::<f64>().map_err(|e| format!("bad number {part:?}: {e}")))
        .collect()
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain { .. } | Error::InvalidGrid { .. } => EXIT_USAGE,
        Error::Overflow { .. }
        | Error::Convergence { .. }
        | Error::BracketFailure { .. }
        | Error::GridTooCoarse { .. } => EXIT_NUMERICAL,
    }
}

fn fmt_plain(x: f64) -> String {
    format!("{x:.8}")
}

fn fmt_csv(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Parses the process arguments and dispatches; returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Diag(args) => cmd_diag(args),
        Command::Nu0(args) => cmd_nu0(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Suite(args) => cmd_suite(args),
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code(e)
}

fn cmd_eval(args: EvalArgs) -> i32 {
    let point = match MarcumPoint::new(args.nu, args.a, args.b) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    match marcum_q(point, args.method.into(), args.tol) {
        Ok(r) => {
            match args.format {
                FormatArg::Plain => println!("{} {:.2e} {}", fmt_plain(r.value), r.abs_err, r.method),
                FormatArg::Csv => {
                    println!("value,abs_err,method");
                    println!("{},{},{}", fmt_csv(r.value), fmt_csv(r.abs_err), r.method);
                }
            }
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

fn cmd_diag(args: DiagArgs) -> i32 {
    if args.classify {
        let grid = default_shape_grid(args.a);
        return match classify_shape(args.nu, args.a, &grid) {
            Ok(report) => {
                let mode = match report.mode {
                    ModeLocation::Boundary => "boundary".to_string(),
                    ModeLocation::Interior(t0) => fmt_plain(t0),
                };
                let phase = |p: PhaseConcavity| match p {
                    PhaseConcavity::Yes => "yes",
                    PhaseConcavity::No => "no",
                    PhaseConcavity::EmptyPhase => "empty",
                };
                let (worst, at) = report.worst_second_difference.unwrap_or((f64::NAN, f64::NAN));
                match args.format {
                    FormatArg::Plain => println!(
                        "mode={} rising_logconcave={} declining_logconcave={} worst_d2={:.3e} at={}",
                        mode,
                        phase(report.rising_logconcave),
                        phase(report.declining_logconcave),
                        worst,
                        fmt_plain(at),
                    ),
                    FormatArg::Csv => {
                        println!("mode,rising_logconcave,declining_logconcave,worst_d2,worst_d2_at");
                        println!(
                            "{},{},{},{},{}",
                            mode,
                            phase(report.rising_logconcave),
                            phase(report.declining_logconcave),
                            fmt_csv(worst),
                            fmt_csv(at)
                        );
                    }
                }
                EXIT_OK
            }
            Err(e) => fail(&e),
        };
    }

    let t = args.t.expect("clap enforces --t without --classify");
    let kernel = match curvature_kernel(args.nu, t) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let gap = match ratio_gap(args.nu, t) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let slope = match slope_statistic(args.nu, args.a, t) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let curvature = if args.a > 0.0 {
        match log_density_curvature(args.nu, args.a, t) {
            Ok(v) => v,
            Err(e) => return fail(&e),
        }
    } else {
        f64::NAN
    };
    match args.format {
        FormatArg::Plain => println!(
            "kernel={} gap={} slope={} curvature={}",
            fmt_plain(kernel),
            fmt_plain(gap),
            fmt_plain(slope),
            fmt_plain(curvature),
        ),
        FormatArg::Csv => {
            println!("nu,a,t,kernel,gap,slope,curvature");
            println!(
                "{},{},{},{},{},{},{}",
                fmt_csv(args.nu),
                fmt_csv(args.a),
                fmt_csv(t),
                fmt_csv(kernel),
                fmt_csv(gap),
                fmt_csv(slope),
                fmt_csv(curvature)
            );
        }
    }
    EXIT_OK
}

fn cmd_nu0(args: Nu0Args) -> i32 {
    match critical::solve(args.tol, args.max_iter) {
        Ok(r) => {
            match args.format {
                FormatArg::Plain => println!(
                    "{} residual={:.2e} iterations={}",
                    fmt_plain(r.root),
                    r.residual,
                    r.iterations
                ),
                FormatArg::Csv => {
                    println!("root,residual,iterations,bracket_lo,bracket_hi");
                    println!(
                        "{},{},{},{},{}",
                        fmt_csv(r.root),
                        fmt_csv(r.residual),
                        r.iterations,
                        fmt_csv(r.bracket.0),
                        fmt_csv(r.bracket.1)
                    );
                }
            }
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

fn cmd_scan(args: ScanArgs) -> i32 {
    let Some(property) = Property::parse(&args.property) else {
        eprintln!(
            "error: unknown property {:?}; known: {}",
            args.property,
            Property::all().iter().map(|p| p.id()).collect::<Vec<_>>().join(", ")
        );
        return EXIT_USAGE;
    };

    let lists = match (
        args.nu.as_deref().map(parse_list).transpose(),
        args.a.as_deref().map(parse_list).transpose(),
        args.fixed_b.as_deref().map(parse_list).transpose(),
    ) {
        (Ok(nu), Ok(a), Ok(fixed_b)) => (nu, a, fixed_b),
        (Err(e), ..) | (_, Err(e), _) | (_, _, Err(e)) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let (nu_list, a_list, fixed_b_list) = lists;

    let report = match property {
        Property::Tp2Kernel => {
            let t1 = args.t1.unwrap_or(1.0);
            let t2 = args.t2.unwrap_or(2.0);
            let s_grid: Vec<f64> = (1..=args.s_points).map(|i| i as f64 / (args.s_points + 1) as f64).collect();
            verify::check_tp2_kernel(t1, t2, &s_grid)
        }
        Property::SmallBAsymptotic => {
            let nu_grid = nu_list.unwrap_or_else(|| vec![0.3, 0.5, 1.0, 2.0]);
            let b_grid = fixed_b_list.unwrap_or_else(default_small_b_grid);
            verify::check_small_b_many(&nu_grid, &b_grid, args.tol.unwrap_or(1e-12))
        }
        p => {
            let mut config = default_config(p);
            if let Some(nu) = nu_list {
                config.nu_grid = nu;
            }
            if let Some(a) = a_list {
                config.a_grid = a;
            }
            if let (Some(lo), Some(hi), Some(points)) = (args.b_lo, args.b_hi, args.b_points) {
                if points < 3 || hi <= lo {
                    eprintln!("error: --b-lo/--b-hi/--b-points must describe an increasing axis of >= 3 points");
                    return EXIT_USAGE;
                }
                let step = (hi - lo) / (points - 1) as f64;
                config.b_grid = (0..points).map(|i| lo + step * i as f64).collect();
                config.step = step;
            }
            if let Some(fixed) = fixed_b_list {
                config.b_grid = fixed;
            }
            if let Some(tol) = args.tol {
                config.tol = tol;
            }
            run_scan(&config)
        }
    };

    let suite = SuiteReport {
        outcomes: vec![(property.id().to_string(), report)],
    };
    finish_suite(suite, args.out)
}

fn cmd_suite(args: SuiteArgs) -> i32 {
    let entries: Vec<SuiteEntry> = verify::default_suite();
    let suite = run_suite(&entries);
    finish_suite(suite, args.out)
}

fn finish_suite(suite: SuiteReport, out: Option<PathBuf>) -> i32 {
    print!("{}", suite.summary());
    if let Some(path) = out {
        if let Err(e) = fs::write(&path, suite.csv()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if suite.any_error() {
        for (_, outcome) in &suite.outcomes {
            if let Err(e) = outcome {
                return exit_code(e);
            }
        }
        EXIT_NUMERICAL
    } else if suite.any_asserted_failure() {
        EXIT_REGRESSION
    } else {
        EXIT_OK
    }
}
