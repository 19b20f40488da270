//! Command-line driver.
//!
//! Exit status: 0 on success, 1 on a negative verdict (a condition fails,
//! no point exists, or the iteration does not converge), 2 on input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use proximity_core::certify::{
    certify_f_domination, certify_f_weak_domination, commutativity_report,
    weak_domination_enumeration_size, CertificationReport,
};
use proximity_core::fileio::{parse_problem, write_problem};
use proximity_core::gallery::GallerySpec;
use proximity_core::report::{report_to_json, report_to_text, trace_to_json, trace_to_text};
use proximity_core::solver::{solve, Outcome};
use proximity_core::{Func, Problem};

/// Enumeration budget the domination certifiers refuse to exceed without
/// `--force-large`.
const ENUMERATION_GUARD: u128 = 100_000_000;

#[derive(Parser)]
#[command(name = "proximity", version, about = "Common best proximity points on finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Structured,
}

#[derive(Args)]
struct ProblemArgs {
    /// Path to a problem file.
    #[arg(long)]
    problem: PathBuf,
    /// Comparison function: f1|f2|f3|f4 (overrides the file's selection).
    #[arg(long)]
    f: Option<String>,
    /// Override the attainment tolerance from the file.
    #[arg(long, allow_negative_numbers = true)]
    tol_eq: Option<f64>,
    /// Override the convergence tolerance from the file.
    #[arg(long, allow_negative_numbers = true)]
    tol_conv: Option<f64>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    emit: Emit,
    /// Run even when the filtered enumeration exceeds the guard.
    #[arg(long)]
    force_large: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a problem file and emit every certification report.
    Check {
        #[command(flatten)]
        common: ProblemArgs,
        /// Check this margin instead of maximizing it.
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
    },
    /// Run the full pipeline: hypotheses, iteration, upgrade, cross-check.
    Solve {
        #[command(flatten)]
        common: ProblemArgs,
        /// Start point (defaults to the least core point).
        #[arg(long)]
        x0: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Write a built-in instance to a problem file.
    Gallery {
        /// circle | cartesian-product | ex22 | reciprocal-counterexample
        name: String,
        /// Inner radius (circle).
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        /// Outer radius (circle).
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
        /// Sample count (circle; even, at least 4).
        #[arg(long)]
        n: Option<usize>,
        /// Extra sample values (ex22; repeatable).
        #[arg(long = "extra", allow_negative_numbers = true)]
        extras: Vec<f64>,
        /// Output path; defaults to `<name>.problem`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run only the brute-force oracle.
    Oracle {
        #[command(flatten)]
        common: ProblemArgs,
    },
}

enum Failure {
    /// Input could not be loaded or validated.
    Input(String),
    /// Everything ran; the verdict is negative.
    Verdict(String),
}

fn load(common: &ProblemArgs) -> Result<(Problem, Func), Failure> {
    let text = fs::read_to_string(&common.problem)
        .map_err(|e| Failure::Input(format!("{}: {e}", common.problem.display())))?;
    let parsed = parse_problem::<f64>(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", common.problem.display())))?;
    let mut problem = parsed.problem;
    if common.tol_eq.is_some() || common.tol_conv.is_some() {
        problem = problem
            .with_tolerances(
                common.tol_eq.unwrap_or_else(|| problem.tol_eq()),
                common.tol_conv.unwrap_or_else(|| problem.tol_conv()),
            )
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    let f = match &common.f {
        Some(name) => {
            Func::by_name(name).ok_or_else(|| Failure::Input(format!("unknown f kind {name:?}")))?
        }
        None => parsed.f.unwrap_or_else(Func::log),
    };
    Ok((problem, f))
}

fn guard(problem: &Problem, force: bool) -> Result<(), Failure> {
    let size = weak_domination_enumeration_size(problem);
    if size > ENUMERATION_GUARD && !force {
        return Err(Failure::Input(format!(
            "the filtered enumeration has {size} combinations (guard: {ENUMERATION_GUARD}); \
             pass --force-large to run anyway"
        )));
    }
    Ok(())
}

fn emit_report(report: &CertificationReport<f64>, emit: Emit, tau: Option<f64>) {
    match emit {
        Emit::Structured => {
            let mut value = report_to_json(report);
            if let Some(tau) = tau {
                value["tau_checked"] = serde_json::json!(tau);
                value["holds_at_tau"] = serde_json::json!(report.holds_with_tau(tau));
            }
            println!("{value}");
        }
        Emit::Text => {
            print!("{}", report_to_text(report));
            if let Some(tau) = tau {
                println!("  holds at tau={tau}: {}", report.holds_with_tau(tau));
            }
        }
    }
}

fn run_check(common: &ProblemArgs, tau: Option<f64>) -> Result<(), Failure> {
    if let Some(t) = tau {
        if !t.is_finite() || t <= 0.0 {
            return Err(Failure::Input(format!("--tau must be positive, got {t}")));
        }
    }
    let (problem, f) = load(common)?;
    guard(&problem, common.force_large)?;

    let commuting = commutativity_report(&problem);
    let weak = certify_f_weak_domination(&problem, &f).map_err(|e| Failure::Input(e.to_string()))?;
    let dom = certify_f_domination(&problem, &f).map_err(|e| Failure::Input(e.to_string()))?;

    emit_report(&commuting, common.emit, None);
    emit_report(&weak, common.emit, tau);
    emit_report(&dom, common.emit, tau);

    let negative = match tau {
        None => !commuting.holds || !weak.holds || !dom.holds,
        Some(t) => !commuting.holds || !weak.holds_with_tau(t) || !dom.holds_with_tau(t),
    };
    if negative {
        return Err(Failure::Verdict("at least one condition fails".into()));
    }
    Ok(())
}

fn run_solve(common: &ProblemArgs, x0: Option<&str>, max_iter: usize) -> Result<(), Failure> {
    let (problem, f) = load(common)?;
    if let Some(x0) = x0 {
        if problem.space().index_of(x0).is_none() {
            return Err(Failure::Input(format!("start point {x0:?} is not in the space")));
        }
    }
    guard(&problem, common.force_large)?;
    let trace = solve(&problem, &f, x0, max_iter).map_err(|e| match e {
        // A start point outside the proximal core is unusable input; every
        // other solver error is a negative verdict about the instance.
        proximity_core::Error::NotInCore(_) => Failure::Input(e.to_string()),
        _ => Failure::Verdict(e.to_string()),
    })?;
    match common.emit {
        Emit::Structured => println!("{}", trace_to_json(&trace)),
        Emit::Text => print!("{}", trace_to_text(&trace)),
    }
    match (trace.outcome, &trace.result) {
        (Outcome::CoincidenceFound | Outcome::ConvergedTo, Some(_)) => Ok(()),
        (Outcome::HypothesisViolated, _) => {
            let failed = trace
                .hypotheses
                .as_ref()
                .map(|h| h.failed().join(", "))
                .unwrap_or_default();
            Err(Failure::Verdict(format!("hypothesis violated: {failed}")))
        }
        _ => Err(Failure::Verdict("iteration did not converge".into())),
    }
}

fn run_gallery(
    name: &str,
    a: Option<f64>,
    b: Option<f64>,
    n: Option<usize>,
    extras: &[f64],
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let mut spec = GallerySpec::<f64>::by_name(name)
        .ok_or_else(|| Failure::Input(format!("unknown gallery instance {name:?}")))?;
    match &mut spec {
        GallerySpec::Circle { inner, outer, samples } => {
            if let Some(a) = a {
                *inner = a;
            }
            if let Some(b) = b {
                *outer = b;
            }
            if let Some(n) = n {
                *samples = n;
            }
        }
        GallerySpec::Ex22 { extras: slot } => {
            slot.extend_from_slice(extras);
        }
        _ => {}
    }
    let problem = spec.materialize().map_err(|e| Failure::Input(e.to_string()))?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{}.problem", spec.name())));
    fs::write(&path, write_problem(&problem, None))
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    println!("{}", path.display());
    Ok(())
}

fn run_oracle(common: &ProblemArgs) -> Result<(), Failure> {
    let (problem, _) = load(common)?;
    let points = problem.brute_force_cbpp();
    match common.emit {
        Emit::Structured => println!("{}", serde_json::json!({ "cbpp": points })),
        Emit::Text => {
            if points.is_empty() {
                println!("no common best proximity point");
            } else {
                for p in &points {
                    println!("{p}");
                }
            }
        }
    }
    if points.is_empty() {
        return Err(Failure::Verdict("no common best proximity point exists".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { common, tau } => run_check(common, *tau),
        Command::Solve { common, x0, max_iter } => run_solve(common, x0.as_deref(), *max_iter),
        Command::Gallery { name, a, b, n, extras, out } => {
            run_gallery(name, *a, *b, *n, extras, out.clone())
        }
        Command::Oracle { common } => run_oracle(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict(message)) => {
            eprintln!("verdict: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
