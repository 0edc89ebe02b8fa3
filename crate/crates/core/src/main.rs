#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand};
use hyperint::closedform::evaluate_target;
use hyperint::quad;
use hyperint::verify::{self, make_target, SuiteOptions};
use hyperint::Error;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_CONVERGENT: u8 = 3;

/// Closed forms of ∫₀^∞ x^{μ-1} sinh/cosh quotients, checked by quadrature.
#[derive(Parser)]
#[command(name = "hyperint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a corpus of cases through both engines.
    Verify(VerifyArgs),
    /// Evaluate a single integral.
    Eval(EvalArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON array of cases.
    corpus: PathBuf,
    #[arg(long, default_value_t = verify::DEFAULT_TOL)]
    tol: f64,
    /// Also write the structured report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Append this many sampled cases.
    #[arg(long, default_value_t = 0)]
    random: usize,
}

#[derive(Args)]
struct EvalArgs {
    /// I1..I4 (optionally primed), trig-*, ex3-*, or sinh-pow-cosh-pow.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Also integrate numerically and report the difference.
    #[arg(long)]
    oracle: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Eval(args) => run_eval(args),
    }
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    if !(args.tol > 0.0) {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(EXIT_USAGE);
    }
    let options = SuiteOptions { tol: args.tol, seed: args.seed, jobs: args.jobs, random: args.random };
    let report = match verify::run_suite(&args.corpus, &options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    print!("{}", report.to_text());
    if let Some(path) = &args.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::NotConvergent(_) => ExitCode::from(EXIT_NOT_CONVERGENT),
        _ => ExitCode::from(EXIT_FAIL),
    }
}

fn run_eval(args: EvalArgs) -> ExitCode {
    let target = match make_target(&args.family, args.m, args.mu, args.nu, args.a, args.b, args.beta) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let r = match evaluate_target(&target) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            return exit_for(&e);
        }
    };
    println!("value      {:.16e}", r.value);
    println!("formula_id {}", r.formula_id);
    println!("est_error  {:.3e}", r.est_error);
    for w in &r.warnings {
        println!("warning    {w}");
    }
    if args.oracle {
        match quad::oracle(&target, quad::DEFAULT_TOL) {
            Ok(q) => {
                println!("oracle     {:.16e}", q.value);
                println!("oracle_err {:.3e}", q.err_est);
                println!("difference {:.3e}", (q.value - r.value).abs());
            }
            Err(e) => {
                eprintln!("oracle {}: {e}", e.name());
                return exit_for(&e);
            }
        }
    }
    ExitCode::SUCCESS
}
