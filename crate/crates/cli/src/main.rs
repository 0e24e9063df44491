use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use momentkit::moments::ArithmeticMode;
use momentkit::polylog;
use momentkit::scalar::format_float;
use momentkit::verify::{magnitude_curve, Tolerances, Verifier, DEFAULT_GAMMAS};
use momentkit::{
    hadamard_eval, is_completely_monotone, moments_of, CmTolerance, DensitySpec, Error, GridSpec, Measure, Series,
    SlitPoint, StieltjesFunction, VerificationReport,
};
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "momentkit", version, about = "Moment sequences, Stieltjes-type functions and their half-plane checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check complete monotonicity of a sequence file (one term per line).
    CheckCm {
        #[arg(long)]
        file: PathBuf,
        /// Highest difference order.
        #[arg(long)]
        order: usize,
        /// Base of the order-scaled float tolerance; converts exact input to floats.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write the first moments of a measure.
    Moments {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the function of a measure at a point.
    Eval {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Evaluate Li_alpha(z).
    Polylog {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Evaluate the Hadamard product of two measure functions.
    Hadamard {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Run a claim check over a grid.
    Verify(VerifyArgs),
    /// Evaluate the two-atom counterexample beyond gamma = 1.
    Counterexample {
        #[arg(long)]
        eps: f64,
    },
    /// CSV of (y, |f(gamma+iy)|, arg f(gamma+iy)) along a y grid.
    Sweep {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, default_value = "y=0.05:20:50:geom")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Claim {
    Thm1,
    Cor1,
    Thm2,
    Thm3,
    Thm4,
    Liquot,
    Counterexample,
}

#[derive(Args)]
struct VerifyArgs {
    claim: Claim,
    /// Measure file for the function under test.
    #[arg(long)]
    f: Option<PathBuf>,
    /// Second measure file (thm2).
    #[arg(long)]
    g: Option<PathBuf>,
    /// Grid axes, e.g. `y=0.05:20:50:geom`; repeatable.
    #[arg(long)]
    grid: Vec<String>,
    /// Write violations as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Comma-separated real parts (thm1, cor1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    x: f64,
    #[arg(long, default_value_t = 8)]
    order: usize,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Comma-separated epsilons (counterexample).
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.5")]
    eps: Vec<f64>,
}

enum Failure {
    Violation(String),
    Fatal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::HypothesisGate(report) => {
                Failure::Fatal(format!("hypothesis gate failed, claim not tested: {}", report.summary()))
            }
            other => Failure::Fatal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Fatal(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got '{s}'"))?;
    let part = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("bad number '{p}' in '{s}'"));
    Ok(Complex64::new(part(re)?, part(im)?))
}

fn complex_text(z: Complex64) -> String {
    format!("{},{}", format_float(z.re), format_float(z.im))
}

fn load_measure(path: &Path) -> Result<Measure, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Fatal(format!("{}: {e}", path.display())))?;
    Measure::parse(&text, path.parent()).map_err(|e| Failure::Fatal(format!("{}: {e}", path.display())))
}

fn load_function(path: &Path) -> Result<StieltjesFunction, Failure> {
    load_measure(path).map(StieltjesFunction::from_measure)
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, Failure> {
    path.as_deref().ok_or_else(|| Failure::Fatal(format!("--{flag} is required for this claim")))
}

fn pure_density(path: &Path) -> Result<DensitySpec, Failure> {
    let m = load_measure(path)?;
    match (m.density(), m.atoms().is_empty()) {
        (Some(d), true) => Ok(d.clone()),
        _ => Err(Failure::Fatal(format!("{}: expected a measure with a single density line and no atoms", path.display()))),
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn tolerances() -> Result<Tolerances, Failure> {
    Ok(Tolerances::from_env()?)
}

fn finish(reports: &[VerificationReport], csv: &Option<PathBuf>) -> Outcome {
    for r in reports {
        println!("{}", r.summary());
        for note in &r.notes {
            println!("  note: {note}");
        }
        if let Some(arg) = &r.argmin {
            let params: Vec<String> =
                r.param_names.iter().zip(arg).map(|(n, v)| format!("{n}={}", format_float(*v))).collect();
            println!("  argmin: {}", params.join(" "));
        }
    }
    if let Some(path) = csv {
        let mut text = String::new();
        for (i, r) in reports.iter().enumerate() {
            let body = r.to_csv();
            text.push_str(if i == 0 { &body } else { body.split_once('\n').map_or("", |(_, rest)| rest) });
        }
        fs::write(path, text)?;
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Violation(format!("{} report(s) with violations", reports.iter().filter(|r| !r.passed).count())))
    }
}

fn verify(args: &VerifyArgs) -> Outcome {
    let verifier = Verifier::new(tolerances()?);
    let grid = |default: GridSpec| -> Result<GridSpec, Failure> {
        Ok(default.merged(&GridSpec::parse(&args.grid)?))
    };
    let reports = match args.claim {
        Claim::Thm1 => {
            let f = load_function(required(&args.f, "f")?)?;
            let gammas = if args.gamma.is_empty() { DEFAULT_GAMMAS.to_vec() } else { args.gamma.clone() };
            vec![verifier.theorem1(&f, &gammas, &grid(GridSpec::default_y())?)?]
        }
        Claim::Cor1 => {
            let f = load_function(required(&args.f, "f")?)?;
            let gammas = if args.gamma.is_empty() { vec![1.0] } else { args.gamma.clone() };
            let g = grid(GridSpec::default_y())?;
            gammas.iter().map(|&gamma| verifier.corollary1(&f, gamma, &g)).collect::<Result<Vec<_>, _>>()?
        }
        Claim::Thm2 => {
            let f = load_function(required(&args.f, "f")?)?;
            let g = load_function(required(&args.g, "g")?)?;
            let r = verifier.theorem2(&f, &g, &grid(GridSpec::default_y())?)?;
            vec![r.ratio, r.magnitude]
        }
        Claim::Thm3 => {
            let sigma = pure_density(required(&args.f, "f")?)?;
            vec![verifier.theorem3(&sigma, &grid(GridSpec::default_y())?)?]
        }
        Claim::Thm4 => {
            let sigma = pure_density(required(&args.f, "f")?)?;
            let mode = if sigma.exact_moment(0).is_some() && momentkit::scalar::rational_from_f64(args.x).is_some() {
                ArithmeticMode::Exact
            } else {
                ArithmeticMode::Float
            };
            vec![verifier.theorem4(&sigma, args.x, args.order, mode)?]
        }
        Claim::Liquot => {
            let alpha = args.alpha.ok_or_else(|| Failure::Fatal("--alpha is required".into()))?;
            let beta = args.beta.ok_or_else(|| Failure::Fatal("--beta is required".into()))?;
            vec![verifier.polylog_quotient(alpha, beta, args.order)?]
        }
        Claim::Counterexample => vec![verifier.counterexample(&args.eps)?],
    };
    finish(&reports, &args.csv)
}

fn check_cm(file: &Path, order: usize, tol: Option<f64>) -> Outcome {
    let text = fs::read_to_string(file).map_err(|e| Failure::Fatal(format!("{}: {e}", file.display())))?;
    let mut series = Series::parse(&text).map_err(|e| Failure::Fatal(format!("{}: {e}", file.display())))?;
    let env = tolerances()?;
    let tolerance = match (tol, series.mode()) {
        (Some(base), _) => {
            series = series.to_float();
            CmTolerance::OrderScaled { base }
        }
        (None, ArithmeticMode::Exact) => CmTolerance::Exact,
        (None, ArithmeticMode::Float) => CmTolerance::OrderScaled { base: env.cm_base },
    };
    let order = order.min(series.len() - 1);
    let report = is_completely_monotone(&series, order, tolerance)?;
    println!(
        "check-cm: {} terms={} max_order={} min_difference={}",
        if report.passed { "PASS" } else { "FAIL" },
        series.len(),
        report.max_order_checked,
        report.min_difference
    );
    match report.first_violation {
        None => Ok(()),
        Some((n, k, d)) => Err(Failure::Violation(format!("first violation at n={n}, k={k}: {d}"))),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::CheckCm { file, order, tol } => check_cm(&file, order, tol),
        Command::Moments { measure, count, out } => {
            let seq = moments_of(&load_measure(&measure)?, count)?;
            write_or_print(&out, &seq.into_series().to_text())
        }
        Command::Eval { measure, z } => {
            let f = load_function(&measure)?;
            let est = f.eval_estimate(SlitPoint::new(z)?)?;
            println!("value {}", complex_text(est.value));
            println!("abs {}", format_float(est.value.norm()));
            println!("error_estimate {:e}", est.error);
            Ok(())
        }
        Command::Polylog { alpha, z } => {
            let v = polylog::li(alpha, SlitPoint::new(z)?)?;
            println!("value {}", complex_text(v.value));
            println!("abs {}", format_float(v.value.norm()));
            println!("error_bound {:e}", v.error_bound);
            Ok(())
        }
        Command::Hadamard { f, g, z } => {
            let v = hadamard_eval(&load_function(&f)?, &load_function(&g)?, SlitPoint::new(z)?)?;
            println!("value {}", complex_text(v));
            println!("abs {}", format_float(v.norm()));
            Ok(())
        }
        Command::Verify(args) => verify(&args),
        Command::Counterexample { eps } => {
            let value = momentkit::proofcore::counterexample_value(eps)?;
            let violated = value < 1.0;
            println!("value {}", format_float(value));
            println!("closed_form {}", format_float(2.0 * eps / (1.0 + eps * eps)));
            println!("half-plane inequality violated at gamma={}: {}", 1.0 + eps, if violated { "yes" } else { "no" });
            if violated {
                Ok(())
            } else {
                Err(Failure::Violation("value is not below 1".into()))
            }
        }
        Command::Sweep { measure, gamma, grid, out } => {
            let f = load_function(&measure)?;
            let curve = magnitude_curve(&f, gamma, &GridSpec::parse(&[grid])?)?;
            let mut text = String::from("y,abs,arg\n");
            for (y, m, a) in curve {
                text.push_str(&format!("{},{},{}\n", format_float(y), format_float(m), format_float(a)));
            }
            write_or_print(&out, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
