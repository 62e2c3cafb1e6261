use std::process::ExitCode;

use clap::{Parser, Subcommand};

use caratheodory::completion::{dist_completion, measure_completion};
use caratheodory::dsl::{eval_element, eval_point, parse};
use caratheodory::error::{Error, Result};
use caratheodory::limit_map::{apply_F, handle_ae_equal, Verdict};
use caratheodory::rational::Rational;
use caratheodory::set_algebra::AlgebraConfig;
use caratheodory::suites::{self, RunConfig, Suite};

const MAX_DEPTH: u32 = 30;

/// Exact computations on the metric completion of a set algebra.
#[derive(Parser)]
#[command(name = "caratheodory", version)]
struct Cli {
    /// `interval`, or `finite:w1,w2,...` with positive rational weights.
    #[arg(long, global = true, default_value = "interval")]
    algebra: String,
    /// Precision index for enclosures; the width is about 2^-depth.
    #[arg(long, global = true, default_value_t = 16)]
    depth: u32,
    /// Allow depths above 30. Exact denominators grow with depth.
    #[arg(long, global = true)]
    allow_deep: bool,
    #[arg(long, global = true, default_value = "1/1024")]
    tolerance: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an element expression to canonical form.
    Eval { expr: String },
    /// Distance d(A, B); an enclosure when either side is a limit.
    Dist { a: String, b: String },
    /// Measure enclosure of a point of the completion.
    Measure { point: String },
    /// Run a verification suite: metric, restriction, isometry, sigma-hom,
    /// countable-union, well-defined or oracle.
    Verify {
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        /// Atom count for the oracle when no finite algebra is given.
        #[arg(long, default_value_t = 8)]
        atoms: usize,
        /// Covers per element in the restriction suite.
        #[arg(long, default_value_t = 100)]
        covers: usize,
        /// Certify the countable-union prefix family by capped search.
        #[arg(long)]
        cap: Option<usize>,
    },
}

fn parse_algebra(text: &str) -> Result<AlgebraConfig> {
    if text == "interval" {
        return Ok(AlgebraConfig::IntervalUnit);
    }
    let weights = text
        .strip_prefix("finite:")
        .ok_or_else(|| Error::Usage(format!("unknown algebra '{text}'")))?;
    let weights = weights
        .split(',')
        .map(|w| w.trim().parse::<Rational>().map_err(|_| Error::Usage(format!("bad weight '{w}'"))))
        .collect::<Result<Vec<_>>>()?;
    AlgebraConfig::finite_weighted(weights)
}

fn pair(lo: &Rational, hi: &Rational) -> String {
    serde_json::json!([lo.to_string(), hi.to_string()]).to_string()
}

fn run(cli: Cli) -> Result<ExitCode> {
    let algebra = parse_algebra(&cli.algebra)?;
    if cli.depth == 0 || (cli.depth > MAX_DEPTH && !cli.allow_deep) {
        return Err(Error::Usage(format!(
            "depth must be in 1..={MAX_DEPTH} (pass --allow-deep to go further)"
        )));
    }
    let tolerance: Rational =
        cli.tolerance.parse().map_err(|_| Error::Usage(format!("bad tolerance '{}'", cli.tolerance)))?;
    let depth = cli.depth;
    match cli.command {
        Command::Eval { expr } => {
            let e = eval_element(&parse(&expr)?, &algebra)?;
            println!("{}", serde_json::to_string(&e).expect("elements serialize"));
        }
        Command::Dist { a, b } => {
            let (ea, eb) = (parse(&a)?, parse(&b)?);
            match (eval_element(&ea, &algebra), eval_element(&eb, &algebra)) {
                (Ok(x), Ok(y)) => {
                    let d = x.distance(&y)?;
                    if cli.json {
                        println!("{}", serde_json::json!({ "distance": d.to_string() }));
                    } else {
                        println!("{d}");
                    }
                }
                _ => {
                    let (x, y) = (eval_point(&ea, &algebra)?, eval_point(&eb, &algebra)?);
                    let e = dist_completion(&x, &y, depth)?;
                    let ae = handle_ae_equal(&apply_F(&x), &apply_F(&y), &tolerance, depth)?;
                    if cli.json {
                        let out = serde_json::json!({
                            "lo": e.lo().to_string(),
                            "hi": e.hi().to_string(),
                            "equal_within_tolerance": ae,
                        });
                        println!("{out}");
                    } else {
                        println!("{}", pair(e.lo(), e.hi()));
                    }
                }
            }
        }
        Command::Measure { point } => {
            let p = eval_point(&parse(&point)?, &algebra)?;
            let e = measure_completion(&p, depth);
            if cli.json {
                println!("{}", serde_json::to_string(&e).expect("enclosures serialize"));
            } else {
                println!("{}", pair(e.lo(), e.hi()));
            }
            if !p.certify(depth).is_full() {
                eprintln!("warning: {} is only partially certified at this depth", p.label());
                return Ok(ExitCode::from(3));
            }
        }
        Command::Verify { suite, trials, atoms, covers, cap } => {
            let suite: Suite = suite.parse()?;
            let cfg = RunConfig { algebra, depth, tolerance, seed: cli.seed, trials, atoms, covers, cap };
            let report = suites::run(suite, &cfg)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            } else {
                println!(
                    "{} {}: {} checks, {} violations",
                    report.suite, report.verdict, report.checks, report.violations
                );
                for (k, v) in &report.summary {
                    println!("  {k}: {v}");
                }
                for f in &report.failures {
                    println!("  {}: {}", f.claim, serde_json::to_string(f).expect("reports serialize"));
                }
            }
            return Ok(match report.verdict {
                Verdict::Pass => ExitCode::SUCCESS,
                Verdict::Fail => ExitCode::from(1),
                Verdict::Partial => ExitCode::from(3),
            });
        }
    }
    Ok(ExitCode::SUCCESS)
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
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
