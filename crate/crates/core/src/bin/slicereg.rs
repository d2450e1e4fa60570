//! Command-line front end. `*` in expressions is the slice product and `^n`
//! the slice power.

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use slicereg::cli::{self, Point};
use slicereg::json::expansion_from_json_any;
use slicereg::verify::run_suite;
use slicereg::{Error, Result};

#[derive(Parser)]
#[command(name = "slicereg", version, about = "Spherical expansions of quaternionic slice regular functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the spherical coefficients s_0..s_N of f at q0.
    Expand {
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        q0: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
        /// Decimal output instead of exact rationals.
        #[arg(long)]
        float: bool,
    },
    /// Compare the coefficients of d_c f obtained from those of f with the direct ones.
    Derive {
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        q0: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        float: bool,
    },
    /// Run an invariant suite; exit code 0 iff every check passes.
    Verify {
        #[arg(long, value_parser = slicereg::verify::SUITES)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Evaluate f, or a saved expansion (JSON file from `expand --json`), at x.
    Eval {
        #[arg(long = "f", allow_hyphen_values = true, required_unless_present = "expansion", conflicts_with = "expansion")]
        f: Option<String>,
        #[arg(long)]
        expansion: Option<std::path::PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        float: bool,
    },
    /// CSV of the truncation error over a grid inside the Cassini ball U(q0, R).
    Converge {
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        q0: String,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        grid: usize,
    },
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Expand { f, q0, n, json, float } => {
            let (e, fit) = cli::expand(&cli::parse_function(&f)?, &Point::parse(&q0)?, n)?;
            if json {
                println!("{}", cli::expansion_json(&e, float));
            } else {
                print!("{}", cli::expansion_table(&e, float, fit.as_ref()));
            }
        }
        Command::Derive { f, q0, n, float } => {
            let r = cli::derive(&cli::parse_function(&f)?, &Point::parse(&q0)?, n)?;
            print!("{}", r.table(float));
            match r.exact_match() {
                Some(m) => println!("# routes agree exactly: {m}"),
                None => println!("# max difference: {:e}", r.max_difference()),
            }
        }
        Command::Verify { suite, seed, kmax } => {
            let rep = run_suite(&suite, seed, kmax)?;
            for c in rep.failures() {
                println!("FAIL {} {}", c.name, c.detail);
            }
            println!("suite {}: {}/{} checks passed (seed {seed})", rep.suite, rep.passed_count(), rep.checks.len());
            return Ok(rep.all_passed());
        }
        Command::Eval { f, expansion, x, json, float } => {
            let x = Point::parse(&x)?;
            let v = match (f, expansion) {
                (Some(f), _) => cli::eval(&cli::parse_function(&f)?, &x)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
                    let v: serde_json::Value = serde_json::from_str(&text)
                        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
                    cli::eval_expansion(&expansion_from_json_any(&v)?, &x)
                }
                (None, None) => unreachable!("clap requires one of --f and --expansion"),
            };
            if json {
                println!("{}", json!({ "value": v.to_json(float) }));
            } else {
                println!("{}", v.render(float));
            }
        }
        Command::Converge { f, q0, radius, n, grid } => {
            let r = cli::converge(&cli::parse_function(&f)?, &Point::parse(&q0)?, radius, n, grid)?;
            print!("{}", r.to_csv());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let text: Vec<&str> = msg
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            let text = text.join(" ");
            eprintln!("{}", json!({ "error": "UsageError", "message": text.trim_start_matches("error: ") }));
            return ExitCode::from(2);
        }
    };
    match run(args.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", cli::error_json(&e));
            ExitCode::from(1)
        }
    }
}
