//! Command-line front end. The `golden-games` binary only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::distribution::{exact_table, write_exact_csv, MAX_CAP, MAX_EXACT_DEPTH};
use crate::error::Error;
use crate::format::{parse_game, to_binary, to_text};
use crate::fragility::witness;
use crate::game::{sample_game, SampleSpec, MAX_MATERIALIZED_DEPTH};
use crate::montecarlo::{estimate, EstimationRequest, MAX_DMAX};
use crate::theory::{write_theory_csv, xi_sequence};
use crate::verify::run_all;
use crate::GOLDEN;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Overrides the default `--workers` of `mc`.
pub const THREADS_ENV: &str = "GOLDEN_GAMES_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Accepts `golden` or a decimal probability.
pub fn parse_probability(s: &str) -> Result<f64, String> {
    let p = if s.eq_ignore_ascii_case("golden") {
        GOLDEN
    } else {
        s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"))?
    };
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is outside [0, 1]"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "golden-games", version, about = "Value and flip-fragility of random alternating win-lose games")]
pub struct Cli {
    /// Bernoulli leaf probability, or `golden`.
    #[arg(long, global = true, default_value = "golden", value_parser = parse_probability)]
    pub p: f64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Table format; csv for `exact` and `theory`, json for `mc` when absent.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write one sampled game.
    Sample {
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long)]
        binary: bool,
    },
    /// Value, fragility, and a minimal witness of a game file.
    Eval { file: PathBuf },
    /// Exact value and fragility probabilities by depth.
    Exact {
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 5)]
        dmax: u32,
        /// Emit every depth from 0, not only the last.
        #[arg(long)]
        all_n: bool,
    },
    /// Limiting fragility probabilities for golden games.
    Theory {
        #[arg(long, default_value_t = 5)]
        dmax: u32,
    },
    /// Monte Carlo estimates with Wilson intervals.
    Mc {
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 3)]
        dmax: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run every cross-check suite.
    Verify {
        #[arg(long, default_value_t = 3)]
        max_depth: u32,
        #[arg(long, default_value_t = 8)]
        budget: u64,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure::Io(e.to_string()),
            Error::Malformed { .. } => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn default_workers() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn emit(cli: &Cli, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => Ok(stdout.write_all(bytes)?),
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s.into_bytes()
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Sample { depth, index, binary } => {
            if *depth > MAX_MATERIALIZED_DEPTH {
                return Err(usage(format!("--depth must be at most {MAX_MATERIALIZED_DEPTH}")));
            }
            let game = sample_game(&SampleSpec::new(*depth, cli.p, cli.seed, *index)?)?;
            let bytes = if *binary { to_binary(&game) } else { to_text(&game).into_bytes() };
            emit(cli, stdout, &bytes)
        }
        Command::Eval { file } => {
            let bytes = std::fs::read(file)
                .map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
            let game = parse_game(&bytes)?;
            emit(cli, stdout, &to_json(&witness(&game)))
        }
        Command::Exact { depth, dmax, all_n } => {
            if *depth > MAX_EXACT_DEPTH {
                return Err(usage(format!("--depth must be at most {MAX_EXACT_DEPTH}")));
            }
            if *dmax == 0 || *dmax > MAX_CAP {
                return Err(usage(format!("--dmax must be in 1..={MAX_CAP}")));
            }
            let mut rows = exact_table(*depth, cli.p, *dmax)?;
            if !all_n {
                rows.drain(..rows.len() - 1);
            }
            let bytes = match cli.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    write_exact_csv(&mut buf, &rows)?;
                    buf
                }
                OutputFormat::Json => to_json(&rows),
            };
            emit(cli, stdout, &bytes)
        }
        Command::Theory { dmax } => {
            if *dmax == 0 || *dmax > MAX_CAP {
                return Err(usage(format!("--dmax must be in 1..={MAX_CAP}")));
            }
            let rows = xi_sequence(*dmax);
            let bytes = match cli.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    write_theory_csv(&mut buf, &rows)?;
                    buf
                }
                OutputFormat::Json => to_json(&rows),
            };
            emit(cli, stdout, &bytes)
        }
        Command::Mc { depth, dmax, samples, workers } => {
            if *dmax > MAX_DMAX {
                return Err(usage(format!("--dmax must be in 1..={MAX_DMAX}")));
            }
            let req = EstimationRequest {
                depth: *depth,
                p: cli.p,
                dmax: *dmax,
                samples: *samples,
                seed: cli.seed,
                workers: workers.unwrap_or_else(default_workers),
            };
            let result = estimate(&req)?;
            let bytes = match cli.format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => {
                    let mut s = result.to_json();
                    s.push('\n');
                    s.into_bytes()
                }
                OutputFormat::Csv => {
                    let mut s = String::from("quantity,d,est,lo,hi\n");
                    let iv = result.prob_v1;
                    s.push_str(&format!("prob_v1,,{},{},{}\n", iv.est, iv.lo, iv.hi));
                    for f in &result.f {
                        s.push_str(&format!("F,{},{},{},{}\n", f.d, f.est, f.lo, f.hi));
                    }
                    s.into_bytes()
                }
            };
            emit(cli, stdout, &bytes)
        }
        Command::Verify { max_depth, budget } => {
            let outcomes = run_all(*max_depth, *budget)?;
            let mut report = String::new();
            for o in &outcomes {
                let status = if o.passed() { "PASS" } else { "FAIL" };
                report.push_str(&format!("{status}  {} ({} checks)\n", o.name, o.checks));
                if let Some(f) = &o.failure {
                    report.push_str(&format!("      first counterexample: {f}\n"));
                }
            }
            let all = outcomes.iter().all(|o| o.passed());
            report.push_str(if all { "all checks passed\n" } else { "verification FAILED\n" });
            emit(cli, stdout, report.as_bytes())?;
            if all {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Verify) => EXIT_VERIFY_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_IO
        }
    }
}
