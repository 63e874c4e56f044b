//! The `vecnormal` command line: `generate`, `selftest`, `bench` and `fit-coeffs`.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (also `--help` and `--version`) |
//! | 1 | invalid flags or parameters |
//! | 2 | output could not be written |
//! | 3 | a selftest gate or coefficient certification failed |

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, TableFormat};
use crate::fastfuncs::{fit_h_coeffs, fit_sincos_coeffs, DEFAULT_RHO, H_DEGREE, H_ERROR_BOUND, SINCOS_ERROR_BOUND};
use crate::method::{generator, Method, NormalParams, BLOCK};
use crate::statcheck::{selftest, SelftestConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_OUTPUT: i32 = 2;
pub const EXIT_GATE: i32 = 3;

/// Seed used by `generate` when neither `--seed` nor `VECNORMAL_SEED` is set.
pub const DEFAULT_SEED: u64 = 12345;

/// Environment variable that overrides [`DEFAULT_SEED`]; `--seed` wins over it.
pub const SEED_ENV: &str = "VECNORMAL_SEED";

#[derive(Debug, Parser)]
#[command(name = "vecnormal", version, about = "Batch normal random number generation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write normal deviates to a file or standard output
    Generate(GenerateArgs),
    /// Run the accuracy and distribution gates
    Selftest(SelftestArgs),
    /// Time every method and break the cost down by component
    Bench(BenchArgs),
    /// Refit and certify the polynomial coefficients
    FitCoeffs(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// One value per line with 17 significant digits
    Text,
    /// Little-endian IEEE doubles, no header
    Raw64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchFormat {
    Table,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct GenerateArgs {
    #[arg(long, default_value = "p2", value_parser = parse_method)]
    pub method: Method,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Output file; standard output when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SelftestArgs {
    /// Sample size of each statistical gate
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    /// Single method to time; all methods when omitted
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    #[arg(long, default_value_t = bench::MIN_BENCH_SAMPLES)]
    pub n: usize,
    #[arg(long, default_value_t = bench::MIN_BENCH_REPEATS)]
    pub repeats: usize,
    #[arg(long, value_enum, default_value_t = BenchFormat::Table)]
    pub format: BenchFormat,
}

#[derive(Debug, clap::Args)]
pub struct FitArgs {
    #[arg(long, default_value_t = DEFAULT_RHO)]
    pub rho: f64,
    #[arg(long, default_value_t = H_DEGREE)]
    pub degree: usize,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => run_generate(&a, stdout, stderr),
        Command::Selftest(a) => run_selftest(&a, stdout),
        Command::Bench(a) => run_bench(&a, stdout),
        Command::FitCoeffs(a) => run_fitcoeffs(&a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "vecnormal: cannot write output: {e}");
            EXIT_OUTPUT
        }
    }
}

pub fn run_generate(args: &GenerateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> io::Result<i32> {
    let params = match NormalParams::new(args.mu, args.sigma) {
        Ok(p) => p,
        Err(e) => {
            writeln!(stderr, "vecnormal: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let mut file;
    let sink: &mut dyn Write = match &args.output {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                writeln!(stderr, "vecnormal: cannot create {}: {e}", path.display())?;
                return Ok(EXIT_OUTPUT);
            }
        },
        None => stdout,
    };
    let mut gen = generator(args.method, params, args.seed);
    let mut buf = vec![0.0; args.n.min(16 * BLOCK)];
    let mut left = args.n;
    let mut text = String::new();
    while left > 0 {
        let chunk = &mut buf[..left.min(16 * BLOCK)];
        gen.fill(chunk);
        match args.format {
            OutputFormat::Text => {
                text.clear();
                for x in chunk.iter() {
                    text.push_str(&format!("{x:.16e}\n"));
                }
                sink.write_all(text.as_bytes())?;
            }
            OutputFormat::Raw64 => {
                let bytes: Vec<u8> = chunk.iter().flat_map(|x| x.to_le_bytes()).collect();
                sink.write_all(&bytes)?;
            }
        }
        left -= chunk.len();
    }
    sink.flush()?;
    Ok(EXIT_OK)
}

pub fn run_selftest(args: &SelftestArgs, stdout: &mut dyn Write) -> io::Result<i32> {
    let reports = selftest(&SelftestConfig {
        n: args.n,
        ..SelftestConfig::default()
    });
    writeln!(
        stdout,
        "{:<40} {:>13} {:>13}  {:<4}  note",
        "gate", "value", "limit", ""
    )?;
    for r in &reports {
        writeln!(stdout, "{r}")?;
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    writeln!(
        stdout,
        "{} gates, {} passed, {} failed",
        reports.len(),
        reports.len() - failed,
        failed
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_GATE })
}

pub fn run_bench(args: &BenchArgs, stdout: &mut dyn Write) -> io::Result<i32> {
    let reports = match args.method {
        Some(m) => vec![bench::bench_method(m, args.n, args.repeats)],
        None => bench::bench_all(args.n, args.repeats),
    };
    let format = match args.format {
        BenchFormat::Table => TableFormat::Table,
        BenchFormat::Csv => TableFormat::Csv,
    };
    write!(stdout, "{}", bench::render(&reports, format))?;
    Ok(EXIT_OK)
}

pub fn run_fitcoeffs(args: &FitArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> io::Result<i32> {
    let h = match fit_h_coeffs(args.rho, args.degree) {
        Ok(h) => h,
        Err(e) => {
            writeln!(stderr, "vecnormal: {e}")?;
            return Ok(if matches!(e, crate::fastfuncs::FitError::CertificationFailed { .. }) {
                EXIT_GATE
            } else {
                EXIT_USAGE
            });
        }
    };
    writeln!(stdout, "name h")?;
    writeln!(stdout, "rho {:.16e}", h.rho)?;
    writeln!(stdout, "degree {}", h.degree())?;
    for (i, c) in h.h_coeffs.iter().enumerate() {
        writeln!(stdout, "coeff {i} {c:.16e}")?;
    }
    writeln!(stdout, "certified_error {:.16e}", h.certified_error)?;
    writeln!(stdout, "bound {:.16e}", H_ERROR_BOUND)?;
    writeln!(stdout)?;

    let sc = match fit_sincos_coeffs() {
        Ok(sc) => sc,
        Err(e) => {
            writeln!(stderr, "vecnormal: {e}")?;
            return Ok(EXIT_GATE);
        }
    };
    writeln!(stdout, "name sincos16")?;
    writeln!(stdout, "degree 7")?;
    for (label, c) in [
        ("s1", sc.s1),
        ("s3", sc.s3),
        ("s5", sc.s5),
        ("s7", sc.s7),
        ("c0", sc.c0),
        ("c2", sc.c2),
        ("c4", sc.c4),
        ("c6", sc.c6),
    ] {
        writeln!(stdout, "coeff {label} {c:.16e}")?;
    }
    writeln!(stdout, "certified_error {:.16e}", sc.certified_error)?;
    writeln!(stdout, "bound {:.16e}", SINCOS_ERROR_BOUND)?;
    Ok(EXIT_OK)
}
