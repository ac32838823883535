use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ssc_core::bench::{run_bench, write_csv, BenchGrid};
use ssc_core::generate::{generate, GenError, GenSpec, Requirement, Sampler};
use ssc_core::min_input::{min_columns, MinBQuery, MinInputError};
use ssc_core::mtx::{self, LoadedPattern, MtxPattern};
use ssc_core::verifier::is_ssc;

const EXIT_SSC: u8 = 0;
const EXIT_NOT_SSC: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ssc",
    version,
    about = "Strong structural controllability of structural matrix pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide strong structural controllability of (A, B).
    Verify {
        /// State matrix A (n x n), or a combined n x (n + r) file with --state-dim.
        a: PathBuf,
        /// Input matrix B (n x r).
        b: Option<PathBuf>,
        /// Number of states in a combined file.
        #[arg(long)]
        state_dim: Option<usize>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Generate a random pattern and write it as one combined n x (n + r) file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        nu: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = RequireArg::None)]
        require: RequireArg,
        #[arg(long, value_enum, default_value_t = SamplerArg::Uniform)]
        sampler: SamplerArg,
        #[arg(long, default_value_t = 1000)]
        max_attempts: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Time both runs over a parameter grid and print CSV.
    Bench {
        /// Comma-separated state counts.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Comma-separated input counts.
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        /// Comma-separated entry counts.
        #[arg(long, value_delimiter = ',', required = true)]
        nu_list: Vec<usize>,
        /// Comma-separated generator seeds.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, value_enum, default_value_t = SamplerArg::Planted)]
        sampler: SamplerArg,
        #[arg(long, default_value_t = 100)]
        max_attempts: usize,
    },
    /// Search for an input matrix B with the fewest columns.
    Minb {
        /// State matrix A (n x n).
        a: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_r: usize,
        #[arg(long)]
        max_stars_per_column: Option<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Maximum number of candidates to test.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Also write the witness B to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RequireArg {
    None,
    Ssc0,
    Ssc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Uniform,
    Planted,
}

impl From<RequireArg> for Requirement {
    fn from(r: RequireArg) -> Self {
        match r {
            RequireArg::None => Requirement::None,
            RequireArg::Ssc0 => Requirement::SscLambda0,
            RequireArg::Ssc => Requirement::SscFull,
        }
    }
}

impl From<SamplerArg> for Sampler {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Uniform => Sampler::Uniform,
            SamplerArg::Planted => Sampler::Planted,
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    ssc: bool,
    ssc_lambda0: bool,
    ssc_nonzero: bool,
    witness0: Vec<usize>,
    witness1: Vec<usize>,
    ops0: u64,
    ops1: u64,
}

fn load(a: &Path, b: Option<&Path>, state_dim: Option<usize>) -> anyhow::Result<LoadedPattern> {
    match (b, state_dim) {
        (Some(_), Some(_)) => bail!("--state-dim applies only to a single combined file"),
        (Some(b), None) => Ok(mtx::load_pair(a, Some(b))?),
        (None, Some(n)) => Ok(mtx::load_combined(a, n)?),
        (None, None) => {
            let m = mtx::read_pattern_file(a)?;
            if m.nrows != m.ncols {
                bail!(
                    "{} is {}x{}: pass --state-dim for a combined file",
                    a.display(),
                    m.nrows,
                    m.ncols
                );
            }
            Ok(mtx::combine(&m, None)?)
        }
    }
}

fn verify(a: &Path, b: Option<&Path>, state_dim: Option<usize>, json: bool) -> anyhow::Result<u8> {
    let loaded = load(a, b, state_dim)?;
    let report = is_ssc(&loaded.pattern)?;
    let out = VerifyReport {
        ssc: report.ssc,
        ssc_lambda0: report.ssc_lambda0,
        ssc_nonzero: report.ssc_nonzero,
        witness0: report.zero.witness,
        witness1: report.nonzero.witness,
        ops0: report.zero.ops,
        ops1: report.nonzero.ops,
    };
    let mut stdout = io::stdout().lock();
    if json {
        serde_json::to_writer_pretty(&mut stdout, &out)?;
        writeln!(stdout)?;
    } else {
        writeln!(stdout, "n: {}", loaded.n)?;
        writeln!(stdout, "r: {}", loaded.r)?;
        writeln!(stdout, "nu: {}", loaded.pattern.nnz())?;
        writeln!(stdout, "ssc: {}", out.ssc)?;
        writeln!(stdout, "ssc_lambda0: {}", out.ssc_lambda0)?;
        writeln!(stdout, "ssc_nonzero: {}", out.ssc_nonzero)?;
        writeln!(stdout, "witness0: {:?}", out.witness0)?;
        writeln!(stdout, "witness1: {:?}", out.witness1)?;
        writeln!(stdout, "ops0: {}", out.ops0)?;
        writeln!(stdout, "ops1: {}", out.ops1)?;
    }
    Ok(if out.ssc { EXIT_SSC } else { EXIT_NOT_SSC })
}

fn gen(spec: GenSpec, output: &Path) -> anyhow::Result<u8> {
    let generated = match generate(&spec) {
        Ok(g) => g,
        Err(e @ GenError::GenerationFailed { .. }) => {
            eprintln!("error: {e}");
            return Ok(EXIT_NOT_SSC);
        }
        Err(e) => return Err(e.into()),
    };
    let t = &generated.triplets;
    let m = MtxPattern {
        nrows: t.n,
        ncols: t.ncols(),
        entries: t.entries.clone(),
    };
    mtx::write_pattern_file(output, &m)?;
    eprintln!(
        "wrote {} ({}x{}, {} entries, state dim {}) after {} attempt(s)",
        output.display(),
        m.nrows,
        m.ncols,
        m.entries.len(),
        t.n,
        generated.attempts
    );
    Ok(EXIT_SSC)
}

fn bench(grid: BenchGrid) -> anyhow::Result<u8> {
    let rows = match run_bench(&grid) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_NOT_SSC);
        }
    };
    write_csv(io::stdout().lock(), &rows)?;
    Ok(EXIT_SSC)
}

fn minb(q: MinBQuery, output: Option<&Path>) -> anyhow::Result<u8> {
    let start = Instant::now();
    let res = match min_columns(&q) {
        Ok(res) => res,
        Err(e @ (MinInputError::NoSolutionWithin(_) | MinInputError::BudgetExceeded { .. })) => {
            println!("no solution: {e}");
            println!("elapsed_ms: {:.3}", start.elapsed().as_secs_f64() * 1e3);
            return Ok(EXIT_NOT_SSC);
        }
        Err(e) => return Err(e.into()),
    };
    let b = MtxPattern::from_ccs(&res.b);
    println!("r_min: {}", res.r_min);
    println!("candidates_tested: {}", res.candidates_tested);
    println!("elapsed_ms: {:.3}", res.elapsed.as_secs_f64() * 1e3);
    mtx::write_pattern(io::stdout().lock(), b.nrows, b.ncols, &b.entries)?;
    if let Some(path) = output {
        mtx::write_pattern_file(path, &b)?;
    }
    Ok(EXIT_SSC)
}

fn dispatch(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Verify {
            a,
            b,
            state_dim,
            json,
        } => verify(&a, b.as_deref(), state_dim, json),
        Command::Gen {
            n,
            r,
            nu,
            seed,
            require,
            sampler,
            max_attempts,
            output,
        } => {
            let spec = GenSpec {
                require: require.into(),
                sampler: sampler.into(),
                max_attempts,
                ..GenSpec::new(n, r, nu, seed)
            };
            gen(spec, &output)
        }
        Command::Bench {
            n,
            r,
            nu_list,
            seeds,
            repeats,
            sampler,
            max_attempts,
        } => {
            let grid = BenchGrid {
                repeats,
                sampler: sampler.into(),
                max_attempts,
                ..BenchGrid::new(n, r, nu_list, seeds)
            };
            bench(grid)
        }
        Command::Minb {
            a,
            max_r,
            max_stars_per_column,
            workers,
            budget,
            output,
        } => {
            let m = mtx::read_pattern_file(&a)?;
            let a_pattern = m
                .to_ccs()
                .with_context(|| format!("reading {}", a.display()))?;
            let q = MinBQuery {
                max_r,
                max_stars_per_column,
                workers,
                budget,
                ..MinBQuery::new(a_pattern)
            };
            minb(q, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
