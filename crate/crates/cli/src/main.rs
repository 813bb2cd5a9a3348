//! `pdqbench`: benchmark matrix runner, input generator, entropy table and
//! verification suite.
//!
//! Exit codes: 0 on success, 1 on a usage or I/O error, 2 when a gating
//! verification check fails.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use pdq_core::bench::{self, Algo, BenchPolicy};
use pdq_core::datagen::{generate, DistributionSpec, ElementType, Kind};
use pdq_core::exec::Execution;
use pdq_core::verify;

#[derive(Parser, Debug)]
#[command(
    name = "pdqbench",
    version,
    about = "Benchmark and verify pattern-defeating quicksort"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the algorithm x distribution x size matrix and write CSV.
    Bench(BenchArgs),
    /// Write one generated input array.
    Gen(GenArgs),
    /// Print 1/H(p) for each p.
    Slowdown(SlowdownArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated: pdq, bpdq, baseline, heapsort.
    #[arg(long, default_value = "pdq,bpdq,baseline")]
    algos: String,
    /// Comma-separated distribution names.
    #[arg(
        long,
        default_value = "uniform,dupsq,dup8,mod8,ones,sort50,sort90,sort99,organ,merge,asc,desc"
    )]
    dists: String,
    /// `a,b,c`, `lo..hi` (every fourth power of two) or `lo..hi:factor`.
    #[arg(long, default_value = "1024..1048576")]
    sizes: String,
    /// Comma-separated: int64, str, bigstr.
    #[arg(long, default_value = "int64")]
    types: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Minimum wall time per cell, e.g. `1s`, `250ms`.
    #[arg(long, default_value = "1s")]
    min_time: String,
    #[arg(long, default_value_t = 10)]
    min_iters: u32,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print aligned text tables to standard error.
    #[arg(long)]
    table: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "type", default_value = "int64")]
    element_type: String,
    /// Zero characters prepended to string values; defaults to 1000 for
    /// bigstr and 0 otherwise.
    #[arg(long)]
    pad: Option<usize>,
    /// Destination file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SlowdownArgs {
    /// Comma-separated fractions in (0, 1).
    #[arg(long, default_value = "0.05,0.125,0.2,0.5")]
    p: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run the sweeps on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Usage(anyhow::Error),
    Io(anyhow::Error),
    Verification,
}

impl From<bench::BenchError> for Failure {
    fn from(e: bench::BenchError) -> Self {
        Failure::Usage(e.into())
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p)
                .with_context(|| format!("cannot create {}", p.display()))
                .map_err(Failure::Io)?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_bench(args: BenchArgs) -> Result<(), Failure> {
    let algos: Vec<Algo> = bench::parse_list(&args.algos)?;
    let kinds: Vec<Kind> = bench::parse_list(&args.dists)?;
    let types: Vec<ElementType> = bench::parse_list(&args.types)?;
    let sizes = bench::parse_sizes(&args.sizes)?;
    let policy = BenchPolicy {
        min_time: bench::parse_duration(&args.min_time)?,
        min_iterations: args.min_iters,
    };
    if algos.is_empty() || kinds.is_empty() || types.is_empty() {
        return Err(Failure::Usage(anyhow::anyhow!(
            "empty algorithm, distribution or type list"
        )));
    }
    let cells = bench::matrix(&algos, &kinds, &types, &sizes, args.seed);
    let records = bench::run_benchmark(&cells, &policy);
    let mut out = open_out(&args.out)?;
    out.write_all(bench::to_csv(&records).as_bytes())
        .and_then(|()| out.flush())
        .context("writing CSV")
        .map_err(Failure::Io)?;
    if args.table {
        eprint!("{}", bench::text_tables(&records));
    }
    Ok(())
}

fn run_gen(args: GenArgs) -> Result<(), Failure> {
    let kind: Kind = args.kind.parse().map_err(bench::BenchError::from)?;
    let element_type: ElementType = args.element_type.parse().map_err(bench::BenchError::from)?;
    let mut spec = DistributionSpec::new(kind, args.n, element_type, args.seed);
    if let Some(pad) = args.pad {
        spec.pad_prefix = pad;
    }
    let data = generate(&spec);
    let mut out = open_out(&args.out)?;
    data.write_to(&spec, &mut out)
        .and_then(|()| out.flush())
        .context("writing data")
        .map_err(Failure::Io)?;
    Ok(())
}

fn run_slowdown(args: SlowdownArgs) -> Result<(), Failure> {
    let ps: Vec<f64> = args
        .p
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Failure::Usage(anyhow::anyhow!("`{s}` is not a number")))
        })
        .collect::<Result<_, _>>()?;
    let rows = bench::slowdown_table(&ps)?;
    print!("{}", bench::format_slowdown_table(&rows));
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let mut failed = false;
    for check in verify::run_all(exec) {
        println!("{check}");
        failed |= check.gating && !check.passed;
    }
    if failed {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Bench(a) => run_bench(a),
        Command::Gen(a) => run_gen(a),
        Command::Slowdown(a) => run_slowdown(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
    }
}
