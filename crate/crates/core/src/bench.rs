//! Benchmark harness: algorithm matrix, iteration policy, CSV records, text
//! tables and the entropy slowdown table.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::datagen::{generate, Dataset, DistributionSpec, ElementType, Kind, ParseError};
use crate::driver::{self, SortConfig};
use crate::instrument::Metrics;
use crate::small_sorts::heapsort_probed;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("unknown algorithm `{0}` (expected pdq, bpdq, baseline or heapsort)")]
    UnknownAlgo(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bad duration `{0}` (expected e.g. 1s, 250ms, 0.5s)")]
    Duration(String),
    #[error("bad size list `{0}`")]
    Sizes(String),
    #[error("p = {0} is outside (0, 1)")]
    Probability(f64),
}

/// The sorts the harness knows how to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    /// pdqsort with scalar partitioning.
    Pdq,
    /// pdqsort with block partitioning.
    Bpdq,
    IntrosortBaseline,
    Heapsort,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Pdq, Algo::Bpdq, Algo::IntrosortBaseline, Algo::Heapsort];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Pdq => "pdq",
            Algo::Bpdq => "bpdq",
            Algo::IntrosortBaseline => "introsort_baseline",
            Algo::Heapsort => "heapsort",
        }
    }

    /// Driver configuration, or `None` for the plain heapsort.
    pub fn config(self) -> Option<SortConfig> {
        match self {
            Algo::Pdq => Some(SortConfig::scalar()),
            Algo::Bpdq => Some(SortConfig::branchless()),
            Algo::IntrosortBaseline => Some(SortConfig::introsort_baseline()),
            Algo::Heapsort => None,
        }
    }

    /// Sorts `v` ascending without instrumentation.
    pub fn sort<T: Ord>(self, v: &mut [T]) {
        let mut lt = |a: &T, b: &T| a.lt(b);
        match self.config() {
            Some(cfg) => driver::sort_probed(v, &mut lt, &cfg, &mut crate::instrument::NoProbe),
            None => crate::small_sorts::heapsort(v, &mut lt),
        }
    }

    /// Sorts `v` ascending and returns the counters.
    pub fn instrumented<T: Ord>(self, v: &mut [T]) -> Metrics {
        match self.config() {
            Some(cfg) => {
                driver::instrumented_sort(v, |a: &T, b: &T| a.lt(b), &cfg).expect("preset configurations are valid")
            }
            None => {
                let mut metrics = Metrics::default();
                let mut comparisons = 0u64;
                let mut lt = |a: &T, b: &T| {
                    comparisons += 1;
                    a.lt(b)
                };
                heapsort_probed(v, &mut lt, &mut metrics);
                metrics.comparisons = comparisons;
                metrics
            }
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pdq" => Ok(Algo::Pdq),
            "bpdq" => Ok(Algo::Bpdq),
            "baseline" | "introsort_baseline" | "introsort" => Ok(Algo::IntrosortBaseline),
            "heapsort" | "heap" => Ok(Algo::Heapsort),
            _ => Err(BenchError::UnknownAlgo(s.to_string())),
        }
    }
}

/// How long each cell keeps repeating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchPolicy {
    pub min_time: Duration,
    pub min_iterations: u32,
}

impl Default for BenchPolicy {
    fn default() -> Self {
        BenchPolicy {
            min_time: Duration::from_secs(1),
            min_iterations: 10,
        }
    }
}

/// `2^10, 2^12, ..., 2^20`.
pub fn default_sizes() -> Vec<usize> {
    (10..=20).step_by(2).map(|e| 1usize << e).collect()
}

/// One cell of the result matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRecord {
    pub algo: Algo,
    pub spec: DistributionSpec,
    /// Fingerprint of the generated input.
    pub input_fnv: u64,
    pub iterations: u32,
    /// Sort time summed over all iterations; generation is excluded.
    pub total_ns: u128,
    /// Counters from a separate instrumented run on the same input.
    pub metrics: Metrics,
}

/// Columns whose values depend on the clock.
pub const TIMING_COLUMNS: [&str; 3] = ["iterations", "total_ns", "ns_per_nlog2n"];

const LEAD_COLUMNS: [&str; 6] = ["algo", "kind", "element_type", "n", "seed", "input_fnv"];

impl BenchmarkRecord {
    /// `total_ns / (iterations * n * log2 n)`, zero below two elements.
    pub fn ns_per_nlog2n(&self) -> f64 {
        let n = self.spec.n as f64;
        if self.spec.n < 2 || self.iterations == 0 {
            return 0.0;
        }
        self.total_ns as f64 / (self.iterations as f64 * n * n.log2())
    }

    pub fn csv_header() -> String {
        LEAD_COLUMNS
            .iter()
            .chain(TIMING_COLUMNS.iter())
            .chain(Metrics::CSV_COLUMNS.iter())
            .copied()
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut row = format!(
            "{},{},{},{},{},{:016x},{},{},{:.4}",
            self.algo,
            self.spec.kind,
            self.spec.element_type,
            self.spec.n,
            self.spec.seed,
            self.input_fnv,
            self.iterations,
            self.total_ns,
            self.ns_per_nlog2n()
        );
        for value in self.metrics.csv_fields() {
            write!(row, ",{value}").unwrap();
        }
        row
    }
}

/// Header plus one row per record, newline terminated.
pub fn to_csv(records: &[BenchmarkRecord]) -> String {
    let mut out = BenchmarkRecord::csv_header();
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Removes the [`TIMING_COLUMNS`] from CSV text produced by [`to_csv`].
pub fn strip_timing(csv: &str) -> String {
    let mut lines = csv.lines();
    let Some(header) = lines.next() else {
        return String::new();
    };
    let keep: Vec<bool> = header.split(',').map(|c| !TIMING_COLUMNS.contains(&c)).collect();
    let mut out = String::new();
    for line in std::iter::once(header).chain(lines) {
        let fields: Vec<&str> = line
            .split(',')
            .zip(&keep)
            .filter_map(|(f, &k)| k.then_some(f))
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn time_cell<T: Ord>(
    algo: Algo,
    spec: &DistributionSpec,
    policy: &BenchPolicy,
    fresh: impl Fn() -> Vec<T>,
) -> (u32, u128) {
    let started = Instant::now();
    let mut iterations = 0u32;
    let mut total = 0u128;
    while iterations < policy.min_iterations || started.elapsed() < policy.min_time {
        let mut v = fresh();
        debug_assert_eq!(v.len(), spec.n);
        let t = Instant::now();
        algo.sort(&mut v);
        total += t.elapsed().as_nanos();
        std::hint::black_box(&v);
        iterations += 1;
    }
    (iterations, total)
}

/// Runs one cell: an instrumented pass for the counters, then timed
/// repetitions on freshly generated copies of the same input.
pub fn run_cell(algo: Algo, spec: &DistributionSpec, policy: &BenchPolicy) -> BenchmarkRecord {
    let input = generate(spec);
    let input_fnv = input.fingerprint();
    let (metrics, (iterations, total_ns)) = match input {
        Dataset::Int64(mut v) => {
            let m = algo.instrumented(&mut v);
            (
                m,
                time_cell(algo, spec, policy, || match generate(spec) {
                    Dataset::Int64(v) => v,
                    Dataset::Str(_) => unreachable!(),
                }),
            )
        }
        Dataset::Str(mut v) => {
            let m = algo.instrumented(&mut v);
            (
                m,
                time_cell(algo, spec, policy, || match generate(spec) {
                    Dataset::Str(v) => v,
                    Dataset::Int64(_) => unreachable!(),
                }),
            )
        }
    };
    BenchmarkRecord {
        algo,
        spec: *spec,
        input_fnv,
        iterations,
        total_ns,
        metrics,
    }
}

/// The cross product of the requested axes, in a fixed order: kind, element
/// type, size, algorithm.
pub fn matrix(
    algos: &[Algo],
    kinds: &[Kind],
    types: &[ElementType],
    sizes: &[usize],
    seed: u64,
) -> Vec<(Algo, DistributionSpec)> {
    let mut cells = Vec::new();
    for &kind in kinds {
        for &ty in types {
            for &n in sizes {
                for &algo in algos {
                    cells.push((algo, DistributionSpec::new(kind, n, ty, seed)));
                }
            }
        }
    }
    cells
}

/// Runs every cell one after the other.
pub fn run_benchmark(cells: &[(Algo, DistributionSpec)], policy: &BenchPolicy) -> Vec<BenchmarkRecord> {
    cells.iter().map(|(algo, spec)| run_cell(*algo, spec, policy)).collect()
}

/// Aligned text tables, one per distribution and element type, with sizes as
/// rows and algorithms as columns of `ns/(n log2 n)` and comparisons.
pub fn text_tables(records: &[BenchmarkRecord]) -> String {
    let mut groups: Vec<(Kind, ElementType)> = Vec::new();
    for r in records {
        let key = (r.spec.kind, r.spec.element_type);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    let mut out = String::new();
    for (kind, ty) in groups {
        let rows: Vec<&BenchmarkRecord> = records
            .iter()
            .filter(|r| r.spec.kind == kind && r.spec.element_type == ty)
            .collect();
        let mut algos: Vec<Algo> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();
        for r in &rows {
            if !algos.contains(&r.algo) {
                algos.push(r.algo);
            }
            if !sizes.contains(&r.spec.n) {
                sizes.push(r.spec.n);
            }
        }
        writeln!(out, "{kind} / {ty}   (ns per n log2 n | comparisons)").unwrap();
        write!(out, "{:>9}", "n").unwrap();
        for a in &algos {
            write!(out, " {:>30}", a.name()).unwrap();
        }
        out.push('\n');
        for n in sizes {
            write!(out, "{n:>9}").unwrap();
            for a in &algos {
                match rows.iter().find(|r| r.algo == *a && r.spec.n == n) {
                    Some(r) => write!(
                        out,
                        " {:>30}",
                        format!("{:.3} | {}", r.ns_per_nlog2n(), r.metrics.comparisons)
                    )
                    .unwrap(),
                    None => write!(out, " {:>30}", "-").unwrap(),
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// `H(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let q = 1.0 - p;
    -p * p.log2() - q * q.log2()
}

/// `1 / H(p)`: how much slower than ideal quicksort gets when every split
/// lands at fraction `p`.
pub fn slowdown(p: f64) -> Result<f64, BenchError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(BenchError::Probability(p));
    }
    Ok(1.0 / binary_entropy(p))
}

/// `(p, 1/H(p))` for every `p`, failing on the first one outside (0, 1).
pub fn slowdown_table(ps: &[f64]) -> Result<Vec<(f64, f64)>, BenchError> {
    ps.iter().map(|&p| slowdown(p).map(|s| (p, s))).collect()
}

pub fn format_slowdown_table(rows: &[(f64, f64)]) -> String {
    let mut out = format!("{:>8} {:>10} {:>10}\n", "p", "H(p)", "1/H(p)");
    for &(p, s) in rows {
        writeln!(out, "{p:>8} {:>10.6} {s:>10.6}", 1.0 / s).unwrap();
    }
    out
}

/// Parses `1s`, `250ms`, `0.5s`, `800us`, `100ns` or a bare number of
/// seconds.
pub fn parse_duration(s: &str) -> Result<Duration, BenchError> {
    let err = || BenchError::Duration(s.to_string());
    let t = s.trim();
    let (num, scale) = if let Some(x) = t.strip_suffix("ms") {
        (x, 1e-3)
    } else if let Some(x) = t.strip_suffix("us") {
        (x, 1e-6)
    } else if let Some(x) = t.strip_suffix("ns") {
        (x, 1e-9)
    } else if let Some(x) = t.strip_suffix('s') {
        (x, 1.0)
    } else {
        (t, 1.0)
    };
    let value: f64 = num.trim().parse().map_err(|_| err())?;
    Duration::try_from_secs_f64(value * scale).map_err(|_| err())
}

/// Parses a size list: `a,b,c`, or `lo..hi` for every fourth power of two
/// from `lo` up to `hi`, or `lo..hi:f` stepping by factor `f`. Entries can
/// be mixed with commas.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, BenchError> {
    let err = || BenchError::Sizes(s.to_string());
    let mut sizes = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, factor) = match rest.split_once(':') {
                Some((hi, f)) => (hi, f.parse::<usize>().map_err(|_| err())?),
                None => (rest, 4),
            };
            let lo: usize = lo.parse().map_err(|_| err())?;
            let hi: usize = hi.parse().map_err(|_| err())?;
            if lo == 0 || factor < 2 || lo > hi {
                return Err(err());
            }
            let mut n = lo;
            while n <= hi {
                sizes.push(n);
                match n.checked_mul(factor) {
                    Some(next) => n = next,
                    None => break,
                }
            }
        } else {
            sizes.push(part.parse().map_err(|_| err())?);
        }
    }
    if sizes.is_empty() {
        return Err(err());
    }
    Ok(sizes)
}

/// Parses a comma-separated list with `T::from_str`.
pub fn parse_list<T>(s: &str) -> Result<Vec<T>, BenchError>
where
    T: FromStr,
    BenchError: From<T::Err>,
{
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(BenchError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> BenchPolicy {
        BenchPolicy {
            min_time: Duration::ZERO,
            min_iterations: 3,
        }
    }

    #[test]
    fn golden_header() {
        assert_eq!(
            BenchmarkRecord::csv_header(),
            "algo,kind,element_type,n,seed,input_fnv,iterations,total_ns,ns_per_nlog2n,\
             comparisons,element_moves,exchanges,relocations,partition_right_calls,\
             partition_left_calls,bad_partitions,heapsort_fallbacks,\
             partial_insertion_attempts,partial_insertion_aborts,max_depth"
        );
    }

    #[test]
    fn policy_floor_and_fingerprint() {
        let spec = DistributionSpec::int64(Kind::Asc, 1 << 16, 3);
        let rec = run_cell(Algo::Pdq, &spec, &quick());
        assert!(rec.iterations >= 3);
        assert!(rec.ns_per_nlog2n() > 0.0);
        assert_eq!(rec.input_fnv, generate(&spec).fingerprint());
    }

    #[test]
    fn pdq_beats_baseline_on_ones() {
        let spec = DistributionSpec::int64(Kind::Ones, 1 << 18, 0);
        let pdq = run_cell(Algo::Pdq, &spec, &quick()).metrics;
        let base = run_cell(Algo::IntrosortBaseline, &spec, &quick()).metrics;
        assert!(pdq.comparisons < base.comparisons, "{pdq} vs {base}");
    }

    #[test]
    fn counters_are_reproducible() {
        let cells = matrix(
            &Algo::ALL,
            &[Kind::Mod8, Kind::Organ],
            &[ElementType::Int64, ElementType::Str],
            &[100, 1000],
            9,
        );
        let a = strip_timing(&to_csv(&run_benchmark(&cells, &quick())));
        let b = strip_timing(&to_csv(&run_benchmark(&cells, &quick())));
        assert_eq!(a, b);
        assert!(!a.contains("total_ns"));
        assert_eq!(a.lines().count(), cells.len() + 1);
    }

    #[test]
    fn every_algo_sorts() {
        for algo in Algo::ALL {
            let mut v: Vec<i64> = (0..500).map(|i| (i * 7919) % 503).collect();
            let mut want = v.clone();
            want.sort();
            algo.sort(&mut v);
            assert_eq!(v, want, "{algo}");
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(slowdown(0.5).unwrap(), 1.0);
        assert!((slowdown(0.2).unwrap() - 1.386).abs() < 0.005);
        // H(1/8) = 3/8 + 7/8 * log2(8/7)
        let h = 0.375 + 0.875 * (8.0f64 / 7.0).log2();
        assert!((slowdown(0.125).unwrap() - 1.0 / h).abs() < 1e-12);
        assert!((slowdown(0.125).unwrap() - 1.84).abs() < 0.01);
        for p in [0.01, 0.1, 0.3, 0.45] {
            assert!((slowdown(p).unwrap() - slowdown(1.0 - p).unwrap()).abs() < 1e-9);
        }
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(slowdown(p).is_err());
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_duration("1s").unwrap(), Duration::from_secs(1));
        assert_eq!(parse_duration("100ms").unwrap(), Duration::from_millis(100));
        assert_eq!(parse_duration("0.1s").unwrap(), Duration::from_millis(100));
        assert!(parse_duration("fast").is_err());
        assert_eq!(parse_sizes("1024..1048576").unwrap(), default_sizes());
        assert_eq!(parse_sizes("8..64:2").unwrap(), vec![8, 16, 32, 64]);
        assert_eq!(parse_sizes("3, 5,1000").unwrap(), vec![3, 5, 1000]);
        assert!(parse_sizes("").is_err());
        assert!(parse_sizes("0..8").is_err());
        assert_eq!(
            parse_list::<Algo>("pdq,baseline,bpdq").unwrap(),
            vec![Algo::Pdq, Algo::IntrosortBaseline, Algo::Bpdq]
        );
        assert!(parse_list::<Algo>("pdq,timsort").is_err());
        assert!(parse_list::<Kind>("mod8,zipf").is_err());
    }
}
