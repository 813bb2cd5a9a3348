//! Executable checks for the sort's correctness and complexity claims.
//!
//! Each check returns a [`Check`] with a one-line summary of what was
//! measured. The sweeps fan out through [`crate::exec::map`], so they use the
//! rayon pool when the `parallel` feature is on.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::bench::{self, Algo, BenchPolicy};
use crate::datagen::{generate, generate_values, Dataset, DistributionSpec, ElementType, Kind};
use crate::driver::{instrumented_sort, sort_with_config, traced_sort, SortConfig};
use crate::exec::{self, Execution};
use crate::instrument::{adversary_input_with, Metrics};
use crate::partition::{block_partition_right, partition_left, partition_right, BlockBuffers};
use crate::small_sorts::sort3;

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Informative checks are reported but never fail a run.
    pub gating: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed, self.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        write!(f, "[{status}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

fn check(id: u8, name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        id,
        name,
        passed,
        gating: true,
        detail,
    }
}

/// `ceil(log2 n)`, zero for `n <= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Largest recursion depth the smaller-side recursion may reach.
pub fn depth_limit(n: usize) -> u64 {
    ceil_log2(n) as u64 + 2
}

fn matches_oracle<T: Ord + Clone>(input: &[T], output: &[T]) -> bool {
    let mut want = input.to_vec();
    want.sort();
    want == output
}

fn sorts_correctly<T: Ord + Clone>(input: &[T], cfg: &SortConfig) -> bool {
    let mut v = input.to_vec();
    sort_with_config(&mut v, |a: &T, b: &T| a.lt(b), cfg).is_ok() && matches_oracle(input, &v)
}

/// Sorts `input` under `cfg` and returns the counters, or `None` when the
/// output disagrees with the oracle.
pub fn measure<T: Ord + Clone>(input: &[T], cfg: &SortConfig) -> Option<Metrics> {
    let mut v = input.to_vec();
    let metrics = instrumented_sort(&mut v, |a: &T, b: &T| a.lt(b), cfg).ok()?;
    matches_oracle(input, &v).then_some(metrics)
}

/// The two driver presets the complexity checks run under.
pub fn presets() -> [(&'static str, SortConfig); 2] {
    [("scalar", SortConfig::scalar()), ("block", SortConfig::branchless())]
}

/// Sizes 0 through 64 plus 1000 and 4096.
pub fn sweep_sizes() -> Vec<usize> {
    (0..=64).chain([1000, 4096]).collect()
}

/// A seeded random array: random length up to 1500 over a random value range,
/// so some trials are duplicate-heavy and some nearly distinct.
pub fn random_array(trial: u64) -> Vec<i64> {
    let mut rng = SplitMix64::seed_from_u64(0x5eed_0000 ^ trial);
    let len = rng.random_range(0..=1500usize);
    let range = match rng.random_range(0..4) {
        0 => 2,
        1 => 16,
        2 => len.max(1) as i64,
        _ => i64::MAX,
    };
    (0..len).map(|_| rng.random_range(0..range)).collect()
}

/// Criterion 1: every distribution, both element types, small and medium
/// sizes and 1000 random arrays, under all sixteen toggle settings.
pub fn correctness_sweep(exec: Execution) -> Check {
    let base = SortConfig::branchless();
    let configs: Vec<SortConfig> = base.toggle_combinations().collect();

    let mut jobs: Vec<(Kind, ElementType)> = Vec::new();
    for kind in Kind::ALL {
        for ty in [ElementType::Int64, ElementType::Str] {
            jobs.push((kind, ty));
        }
    }
    let failures: Vec<String> = exec::map(exec, jobs, |(kind, ty)| {
        let mut bad = Vec::new();
        for n in sweep_sizes() {
            let spec = DistributionSpec::new(kind, n, ty, 0xC0FFEE);
            let data = generate(&spec);
            for (t, cfg) in configs.iter().enumerate() {
                let ok = match &data {
                    Dataset::Int64(v) => sorts_correctly(v, cfg),
                    Dataset::Str(v) => sorts_correctly(v, cfg),
                };
                if !ok {
                    bad.push(format!("{kind}/{ty}/n={n}/toggles={t:04b}"));
                }
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect();

    let random_failures: Vec<String> = exec::map(exec, (0..1000u64).collect(), |trial| {
        let input = random_array(trial);
        let strings: Vec<String> = input.iter().map(|x| x.to_string()).collect();
        configs
            .iter()
            .enumerate()
            .filter(|(_, cfg)| !sorts_correctly(&input, cfg) || !sorts_correctly(&strings, cfg))
            .map(|(t, _)| format!("random#{trial}/toggles={t:04b}"))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let structured = Kind::ALL.len() * 2 * sweep_sizes().len() * configs.len();
    let random = 1000 * 2 * configs.len();
    let all: Vec<String> = failures.into_iter().chain(random_failures).collect();
    let detail = if all.is_empty() {
        format!("{structured} structured and {random} random sorts matched the oracle")
    } else {
        format!(
            "{} mismatches, first: {}",
            all.len(),
            all[..all.len().min(5)].join(", ")
        )
    };
    check(1, "correctness sweep", all.is_empty(), detail)
}

/// Every array of length `len` over `{0, 1, 2}`.
pub fn ternary_arrays(len: usize) -> Vec<Vec<u8>> {
    let count = 3usize.pow(len as u32);
    (0..count)
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let digit = (code % 3) as u8;
                    code /= 3;
                    digit
                })
                .collect()
        })
        .collect()
}

/// Median-of-three preparation as the driver does it for short ranges; a
/// pair is simply ordered.
pub fn prepare_pivot(v: &mut [u8]) {
    let lt = &mut |a: &u8, b: &u8| a < b;
    if v.len() == 2 {
        if v[1] < v[0] {
            v.swap(0, 1);
        }
    } else {
        let (mid, last) = (v.len() / 2, v.len() - 1);
        sort3(v, mid, 0, last, lt);
    }
}

fn multiset(v: &[u8]) -> [usize; 3] {
    let mut counts = [0; 3];
    for &x in v {
        counts[x as usize] += 1;
    }
    counts
}

/// Checks the `partition_right` contract on `out` given the prepared input.
/// Returns a description of the first violated clause.
fn right_contract(input: &[u8], out: &[u8], pivot_index: usize, no_swaps: bool) -> Result<(), String> {
    let pivot = input[0];
    if multiset(input) != multiset(out) {
        return Err("multiset changed".into());
    }
    if out[pivot_index] != pivot {
        return Err("pivot not at pivot_index".into());
    }
    if out[..pivot_index].iter().any(|&x| x >= pivot) {
        return Err("left side holds an element >= pivot".into());
    }
    if out[pivot_index + 1..].iter().any(|&x| x < pivot) {
        return Err("right side holds an element < pivot".into());
    }
    // Swapless exactly when the smaller elements already form a prefix of
    // v[1..]; then only the pivot itself moves.
    let first_not_less = input[1..]
        .iter()
        .position(|&x| x >= pivot)
        .map_or(input.len(), |p| p + 1);
    let expect_no_swaps = input[first_not_less..].iter().all(|&x| x >= pivot);
    if no_swaps != expect_no_swaps {
        return Err(format!("no_swaps = {no_swaps}, expected {expect_no_swaps}"));
    }
    if no_swaps {
        let mut moved = input.to_vec();
        moved.swap(0, pivot_index);
        if moved != out {
            return Err("swapless result is not a single pivot exchange".into());
        }
    }
    Ok(())
}

fn left_contract(input: &[u8], out: &[u8], pivot_index: usize) -> Result<(), String> {
    let pivot = input[0];
    if multiset(input) != multiset(out) {
        return Err("multiset changed".into());
    }
    if out[..=pivot_index].iter().any(|&x| x > pivot) {
        return Err("left side holds an element > pivot".into());
    }
    if out[pivot_index + 1..].iter().any(|&x| x <= pivot) {
        return Err("right side holds an element <= pivot".into());
    }
    Ok(())
}

/// Block sizes the oracle exercises: degenerate, odd, and the default.
pub const ORACLE_BLOCK_SIZES: [usize; 4] = [1, 2, 3, 64];

/// Criterion 2: all three kernels against their contracts on every array of
/// length 2 to 7 over a three-letter alphabet.
pub fn partition_oracle(exec: Execution) -> Check {
    let lens: Vec<usize> = (2..=7).collect();
    let results = exec::map(exec, lens, |len| {
        let mut tested = [0usize; 3];
        let mut errors = Vec::new();
        for raw in ternary_arrays(len) {
            let mut input = raw.clone();
            prepare_pivot(&mut input);
            let lt = &mut |a: &u8, b: &u8| a < b;

            let mut scalar = input.clone();
            let res = partition_right(&mut scalar, lt);
            tested[0] += 1;
            if let Err(e) = right_contract(&input, &scalar, res.pivot_index, res.no_swaps) {
                errors.push(format!("partition_right {raw:?}: {e}"));
            }

            for bs in ORACLE_BLOCK_SIZES {
                let mut block = input.clone();
                let mut buffers = BlockBuffers::new(bs);
                let bres = block_partition_right(&mut block, &mut buffers, lt);
                tested[1] += 1;
                if let Err(e) = right_contract(&input, &block, bres.pivot_index, bres.no_swaps) {
                    errors.push(format!("block({bs}) {raw:?}: {e}"));
                }
                let same_sides = bres.pivot_index == res.pivot_index
                    && multiset(&block[..bres.pivot_index]) == multiset(&scalar[..res.pivot_index])
                    && multiset(&block[bres.pivot_index + 1..]) == multiset(&scalar[res.pivot_index + 1..]);
                if !same_sides {
                    errors.push(format!("block({bs}) {raw:?}: sides differ from scalar"));
                }
            }

            // partition_left needs every element >= the pivot, which the
            // predecessor would otherwise guarantee.
            if input.iter().all(|&x| x >= input[0]) {
                let mut left = input.clone();
                let lres = partition_left(&mut left, lt);
                tested[2] += 1;
                if lres.no_swaps {
                    errors.push(format!("partition_left {raw:?}: reported no_swaps"));
                }
                if let Err(e) = left_contract(&input, &left, lres.pivot_index) {
                    errors.push(format!("partition_left {raw:?}: {e}"));
                }
            }
        }
        (tested, errors)
    });
    let mut tested = [0usize; 3];
    let mut errors = Vec::new();
    for (t, e) in results {
        for k in 0..3 {
            tested[k] += t[k];
        }
        errors.extend(e);
    }
    let detail = if errors.is_empty() {
        format!(
            "{} right, {} block, {} left partitions met their contracts",
            tested[0], tested[1], tested[2]
        )
    } else {
        format!("{} violations, first: {}", errors.len(), errors[0])
    };
    check(2, "exhaustive partition oracle", errors.is_empty(), detail)
}

/// Seeds whose mean stands in for the expected count of a shuffled input.
pub const LINEARITY_SEEDS: std::ops::RangeInclusive<u64> = 1..=16;

/// Comparison counts of `kind` (int64) for every size and every seed in
/// [`LINEARITY_SEEDS`], indexed `[size][seed]`.
fn comparison_grid(exec: Execution, kind: Kind, sizes: &[usize], cfg: SortConfig) -> Option<Vec<Vec<u64>>> {
    let mut jobs = Vec::new();
    for &n in sizes {
        for seed in LINEARITY_SEEDS {
            jobs.push((n, seed));
        }
    }
    let counts = exec::map(exec, jobs, move |(n, seed)| {
        measure(&generate_values(&DistributionSpec::int64(kind, n, seed)), &cfg).map(|m| m.comparisons)
    });
    let counts: Vec<u64> = counts.into_iter().collect::<Option<_>>()?;
    Some(counts.chunks(LINEARITY_SEEDS.count()).map(<[u64]>::to_vec).collect())
}

fn ratios(counts: &[f64]) -> Vec<f64> {
    counts.windows(2).map(|w| w[1] / w[0]).collect()
}

fn fmt_ratios(r: &[f64]) -> String {
    let parts: Vec<String> = r.iter().map(|x| format!("{x:.3}")).collect();
    parts.join("/")
}

fn spread(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Criterion 3: with a fixed number of distinct values the comparison count
/// doubles with `n`.
///
/// A single shuffled input costs `a * n` where `a` depends on which value
/// classes the ninther happens to pick (for mod8 it moves between 4.25 and
/// 4.75), so the count at each size is the mean over [`LINEARITY_SEEDS`].
/// The per-seed spread of the step ratios is reported alongside. Every
/// single ones input must stay within `8n`.
pub fn linear_in_distinct_values(exec: Execution) -> Check {
    let sizes: Vec<usize> = (14..=19).map(|e| 1usize << e).collect();
    let mut passed = true;
    let mut notes = Vec::new();
    for (label, cfg) in presets() {
        for kind in [Kind::Mod8, Kind::Ones] {
            let Some(grid) = comparison_grid(exec, kind, &sizes, cfg) else {
                passed = false;
                notes.push(format!("{label}/{kind}: wrong output"));
                continue;
            };
            let means: Vec<f64> = grid
                .iter()
                .map(|row| row.iter().sum::<u64>() as f64 / row.len() as f64)
                .collect();
            let r = ratios(&means);
            let in_band = r.iter().all(|&x| (1.8..=2.4).contains(&x));
            let per_n = spread(
                grid.iter()
                    .zip(&sizes)
                    .flat_map(|(row, &n)| row.iter().map(move |&c| c as f64 / n as f64)),
            );
            let single = spread(grid.windows(2).flat_map(|w| {
                w[0].iter()
                    .zip(&w[1])
                    .map(|(&a, &b)| b as f64 / a as f64)
                    .collect::<Vec<_>>()
            }));
            let bounded = kind != Kind::Ones || per_n.1 <= 8.0;
            passed &= in_band && bounded;
            notes.push(format!(
                "{label}/{kind} mean ratios {} ({:.2}n..{:.2}n, single-seed ratios {:.3}..{:.3})",
                fmt_ratios(&r),
                per_n.0,
                per_n.1,
                single.0,
                single.1
            ));
        }
    }
    check(3, "linear in distinct values", passed, notes.join("; "))
}

/// Criterion 4: in 200 seeded trials with at most 8 distinct values and at
/// most 512 elements, no value is chosen as pivot more than twice, and the
/// number of partitions is at most `2k` plus the heapsort fallbacks.
/// Trials that fell back to heapsort are reported separately and excluded
/// from the per-value count.
pub fn pivot_reuse(exec: Execution) -> Check {
    let outcomes = exec::map(exec, (0..200u64).collect(), |trial| {
        let mut rng = SplitMix64::seed_from_u64(0x1e44a ^ trial);
        let n = rng.random_range(1..=512usize);
        let k = rng.random_range(1..=8u8);
        let input: Vec<u8> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let distinct = {
            let mut seen = input.clone();
            seen.sort_unstable();
            seen.dedup();
            seen.len() as u64
        };
        let mut result = (0u32, 0u32, None);
        for (label, cfg) in presets() {
            let mut v = input.clone();
            let trace = traced_sort(&mut v, &cfg).expect("preset is valid");
            if !matches_oracle(&input, &v) {
                result.2 = Some(format!("trial {trial} {label}: wrong output"));
                break;
            }
            let fallbacks = trace.metrics.heapsort_fallbacks;
            if fallbacks > 0 {
                result.1 += 1;
            } else if let Some((value, times)) = trace.overused(2).first() {
                result.2 = Some(format!("trial {trial} {label}: value {value} pivot {times} times"));
                break;
            }
            if trace.metrics.partitions() > 2 * distinct + fallbacks {
                result.2 = Some(format!(
                    "trial {trial} {label}: {} partitions for k={distinct}",
                    trace.metrics.partitions()
                ));
                break;
            }
            result.0 += 1;
        }
        result
    });
    let runs: u32 = outcomes.iter().map(|o| o.0).sum();
    let excluded: u32 = outcomes.iter().map(|o| o.1).sum();
    let violations: Vec<String> = outcomes.into_iter().filter_map(|o| o.2).collect();
    let detail = if violations.is_empty() {
        format!("200 trials, {runs} sorts, 0 violations, {excluded} with heapsort fallback")
    } else {
        format!("{} violations, first: {}", violations.len(), violations[0])
    };
    check(4, "pivot reuse bound", violations.is_empty(), detail)
}

/// Ascending `0..n` followed by one value at relative rank `u` in `[0, 1)`,
/// where `u` is drawn from `seed` alone. Every size in a family built from
/// one seed gets its extra element at the same relative position.
pub fn ascending_plus_one(n: usize, seed: u64) -> Vec<i64> {
    let u: f64 = SplitMix64::seed_from_u64(seed).random();
    let mut v: Vec<i64> = (0..n as i64).collect();
    v.push(((u * n as f64) as i64).min(n.saturating_sub(1) as i64));
    v
}

/// Seeds of the ascending-plus-one families.
pub const APPENDED_SEEDS: std::ops::RangeInclusive<u64> = 1..=8;

/// Ascending, descending and every ascending-plus-one family at size `n`.
pub fn pattern_inputs(n: usize) -> Vec<(String, Vec<i64>)> {
    let mut inputs = vec![
        (
            "asc".to_string(),
            generate_values(&DistributionSpec::int64(Kind::Asc, n, 1)),
        ),
        (
            "desc".to_string(),
            generate_values(&DistributionSpec::int64(Kind::Desc, n, 1)),
        ),
    ];
    for seed in APPENDED_SEEDS {
        inputs.push((format!("asc+1#{seed}"), ascending_plus_one(n, seed)));
    }
    inputs
}

/// Criterion 5: ascending, descending and ascending with one element
/// appended take at most `6n` comparisons, growing linearly.
pub fn linear_patterns(exec: Execution) -> Check {
    let sizes: Vec<usize> = (10..=20).map(|e| 1usize << e).collect();
    let mut passed = true;
    let mut notes = Vec::new();
    for (label, cfg) in presets() {
        let rows = exec::map(exec, sizes.clone(), move |n| {
            pattern_inputs(n)
                .into_iter()
                .map(|(name, input)| (name, measure(&input, &cfg)))
                .collect::<Vec<_>>()
        });
        let mut appended = (0.0f64, 0.0f64);
        for p in 0..rows[0].len() {
            let name = rows[0][p].0.clone();
            let Some(metrics) = rows.iter().map(|r| r[p].1).collect::<Option<Vec<_>>>() else {
                passed = false;
                notes.push(format!("{label}/{name}: wrong output"));
                continue;
            };
            let counts: Vec<f64> = metrics.iter().map(|m| m.comparisons as f64).collect();
            let per_n = counts
                .iter()
                .zip(&sizes)
                .map(|(&c, &n)| c / n as f64)
                .fold(0.0, f64::max);
            let max_ratio = ratios(&counts).into_iter().fold(0.0, f64::max);
            passed &= per_n <= 6.0 && max_ratio <= 2.4;
            if name.starts_with("asc+1") {
                appended = (appended.0.max(per_n), appended.1.max(max_ratio));
            } else {
                notes.push(format!("{label}/{name} max {per_n:.2}n ratio<={max_ratio:.3}"));
            }
        }
        notes.push(format!(
            "{label}/asc+1 ({} families) max {:.2}n ratio<={:.3}",
            APPENDED_SEEDS.count(),
            appended.0,
            appended.1
        ));
    }
    check(5, "linear on sorted patterns", passed, notes.join("; "))
}

/// Sizes for the worst-case gate.
pub fn worst_case_sizes() -> Vec<usize> {
    (10..=18).step_by(2).map(|e| 1usize << e).collect()
}

fn nlog2n(n: usize) -> f64 {
    let n = n as f64;
    n * n.log2()
}

/// Criterion 6: the adversary built against each preset, organ pipe and
/// merge inputs stay within `20 n log2 n` comparisons.
pub fn worst_case_bound(exec: Execution) -> Check {
    let mut jobs = Vec::new();
    for (label, cfg) in presets() {
        for n in worst_case_sizes() {
            jobs.push((label, cfg, n));
        }
    }
    let rows = exec::map(exec, jobs, |(label, cfg, n)| {
        let adversary: Vec<i64> = adversary_input_with(n, &cfg).into_iter().map(|x| x as i64).collect();
        let organ = generate_values(&DistributionSpec::int64(Kind::Organ, n, 1));
        let merge = generate_values(&DistributionSpec::int64(Kind::Merge, n, 1));
        [("adversary", adversary), ("organ", organ), ("merge", merge)].map(|(name, input)| {
            let m = measure(&input, &cfg);
            (label, name, n, m)
        })
    });
    let mut passed = true;
    let mut worst: Vec<(&str, &str, f64, u64)> = Vec::new();
    for row in rows.iter().flatten() {
        let (label, name, n, m) = *row;
        let Some(m) = m else {
            passed = false;
            worst.push((label, name, f64::INFINITY, 0));
            continue;
        };
        let c = m.comparisons as f64 / nlog2n(n);
        passed &= c <= 20.0;
        match worst.iter_mut().find(|w| w.0 == label && w.1 == name) {
            Some(w) => {
                w.2 = w.2.max(c);
                w.3 += m.heapsort_fallbacks;
            }
            None => worst.push((label, name, c, m.heapsort_fallbacks)),
        }
    }
    let notes: Vec<String> = worst
        .iter()
        .map(|(l, k, c, f)| format!("{l}/{k} max {c:.2} n log2 n, {f} fallbacks"))
        .collect();
    check(6, "worst-case comparison bound", passed, notes.join("; "))
}

/// Criterion 7: recursion depth stays within `ceil(log2 n) + 2` on every
/// distribution, the sorted patterns, random arrays and the adversary.
pub fn depth_bound(exec: Execution) -> Check {
    let mut jobs: Vec<(String, Vec<i64>)> = Vec::new();
    for kind in Kind::ALL {
        for e in (4..=16).step_by(2) {
            let n = (1usize << e) + e; // off a power of two on purpose
            jobs.push((
                format!("{kind}/{n}"),
                generate_values(&DistributionSpec::int64(kind, n, 2)),
            ));
        }
    }
    for e in [10, 14] {
        for (name, input) in pattern_inputs((1 << e) + 3) {
            jobs.push((format!("{name}/{}", (1 << e) + 3), input));
        }
    }
    for trial in 0..100 {
        jobs.push((format!("random#{trial}"), random_array(trial)));
    }
    let tested = jobs.len();
    let mut failures: Vec<String> = exec::map(exec, jobs, |(name, input)| {
        let mut bad = Vec::new();
        for (label, cfg) in presets() {
            match measure(&input, &cfg) {
                Some(m) if m.max_depth <= depth_limit(input.len()) => {}
                Some(m) => bad.push(format!("{label}/{name}: depth {}", m.max_depth)),
                None => bad.push(format!("{label}/{name}: wrong output")),
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect();

    let adversarial = exec::map(exec, presets().to_vec(), |(label, cfg)| {
        let n = 1 << 14;
        let input = adversary_input_with(n, &cfg);
        match measure(&input, &cfg) {
            Some(m) if m.max_depth <= depth_limit(n) => None,
            Some(m) => Some(format!("{label}/adversary: depth {}", m.max_depth)),
            None => Some(format!("{label}/adversary: wrong output")),
        }
    });
    failures.extend(adversarial.into_iter().flatten());
    let detail = if failures.is_empty() {
        format!("{} inputs x 2 presets within ceil(log2 n) + 2", tested + 1)
    } else {
        format!("{} violations, first: {}", failures.len(), failures[0])
    };
    check(7, "recursion depth bound", failures.is_empty(), detail)
}

/// Criterion 8: the entropy slowdown values.
pub fn entropy_table() -> Check {
    let at = |p| bench::slowdown(p).unwrap_or(f64::NAN);
    let (half, fifth, eighth) = (at(0.5), at(0.2), at(0.125));
    let passed = half == 1.0 && (fifth - 1.386).abs() <= 0.005 && (eighth - 1.84).abs() <= 0.01;
    check(
        8,
        "entropy slowdown table",
        passed,
        format!("1/H(0.5)={half} 1/H(0.2)={fifth:.4} 1/H(0.125)={eighth:.4}"),
    )
}

/// Criterion 9: two benchmark runs over the same matrix give identical CSV
/// once the timing columns are dropped.
pub fn bench_determinism() -> Check {
    let cells = bench::matrix(
        &Algo::ALL,
        &Kind::ALL,
        &[ElementType::Int64, ElementType::Str],
        &[1000, 4096],
        42,
    );
    let policy = BenchPolicy {
        min_time: Duration::ZERO,
        min_iterations: 2,
    };
    let first = bench::strip_timing(&bench::to_csv(&bench::run_benchmark(&cells, &policy)));
    let second = bench::strip_timing(&bench::to_csv(&bench::run_benchmark(&cells, &policy)));
    check(
        9,
        "benchmark determinism",
        first == second,
        format!("{} cells, counter columns identical: {}", cells.len(), first == second),
    )
}

fn best_of(reps: usize, algo: Algo, input: &[i64]) -> Duration {
    (0..reps)
        .map(|_| {
            let mut v = input.to_vec();
            let t = Instant::now();
            algo.sort(&mut v);
            let d = t.elapsed();
            std::hint::black_box(&v);
            d
        })
        .min()
        .unwrap_or_default()
}

/// Criterion 10 (informative): wall-clock ratios on uniform int64 at `2^20`.
/// `passed` reports whether the expectations held on this machine; the
/// check never gates.
pub fn performance_expectations() -> Check {
    let input = generate_values(&DistributionSpec::int64(Kind::Uniform, 1 << 20, 1));
    let pdq = best_of(5, Algo::Pdq, &input);
    let bpdq = best_of(5, Algo::Bpdq, &input);
    let base = best_of(5, Algo::IntrosortBaseline, &input);
    let block_speedup = pdq.as_secs_f64() / bpdq.as_secs_f64();
    let vs_baseline = pdq.as_secs_f64() / base.as_secs_f64();
    let profile = if cfg!(debug_assertions) {
        "debug assertions on"
    } else {
        "release"
    };
    Check {
        id: 10,
        name: "performance expectations (informative)",
        passed: block_speedup >= 1.2 && vs_baseline <= 1.1,
        gating: false,
        detail: format!(
            "uniform int64 n=2^20, best of 5, {profile}: pdq {:.1} ms, bpdq {:.1} ms, baseline {:.1} ms; \
             block speedup {block_speedup:.2}x (expect >= 1.2), pdq/baseline {vs_baseline:.2} (expect <= 1.1)",
            pdq.as_secs_f64() * 1e3,
            bpdq.as_secs_f64() * 1e3,
            base.as_secs_f64() * 1e3,
        ),
    }
}

/// Every check in criterion order.
pub fn run_all(exec: Execution) -> Vec<Check> {
    vec![
        correctness_sweep(exec),
        partition_oracle(exec),
        linear_in_distinct_values(exec),
        pivot_reuse(exec),
        linear_patterns(exec),
        worst_case_bound(exec),
        depth_bound(exec),
        entropy_table(),
        bench_determinism(),
        performance_expectations(),
    ]
}
