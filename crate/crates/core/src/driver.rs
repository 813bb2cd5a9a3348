//! The quicksort driver: pivot choice, kernel dispatch, bad-partition
//! accounting with a heapsort fallback, pattern breaking and the optimistic
//! insertion-sort exit for swapless partitions.

use std::mem::{needs_drop, size_of};

use thiserror::Error;

use crate::instrument::{Metrics, NoProbe, PivotTrace, Probe};
use crate::partition::{
    block_partition_right_probed, partition_left_probed, partition_right_probed, BlockBuffers, PartitionResult,
    MAX_BLOCK_SIZE,
};
use crate::small_sorts::{
    heapsort_probed, insertion_sort_probed, partial_insertion_sort_probed, sort3_probed,
    unguarded_insertion_sort_probed, MoveBudget,
};

/// Ranges shorter than this never have their end candidates exchanged.
pub const MIN_BREAK_PATTERNS_LEN: usize = 8;

/// Smallest ninther threshold for which the nine candidate positions are
/// pairwise distinct.
pub const MIN_NINTHER_THRESHOLD: usize = 8;

/// What decides when a subtree gives up on quicksort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fallback {
    /// Spend one unit of budget per bad partition; start at `floor(log2 n)`.
    BadPartitions,
    /// Spend one unit per partition level, as introsort does; start at
    /// `2 * floor(log2 n)`.
    RecursionDepth,
}

/// Tunables and feature switches for one sort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SortConfig {
    /// Ranges shorter than this go to insertion sort.
    pub insertion_threshold: usize,
    /// Ranges longer than this pick the pivot with a ninther.
    pub ninther_threshold: usize,
    /// Corrections allowed per partition on the optimistic path.
    pub partial_insertion_budget: usize,
    pub block_size: usize,
    /// A partition is bad when a side is shorter than `len >> shift`.
    pub bad_partition_shift: u32,
    pub use_block_partition: bool,
    pub use_partition_left: bool,
    pub use_break_patterns: bool,
    pub use_partial_insertion: bool,
    /// Declares the ordering cheap enough to evaluate without branching.
    /// Block partitioning only runs when this and `use_block_partition` are
    /// both set. [`crate::sort`] sets it for small plain-data element types.
    pub assume_branch_cheap: bool,
    pub fallback: Fallback,
}

impl Default for SortConfig {
    fn default() -> Self {
        SortConfig {
            insertion_threshold: 24,
            ninther_threshold: 128,
            partial_insertion_budget: 8,
            block_size: 64,
            bad_partition_shift: 3,
            use_block_partition: true,
            use_partition_left: true,
            use_break_patterns: true,
            use_partial_insertion: true,
            assume_branch_cheap: false,
            fallback: Fallback::BadPartitions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("insertion threshold {0} is below 3")]
    InsertionThreshold(usize),
    #[error("ninther threshold {ninther} is below the insertion threshold {insertion} or {min}")]
    NintherThreshold {
        ninther: usize,
        insertion: usize,
        min: usize,
    },
    #[error("block size {0} outside 1..={max}", max = MAX_BLOCK_SIZE)]
    BlockSize(usize),
    #[error("bad-partition shift {0} outside 1..=16")]
    BadPartitionShift(u32),
}

impl SortConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.insertion_threshold < 3 {
            return Err(ConfigError::InsertionThreshold(self.insertion_threshold));
        }
        if self.ninther_threshold < self.insertion_threshold || self.ninther_threshold < MIN_NINTHER_THRESHOLD {
            return Err(ConfigError::NintherThreshold {
                ninther: self.ninther_threshold,
                insertion: self.insertion_threshold,
                min: MIN_NINTHER_THRESHOLD,
            });
        }
        if !(1..=MAX_BLOCK_SIZE).contains(&self.block_size) {
            return Err(ConfigError::BlockSize(self.block_size));
        }
        if !(1..=16).contains(&self.bad_partition_shift) {
            return Err(ConfigError::BadPartitionShift(self.bad_partition_shift));
        }
        Ok(())
    }

    /// Default tunables with block partitioning forced on.
    pub fn branchless() -> Self {
        SortConfig {
            assume_branch_cheap: true,
            ..Self::default()
        }
    }

    /// Default tunables with block partitioning switched off.
    pub fn scalar() -> Self {
        SortConfig {
            use_block_partition: false,
            ..Self::default()
        }
    }

    /// The introsort-like ablation: no equal-element grouping, no pattern
    /// breaking, no optimistic exit, depth-limited fallback.
    pub fn introsort_baseline() -> Self {
        SortConfig {
            use_block_partition: false,
            use_partition_left: false,
            use_break_patterns: false,
            use_partial_insertion: false,
            fallback: Fallback::RecursionDepth,
            ..Self::default()
        }
    }

    /// All sixteen settings of the four heuristic switches applied to `self`.
    pub fn toggle_combinations(&self) -> impl Iterator<Item = SortConfig> + '_ {
        (0u8..16).map(move |bits| SortConfig {
            use_block_partition: bits & 1 != 0,
            use_partition_left: bits & 2 != 0,
            use_break_patterns: bits & 4 != 0,
            use_partial_insertion: bits & 8 != 0,
            ..*self
        })
    }

    /// `floor(log2 len)`, or twice that under [`Fallback::RecursionDepth`].
    pub fn initial_budget(&self, len: usize) -> usize {
        let log = floor_log2(len);
        match self.fallback {
            Fallback::BadPartitions => log,
            Fallback::RecursionDepth => 2 * log,
        }
    }

    fn block_enabled(&self) -> bool {
        self.use_block_partition && self.assume_branch_cheap
    }
}

pub(crate) fn floor_log2(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// Per-call state of the driver loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopContext {
    /// Bad partitions this subtree may still take before falling back to
    /// heapsort. Each child gets its own copy.
    pub bad_allowed: usize,
    /// The range starts at the beginning of the buffer and has no
    /// predecessor.
    pub leftmost: bool,
    pub depth: usize,
}

/// Whether `sort` turns on block partitioning for `T` on its own: the
/// element owns no resources and fits in two machine words, which covers the
/// primitive numbers and small tuples of them.
pub fn is_branch_cheap<T>() -> bool {
    !needs_drop::<T>() && size_of::<T>() <= 2 * size_of::<u64>()
}

/// Moves the chosen pivot to `v[0]`.
///
/// Up to `ninther_threshold` elements this is the median of the middle,
/// first and last elements; beyond it, the median of three medians of three.
/// On an ascending range the only visible change is the pivot trading places
/// with the element it is exchanged with, which the following partition swaps
/// straight back.
pub fn choose_pivot<T, F>(v: &mut [T], config: &SortConfig, is_less: &mut F)
where
    F: FnMut(&T, &T) -> bool,
{
    choose_pivot_probed(v, config, is_less, &mut NoProbe);
}

pub fn choose_pivot_probed<T, F, P>(v: &mut [T], config: &SortConfig, is_less: &mut F, probe: &mut P)
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    let len = v.len();
    debug_assert!(len >= 3);
    let mid = len / 2;
    let last = len - 1;
    if len > config.ninther_threshold {
        sort3_probed(v, 0, mid, last, is_less, probe);
        sort3_probed(v, 1, mid - 1, last - 1, is_less, probe);
        sort3_probed(v, 2, mid + 1, last - 2, is_less, probe);
        sort3_probed(v, mid - 1, mid, mid + 1, is_less, probe);
        v.swap(0, mid);
        probe.exchanged(1);
    } else {
        sort3_probed(v, mid, 0, last, is_less, probe);
    }
}

/// `true` when either side holds fewer than `total >> bad_partition_shift`
/// elements.
pub fn is_bad_partition(left_len: usize, right_len: usize, total: usize, config: &SortConfig) -> bool {
    let cutoff = total >> config.bad_partition_shift;
    left_len < cutoff || right_len < cutoff
}

/// Swaps the end pivot candidates with elements from the quartiles, giving
/// the next pivot choice fresh material. Ranges longer than
/// `ninther_threshold` also swap the two extra candidates next to each end.
/// Shorter than [`MIN_BREAK_PATTERNS_LEN`] is a no-op.
pub fn break_patterns<T>(v: &mut [T], config: &SortConfig) {
    let len = v.len();
    if len < MIN_BREAK_PATTERNS_LEN {
        return;
    }
    let quarter = len / 4;
    let last = len - 1;
    v.swap(0, quarter);
    v.swap(last, last - quarter);
    if len > config.ninther_threshold {
        v.swap(1, quarter + 1);
        v.swap(2, quarter + 2);
        v.swap(last - 1, last - 1 - quarter);
        v.swap(last - 2, last - 2 - quarter);
    }
}

struct Driver<'a, F, P> {
    is_less: &'a mut F,
    probe: &'a mut P,
    config: &'a SortConfig,
    buffers: Option<BlockBuffers>,
    budget: MoveBudget,
}

impl<F, P> Driver<'_, F, P> {
    /// Sorts `v[start..end]`. Recurses into the smaller side of each
    /// partition and loops on the larger one.
    fn run<T>(&mut self, v: &mut [T], mut start: usize, mut end: usize, mut ctx: LoopContext)
    where
        F: FnMut(&T, &T) -> bool,
        P: Probe<T>,
    {
        self.probe.entered(ctx.depth);
        let cfg = self.config;
        loop {
            let len = end - start;
            if len < cfg.insertion_threshold {
                if ctx.leftmost {
                    insertion_sort_probed(&mut v[start..end], self.is_less, self.probe);
                } else {
                    unguarded_insertion_sort_probed(&mut v[start - 1..end], self.is_less, self.probe);
                }
                return;
            }
            if ctx.bad_allowed == 0 {
                self.probe.heapsort_fallback();
                heapsort_probed(&mut v[start..end], self.is_less, self.probe);
                return;
            }

            choose_pivot_probed(&mut v[start..end], cfg, self.is_less, self.probe);

            // The predecessor never exceeds anything in the range, so "not
            // less than the pivot" means equal to it.
            if cfg.use_partition_left && !ctx.leftmost && !(self.is_less)(&v[start - 1], &v[start]) {
                let res = partition_left_probed(&mut v[start..end], self.is_less, self.probe);
                start += res.pivot_index + 1;
                continue;
            }

            let PartitionResult { pivot_index, no_swaps } = match self.buffers.as_mut() {
                Some(buffers) => block_partition_right_probed(&mut v[start..end], buffers, self.is_less, self.probe),
                None => partition_right_probed(&mut v[start..end], self.is_less, self.probe),
            };
            let pivot = start + pivot_index;
            let left_len = pivot_index;
            let right_len = len - pivot_index - 1;

            let bad = is_bad_partition(left_len, right_len, len, cfg);
            if bad {
                self.probe.bad_partition();
            }
            if bad || cfg.fallback == Fallback::RecursionDepth {
                ctx.bad_allowed -= 1;
            }
            if bad && cfg.use_break_patterns {
                break_patterns(&mut v[start..pivot], cfg);
                break_patterns(&mut v[pivot + 1..end], cfg);
            } else if !bad && no_swaps && cfg.use_partial_insertion {
                let left_sorted =
                    partial_insertion_sort_probed(&mut v[start..pivot], self.budget, self.is_less, self.probe);
                self.probe.partial_insertion(left_sorted);
                if left_sorted {
                    let right_sorted =
                        partial_insertion_sort_probed(&mut v[pivot + 1..end], self.budget, self.is_less, self.probe);
                    self.probe.partial_insertion(right_sorted);
                    if right_sorted {
                        return;
                    }
                }
            }

            let child = LoopContext {
                depth: ctx.depth + 1,
                ..ctx
            };
            if left_len < right_len {
                self.run(v, start, pivot, child);
                start = pivot + 1;
                ctx.leftmost = false;
            } else {
                self.run(
                    v,
                    pivot + 1,
                    end,
                    LoopContext {
                        leftmost: false,
                        ..child
                    },
                );
                end = pivot;
            }
        }
    }
}

/// Runs the driver over `v` reporting to `probe`. `config` must be valid.
pub(crate) fn sort_probed<T, F, P>(v: &mut [T], is_less: &mut F, config: &SortConfig, probe: &mut P)
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    debug_assert!(config.validate().is_ok());
    let len = v.len();
    if len < 2 {
        return;
    }
    let mut driver = Driver {
        is_less,
        probe,
        config,
        buffers: config.block_enabled().then(|| BlockBuffers::new(config.block_size)),
        budget: MoveBudget::new(config.partial_insertion_budget),
    };
    let ctx = LoopContext {
        bad_allowed: config.initial_budget(len),
        leftmost: true,
        depth: 0,
    };
    driver.run(v, 0, len, ctx);
}

/// Sorts `v` ascending.
///
/// Block partitioning is used when [`is_branch_cheap`] holds for `T`.
pub fn sort<T: Ord>(v: &mut [T]) {
    let config = SortConfig {
        assume_branch_cheap: is_branch_cheap::<T>(),
        ..SortConfig::default()
    };
    sort_probed(v, &mut |a: &T, b: &T| a.lt(b), &config, &mut NoProbe);
}

/// Sorts `v` by the strict weak ordering `is_less`.
///
/// An ordering that is not a strict weak ordering leaves `v` in an
/// unspecified order, or panics; either way `v` still holds exactly the
/// elements it started with.
pub fn sort_with<T, F>(v: &mut [T], mut is_less: F)
where
    F: FnMut(&T, &T) -> bool,
{
    sort_probed(v, &mut is_less, &SortConfig::default(), &mut NoProbe);
}

pub fn sort_with_config<T, F>(v: &mut [T], mut is_less: F, config: &SortConfig) -> Result<(), ConfigError>
where
    F: FnMut(&T, &T) -> bool,
{
    config.validate()?;
    sort_probed(v, &mut is_less, config, &mut NoProbe);
    Ok(())
}

/// Sorts and returns the counters collected on the way, including the exact
/// number of ordering calls.
pub fn instrumented_sort<T, F>(v: &mut [T], mut is_less: F, config: &SortConfig) -> Result<Metrics, ConfigError>
where
    F: FnMut(&T, &T) -> bool,
{
    config.validate()?;
    let mut metrics = Metrics::default();
    let mut comparisons = 0u64;
    sort_probed(
        v,
        &mut |a: &T, b: &T| {
            comparisons += 1;
            is_less(a, b)
        },
        config,
        &mut metrics,
    );
    metrics.comparisons = comparisons;
    Ok(metrics)
}

/// Like [`instrumented_sort`] with the natural order, also recording every
/// pivot value.
pub fn traced_sort<T: Ord + Clone>(v: &mut [T], config: &SortConfig) -> Result<PivotTrace<T>, ConfigError> {
    config.validate()?;
    let mut trace = PivotTrace::default();
    let mut comparisons = 0u64;
    sort_probed(
        v,
        &mut |a: &T, b: &T| {
            comparisons += 1;
            a.lt(b)
        },
        config,
        &mut trace,
    );
    trace.metrics.comparisons = comparisons;
    Ok(trace)
}

/// The introsort-like reference sort used as a benchmark baseline. Only the
/// numeric tunables of `config` are used.
pub fn introsort_baseline<T, F>(v: &mut [T], mut is_less: F, config: &SortConfig) -> Result<(), ConfigError>
where
    F: FnMut(&T, &T) -> bool,
{
    let baseline = SortConfig {
        insertion_threshold: config.insertion_threshold,
        ninther_threshold: config.ninther_threshold,
        ..SortConfig::introsort_baseline()
    };
    baseline.validate()?;
    sort_probed(v, &mut is_less, &baseline, &mut NoProbe);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lt(a: &i32, b: &i32) -> bool {
        a < b
    }

    #[test]
    fn config_validation() {
        assert_eq!(SortConfig::default().validate(), Ok(()));
        let bad = SortConfig {
            insertion_threshold: 2,
            ..SortConfig::default()
        };
        assert_eq!(bad.validate(), Err(ConfigError::InsertionThreshold(2)));
        let bad = SortConfig {
            ninther_threshold: 10,
            ..SortConfig::default()
        };
        assert!(matches!(bad.validate(), Err(ConfigError::NintherThreshold { .. })));
        let bad = SortConfig {
            block_size: 0,
            ..SortConfig::default()
        };
        assert_eq!(bad.validate(), Err(ConfigError::BlockSize(0)));
        let bad = SortConfig {
            bad_partition_shift: 0,
            ..SortConfig::default()
        };
        assert_eq!(bad.validate(), Err(ConfigError::BadPartitionShift(0)));
        let mut v = [2, 1];
        assert!(sort_with_config(&mut v, lt, &bad).is_err());
        assert_eq!(v, [2, 1]);
    }

    #[test]
    fn toggle_combinations_are_distinct() {
        let all: Vec<_> = SortConfig::default().toggle_combinations().collect();
        assert_eq!(all.len(), 16);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn budget_is_floor_log2() {
        let cfg = SortConfig::default();
        assert_eq!(cfg.initial_budget(1), 0);
        assert_eq!(cfg.initial_budget(64), 6);
        assert_eq!(cfg.initial_budget(127), 6);
        assert_eq!(cfg.initial_budget(1 << 20), 20);
        assert_eq!(SortConfig::introsort_baseline().initial_budget(1 << 20), 40);
    }

    #[test]
    fn median_of_three_pivot() {
        let cfg = SortConfig::default();
        let mut v = [1, 2, 3];
        choose_pivot(&mut v, &cfg, &mut lt);
        assert_eq!(v, [2, 1, 3]);

        let mut v = [3, 3, 3];
        choose_pivot(&mut v, &cfg, &mut lt);
        assert_eq!(v[0], 3);

        // Median of {v[0], v[mid], v[last]} lands in front.
        let mut v = [9, 0, 0, 0, 1, 0, 0, 5];
        choose_pivot(&mut v, &cfg, &mut lt);
        assert_eq!(v[0], 5);
    }

    #[test]
    fn ninther_on_ascending_input_restores_order() {
        let cfg = SortConfig::default();
        let mut v: Vec<i32> = (0..200).collect();
        choose_pivot(&mut v, &cfg, &mut lt);
        // The ninther of 0..200 is the middle element; it traded places with
        // v[0].
        assert_eq!(v[0], 100);
        assert_eq!(v[100], 0);
        v.swap(0, 100);
        assert_eq!(v, (0..200).collect::<Vec<_>>());

        let mut v: Vec<i32> = (0..200).collect();
        choose_pivot(&mut v, &cfg, &mut lt);
        let res = crate::partition::partition_right(&mut v, &mut lt);
        assert!(res.no_swaps);
        assert_eq!(v, (0..200).collect::<Vec<_>>());
    }

    #[test]
    fn ninther_picks_median_of_medians() {
        // Brute force: simulate the five steps on index triples of a
        // scrambled 0..257 and compare with the median of the medians.
        let cfg = SortConfig::default();
        let n = 257;
        let v0: Vec<i32> = (0..n).map(|i| (i * 131 + 7) % n).collect();
        let mid = (n / 2) as usize;
        let last = (n - 1) as usize;
        let med = |a: i32, b: i32, c: i32| {
            let mut t = [a, b, c];
            t.sort();
            t[1]
        };
        let m1 = med(v0[0], v0[mid], v0[last]);
        let m2 = med(v0[1], v0[mid - 1], v0[last - 1]);
        let m3 = med(v0[2], v0[mid + 1], v0[last - 2]);
        let mut v = v0.clone();
        choose_pivot(&mut v, &cfg, &mut lt);
        assert_eq!(v[0], med(m2, m1, m3));
    }

    #[test]
    fn bad_partition_cutoff() {
        let cfg = SortConfig::default();
        assert!(is_bad_partition(7, 56, 64, &cfg));
        assert!(!is_bad_partition(8, 55, 64, &cfg));
        assert!(!is_bad_partition(32, 31, 64, &cfg));
        assert!(is_bad_partition(56, 7, 64, &cfg));
    }

    #[test]
    fn break_patterns_positions() {
        let cfg = SortConfig::default();
        let mut v: Vec<i32> = (0..16).collect();
        break_patterns(&mut v, &cfg);
        assert_eq!(v[0], 4);
        assert_eq!(v[15], 11);
        assert_eq!(v[4], 0);
        assert_eq!(v[11], 15);
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(sorted, (0..16).collect::<Vec<_>>());

        // Twice is the identity: the exchanged pairs are disjoint.
        for len in [8, 9, 16, 100, 129, 200, 1000] {
            let orig: Vec<i32> = (0..len).collect();
            let mut v = orig.clone();
            break_patterns(&mut v, &cfg);
            assert_ne!(v, orig);
            break_patterns(&mut v, &cfg);
            assert_eq!(v, orig, "len {len}");
        }

        let mut short: Vec<i32> = (0..7).collect();
        break_patterns(&mut short, &cfg);
        assert_eq!(short, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn break_patterns_ninther_extension() {
        let cfg = SortConfig::default();
        let mut v: Vec<i32> = (0..200).collect();
        break_patterns(&mut v, &cfg);
        assert_eq!(&v[..3], &[50, 51, 52]);
        assert_eq!(&v[197..], &[147, 148, 149]);
    }

    #[test]
    fn trivial_inputs() {
        let mut empty: Vec<i32> = vec![];
        sort(&mut empty);
        let mut one = vec![7];
        sort(&mut one);
        assert_eq!(one, [7]);
    }

    #[test]
    fn branch_cheap_heuristic() {
        assert!(is_branch_cheap::<i64>());
        assert!(is_branch_cheap::<(u32, u32)>());
        assert!(!is_branch_cheap::<String>());
        assert!(!is_branch_cheap::<[u64; 4]>());
    }
}
