//! Counting orderings, per-sort metrics, pivot tracing and a quicksort-killer
//! input builder.
//!
//! Every kernel in this crate reports through a [`Probe`]. The uninstrumented
//! entry points use [`NoProbe`], whose hooks are empty and compile away.

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::fmt;

use crate::driver::{self, SortConfig};

/// Which partition kernel handled a range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    Right,
    BlockRight,
    Left,
}

/// Observation hooks called by the sorting routines.
pub trait Probe<T> {
    /// `count` pairwise element exchanges.
    #[inline(always)]
    fn exchanged(&mut self, _count: usize) {}

    /// One lift/shift/drop cycle that displaced `shift` elements by one slot.
    #[inline(always)]
    fn relocated(&mut self, _shift: usize) {}

    /// `pairs` misplaced left/right pairs fixed by one cyclic rotation through a
    /// single temporary (two moves per element plus one).
    #[inline(always)]
    fn cycled(&mut self, _pairs: usize) {}

    #[inline(always)]
    fn entered(&mut self, _depth: usize) {}

    #[inline(always)]
    fn partitioned(&mut self, _kernel: Kernel, _pivot: &T) {}

    #[inline(always)]
    fn bad_partition(&mut self) {}

    #[inline(always)]
    fn heapsort_fallback(&mut self) {}

    #[inline(always)]
    fn partial_insertion(&mut self, _sorted: bool) {}
}

/// The probe used by the plain sorting entry points.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoProbe;

impl<T> Probe<T> for NoProbe {}

/// Counters accumulated over one sort invocation.
///
/// `element_moves` counts single element copies: an exchange costs three, a
/// lift/shift/drop cycle over `k` displaced elements costs `k + 2` and a cyclic
/// rotation of `p` pairs costs `2p + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Metrics {
    pub comparisons: u64,
    pub element_moves: u64,
    pub exchanges: u64,
    pub relocations: u64,
    pub partition_right_calls: u64,
    pub partition_left_calls: u64,
    pub bad_partitions: u64,
    pub heapsort_fallbacks: u64,
    pub partial_insertion_attempts: u64,
    pub partial_insertion_aborts: u64,
    pub max_depth: u64,
}

impl Metrics {
    /// CSV column names, in the order produced by [`Metrics::csv_fields`].
    pub const CSV_COLUMNS: [&'static str; 11] = [
        "comparisons",
        "element_moves",
        "exchanges",
        "relocations",
        "partition_right_calls",
        "partition_left_calls",
        "bad_partitions",
        "heapsort_fallbacks",
        "partial_insertion_attempts",
        "partial_insertion_aborts",
        "max_depth",
    ];

    pub fn csv_fields(&self) -> [u64; 11] {
        [
            self.comparisons,
            self.element_moves,
            self.exchanges,
            self.relocations,
            self.partition_right_calls,
            self.partition_left_calls,
            self.bad_partitions,
            self.heapsort_fallbacks,
            self.partial_insertion_attempts,
            self.partial_insertion_aborts,
            self.max_depth,
        ]
    }

    /// Total partition operations of either kind.
    pub fn partitions(&self) -> u64 {
        self.partition_right_calls + self.partition_left_calls
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, value)) in Self::CSV_COLUMNS.iter().zip(self.csv_fields()).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

impl<T> Probe<T> for Metrics {
    #[inline]
    fn exchanged(&mut self, count: usize) {
        self.exchanges += count as u64;
        self.element_moves += 3 * count as u64;
    }

    #[inline]
    fn relocated(&mut self, shift: usize) {
        self.relocations += 1;
        self.element_moves += shift as u64 + 2;
    }

    #[inline]
    fn cycled(&mut self, pairs: usize) {
        if pairs > 0 {
            self.exchanges += pairs as u64;
            self.element_moves += 2 * pairs as u64 + 1;
        }
    }

    #[inline]
    fn entered(&mut self, depth: usize) {
        self.max_depth = self.max_depth.max(depth as u64);
    }

    #[inline]
    fn partitioned(&mut self, kernel: Kernel, _pivot: &T) {
        match kernel {
            Kernel::Right | Kernel::BlockRight => self.partition_right_calls += 1,
            Kernel::Left => self.partition_left_calls += 1,
        }
    }

    #[inline]
    fn bad_partition(&mut self) {
        self.bad_partitions += 1;
    }

    #[inline]
    fn heapsort_fallback(&mut self) {
        self.heapsort_fallbacks += 1;
    }

    #[inline]
    fn partial_insertion(&mut self, sorted: bool) {
        self.partial_insertion_attempts += 1;
        if !sorted {
            self.partial_insertion_aborts += 1;
        }
    }
}

/// Records how many times each value class was chosen as a pivot, on top of
/// the ordinary [`Metrics`].
#[derive(Clone, Debug)]
pub struct PivotTrace<T> {
    pub metrics: Metrics,
    pub chosen: BTreeMap<T, u32>,
}

impl<T> Default for PivotTrace<T> {
    fn default() -> Self {
        PivotTrace {
            metrics: Metrics::default(),
            chosen: BTreeMap::new(),
        }
    }
}

impl<T: Ord> PivotTrace<T> {
    /// Value classes that served as pivot more than `limit` times.
    pub fn overused(&self, limit: u32) -> Vec<(&T, u32)> {
        self.chosen
            .iter()
            .filter(|(_, &times)| times > limit)
            .map(|(v, &times)| (v, times))
            .collect()
    }
}

impl<T: Ord + Clone> Probe<T> for PivotTrace<T> {
    fn exchanged(&mut self, count: usize) {
        Probe::<T>::exchanged(&mut self.metrics, count);
    }
    fn relocated(&mut self, shift: usize) {
        Probe::<T>::relocated(&mut self.metrics, shift);
    }
    fn cycled(&mut self, pairs: usize) {
        Probe::<T>::cycled(&mut self.metrics, pairs);
    }
    fn entered(&mut self, depth: usize) {
        Probe::<T>::entered(&mut self.metrics, depth);
    }
    fn partitioned(&mut self, kernel: Kernel, pivot: &T) {
        self.metrics.partitioned(kernel, pivot);
        *self.chosen.entry(pivot.clone()).or_insert(0) += 1;
    }
    fn bad_partition(&mut self) {
        Probe::<T>::bad_partition(&mut self.metrics);
    }
    fn heapsort_fallback(&mut self) {
        Probe::<T>::heapsort_fallback(&mut self.metrics);
    }
    fn partial_insertion(&mut self, sorted: bool) {
        Probe::<T>::partial_insertion(&mut self.metrics, sorted);
    }
}

/// Wraps `base` so that every call bumps `counter`.
pub fn counting_ordering<'a, T, F>(mut base: F, counter: &'a Cell<u64>) -> impl FnMut(&T, &T) -> bool + 'a
where
    F: FnMut(&T, &T) -> bool + 'a,
{
    move |a, b| {
        counter.set(counter.get() + 1);
        base(a, b)
    }
}

/// Value assigned to every item that has not been pinned yet. It compares
/// greater than any pinned value.
const GAS: usize = usize::MAX;

struct Adversary {
    values: Vec<usize>,
    pinned: usize,
    candidate: usize,
}

impl Adversary {
    fn pin(&mut self, item: usize) {
        self.values[item] = self.pinned;
        self.pinned += 1;
    }

    fn is_less(&mut self, x: usize, y: usize) -> bool {
        if self.values[x] == GAS && self.values[y] == GAS {
            if x == self.candidate {
                self.pin(x);
            } else {
                self.pin(y);
            }
        }
        if self.values[x] == GAS {
            self.candidate = x;
        } else if self.values[y] == GAS {
            self.candidate = y;
        }
        self.values[x] < self.values[y]
    }
}

/// Builds a permutation of `0..n` tuned against the driver's deterministic
/// pivot rule under `config`.
///
/// Items start out unpinned ("gas"). Whenever the sort compares two unpinned
/// items one of them is pinned to the next smallest value, preferring the
/// item that most recently looked like a pivot candidate. After the sort
/// finishes the remaining items are pinned in index order and the induced
/// values are returned; replaying the sort on them reproduces the same
/// comparison outcomes.
pub fn adversary_input_with(n: usize, config: &SortConfig) -> Vec<usize> {
    let state = RefCell::new(Adversary {
        values: vec![GAS; n],
        pinned: 0,
        candidate: 0,
    });
    let mut items: Vec<usize> = (0..n).collect();
    let mut cfg = *config;
    cfg.assume_branch_cheap = false;
    driver::sort_probed(
        &mut items,
        &mut |a: &usize, b: &usize| state.borrow_mut().is_less(*a, *b),
        &cfg,
        &mut NoProbe,
    );
    let mut state = state.into_inner();
    for item in 0..n {
        if state.values[item] == GAS {
            state.pin(item);
        }
    }
    state.values
}

/// [`adversary_input_with`] against the default configuration.
pub fn adversary_input(n: usize) -> Vec<usize> {
    adversary_input_with(n, &SortConfig::default())
}
