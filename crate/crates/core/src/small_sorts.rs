//! Base-case sorts and the heapsort fallback.
//!
//! Insertion is done by lifting the out-of-place element once, shifting the
//! block it skips over by one slot and dropping it into the hole, never by a
//! chain of pairwise swaps.

use crate::instrument::{NoProbe, Probe};

/// Upper bound on the number of corrections a partial insertion sort may make
/// before giving up. One correction is one lifted element, however far it
/// travels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MoveBudget {
    pub limit: usize,
}

impl MoveBudget {
    pub const DEFAULT: MoveBudget = MoveBudget { limit: 8 };

    pub const fn new(limit: usize) -> Self {
        MoveBudget { limit }
    }
}

impl Default for MoveBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Moves `v[i]` left to its place in the sorted prefix `v[..i]`. Returns the
/// number of displaced elements.
#[inline]
fn insert_tail<T, F, P>(v: &mut [T], i: usize, is_less: &mut F, probe: &mut P) -> usize
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    let mut hole = i - 1;
    while hole > 0 && is_less(&v[i], &v[hole - 1]) {
        hole -= 1;
    }
    v[hole..=i].rotate_right(1);
    probe.relocated(i - hole);
    i - hole
}

/// Sorts `v` with a bounds-checked insertion sort.
pub fn insertion_sort<T, F>(v: &mut [T], is_less: &mut F)
where
    F: FnMut(&T, &T) -> bool,
{
    insertion_sort_probed(v, is_less, &mut NoProbe);
}

pub fn insertion_sort_probed<T, F, P>(v: &mut [T], is_less: &mut F, probe: &mut P)
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    for i in 1..v.len() {
        if is_less(&v[i], &v[i - 1]) {
            insert_tail(v, i, is_less, probe);
        }
    }
}

/// Sorts `v[1..]`, using `v[0]` as a sentinel.
///
/// `v[0]` is the predecessor of the range in the enclosing buffer and must not
/// compare greater than any element of `v[1..]`. The inner scan has no lower
/// bound test: it stops because nothing is less than the sentinel. `v[0]` is
/// compared against but never moved.
pub fn unguarded_insertion_sort<T, F>(v: &mut [T], is_less: &mut F)
where
    F: FnMut(&T, &T) -> bool,
{
    unguarded_insertion_sort_probed(v, is_less, &mut NoProbe);
}

pub fn unguarded_insertion_sort_probed<T, F, P>(v: &mut [T], is_less: &mut F, probe: &mut P)
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    debug_assert!(!v.is_empty(), "the sentinel slot is missing");
    for i in 2..v.len() {
        if is_less(&v[i], &v[i - 1]) {
            let mut hole = i - 1;
            // An ordering that is not a strict weak order can walk past the
            // sentinel; slice indexing turns that into a panic, not a wild read.
            while is_less(&v[i], &v[hole - 1]) {
                hole -= 1;
            }
            v[hole..=i].rotate_right(1);
            probe.relocated(i - hole);
        }
    }
}

/// Insertion sort that gives up after more than `budget.limit` corrections.
///
/// Returns `true` iff `v` is sorted on return. On `false` the slice holds a
/// permutation of its input whose scanned prefix is sorted.
pub fn partial_insertion_sort<T, F>(v: &mut [T], budget: MoveBudget, is_less: &mut F) -> bool
where
    F: FnMut(&T, &T) -> bool,
{
    partial_insertion_sort_probed(v, budget, is_less, &mut NoProbe)
}

pub fn partial_insertion_sort_probed<T, F, P>(v: &mut [T], budget: MoveBudget, is_less: &mut F, probe: &mut P) -> bool
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    let mut corrections = 0;
    for i in 1..v.len() {
        if is_less(&v[i], &v[i - 1]) {
            insert_tail(v, i, is_less, probe);
            corrections += 1;
            if corrections > budget.limit {
                return false;
            }
        }
    }
    true
}

/// Sorts `v` with a binary max-heap. `O(n log n)` comparisons in every case.
pub fn heapsort<T, F>(v: &mut [T], is_less: &mut F)
where
    F: FnMut(&T, &T) -> bool,
{
    heapsort_probed(v, is_less, &mut NoProbe);
}

pub fn heapsort_probed<T, F, P>(v: &mut [T], is_less: &mut F, probe: &mut P)
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    let mut sift_down = |v: &mut [T], mut node: usize, probe: &mut P| loop {
        let mut child = 2 * node + 1;
        if child >= v.len() {
            break;
        }
        if child + 1 < v.len() && is_less(&v[child], &v[child + 1]) {
            child += 1;
        }
        if !is_less(&v[node], &v[child]) {
            break;
        }
        v.swap(node, child);
        probe.exchanged(1);
        node = child;
    };

    for i in (0..v.len() / 2).rev() {
        sift_down(v, i, probe);
    }
    for end in (1..v.len()).rev() {
        v.swap(0, end);
        probe.exchanged(1);
        sift_down(&mut v[..end], 0, probe);
    }
}

/// Orders the elements at `a`, `b`, `c` so that `v[a] <= v[b] <= v[c]`,
/// using at most three comparisons.
#[inline]
pub fn sort3<T, F>(v: &mut [T], a: usize, b: usize, c: usize, is_less: &mut F)
where
    F: FnMut(&T, &T) -> bool,
{
    sort3_probed(v, a, b, c, is_less, &mut NoProbe);
}

#[inline]
pub fn sort3_probed<T, F, P>(v: &mut [T], a: usize, b: usize, c: usize, is_less: &mut F, probe: &mut P)
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    let mut sort2 = |x: usize, y: usize, v: &mut [T]| {
        if is_less(&v[y], &v[x]) {
            v.swap(x, y);
            probe.exchanged(1);
        }
    };
    sort2(a, b, v);
    sort2(b, c, v);
    sort2(a, b, v);
}
