//! Partition kernels.
//!
//! All kernels take the pivot in `v[0]` and compare every scanned element
//! against it in place. They make exactly one ordering call per scanned
//! element: `a < p` decides "goes left" for the right-grouping kernels and
//! `p < a` decides "goes right" for [`partition_left`].
//!
//! The scans lean on sentinels instead of bound checks. The pivot must have
//! been picked as the median of at least three elements of the range, which
//! guarantees that some element after it is not less than it; later scans are
//! stopped by elements that earlier rounds already placed.

use std::mem::ManuallyDrop;
use std::ptr;

use crate::instrument::{Kernel, NoProbe, Probe};

/// Largest supported block size. Offsets are stored as `u8`, and right-side
/// offsets run from 1 to the block size inclusive.
pub const MAX_BLOCK_SIZE: usize = 255;

/// Outcome of one partition step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    /// Final position of the pivot.
    pub pivot_index: usize,
    /// No pair was exchanged apart from moving the pivot into place. Always
    /// `false` for [`partition_left`].
    pub no_swaps: bool,
}

/// Scratch space for [`block_partition_right`]: one offset buffer per side
/// plus the count of offsets not yet consumed.
///
/// The driver allocates one of these per sort call and reuses it for every
/// partition.
#[derive(Clone, Debug)]
pub struct BlockBuffers {
    block_size: usize,
    pub offsets_left: [u8; MAX_BLOCK_SIZE + 1],
    pub offsets_right: [u8; MAX_BLOCK_SIZE + 1],
    pub pending_left: usize,
    pub pending_right: usize,
}

impl BlockBuffers {
    /// # Panics
    ///
    /// If `block_size` is zero or exceeds [`MAX_BLOCK_SIZE`].
    pub fn new(block_size: usize) -> Self {
        assert!(
            (1..=MAX_BLOCK_SIZE).contains(&block_size),
            "block size {block_size} outside 1..={MAX_BLOCK_SIZE}"
        );
        BlockBuffers {
            block_size,
            offsets_left: [0; MAX_BLOCK_SIZE + 1],
            offsets_right: [0; MAX_BLOCK_SIZE + 1],
            pending_left: 0,
            pending_right: 0,
        }
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }
}

impl Default for BlockBuffers {
    fn default() -> Self {
        Self::new(64)
    }
}

/// Groups elements equal to the pivot into the right part.
///
/// On return `v[..r]` is less than the pivot, `v[r]` is the pivot and
/// `v[r + 1..]` is not less than it, where `r = pivot_index`.
pub fn partition_right<T, F>(v: &mut [T], is_less: &mut F) -> PartitionResult
where
    F: FnMut(&T, &T) -> bool,
{
    partition_right_probed(v, is_less, &mut NoProbe)
}

pub fn partition_right_probed<T, F, P>(v: &mut [T], is_less: &mut F, probe: &mut P) -> PartitionResult
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    debug_assert!(v.len() >= 2);
    probe.partitioned(Kernel::Right, &v[0]);

    let (mut i, mut j, no_swaps) = scan_first_pair(v, is_less);

    while i < j {
        v.swap(i, j);
        probe.exchanged(1);
        loop {
            i += 1;
            if !is_less(&v[i], &v[0]) {
                break;
            }
        }
        loop {
            j -= 1;
            if is_less(&v[j], &v[0]) {
                break;
            }
        }
    }

    let pivot_index = i - 1;
    if pivot_index != 0 {
        v.swap(0, pivot_index);
        probe.exchanged(1);
    }
    PartitionResult { pivot_index, no_swaps }
}

/// Finds the first misplaced element from each end. `i` is the first index
/// not less than the pivot and `j` the last one less than it (or `j <= i`
/// when the range is already partitioned).
///
/// Only the right-hand scan of a range whose first element already failed
/// the left scan needs a bound test: in every other case an element seen by
/// the opposite scan stops it.
#[inline]
fn scan_first_pair<T, F>(v: &[T], is_less: &mut F) -> (usize, usize, bool)
where
    F: FnMut(&T, &T) -> bool,
{
    let mut i = 0;
    let mut j = v.len();
    loop {
        i += 1;
        if !is_less(&v[i], &v[0]) {
            break;
        }
    }
    if i - 1 == 0 {
        while i < j {
            j -= 1;
            if is_less(&v[j], &v[0]) {
                break;
            }
        }
    } else {
        loop {
            j -= 1;
            if is_less(&v[j], &v[0]) {
                break;
            }
        }
    }
    (i, j, i >= j)
}

/// Groups elements equal to the pivot into the left part.
///
/// Intended for ranges whose predecessor compares equal to the pivot, so
/// that nothing in the range is less than it. On return `v[..=r]` is not
/// greater than the pivot and `v[r + 1..]` is greater, where
/// `r = pivot_index`.
pub fn partition_left<T, F>(v: &mut [T], is_less: &mut F) -> PartitionResult
where
    F: FnMut(&T, &T) -> bool,
{
    partition_left_probed(v, is_less, &mut NoProbe)
}

pub fn partition_left_probed<T, F, P>(v: &mut [T], is_less: &mut F, probe: &mut P) -> PartitionResult
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    debug_assert!(v.len() >= 2);
    probe.partitioned(Kernel::Left, &v[0]);
    let len = v.len();
    let mut i = 0;
    let mut j = len;

    // The pivot itself stops this scan.
    loop {
        j -= 1;
        if !is_less(&v[0], &v[j]) {
            break;
        }
    }
    if j + 1 == len {
        while i < j {
            i += 1;
            if is_less(&v[0], &v[i]) {
                break;
            }
        }
    } else {
        loop {
            i += 1;
            if is_less(&v[0], &v[i]) {
                break;
            }
        }
    }

    while i < j {
        v.swap(i, j);
        probe.exchanged(1);
        loop {
            j -= 1;
            if !is_less(&v[0], &v[j]) {
                break;
            }
        }
        loop {
            i += 1;
            if is_less(&v[0], &v[i]) {
                break;
            }
        }
    }

    if j != 0 {
        v.swap(0, j);
        probe.exchanged(1);
    }
    PartitionResult {
        pivot_index: j,
        no_swaps: false,
    }
}

/// Branch-free variant of [`partition_right`] with the same contract.
///
/// After the same initial scans, the unknown middle is classified a block at
/// a time: each side records the offsets of its misplaced elements with an
/// unconditional store and a predicate-driven counter increment, then the
/// smaller count of pairs is exchanged. Offsets left over on the fuller side
/// carry into the next round and only the emptied side is refilled. The last
/// round shrinks to whatever is left.
pub fn block_partition_right<T, F>(v: &mut [T], buffers: &mut BlockBuffers, is_less: &mut F) -> PartitionResult
where
    F: FnMut(&T, &T) -> bool,
{
    block_partition_right_probed(v, buffers, is_less, &mut NoProbe)
}

pub fn block_partition_right_probed<T, F, P>(
    v: &mut [T],
    buffers: &mut BlockBuffers,
    is_less: &mut F,
    probe: &mut P,
) -> PartitionResult
where
    F: FnMut(&T, &T) -> bool,
    P: Probe<T>,
{
    debug_assert!(v.len() >= 2);
    probe.partitioned(Kernel::BlockRight, &v[0]);

    let (mut first, mut last, no_swaps) = scan_first_pair(v, is_less);

    if !no_swaps {
        v.swap(first, last);
        probe.exchanged(1);
        first += 1;

        let block = buffers.block_size;
        let BlockBuffers {
            offsets_left,
            offsets_right,
            pending_left: num_l,
            pending_right: num_r,
            ..
        } = buffers;
        *num_l = 0;
        *num_r = 0;
        let mut start_l = 0;
        let mut start_r = 0;
        let mut base_l = first;
        let mut base_r = last;

        // Invariant: v[1..base_l] < pivot and v[base_r..] >= pivot, apart from
        // the elements named by pending offsets.
        while first < last {
            let unknown = last - first;
            let left_split = match (*num_l, *num_r) {
                (0, 0) => unknown / 2,
                (0, _) => unknown,
                _ => 0,
            };
            let right_split = if *num_r == 0 { unknown - left_split } else { 0 };

            for i in 0..left_split.min(block) {
                offsets_left[*num_l] = i as u8;
                *num_l += !is_less(&v[first], &v[0]) as usize;
                first += 1;
            }
            for i in 0..right_split.min(block) {
                offsets_right[*num_r] = (i + 1) as u8;
                last -= 1;
                *num_r += is_less(&v[last], &v[0]) as usize;
            }

            let pairs = (*num_l).min(*num_r);
            swap_offsets(
                v,
                base_l,
                base_r,
                &offsets_left[start_l..start_l + pairs],
                &offsets_right[start_r..start_r + pairs],
                *num_l == *num_r,
                probe,
            );
            *num_l -= pairs;
            *num_r -= pairs;
            start_l += pairs;
            start_r += pairs;
            if *num_l == 0 {
                start_l = 0;
                base_l = first;
            }
            if *num_r == 0 {
                start_r = 0;
                base_r = last;
            }
        }

        // Everything is classified; park the unmatched leftovers next to the
        // boundary.
        if *num_l > 0 {
            while *num_l > 0 {
                *num_l -= 1;
                last -= 1;
                v.swap(base_l + offsets_left[start_l + *num_l] as usize, last);
                probe.exchanged(1);
            }
            first = last;
        }
        if *num_r > 0 {
            while *num_r > 0 {
                *num_r -= 1;
                v.swap(base_r - offsets_right[start_r + *num_r] as usize, first);
                probe.exchanged(1);
                first += 1;
            }
        }
    }

    let pivot_index = first - 1;
    if pivot_index != 0 {
        v.swap(0, pivot_index);
        probe.exchanged(1);
    }
    PartitionResult { pivot_index, no_swaps }
}

/// Exchanges `v[base_l + left[k]]` with `v[base_r - right[k]]` for every `k`.
///
/// With `use_swaps` the pairs are swapped one by one. Otherwise they are
/// rotated as one cycle through a single temporary, two moves per element.
/// Swapping is kept for equal counts so that a fully reversed block pair is
/// reversed, not rotated.
fn swap_offsets<T, P: Probe<T>>(
    v: &mut [T],
    base_l: usize,
    base_r: usize,
    left: &[u8],
    right: &[u8],
    use_swaps: bool,
    probe: &mut P,
) {
    debug_assert_eq!(left.len(), right.len());
    let count = left.len();
    let l_at = |k: usize| base_l + left[k] as usize;
    let r_at = |k: usize| base_r - right[k] as usize;

    if use_swaps {
        for k in 0..count {
            v.swap(l_at(k), r_at(k));
        }
        probe.exchanged(count);
        return;
    }
    if count == 0 {
        return;
    }

    // Left offsets index the left block and right offsets the right block,
    // and the blocks are disjoint, so every position below is distinct. The
    // asserts keep that true for any ordering, consistent or not.
    let len = v.len();
    assert!(r_at(count - 1) < len && l_at(count - 1) < r_at(count - 1));
    let base = v.as_mut_ptr();
    // SAFETY: all indices are in bounds and pairwise distinct (see above), so
    // each copy moves one initialized element into the slot vacated by the
    // previous copy. Nothing in the loop can panic, so the temporary is always
    // written back and no element is duplicated or lost.
    unsafe {
        let mut l = l_at(0);
        let mut r = r_at(0);
        let tmp = ManuallyDrop::new(ptr::read(base.add(l)));
        ptr::copy_nonoverlapping(base.add(r), base.add(l), 1);
        for k in 1..count {
            l = l_at(k);
            debug_assert!(l < r);
            ptr::copy_nonoverlapping(base.add(l), base.add(r), 1);
            r = r_at(k);
            debug_assert!(l < r && r < len);
            ptr::copy_nonoverlapping(base.add(r), base.add(l), 1);
        }
        ptr::copy_nonoverlapping(&*tmp as *const T, base.add(r), 1);
    }
    probe.cycled(count);
}
