use std::cell::Cell;
use std::panic::{catch_unwind, AssertUnwindSafe};

use pdq_core::instrument::{adversary_input, counting_ordering};
use pdq_core::small_sorts::{heapsort, insertion_sort, partial_insertion_sort, MoveBudget};
use pdq_core::{instrumented_sort, introsort_baseline, sort, sort_with, sort_with_config, ConfigError, SortConfig};
use proptest::prelude::*;

fn config_strategy() -> impl Strategy<Value = SortConfig> {
    (
        any::<[bool; 5]>(),
        3usize..40,
        0usize..200,
        1usize..=255,
        1u32..=6,
        0usize..20,
    )
        .prop_map(|(flags, insertion, extra, block, shift, budget)| SortConfig {
            insertion_threshold: insertion,
            ninther_threshold: (insertion + extra).max(8),
            partial_insertion_budget: budget,
            block_size: block,
            bad_partition_shift: shift,
            use_block_partition: flags[0],
            use_partition_left: flags[1],
            use_break_patterns: flags[2],
            use_partial_insertion: flags[3],
            assume_branch_cheap: flags[4],
            ..SortConfig::default()
        })
}

fn sorted_copy<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut w = v.to_vec();
    w.sort();
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sorts_any_config(v in prop::collection::vec(-50i32..50, 0..600), cfg in config_strategy()) {
        let want = sorted_copy(&v);
        let mut got = v.clone();
        sort_with_config(&mut got, |a, b| a < b, &cfg).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn sorts_strings(v in prop::collection::vec("[a-c]{0,4}", 0..300)) {
        let want = sorted_copy(&v);
        let mut got = v.clone();
        sort(&mut got);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn metrics_are_deterministic(v in prop::collection::vec(any::<u16>(), 0..2000), cfg in config_strategy()) {
        let mut a = v.clone();
        let mut b = v.clone();
        let ma = instrumented_sort(&mut a, |x, y| x < y, &cfg).unwrap();
        let mb = instrumented_sort(&mut b, |x, y| x < y, &cfg).unwrap();
        prop_assert_eq!(ma, mb);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn instrumented_count_matches_wrapper(v in prop::collection::vec(0u8..10, 0..800)) {
        let cfg = SortConfig::default();
        let counter = Cell::new(0);
        let mut a = v.clone();
        sort_with_config(&mut a, counting_ordering(|x: &u8, y: &u8| x < y, &counter), &cfg).unwrap();
        let mut b = v.clone();
        let m = instrumented_sort(&mut b, |x, y| x < y, &cfg).unwrap();
        prop_assert_eq!(m.comparisons, counter.get());
    }

    #[test]
    fn descending_key_order(v in prop::collection::vec(any::<i64>(), 0..500)) {
        let mut got = v.clone();
        sort_with(&mut got, |a, b| b < a);
        let mut want = sorted_copy(&v);
        want.reverse();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn small_sorts_agree(v in prop::collection::vec(0u8..5, 0..100)) {
        let want = sorted_copy(&v);
        let mut a = v.clone();
        insertion_sort(&mut a, &mut |x: &u8, y: &u8| x < y);
        let mut b = v.clone();
        heapsort(&mut b, &mut |x: &u8, y: &u8| x < y);
        let mut c = v.clone();
        let done = partial_insertion_sort(&mut c, MoveBudget::new(4), &mut |x: &u8, y: &u8| x < y);
        prop_assert_eq!(&a, &want);
        prop_assert_eq!(&b, &want);
        prop_assert_eq!(sorted_copy(&c), want.clone());
        if done {
            prop_assert_eq!(c, want);
        }
    }

    #[test]
    fn baseline_sorts(v in prop::collection::vec(any::<i32>(), 0..3000)) {
        let want = sorted_copy(&v);
        let mut got = v.clone();
        introsort_baseline(&mut got, |a, b| a < b, &SortConfig::default()).unwrap();
        prop_assert_eq!(got, want);
    }

    /// An ordering that is not a strict weak ordering may scramble the order
    /// or panic, but the elements themselves survive.
    #[test]
    fn inconsistent_ordering_keeps_elements(v in prop::collection::vec(0u32..1000, 0..1500), seed in any::<u64>(), cfg in config_strategy()) {
        let mut state = seed | 1;
        let mut got = v.clone();
        let _ = catch_unwind(AssertUnwindSafe(|| {
            sort_with_config(&mut got, |_: &u32, _: &u32| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state & 1 == 1
            }, &cfg)
        }));
        prop_assert_eq!(sorted_copy(&got), sorted_copy(&v));
    }
}

#[test]
fn rejects_invalid_configs() {
    let mut v = [3, 1, 2];
    let bad = [
        (
            SortConfig {
                insertion_threshold: 2,
                ..SortConfig::default()
            },
            ConfigError::InsertionThreshold(2),
        ),
        (
            SortConfig {
                block_size: 0,
                ..SortConfig::default()
            },
            ConfigError::BlockSize(0),
        ),
        (
            SortConfig {
                bad_partition_shift: 0,
                ..SortConfig::default()
            },
            ConfigError::BadPartitionShift(0),
        ),
    ];
    for (cfg, err) in bad {
        assert_eq!(sort_with_config(&mut v, |a, b| a < b, &cfg), Err(err));
    }
    assert_eq!(v, [3, 1, 2]);
}

#[test]
fn adversary_stresses_and_still_sorts() {
    let n = 1 << 14;
    let mut v = adversary_input(n);
    let m = instrumented_sort(&mut v, |a, b| a < b, &SortConfig::default()).unwrap();
    assert!(m.bad_partitions >= 1, "{m}");
    assert_eq!(v, (0..n).collect::<Vec<_>>());

    let mut w = adversary_input(n);
    introsort_baseline(&mut w, |a, b| a < b, &SortConfig::default()).unwrap();
    assert_eq!(w, (0..n).collect::<Vec<_>>());
}

#[test]
fn all_equal_uses_one_left_partition() {
    let n = 1 << 16;
    let mut v = vec![7u32; n];
    let m = instrumented_sort(&mut v, |a, b| a < b, &SortConfig::scalar()).unwrap();
    assert!(m.comparisons <= 8 * n as u64, "{m}");
    assert_eq!(m.partition_left_calls, 1, "{m}");
}

#[test]
fn ascending_million_is_linear() {
    let n = 1 << 20;
    let mut v: Vec<u32> = (0..n).collect();
    let m = instrumented_sort(&mut v, |a, b| a < b, &SortConfig::default()).unwrap();
    assert!(m.comparisons <= 6 * n as u64, "{m}");
    assert!(v.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sorts_across_threads() {
    let handles: Vec<_> = (0..4)
        .map(|t| {
            std::thread::spawn(move || {
                let mut v: Vec<u64> = (0..10_000u64)
                    .map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15 ^ t))
                    .collect();
                sort(&mut v);
                v.windows(2).all(|w| w[0] <= w[1])
            })
        })
        .collect();
    for h in handles {
        assert!(h.join().unwrap());
    }
}
