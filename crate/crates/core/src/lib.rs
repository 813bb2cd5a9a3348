//! Pattern-defeating quicksort with every heuristic individually switchable,
//! plus the instrumentation, input generators and benchmark harness used to
//! study it.
//!
//! ```
//! let mut v = [5, -3, 9, 0, 9, 1];
//! pdq_core::sort(&mut v);
//! assert_eq!(v, [-3, 0, 1, 5, 9, 9]);
//!
//! let mut words = vec!["pear", "fig", "apple"];
//! pdq_core::sort_with(&mut words, |a, b| a.len() < b.len());
//! assert_eq!(words[0], "fig");
//! ```

pub mod bench;
pub mod datagen;
pub mod driver;
pub mod exec;
pub mod instrument;
pub mod partition;
pub mod small_sorts;
pub mod verify;

pub use driver::{
    instrumented_sort, introsort_baseline, sort, sort_with, sort_with_config, traced_sort, ConfigError, Fallback,
    LoopContext, SortConfig,
};
pub use instrument::{Metrics, PivotTrace};
