//! Representative-family algorithms for 2-spindles, and colour-coding.

mod colorcoding;
mod families;
mod fixed;
mod total;

pub use colorcoding::{default_trials, find_exact_counted, find_exact_spindle_colorcoding, MAX_COLOURS};
pub use families::{compute_path_families, merge_families, MergedEntry, MergedFamily, PathEntry, PathFamily};
pub use fixed::{solve_fixed_lengths, solve_fixed_lengths_with, FixedOptions, EXHAUSTIVE_SHORT_PHASE};
pub use total::{solve_total_length, solve_total_length_counted};
