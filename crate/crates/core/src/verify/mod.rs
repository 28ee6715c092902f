//! Checks that sampled last passage observables follow the exact measures,
//! plus a property fuzzer over the whole crate.

pub mod exact;
pub mod fuzz;
pub mod monte_carlo;
pub mod report;

pub use exact::{exact_compare, exact_compare_full, exact_compare_half};
pub use fuzz::{fuzz_suite, fuzz_suite_with_rule, greene_check};
pub use monte_carlo::mc_compare;
pub use report::{Check, ComparisonReport, Counterexample, FuzzReport, GreeneCheckReport, Mode, Side};
