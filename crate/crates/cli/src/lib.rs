//! Library surface of the `complog` binary: the synthetic log generator and
//! the benchmark harness, kept here so integration tests can drive them
//! directly.

pub mod bench;
pub mod genlog;

pub use bench::{run_bench, BenchConfig, BenchError, BenchRow, RuleStats};
pub use genlog::{gen_log, GenError, GenParams};
