//! Batch verification harness and object renderer on top of `wittlift`.

pub mod grid;
pub mod report;
pub mod show;
pub mod suite;

pub use grid::{ConfigError, Grid};
pub use report::{CheckRecord, RunMeta, Status, VerificationReport};
pub use show::{show, ShowArgs};
pub use suite::{run_suite, Suite, SuiteConfig};
