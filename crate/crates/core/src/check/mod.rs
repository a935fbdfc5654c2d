//! Executable acceptance suite: seeded generators, reference oracles and the
//! property checks themselves.

pub mod gen;
pub mod oracle;
pub mod suite;

pub use suite::{run_criterion, run_suite, CriterionReport, Execution, SuiteConfig, SuiteReport, CRITERIA};
