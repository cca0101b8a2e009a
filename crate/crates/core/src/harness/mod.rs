//! Verification engine: finite differences, sample grids, checks and reports.

pub mod checks;
pub mod fd;
pub mod grid;
pub mod report;

pub use checks::{run_check, run_suite, run_task, CheckError};
pub use report::{CheckName, SuiteReport, VerificationReport, VerificationTask};
