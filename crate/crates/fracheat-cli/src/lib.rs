//! Monte Carlo harness for the fracheat simulator: configuration parsing,
//! parallel path orchestration, validation suites, and machine-readable
//! reports.

pub mod config;
pub mod report;
pub mod runner;
pub mod validate;
