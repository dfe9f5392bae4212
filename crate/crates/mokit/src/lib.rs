//! Command line front end for `mokit-core`: scenario files in, reports out.

pub mod config;
pub mod report;
pub mod task;

pub use config::{Config, ConfigError};
pub use report::{emit, Format, Report};
pub use task::{run_file, RunError, Task};

/// Exit status for a finished run.
pub fn exit_code(result: &Result<Report, RunError>) -> u8 {
    match result {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(_) => 2,
    }
}
