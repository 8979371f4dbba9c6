//! IO companion for the core crate: configuration files, report and
//! measurement-file formats, sweep tables, and the interactive demonstration
//! loop. The `meanking` binary is a thin dispatcher over this library.

pub mod config;
pub mod play;
pub mod report;
pub mod textfmt;

use meanking_core::error::Error as CoreError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INFEASIBLE: u8 = 1;
pub const EXIT_DEGENERATE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

/// Maps construction failures onto the documented exit codes.
pub fn exit_code_for_core_error(e: &CoreError) -> u8 {
    match e {
        CoreError::DegenerateTriple => EXIT_DEGENERATE,
        CoreError::Infeasible { .. } | CoreError::ROutOfRange { .. } => EXIT_INFEASIBLE,
        _ => EXIT_USAGE,
    }
}
