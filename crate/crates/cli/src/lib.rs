//! Command-line frontend for `sddapprox`: matrix file I/O, analysis and
//! comparison reports, element generation and reference-family checks.
//!
//! Exit statuses: 0 on success, [`error::EXIT_INPUT`] for unreadable or
//! malformed input and out-of-range parameters, [`error::EXIT_NUMERIC`] for
//! numerical failures and failed checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod io;
pub mod report;

pub use commands::Outcome;
pub use error::{CliError, CliResult};
