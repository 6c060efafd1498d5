//! Command-line front end, file formats and verification suites for
//! `fockorder-core`.

pub mod cli;
pub mod formats;
pub mod verify;
