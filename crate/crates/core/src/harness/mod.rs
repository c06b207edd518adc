//! Definition files, verification suites and reports behind the CLI.

pub mod describe;
pub mod parse;
pub mod report;
pub mod suites;
