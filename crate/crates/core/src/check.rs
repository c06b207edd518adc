//! Failure records shared by the verification routines.

use thiserror::Error;

/// A verification that did not hold, with a human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{check}: {witness}")]
pub struct CheckFailure {
    pub check: String,
    pub witness: String,
}

impl CheckFailure {
    pub fn new(check: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckFailure { check: check.into(), witness: witness.into() }
    }
}

pub type CheckResult = Result<(), CheckFailure>;

/// Returns a failure named `check` unless `cond` holds; the witness is built lazily.
pub fn ensure(cond: bool, check: &str, witness: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(CheckFailure::new(check, witness()))
    }
}
