use std::fmt;

use thiserror::Error;

use crate::linalg::FieldSpec;

/// A failed axiom or identity check, located at a degree and optionally a
/// matrix entry `(row, col)` of the offending block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: String,
    pub degree: usize,
    pub entry: Option<(usize, usize)>,
    pub detail: String,
}

impl Violation {
    pub fn new(check: impl Into<String>, degree: usize, detail: impl Into<String>) -> Self {
        Violation {
            check: check.into(),
            degree,
            entry: None,
            detail: detail.into(),
        }
    }

    pub fn at_entry(mut self, row: usize, col: usize) -> Self {
        self.entry = Some((row, col));
        self
    }

    /// Prefix the check name, used when a sub-check runs inside a larger one.
    pub fn within(mut self, context: &str) -> Self {
        self.check = format!("{context}: {}", self.check);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails in degree {}", self.check, self.degree)?;
        if let Some((r, c)) = self.entry {
            write!(f, " at entry ({r}, {c})")?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of a validation: `Ok(())` or the first violation found.
pub type Verdict = Result<(), Violation>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must be below 2^32)")]
    PrimeTooLarge(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("dimension mismatch in degree {degree}: {detail}")]
    DimensionMismatch { degree: usize, detail: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree {requested} is outside the reliable range (reliable up to {reliable})")]
    Range { requested: usize, reliable: String },
    #[error("coalgebra is not 1-connected (requires C_0 = k and C_1 = 0)")]
    NotOneConnected,
    #[error("coalgebra is not coaugmented")]
    NotCoaugmented,
    #[error("{0} is not invertible in the ground field")]
    NotInvertible(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Invalid(Violation),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Invalid(v)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn range_error(requested: usize, reliable: Option<usize>) -> Error {
    Error::Range {
        requested,
        reliable: match reliable {
            Some(r) => r.to_string(),
            None => "nothing".to_string(),
        },
    }
}
