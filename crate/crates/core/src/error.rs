//! Error type shared across the toolkit.

use core::fmt;

/// Everything that can go wrong while validating inputs or constructing a
/// measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// A direction vector deviates from unit norm beyond the input tolerance.
    NonUnitVector { norm: f64 },
    /// An amplitude or matrix entry is NaN or infinite.
    NonFinite,
    /// A state vector is not normalized to within the state tolerance.
    NotNormalized { norm: f64 },
    /// An operator fails the Hermiticity check.
    NonHermitian { defect: f64 },
    /// The two closed forms for the coefficients disagree; this signals an
    /// implementation bug, not a bad input.
    FormMismatch { deviation: f64 },
    /// No valid measurement exists: some `|n₁ ± n₂ ± n₃|` is below 1.
    /// Carries the violating sign pattern (signs on n₂, n₃) and its norm.
    Infeasible { pattern: (i8, i8), sign_norm: f64 },
    /// The free parameter lies outside the feasible interval.
    ROutOfRange { r: f64, lo: f64, hi: f64 },
    /// The three directions are linearly dependent.
    DegenerateTriple,
    /// Outcome probabilities do not sum to 1; the measurement set is corrupt.
    ProbabilityLeak { sum: f64 },
    /// An algebraic identity that must hold by construction failed.
    InvariantViolation {
        context: &'static str,
        deviation: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonUnitVector { norm } => {
                write!(f, "direction vector has norm {norm}, expected 1")
            }
            Error::NonFinite => write!(f, "non-finite entry"),
            Error::NotNormalized { norm } => {
                write!(f, "state vector has norm {norm}, expected 1")
            }
            Error::NonHermitian { defect } => {
                write!(f, "operator is not Hermitian (defect {defect:e})")
            }
            Error::FormMismatch { deviation } => {
                write!(f, "coefficient closed forms disagree by {deviation:e}")
            }
            Error::Infeasible { pattern, sign_norm } => write!(
                f,
                "infeasible: |n1 {} n2 {} n3| = {} < 1",
                sign_char(pattern.0),
                sign_char(pattern.1),
                sign_norm
            ),
            Error::ROutOfRange { r, lo, hi } => {
                write!(f, "r = {r} outside the feasible interval [{lo}, {hi}]")
            }
            Error::DegenerateTriple => write!(f, "directions are linearly dependent"),
            Error::ProbabilityLeak { sum } => {
                write!(f, "outcome probabilities sum to {sum}, expected 1")
            }
            Error::InvariantViolation { context, deviation } => {
                write!(
                    f,
                    "invariant violated in {context} (deviation {deviation:e})"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

fn sign_char(s: i8) -> char {
    if s >= 0 {
        '+'
    } else {
        '-'
    }
}

pub type Result<T> = core::result::Result<T, Error>;
