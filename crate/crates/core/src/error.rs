//! Shared error type for operations that can refuse an input.

use crate::automaton::WitnessLength;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A construction would exceed its state/window budget.
    #[error("guard exceeded in {what}: needs {needed}, guard {guard}")]
    GuardExceeded {
        what: &'static str,
        needed: u128,
        guard: u128,
    },

    /// An operation requiring an unambiguous input was handed an ambiguous
    /// one; carries a length accepted along two runs.
    #[error("input automaton is ambiguous (witness length {})", .0.value)]
    AmbiguousInput(WitnessLength),

    /// The complement recursion went deeper than its proven bound; this
    /// signals a bug, not an input condition.
    #[error("complement recursion exceeded depth {depth}")]
    RecursionOverflow { depth: usize },

    /// Structured intersection preconditions do not hold.
    #[error("structure violation: {0}")]
    StructureViolation(String),

    /// A hardness generator needs a 3-occur instance.
    #[error("variable {var} occurs {occurrences} times; generators need 3-occur input")]
    NotThreeOccur { var: usize, occurrences: usize },

    /// Concatenation inside a formula without the explicit allow flag.
    #[error("concatenation is disallowed in this formula evaluation")]
    ConcatDisallowed,

    /// The oracle could not close its trajectory within its cap.
    #[error("oracle trajectory inexact within cap")]
    Inexact,

    /// brute_sat refuses instances beyond its exhaustive range.
    #[error("instance too large for exhaustive search ({vars} vars, cap {cap})")]
    TooLarge { vars: usize, cap: usize },

    /// No period found in the supplied window.
    #[error("no period in window beyond threshold {threshold}")]
    NoPeriodInWindow { threshold: usize },

    /// Malformed input data (parsing, invariant violations).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
