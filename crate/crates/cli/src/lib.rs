//! Command-line harness: single-graph checks, the extremal family, and
//! ledgered experiments over random, exhaustive and corpus inputs.

pub mod commands;
pub mod config;
pub mod experiments;
pub mod ledger;

/// Covered, hypothesis holds, or run completed cleanly.
pub const EXIT_OK: i32 = 0;
/// Definite negative verdict.
pub const EXIT_NEGATIVE: i32 = 1;
/// Usage, parse, parameter or cap error.
pub const EXIT_ERROR: i32 = 2;
/// The two coverage engines disagree, or a witness factor failed verification.
pub const EXIT_DISAGREEMENT: i32 = 3;
/// A graph meeting the order bound and the neighborhood hypothesis is not
/// critical covered, or violates the implied degree bound.
pub const EXIT_COUNTEREXAMPLE: i32 = 4;
