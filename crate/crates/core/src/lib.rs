//! Mutation-based fault localization over a small imperative integer language.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every pure stage of
//! the pipeline:
//!
//! - [`minilang`]: parser and deterministic interpreter with statement coverage.
//! - [`mutation`]: first-order mutant generation and canonical-form pruning of
//!   equivalent and duplicate mutants.
//! - [`execution`]: coverage and result matrices, kill and flip vectors,
//!   mutation statistics.
//! - [`localization`]: Metallaxis (Ochiai over kill vectors, max per statement)
//!   and MUSE (failing/passing flips) suspiciousness, tie-aware ranking.
//! - [`evaluation`]: Top-N, PS/MPS, AP/MAP and the optimal baseline.
//!
//! File formats, parallel execution and the command line live in the `mbfl`
//! companion crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod evaluation;
pub mod execution;
pub mod localization;
pub mod minilang;
pub mod mutation;

pub use evaluation::{BugResult, FaultSpec};
pub use execution::{CoverageMatrix, MutationStats, ResultMatrix};
pub use localization::{Ranking, Technique};
pub use minilang::{ExecOutcome, Program, StepBudget, TestCase, TestSuite, Verdict};
pub use mutation::{Mutant, MutantSet, OperatorId, OperatorSet};
