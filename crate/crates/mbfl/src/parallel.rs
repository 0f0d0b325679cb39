//! Mutant execution on a fixed-size thread pool.

use rayon::prelude::*;

use mbfl_core::execution::{run_mutant_row, MutantRow};
use mbfl_core::minilang::{ExecOutcome, StepBudget, TestSuite};
use mbfl_core::mutation::Mutant;

use crate::error::{Error, Result};

/// Runs every mutant against the suite. Rows come back in the order of
/// `mutants` whatever the number of jobs.
pub fn run_mutant_rows(
    mutants: &[Mutant],
    suite: &TestSuite,
    original: &[ExecOutcome],
    budget: StepBudget,
    jobs: usize,
) -> Result<Vec<MutantRow>> {
    if jobs <= 1 {
        return Ok(mutants.iter().map(|m| run_mutant_row(m, suite, original, budget)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(|| mutants.par_iter().map(|m| run_mutant_row(m, suite, original, budget)).collect()))
}
