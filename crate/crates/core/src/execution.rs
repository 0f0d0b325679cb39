//! Test execution against the original program and its mutants.
//!
//! The coverage matrix has one row per test and one column per executable
//! line. The result matrix has one row per retained mutant and one column per
//! test; each cell records the mutant's verdict against the expected output and
//! whether its observable behavior differs from the original's on that test.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::minilang::{execute_checked, verdict, ExecOutcome, Program, StepBudget, SuiteError, TestSuite, Verdict};
use crate::mutation::{Mutant, MutantSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecutionError {
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error("no failing test: fault localization needs at least one")]
    NoFailingTests,
    #[error("no passing test: MUSE needs at least one")]
    NoPassingTests,
    #[error("result matrix and coverage matrix disagree on the test list")]
    TestMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageMatrix {
    pub tests: Vec<String>,
    pub lines: Vec<u32>,
    /// `cells[test][line_index]`
    pub cells: Vec<Vec<bool>>,
    pub original_verdicts: Vec<Verdict>,
}

impl CoverageMatrix {
    pub fn failing_count(&self) -> usize {
        self.original_verdicts.iter().filter(|v| !v.is_pass()).count()
    }

    pub fn passing_count(&self) -> usize {
        self.original_verdicts.len() - self.failing_count()
    }

    /// Fault localization is only defined once some test fails.
    pub fn require_failing(&self) -> Result<(), ExecutionError> {
        if self.failing_count() == 0 {
            Err(ExecutionError::NoFailingTests)
        } else {
            Ok(())
        }
    }

    pub fn covers(&self, test: usize, line: u32) -> bool {
        match self.lines.binary_search(&line) {
            Ok(col) => self.cells[test][col],
            Err(_) => false,
        }
    }

    /// Tests (by index) that executed `line`.
    pub fn covering_tests(&self, line: u32) -> BTreeSet<usize> {
        match self.lines.binary_search(&line) {
            Ok(col) => (0..self.tests.len()).filter(|t| self.cells[*t][col]).collect(),
            Err(_) => BTreeSet::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResultCell {
    pub verdict: Verdict,
    pub output_differs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantRow {
    pub id: String,
    pub line: u32,
    pub cells: Vec<ResultCell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultMatrix {
    pub tests: Vec<String>,
    pub rows: Vec<MutantRow>,
}

/// Runs the original program on every test.
pub fn run_original(program: &Program, suite: &TestSuite, budget: StepBudget) -> Result<Vec<ExecOutcome>, SuiteError> {
    suite.check_arity(program)?;
    Ok(suite.tests().iter().map(|t| execute_checked(program, t, budget)).collect())
}

pub fn build_coverage_matrix(
    program: &Program,
    suite: &TestSuite,
    budget: StepBudget,
) -> Result<CoverageMatrix, SuiteError> {
    let outcomes = run_original(program, suite, budget)?;
    Ok(coverage_from_outcomes(program, suite, &outcomes))
}

pub fn coverage_from_outcomes(program: &Program, suite: &TestSuite, outcomes: &[ExecOutcome]) -> CoverageMatrix {
    let lines = program.lines();
    let cells = outcomes
        .iter()
        .map(|o| lines.iter().map(|l| o.covered_lines.contains(l)).collect())
        .collect();
    let original_verdicts = suite.tests().iter().zip(outcomes).map(|(t, o)| verdict(o, t)).collect();
    CoverageMatrix { tests: suite.ids(), lines, cells, original_verdicts }
}

/// One result-matrix row. `original` holds the original program's outcome
/// per test, in suite order. Rows are independent, so callers may compute
/// them in any order or in parallel.
pub fn run_mutant_row(mutant: &Mutant, suite: &TestSuite, original: &[ExecOutcome], budget: StepBudget) -> MutantRow {
    let cells = suite
        .tests()
        .iter()
        .zip(original)
        .map(|(t, orig)| {
            let o = execute_checked(&mutant.program, t, budget);
            ResultCell { verdict: verdict(&o, t), output_differs: o.differs_from(orig) }
        })
        .collect();
    MutantRow { id: mutant.id.clone(), line: mutant.line, cells }
}

/// Sequential result-matrix construction.
pub fn run_mutants(set: &MutantSet, suite: &TestSuite, budget: StepBudget) -> Result<ResultMatrix, SuiteError> {
    let original = run_original(&set.original, suite, budget)?;
    let rows = set.mutants.iter().map(|m| run_mutant_row(m, suite, &original, budget)).collect();
    Ok(ResultMatrix { tests: suite.ids(), rows })
}

/// Tests (by index) on which the mutant behaves differently from the original.
pub fn kill_vector_outputdiff(row: &MutantRow) -> BTreeSet<usize> {
    row.cells.iter().enumerate().filter(|(_, c)| c.output_differs).map(|(i, _)| i).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flips {
    /// Failing on the original, passing on the mutant.
    pub f2p: BTreeSet<usize>,
    /// Passing on the original, failing on the mutant.
    pub p2f: BTreeSet<usize>,
}

/// Verdict flips between original and mutant. A test failing on both, even in
/// different ways, is not a flip.
pub fn flip_vector(row: &MutantRow, cm: &CoverageMatrix) -> Flips {
    let mut flips = Flips::default();
    for (i, (cell, orig)) in row.cells.iter().zip(&cm.original_verdicts).enumerate() {
        match (orig, cell.verdict) {
            (Verdict::Fail, Verdict::Pass) => {
                flips.f2p.insert(i);
            }
            (Verdict::Pass, Verdict::Fail) => {
                flips.p2f.insert(i);
            }
            _ => {}
        }
    }
    flips
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MutationStats {
    pub generated: usize,
    pub duplicates: usize,
    pub retained: usize,
    /// Killed by no test.
    pub dormant: usize,
    pub killed: usize,
    pub mutation_score: f64,
}

pub fn mutation_score(set: &MutantSet, rm: &ResultMatrix) -> MutationStats {
    let killed = rm.rows.iter().filter(|r| r.cells.iter().any(|c| c.output_differs)).count();
    let retained = rm.rows.len();
    MutationStats {
        generated: set.stats.generated,
        duplicates: set.stats.duplicates_removed,
        retained,
        dormant: retained - killed,
        killed,
        mutation_score: if retained == 0 { 0.0 } else { killed as f64 / retained as f64 },
    }
}
