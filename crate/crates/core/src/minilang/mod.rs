//! The mini language: a line-oriented imperative language over wrapping
//! 64-bit integers, with `print`/`return` as its only output.

pub mod ast;
mod interp;
mod parser;

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub use ast::{ArithOp, BinOp, Block, Expr, ExprDisplay, Program, Statement, StmtDisplay, StmtKind, UnOp, VarId};
pub use interp::{run, ExecOutcome, ExecStatus, StepBudget};
pub use parser::{parse, ParseError, ParseErrorKind};

pub(crate) use interp::{apply_unop, eval_binop};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TestCase {
    pub id: String,
    pub inputs: Vec<i64>,
    pub expected_output: Vec<i64>,
}

impl TestCase {
    pub fn new(id: impl Into<String>, inputs: Vec<i64>, expected_output: Vec<i64>) -> TestCase {
        TestCase { id: id.into(), inputs, expected_output }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("test `{id}` supplies {given} inputs but the program takes {expected}")]
    Arity { id: String, given: usize, expected: usize },
    #[error("duplicate test id `{0}`")]
    DuplicateId(String),
    #[error("test suite is empty")]
    Empty,
}

/// An ordered, non-empty list of tests with unique ids.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TestSuite {
    tests: Vec<TestCase>,
}

impl TestSuite {
    pub fn new(tests: Vec<TestCase>) -> Result<TestSuite, SuiteError> {
        if tests.is_empty() {
            return Err(SuiteError::Empty);
        }
        for (i, t) in tests.iter().enumerate() {
            if tests[..i].iter().any(|o| o.id == t.id) {
                return Err(SuiteError::DuplicateId(t.id.clone()));
            }
        }
        Ok(TestSuite { tests })
    }

    pub fn tests(&self) -> &[TestCase] {
        &self.tests
    }

    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.tests.iter().map(|t| t.id.clone()).collect()
    }

    pub fn check_arity(&self, program: &Program) -> Result<(), SuiteError> {
        let expected = program.params().len();
        match self.tests.iter().find(|t| t.inputs.len() != expected) {
            Some(t) => Err(SuiteError::Arity { id: t.id.clone(), given: t.inputs.len(), expected }),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn letter(self) -> char {
        match self {
            Verdict::Pass => 'P',
            Verdict::Fail => 'F',
        }
    }
}

/// Executes one test. Abnormal termination is reported through
/// [`ExecOutcome::status`], never as an error.
pub fn execute(program: &Program, test: &TestCase, budget: StepBudget) -> Result<ExecOutcome, SuiteError> {
    if test.inputs.len() != program.params().len() {
        return Err(SuiteError::Arity {
            id: test.id.clone(),
            given: test.inputs.len(),
            expected: program.params().len(),
        });
    }
    Ok(interp::run(program, &test.inputs, budget))
}

/// Runs without the arity check. Used once a suite has been validated.
pub(crate) fn execute_checked(program: &Program, test: &TestCase, budget: StepBudget) -> ExecOutcome {
    interp::run(program, &test.inputs, budget)
}

/// Pass iff the run completed and printed exactly the expected sequence.
/// Runtime errors and budget exhaustion are failures.
pub fn verdict(outcome: &ExecOutcome, test: &TestCase) -> Verdict {
    if outcome.status == ExecStatus::Completed && outcome.output == test.expected_output {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}
