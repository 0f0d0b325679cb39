use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::num::NonZeroU64;

use super::ast::{BinOp, Expr, Program, Statement, StmtKind, UnOp};

/// Maximum number of statement steps a single execution may take. Each
/// executed statement costs one step, and so does every evaluation of a
/// `while` condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepBudget(NonZeroU64);

impl StepBudget {
    pub const DEFAULT: StepBudget = StepBudget(match NonZeroU64::new(100_000) {
        Some(v) => v,
        None => unreachable!(),
    });

    pub fn new(steps: u64) -> Option<StepBudget> {
        NonZeroU64::new(steps).map(StepBudget)
    }

    pub fn get(self) -> u64 {
        self.0.get()
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget::DEFAULT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ExecStatus {
    Completed,
    RuntimeError,
    StepBudgetExceeded,
}

impl ExecStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ExecStatus::Completed => "completed",
            ExecStatus::RuntimeError => "runtime-error",
            ExecStatus::StepBudgetExceeded => "step-budget-exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExecOutcome {
    pub status: ExecStatus,
    pub output: Vec<i64>,
    pub covered_lines: BTreeSet<u32>,
    pub steps_used: u64,
}

impl ExecOutcome {
    /// Whether two runs are observably different: status class or output.
    pub fn differs_from(&self, other: &ExecOutcome) -> bool {
        self.status != other.status || self.output != other.output
    }
}

enum Halt {
    Return,
    Error,
    Budget,
}

struct Machine {
    vars: Vec<i64>,
    output: Vec<i64>,
    covered: Vec<bool>,
    steps: u64,
    budget: u64,
}

impl Machine {
    fn step(&mut self, line: u32) -> Result<(), Halt> {
        if self.steps >= self.budget {
            return Err(Halt::Budget);
        }
        self.steps += 1;
        self.covered[line as usize] = true;
        Ok(())
    }

    fn block(&mut self, stmts: &[Statement]) -> Result<(), Halt> {
        for s in stmts {
            self.statement(s)?;
        }
        Ok(())
    }

    fn statement(&mut self, s: &Statement) -> Result<(), Halt> {
        match &s.kind {
            StmtKind::While { cond, body } => loop {
                self.step(s.line)?;
                if self.eval(cond)? == 0 {
                    return Ok(());
                }
                self.block(body)?;
            },
            kind => {
                self.step(s.line)?;
                match kind {
                    StmtKind::Assign { target, value } => {
                        let v = self.eval(value)?;
                        self.vars[*target as usize] = v;
                    }
                    StmtKind::CompoundAssign { target, op, value } => {
                        let rhs = self.eval(value)?;
                        let lhs = self.vars[*target as usize];
                        self.vars[*target as usize] = apply_binop(op.to_binop(), lhs, rhs)?;
                    }
                    StmtKind::If { cond, then_branch, else_branch } => {
                        if self.eval(cond)? != 0 {
                            self.block(then_branch)?;
                        } else if let Some(e) = else_branch {
                            self.block(e)?;
                        }
                    }
                    StmtKind::Print(e) => {
                        let v = self.eval(e)?;
                        self.output.push(v);
                    }
                    StmtKind::Return(e) => {
                        let v = self.eval(e)?;
                        self.output.push(v);
                        return Err(Halt::Return);
                    }
                    StmtKind::Skip => {}
                    StmtKind::While { .. } => unreachable!(),
                }
                Ok(())
            }
        }
    }

    fn eval(&self, e: &Expr) -> Result<i64, Halt> {
        match e {
            Expr::Int(v) => Ok(*v),
            Expr::Var(id) => Ok(self.vars[*id as usize]),
            Expr::Unary(op, inner) => {
                let v = self.eval(inner)?;
                Ok(apply_unop(*op, v))
            }
            Expr::Binary(BinOp::And, l, r) => {
                if self.eval(l)? == 0 {
                    return Ok(0);
                }
                Ok((self.eval(r)? != 0) as i64)
            }
            Expr::Binary(BinOp::Or, l, r) => {
                if self.eval(l)? != 0 {
                    return Ok(1);
                }
                Ok((self.eval(r)? != 0) as i64)
            }
            Expr::Binary(op, l, r) => {
                let a = self.eval(l)?;
                let b = self.eval(r)?;
                apply_binop(*op, a, b)
            }
        }
    }
}

pub(crate) fn apply_unop(op: UnOp, v: i64) -> i64 {
    match op {
        UnOp::Neg => v.wrapping_neg(),
        UnOp::Not => (v == 0) as i64,
    }
}

/// Strict (non short-circuit) evaluation of a binary operator on two values.
/// `None` only for division or remainder by zero.
pub(crate) fn eval_binop(op: BinOp, a: i64, b: i64) -> Option<i64> {
    Some(match op {
        BinOp::Add => a.wrapping_add(b),
        BinOp::Sub => a.wrapping_sub(b),
        BinOp::Mul => a.wrapping_mul(b),
        BinOp::Div => {
            if b == 0 {
                return None;
            }
            a.wrapping_div(b)
        }
        BinOp::Rem => {
            if b == 0 {
                return None;
            }
            a.wrapping_rem(b)
        }
        BinOp::Lt => (a < b) as i64,
        BinOp::Le => (a <= b) as i64,
        BinOp::Gt => (a > b) as i64,
        BinOp::Ge => (a >= b) as i64,
        BinOp::Eq => (a == b) as i64,
        BinOp::Ne => (a != b) as i64,
        BinOp::And => (a != 0 && b != 0) as i64,
        BinOp::Or => (a != 0 || b != 0) as i64,
        BinOp::BitAnd => a & b,
        BinOp::BitOr => a | b,
        BinOp::BitXor => a ^ b,
    })
}

fn apply_binop(op: BinOp, a: i64, b: i64) -> Result<i64, Halt> {
    eval_binop(op, a, b).ok_or(Halt::Error)
}

/// Runs `program` on `inputs`. Missing inputs read as 0 and extra inputs are
/// ignored; callers check arity up front (see [`super::TestSuite::check_arity`]).
pub fn run(program: &Program, inputs: &[i64], budget: StepBudget) -> ExecOutcome {
    let mut vars = vec![0i64; program.symbols.len()];
    for (slot, v) in vars.iter_mut().zip(inputs.iter()).take(program.param_count) {
        *slot = *v;
    }
    let mut m = Machine {
        vars,
        output: Vec::new(),
        covered: vec![false; program.max_line() as usize + 1],
        steps: 0,
        budget: budget.get(),
    };
    let status = match m.block(&program.statements) {
        Ok(()) | Err(Halt::Return) => ExecStatus::Completed,
        Err(Halt::Error) => ExecStatus::RuntimeError,
        Err(Halt::Budget) => ExecStatus::StepBudgetExceeded,
    };
    let covered_lines = m
        .covered
        .iter()
        .enumerate()
        .filter(|(_, c)| **c)
        .map(|(line, _)| line as u32)
        .collect();
    ExecOutcome { status, output: m.output, covered_lines, steps_used: m.steps }
}
