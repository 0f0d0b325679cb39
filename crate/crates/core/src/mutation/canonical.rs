//! Normalized program forms used to detect equivalent and duplicate mutants.
//!
//! Two programs with equal canonical forms produce the same status, output
//! and step count on every input. Line numbers are dropped; statements that
//! disappear during normalization (`skip`, constant-condition branches) leave
//! a [`CStmt::Tick`] behind so step counts, and therefore budget exhaustion,
//! are preserved.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::minilang::{apply_unop, eval_binop, BinOp, Expr, Program, Statement, StmtKind, UnOp, VarId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CExpr {
    Const(i64),
    Var(VarId),
    Unary(UnOp, Box<CExpr>),
    Binary(BinOp, Box<CExpr>, Box<CExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CStmt {
    /// `n` steps with no other effect.
    Tick(u32),
    Assign(VarId, CExpr),
    If(CExpr, Vec<CStmt>, Vec<CStmt>),
    While(CExpr, Vec<CStmt>),
    Print(CExpr),
    Return(CExpr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub param_count: usize,
    pub body: Vec<CStmt>,
}

pub fn canonicalize(program: &Program) -> CanonicalForm {
    CanonicalForm { param_count: program.params().len(), body: block(program.statements()) }
}

fn block(stmts: &[Statement]) -> Vec<CStmt> {
    let mut out = Vec::new();
    for s in stmts {
        let returned = statement(s, &mut out);
        if returned {
            break;
        }
    }
    out
}

fn push(out: &mut Vec<CStmt>, s: CStmt) {
    if let CStmt::Tick(n) = s {
        if let Some(CStmt::Tick(m)) = out.last_mut() {
            *m += n;
            return;
        }
    }
    out.push(s);
}

fn extend(out: &mut Vec<CStmt>, stmts: Vec<CStmt>) {
    for s in stmts {
        push(out, s);
    }
}

fn ends_in_return(stmts: &[CStmt]) -> bool {
    matches!(stmts.last(), Some(CStmt::Return(_)))
}

/// Appends the canonical form of `s`; true if control never continues past it.
fn statement(s: &Statement, out: &mut Vec<CStmt>) -> bool {
    match &s.kind {
        StmtKind::Skip => push(out, CStmt::Tick(1)),
        StmtKind::Assign { target, value } => {
            let v = expr(value);
            if v == CExpr::Var(*target) {
                push(out, CStmt::Tick(1));
            } else {
                push(out, CStmt::Assign(*target, v));
            }
        }
        StmtKind::CompoundAssign { target, op, value } => {
            let v = simplify(Expr::binary(op.to_binop(), Expr::Var(*target), value.clone()));
            if v == CExpr::Var(*target) {
                push(out, CStmt::Tick(1));
            } else {
                push(out, CStmt::Assign(*target, v));
            }
        }
        StmtKind::Print(e) => push(out, CStmt::Print(expr(e))),
        StmtKind::Return(e) => {
            push(out, CStmt::Return(expr(e)));
            return true;
        }
        StmtKind::If { cond, then_branch, else_branch } => {
            let mut c = truthiness(expr(cond));
            let mut then_c = block(then_branch);
            let mut else_c = else_branch.as_deref().map(block).unwrap_or_default();
            if let CExpr::Const(v) = c {
                push(out, CStmt::Tick(1));
                let taken = if v != 0 { then_c } else { else_c };
                let returned = ends_in_return(&taken);
                extend(out, taken);
                return returned;
            }
            // Pick one polarity for the condition so `if (!c) A else B` and
            // `if (c) B else A` meet.
            match c {
                CExpr::Unary(UnOp::Not, inner) => {
                    c = *inner;
                    core::mem::swap(&mut then_c, &mut else_c);
                }
                CExpr::Binary(BinOp::Le, l, r) => {
                    c = binary(BinOp::Lt, *r, *l);
                    core::mem::swap(&mut then_c, &mut else_c);
                }
                CExpr::Binary(BinOp::Ne, l, r) => {
                    c = binary(BinOp::Eq, *l, *r);
                    core::mem::swap(&mut then_c, &mut else_c);
                }
                other => c = other,
            }
            let returned = ends_in_return(&then_c) && ends_in_return(&else_c);
            push(out, CStmt::If(c, then_c, else_c));
            return returned;
        }
        StmtKind::While { cond, body } => {
            let c = truthiness(expr(cond));
            if c == CExpr::Const(0) {
                push(out, CStmt::Tick(1));
            } else {
                push(out, CStmt::While(c, block(body)));
            }
        }
    }
    false
}

pub fn expr(e: &Expr) -> CExpr {
    simplify(e.clone())
}

fn is_bool(e: &CExpr) -> bool {
    match e {
        CExpr::Const(v) => *v == 0 || *v == 1,
        CExpr::Unary(UnOp::Not, _) => true,
        CExpr::Binary(op, ..) => {
            matches!(op, BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne | BinOp::And | BinOp::Or)
        }
        _ => false,
    }
}

/// True if evaluating `e` can raise a runtime error.
fn can_fail(e: &CExpr) -> bool {
    match e {
        CExpr::Const(_) | CExpr::Var(_) => false,
        CExpr::Unary(_, inner) => can_fail(inner),
        CExpr::Binary(op, l, r) => {
            let divisor_risky = matches!(op, BinOp::Div | BinOp::Rem) && !matches!(**r, CExpr::Const(v) if v != 0);
            divisor_risky || can_fail(l) || can_fail(r)
        }
    }
}

/// A condition is only tested against zero, so `c != 0` and `c` are
/// interchangeable there, and any non-zero constant is `1`.
fn truthiness(c: CExpr) -> CExpr {
    match c {
        CExpr::Const(v) => CExpr::Const((v != 0) as i64),
        CExpr::Binary(BinOp::Ne, l, r) if *l == CExpr::Const(0) => *r,
        CExpr::Binary(BinOp::Ne, l, r) if *r == CExpr::Const(0) => *l,
        other => other,
    }
}

fn bool_of(e: CExpr) -> CExpr {
    if is_bool(&e) {
        e
    } else {
        binary(BinOp::Ne, CExpr::Const(0), e)
    }
}

fn simplify(e: Expr) -> CExpr {
    match e {
        Expr::Int(v) => CExpr::Const(v),
        Expr::Var(id) => CExpr::Var(id),
        Expr::Unary(op, inner) => unary(op, simplify(*inner)),
        Expr::Binary(op, l, r) => binary(op, simplify(*l), simplify(*r)),
    }
}

fn unary(op: UnOp, inner: CExpr) -> CExpr {
    match (op, inner) {
        (op, CExpr::Const(v)) => CExpr::Const(apply_unop(op, v)),
        (UnOp::Neg, CExpr::Unary(UnOp::Neg, x)) => *x,
        (UnOp::Not, CExpr::Unary(UnOp::Not, x)) if is_bool(&x) => *x,
        (UnOp::Not, CExpr::Binary(rel, l, r)) if complement(rel).is_some() => {
            binary(complement(rel).unwrap_or(rel), *l, *r)
        }
        (op, x) => CExpr::Unary(op, Box::new(x)),
    }
}

fn complement(op: BinOp) -> Option<BinOp> {
    Some(match op {
        BinOp::Lt => BinOp::Ge,
        BinOp::Le => BinOp::Gt,
        BinOp::Gt => BinOp::Le,
        BinOp::Ge => BinOp::Lt,
        BinOp::Eq => BinOp::Ne,
        BinOp::Ne => BinOp::Eq,
        _ => return None,
    })
}

fn binary(op: BinOp, l: CExpr, r: CExpr) -> CExpr {
    use CExpr::Const;

    if let (Const(a), Const(b)) = (&l, &r) {
        if let Some(v) = eval_binop(op, *a, *b) {
            return Const(v);
        }
    }
    match op {
        BinOp::Sub => {
            if let Const(c) = r {
                return binary(BinOp::Add, l, Const(c.wrapping_neg()));
            }
            if l == r && !can_fail(&l) {
                return Const(0);
            }
        }
        BinOp::Add => {
            if r == Const(0) {
                return l;
            }
            if l == Const(0) {
                return r;
            }
        }
        BinOp::Mul => {
            if r == Const(1) {
                return l;
            }
            if l == Const(1) {
                return r;
            }
            if (r == Const(0) && !can_fail(&l)) || (l == Const(0) && !can_fail(&r)) {
                return Const(0);
            }
            if r == Const(-1) {
                return unary(UnOp::Neg, l);
            }
            if l == Const(-1) {
                return unary(UnOp::Neg, r);
            }
        }
        BinOp::Div => {
            if r == Const(1) {
                return l;
            }
            if r == Const(-1) {
                return unary(UnOp::Neg, l);
            }
        }
        BinOp::Rem => {
            if (r == Const(1) || r == Const(-1)) && !can_fail(&l) {
                return Const(0);
            }
        }
        BinOp::Gt => return binary(BinOp::Lt, r, l),
        BinOp::Ge => return binary(BinOp::Le, r, l),
        BinOp::And => {
            if let Const(a) = l {
                return if a == 0 { Const(0) } else { bool_of(r) };
            }
            if let Const(b) = r {
                if b != 0 {
                    return bool_of(l);
                }
                if !can_fail(&l) {
                    return Const(0);
                }
            }
        }
        BinOp::Or => {
            if let Const(a) = l {
                return if a != 0 { Const(1) } else { bool_of(r) };
            }
            if let Const(b) = r {
                if b == 0 {
                    return bool_of(l);
                }
                if !can_fail(&l) {
                    return Const(1);
                }
            }
        }
        BinOp::BitOr | BinOp::BitXor => {
            if r == Const(0) {
                return l;
            }
            if l == Const(0) {
                return r;
            }
        }
        BinOp::BitAnd => {
            if r == Const(-1) {
                return l;
            }
            if l == Const(-1) {
                return r;
            }
        }
        _ => {}
    }
    let (l, r) = if op.is_commutative() && r < l { (r, l) } else { (l, r) };
    CExpr::Binary(op, Box::new(l), Box::new(r))
}
