//! Operator catalogue and single-site mutation points.
//!
//! | Operator | Site | Replacements |
//! |----------|------|--------------|
//! | AOR  | `+ - * / %` | the other four |
//! | LCR  | `&& \|\|` | the other one |
//! | ROR  | `< <= > >= == !=` | the other five |
//! | UOM  | variable reads | `v + 1`, `v - 1`, `-v`, `!v` |
//! |      | `-e`, `!e` | `e` (operator removed) |
//! | OAAA | `x op= e` | the other four compound operators |
//! | OBBN | `& \| ^` | the other two |
//! | OCNG | `if`/`while` condition | `!(cond)` |
//! | SSDL | any statement | `skip` (a control statement takes its block with it) |
//! | CRCR | integer literal `c` | `0, 1, -1, c+1, c-1, -c`, minus `c` and repeats |

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::minilang::{ArithOp, BinOp, Expr, ExprDisplay, Program, Statement, StmtDisplay, StmtKind, UnOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum OperatorId {
    Aor,
    Lcr,
    Ror,
    Uom,
    Oaaa,
    Obbn,
    Ocng,
    Ssdl,
    Crcr,
}

impl OperatorId {
    pub const ALL: [OperatorId; 9] = [
        OperatorId::Aor,
        OperatorId::Lcr,
        OperatorId::Ror,
        OperatorId::Uom,
        OperatorId::Oaaa,
        OperatorId::Obbn,
        OperatorId::Ocng,
        OperatorId::Ssdl,
        OperatorId::Crcr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorId::Aor => "AOR",
            OperatorId::Lcr => "LCR",
            OperatorId::Ror => "ROR",
            OperatorId::Uom => "UOM",
            OperatorId::Oaaa => "OAAA",
            OperatorId::Obbn => "OBBN",
            OperatorId::Ocng => "OCNG",
            OperatorId::Ssdl => "SSDL",
            OperatorId::Crcr => "CRCR",
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown mutation operator `{0}`")]
pub struct UnknownOperator(pub String);

impl FromStr for OperatorId {
    type Err = UnknownOperator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OperatorId::ALL
            .iter()
            .copied()
            .find(|op| op.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownOperator(s.to_string()))
    }
}

/// Which UOM replacements are produced at variable reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum UomForms {
    /// `v + 1`, `v - 1`, `-v`, `!v`, plus removal of existing unary operators.
    #[default]
    All,
    /// Only `v + 1` and `v - 1`.
    IncrementOnly,
}

/// Enabled operators plus operator-specific options.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorSet {
    enabled: [bool; 9],
    pub uom_forms: UomForms,
}

impl OperatorSet {
    pub fn all() -> OperatorSet {
        OperatorSet { enabled: [true; 9], uom_forms: UomForms::All }
    }

    pub fn none() -> OperatorSet {
        OperatorSet { enabled: [false; 9], uom_forms: UomForms::All }
    }

    pub fn only(ops: &[OperatorId]) -> OperatorSet {
        let mut set = OperatorSet::none();
        for op in ops {
            set.enabled[*op as usize] = true;
        }
        set
    }

    /// UOM restricted to adding or subtracting 1 at variable reads.
    pub fn increment_only() -> OperatorSet {
        OperatorSet { uom_forms: UomForms::IncrementOnly, ..OperatorSet::only(&[OperatorId::Uom]) }
    }

    pub fn contains(&self, op: OperatorId) -> bool {
        self.enabled[op as usize]
    }

    pub fn is_empty(&self) -> bool {
        !self.enabled.iter().any(|e| *e)
    }

    pub fn iter(&self) -> impl Iterator<Item = OperatorId> + '_ {
        OperatorId::ALL.into_iter().filter(|op| self.contains(*op))
    }
}

impl Default for OperatorSet {
    fn default() -> Self {
        OperatorSet::all()
    }
}

/// A concrete edit at one site of one statement. Expression sites are
/// addressed by their pre-order index inside the statement's root expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edit {
    /// Replace the binary operator at the node.
    SwapBinOp { node: u32, op: BinOp },
    /// Replace a unary node with its operand.
    RemoveUnary { node: u32 },
    /// Wrap the node in a unary operator.
    InsertUnary { node: u32, op: UnOp },
    /// Replace the node `v` with `v + delta`.
    Offset { node: u32, delta: i64 },
    /// Replace the literal at the node.
    Constant { node: u32, value: i64 },
    /// Replace the operator of a compound assignment.
    CompoundOp(ArithOp),
    /// Replace an `if`/`while` condition `c` with `!(c)`.
    NegateCondition,
    /// Replace the statement with `skip`.
    Delete,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("no statement on line {0}")]
    NoStatement(u32),
    #[error("edit `{edit}` does not apply to line {line}")]
    NotApplicable { line: u32, edit: String },
    #[error("malformed edit `{0}`")]
    Malformed(String),
}

impl fmt::Display for Edit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edit::SwapBinOp { node, op } => write!(f, "e{}:op={}", node, op.symbol()),
            Edit::RemoveUnary { node } => write!(f, "e{}:unwrap", node),
            Edit::InsertUnary { node, op } => write!(f, "e{}:wrap={}", node, op.symbol()),
            Edit::Offset { node, delta } => write!(f, "e{}:add={}", node, delta),
            Edit::Constant { node, value } => write!(f, "e{}:const={}", node, value),
            Edit::CompoundOp(op) => write!(f, "s:cop={}", op.symbol()),
            Edit::NegateCondition => f.write_str("s:negate"),
            Edit::Delete => f.write_str("s:delete"),
        }
    }
}

impl FromStr for Edit {
    type Err = EditError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EditError::Malformed(s.to_string());
        let (site, action) = s.split_once(':').ok_or_else(bad)?;
        if site == "s" {
            return match action {
                "negate" => Ok(Edit::NegateCondition),
                "delete" => Ok(Edit::Delete),
                _ => {
                    let sym = action.strip_prefix("cop=").ok_or_else(bad)?;
                    ArithOp::from_symbol(sym).map(Edit::CompoundOp).ok_or_else(bad)
                }
            };
        }
        let node: u32 = site.strip_prefix('e').and_then(|n| n.parse().ok()).ok_or_else(bad)?;
        if action == "unwrap" {
            return Ok(Edit::RemoveUnary { node });
        }
        let (key, value) = action.split_once('=').ok_or_else(bad)?;
        match key {
            "op" => BinOp::from_symbol(value).map(|op| Edit::SwapBinOp { node, op }).ok_or_else(bad),
            "wrap" => match value {
                "-" => Ok(Edit::InsertUnary { node, op: UnOp::Neg }),
                "!" => Ok(Edit::InsertUnary { node, op: UnOp::Not }),
                _ => Err(bad()),
            },
            "add" => value.parse().map(|delta| Edit::Offset { node, delta }).map_err(|_| bad()),
            "const" => value.parse().map(|value| Edit::Constant { node, value }).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// Applies `edit` to the statement on `line`, returning the mutated program
/// and a `before -> after` description of the touched fragment.
pub fn apply_edit(program: &Program, line: u32, edit: Edit) -> Result<(Program, String), EditError> {
    let mut mutated = program.clone();
    let symbols = program.symbols();
    let not_applicable = || EditError::NotApplicable { line, edit: edit.to_string() };
    let stmt = mutated.statement_at_mut(line).ok_or(EditError::NoStatement(line))?;
    let show = |e: &Expr| ExprDisplay { expr: e, symbols }.to_string();
    let show_stmt = |s: &Statement| StmtDisplay { stmt: s, symbols }.to_string();

    let description = match edit {
        Edit::CompoundOp(new_op) => {
            let before = show_stmt(stmt);
            match &mut stmt.kind {
                StmtKind::CompoundAssign { op, .. } if *op != new_op => *op = new_op,
                _ => return Err(not_applicable()),
            }
            alloc::format!("{} -> {}", before, show_stmt(stmt))
        }
        Edit::NegateCondition => {
            let before = show_stmt(stmt);
            match &mut stmt.kind {
                StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => {
                    let inner = core::mem::replace(cond, Expr::Int(0));
                    *cond = Expr::unary(UnOp::Not, inner);
                }
                _ => return Err(not_applicable()),
            }
            alloc::format!("{} -> {}", before, show_stmt(stmt))
        }
        Edit::Delete => {
            if matches!(stmt.kind, StmtKind::Skip) {
                return Err(not_applicable());
            }
            let before = show_stmt(stmt);
            stmt.kind = StmtKind::Skip;
            alloc::format!("{} -> skip;", before)
        }
        Edit::SwapBinOp { node, .. }
        | Edit::RemoveUnary { node }
        | Edit::InsertUnary { node, .. }
        | Edit::Offset { node, .. }
        | Edit::Constant { node, .. } => {
            let root = stmt.kind.expr_mut().ok_or_else(not_applicable)?;
            let target = root.node_mut(node as usize).ok_or_else(not_applicable)?;
            let before = show(target);
            let old = core::mem::replace(target, Expr::Int(0));
            *target = match (edit, old) {
                (Edit::SwapBinOp { op, .. }, Expr::Binary(old_op, l, r))
                    if old_op != op && old_op.class() == op.class() =>
                {
                    Expr::Binary(op, l, r)
                }
                (Edit::RemoveUnary { .. }, Expr::Unary(_, inner)) => *inner,
                (Edit::InsertUnary { op, .. }, v @ Expr::Var(_)) => Expr::unary(op, v),
                (Edit::Offset { delta, .. }, v @ Expr::Var(_)) if delta != 0 => {
                    if delta > 0 {
                        Expr::binary(BinOp::Add, v, Expr::Int(delta))
                    } else {
                        Expr::binary(BinOp::Sub, v, Expr::Int(delta.wrapping_neg()))
                    }
                }
                (Edit::Constant { value, .. }, Expr::Int(c)) if c != value => Expr::Int(value),
                _ => return Err(not_applicable()),
            };
            alloc::format!("{} -> {}", before, show(target))
        }
    };
    Ok((mutated, description))
}

/// Every edit the operator can make on `stmt`, in generation order:
/// pre-order over sites, then replacement order.
pub fn edits_for(op: OperatorId, stmt: &Statement, forms: UomForms) -> Vec<Edit> {
    let mut out = Vec::new();
    match op {
        OperatorId::Oaaa => {
            if let StmtKind::CompoundAssign { op: current, .. } = stmt.kind {
                out.extend(ArithOp::ALL.iter().filter(|o| **o != current).map(|o| Edit::CompoundOp(*o)));
            }
            return out;
        }
        OperatorId::Ocng => {
            if stmt.kind.is_control() {
                out.push(Edit::NegateCondition);
            }
            return out;
        }
        OperatorId::Ssdl => {
            if !matches!(stmt.kind, StmtKind::Skip) {
                out.push(Edit::Delete);
            }
            return out;
        }
        _ => {}
    }
    let Some(root) = stmt.kind.expr() else { return out };
    root.for_each_preorder(&mut |i, e| {
        let node = i as u32;
        match (op, e) {
            (OperatorId::Aor, Expr::Binary(b, ..)) => swap_within(&mut out, node, *b, &BinOp::ARITHMETIC),
            (OperatorId::Ror, Expr::Binary(b, ..)) => swap_within(&mut out, node, *b, &BinOp::RELATIONAL),
            (OperatorId::Lcr, Expr::Binary(b, ..)) => swap_within(&mut out, node, *b, &BinOp::LOGICAL),
            (OperatorId::Obbn, Expr::Binary(b, ..)) => swap_within(&mut out, node, *b, &BinOp::BITWISE),
            (OperatorId::Uom, Expr::Var(_)) => {
                out.push(Edit::Offset { node, delta: 1 });
                out.push(Edit::Offset { node, delta: -1 });
                if forms == UomForms::All {
                    out.push(Edit::InsertUnary { node, op: UnOp::Neg });
                    out.push(Edit::InsertUnary { node, op: UnOp::Not });
                }
            }
            (OperatorId::Uom, Expr::Unary(..)) if forms == UomForms::All => {
                out.push(Edit::RemoveUnary { node });
            }
            (OperatorId::Crcr, Expr::Int(c)) => {
                let c = *c;
                let candidates = [0, 1, -1, c.wrapping_add(1), c.wrapping_sub(1), c.wrapping_neg()];
                let mut seen: Vec<i64> = Vec::new();
                for v in candidates {
                    if v != c && !seen.contains(&v) {
                        seen.push(v);
                        out.push(Edit::Constant { node, value: v });
                    }
                }
            }
            _ => {}
        }
    });
    out
}

fn swap_within(out: &mut Vec<Edit>, node: u32, current: BinOp, family: &[BinOp]) {
    if !family.contains(&current) {
        return;
    }
    out.extend(family.iter().filter(|o| **o != current).map(|op| Edit::SwapBinOp { node, op: *op }));
}
