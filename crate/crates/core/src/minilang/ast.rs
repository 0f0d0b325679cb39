use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Index into [`Program::symbols`]. Parameters occupy the first slots.
pub type VarId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
    BitAnd,
    BitOr,
    BitXor,
}

/// Operator families, used by the mutation operators to find their sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpClass {
    Arithmetic,
    Relational,
    Logical,
    Bitwise,
}

impl BinOp {
    pub const ARITHMETIC: [BinOp; 5] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Rem];
    pub const RELATIONAL: [BinOp; 6] = [BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne];
    pub const LOGICAL: [BinOp; 2] = [BinOp::And, BinOp::Or];
    pub const BITWISE: [BinOp; 3] = [BinOp::BitAnd, BinOp::BitOr, BinOp::BitXor];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::BitAnd => "&",
            BinOp::BitOr => "|",
            BinOp::BitXor => "^",
        }
    }

    pub fn from_symbol(s: &str) -> Option<BinOp> {
        let all = BinOp::ARITHMETIC
            .iter()
            .chain(BinOp::RELATIONAL.iter())
            .chain(BinOp::LOGICAL.iter())
            .chain(BinOp::BITWISE.iter());
        for op in all {
            if op.symbol() == s {
                return Some(*op);
            }
        }
        None
    }

    pub fn class(self) -> OpClass {
        match self {
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Rem => OpClass::Arithmetic,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne => {
                OpClass::Relational
            }
            BinOp::And | BinOp::Or => OpClass::Logical,
            BinOp::BitAnd | BinOp::BitOr | BinOp::BitXor => OpClass::Bitwise,
        }
    }

    /// Binding strength, C-like. Higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::BitOr => 3,
            BinOp::BitXor => 4,
            BinOp::BitAnd => 5,
            BinOp::Eq | BinOp::Ne => 6,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 7,
            BinOp::Add | BinOp::Sub => 8,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 9,
        }
    }

    pub fn is_commutative(self) -> bool {
        matches!(
            self,
            BinOp::Add | BinOp::Mul | BinOp::Eq | BinOp::Ne | BinOp::BitAnd | BinOp::BitOr | BinOp::BitXor
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Neg,
    Not,
}

impl UnOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Not => "!",
        }
    }
}

/// Operators allowed in compound assignments (`x += e` and friends).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl ArithOp {
    pub const ALL: [ArithOp; 5] = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div, ArithOp::Rem];

    pub fn to_binop(self) -> BinOp {
        match self {
            ArithOp::Add => BinOp::Add,
            ArithOp::Sub => BinOp::Sub,
            ArithOp::Mul => BinOp::Mul,
            ArithOp::Div => BinOp::Div,
            ArithOp::Rem => BinOp::Rem,
        }
    }

    pub fn symbol(self) -> &'static str {
        self.to_binop().symbol()
    }

    pub fn from_symbol(s: &str) -> Option<ArithOp> {
        ArithOp::ALL.iter().copied().find(|op| op.symbol() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Var(VarId),
    Unary(UnOp, alloc::boxed::Box<Expr>),
    Binary(BinOp, alloc::boxed::Box<Expr>, alloc::boxed::Box<Expr>),
}

impl Expr {
    pub fn unary(op: UnOp, operand: Expr) -> Expr {
        Expr::Unary(op, alloc::boxed::Box::new(operand))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, alloc::boxed::Box::new(lhs), alloc::boxed::Box::new(rhs))
    }

    /// Number of nodes, counted the same way as mutation site indices.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Int(_) | Expr::Var(_) => 1,
            Expr::Unary(_, e) => 1 + e.node_count(),
            Expr::Binary(_, l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    /// Visits nodes in pre-order, passing each node's pre-order index.
    pub fn for_each_preorder<'a>(&'a self, f: &mut impl FnMut(usize, &'a Expr)) {
        fn go<'a>(e: &'a Expr, next: &mut usize, f: &mut impl FnMut(usize, &'a Expr)) {
            f(*next, e);
            *next += 1;
            match e {
                Expr::Int(_) | Expr::Var(_) => {}
                Expr::Unary(_, inner) => go(inner, next, f),
                Expr::Binary(_, l, r) => {
                    go(l, next, f);
                    go(r, next, f);
                }
            }
        }
        let mut next = 0;
        go(self, &mut next, f);
    }

    /// Mutable access to the node with the given pre-order index.
    pub fn node_mut(&mut self, index: usize) -> Option<&mut Expr> {
        fn go(e: &mut Expr, index: usize) -> Result<&mut Expr, usize> {
            if index == 0 {
                return Ok(e);
            }
            let mut remaining = index - 1;
            match e {
                Expr::Int(_) | Expr::Var(_) => Err(remaining),
                Expr::Unary(_, inner) => go(inner, remaining),
                Expr::Binary(_, l, r) => {
                    let left_size = l.node_count();
                    if remaining < left_size {
                        go(l, remaining)
                    } else {
                        remaining -= left_size;
                        go(r, remaining)
                    }
                }
            }
        }
        go(self, index).ok()
    }

    pub fn node(&self, index: usize) -> Option<&Expr> {
        let mut found = None;
        self.for_each_preorder(&mut |i, e| {
            if i == index {
                found = Some(e);
            }
        });
        found
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Statement {
    pub line: u32,
    pub kind: StmtKind,
}

pub type Block = Vec<Statement>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StmtKind {
    Assign { target: VarId, value: Expr },
    CompoundAssign { target: VarId, op: ArithOp, value: Expr },
    If { cond: Expr, then_branch: Block, else_branch: Option<Block> },
    While { cond: Expr, body: Block },
    Print(Expr),
    Return(Expr),
    /// Only produced by statement deletion.
    Skip,
}

impl StmtKind {
    /// The single root expression of the statement, if any.
    pub fn expr(&self) -> Option<&Expr> {
        match self {
            StmtKind::Assign { value, .. } | StmtKind::CompoundAssign { value, .. } => Some(value),
            StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => Some(cond),
            StmtKind::Print(e) | StmtKind::Return(e) => Some(e),
            StmtKind::Skip => None,
        }
    }

    pub fn expr_mut(&mut self) -> Option<&mut Expr> {
        match self {
            StmtKind::Assign { value, .. } | StmtKind::CompoundAssign { value, .. } => Some(value),
            StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => Some(cond),
            StmtKind::Print(e) | StmtKind::Return(e) => Some(e),
            StmtKind::Skip => None,
        }
    }

    pub fn is_control(&self) -> bool {
        matches!(self, StmtKind::If { .. } | StmtKind::While { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            StmtKind::Assign { .. } => "assign",
            StmtKind::CompoundAssign { .. } => "compound-assign",
            StmtKind::If { .. } => "if",
            StmtKind::While { .. } => "while",
            StmtKind::Print(_) => "print",
            StmtKind::Return(_) => "return",
            StmtKind::Skip => "skip",
        }
    }
}

/// A parsed program. Line numbers of its statements form the SLOC universe
/// shared by every matrix and ranking downstream.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    pub(crate) source_name: String,
    pub(crate) param_count: usize,
    pub(crate) symbols: Vec<String>,
    pub(crate) statements: Block,
}

impl Program {
    /// Builds a program from already-resolved parts. Every `VarId` used by
    /// `statements` must index into `symbols`; the first `param_count`
    /// symbols are the inputs.
    pub fn from_parts(
        source_name: impl Into<String>,
        symbols: Vec<String>,
        param_count: usize,
        statements: Block,
    ) -> Program {
        assert!(param_count <= symbols.len());
        Program { source_name: source_name.into(), param_count, symbols, statements }
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn params(&self) -> &[String] {
        &self.symbols[..self.param_count]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, id: VarId) -> &str {
        &self.symbols[id as usize]
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    /// Executable line numbers, ascending.
    pub fn lines(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.for_each_statement(&mut |s| out.push(s.line));
        out.sort_unstable();
        out
    }

    pub fn max_line(&self) -> u32 {
        let mut max = 0;
        self.for_each_statement(&mut |s| max = max.max(s.line));
        max
    }

    /// Visits every statement, outer before inner, in source order.
    pub fn for_each_statement<'a>(&'a self, f: &mut impl FnMut(&'a Statement)) {
        fn go<'a>(block: &'a [Statement], f: &mut impl FnMut(&'a Statement)) {
            for s in block {
                f(s);
                match &s.kind {
                    StmtKind::If { then_branch, else_branch, .. } => {
                        go(then_branch, f);
                        if let Some(e) = else_branch {
                            go(e, f);
                        }
                    }
                    StmtKind::While { body, .. } => go(body, f),
                    _ => {}
                }
            }
        }
        go(&self.statements, f);
    }

    pub fn statement_at(&self, line: u32) -> Option<&Statement> {
        let mut found = None;
        self.for_each_statement(&mut |s| {
            if s.line == line {
                found = Some(s);
            }
        });
        found
    }

    pub fn statement_at_mut(&mut self, line: u32) -> Option<&mut Statement> {
        fn go(block: &mut [Statement], line: u32) -> Option<&mut Statement> {
            for s in block {
                if s.line == line {
                    return Some(s);
                }
                let found = match &mut s.kind {
                    StmtKind::If { then_branch, else_branch, .. } => go(then_branch, line)
                        .or_else(|| else_branch.as_mut().and_then(|e| go(e, line))),
                    StmtKind::While { body, .. } => go(body, line),
                    _ => None,
                };
                if found.is_some() {
                    return found;
                }
            }
            None
        }
        go(&mut self.statements, line)
    }
}

/// Renders an expression with the minimum parentheses needed to re-parse it.
pub struct ExprDisplay<'a> {
    pub expr: &'a Expr,
    pub symbols: &'a [String],
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.symbols, 0)
    }
}

const UNARY_PRECEDENCE: u8 = 10;

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, symbols: &[String], min_prec: u8) -> fmt::Result {
    match e {
        Expr::Int(v) => {
            if *v < 0 && min_prec >= UNARY_PRECEDENCE {
                write!(f, "({})", v)
            } else {
                write!(f, "{}", v)
            }
        }
        Expr::Var(id) => f.write_str(symbols.get(*id as usize).map(String::as_str).unwrap_or("?")),
        Expr::Unary(op, inner) => {
            f.write_str(op.symbol())?;
            write_expr(f, inner, symbols, UNARY_PRECEDENCE)
        }
        Expr::Binary(op, l, r) => {
            let prec = op.precedence();
            let paren = prec < min_prec;
            if paren {
                f.write_str("(")?;
            }
            write_expr(f, l, symbols, prec)?;
            write!(f, " {} ", op.symbol())?;
            write_expr(f, r, symbols, prec + 1)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

/// Renders the statement header as it appears on its own line (no block
/// contents, no trailing brace).
pub struct StmtDisplay<'a> {
    pub stmt: &'a Statement,
    pub symbols: &'a [String],
}

impl fmt::Display for StmtDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.symbols;
        let ex = |expr| ExprDisplay { expr, symbols: sym };
        let name = |id: &VarId| sym.get(*id as usize).map(String::as_str).unwrap_or("?");
        match &self.stmt.kind {
            StmtKind::Assign { target, value } => write!(f, "{} = {};", name(target), ex(value)),
            StmtKind::CompoundAssign { target, op, value } => {
                write!(f, "{} {}= {};", name(target), op.symbol(), ex(value))
            }
            StmtKind::If { cond, .. } => write!(f, "if ({}) {{", ex(cond)),
            StmtKind::While { cond, .. } => write!(f, "while ({}) {{", ex(cond)),
            StmtKind::Print(e) => write!(f, "print {};", ex(e)),
            StmtKind::Return(e) => write!(f, "return {};", ex(e)),
            StmtKind::Skip => f.write_str("skip;"),
        }
    }
}
