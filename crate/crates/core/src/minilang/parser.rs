//! Line-oriented parser. Each statement starts on its own physical line and
//! takes that line number; `param` headers, braces, `} else {` lines,
//! comments and blank lines are not executable.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::ast::{ArithOp, BinOp, Block, Expr, Program, Statement, StmtKind, UnOp, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{source_name}:{line}:{column}: {kind}")]
pub struct ParseError {
    pub source_name: String,
    pub line: u32,
    pub column: u32,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("integer literal out of range")]
    IntegerOverflow,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("duplicate parameter `{0}`")]
    DuplicateParam(String),
    #[error("parameter declarations must precede statements")]
    LateParam,
    #[error("more than one statement on this line")]
    SharedLine,
    #[error("variable `{0}` is read but never assigned and is not a parameter")]
    UndefinedVariable(String),
    #[error("program has no executable statements")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Param,
    If,
    Else,
    While,
    Print,
    Return,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Assign,
    CompoundAssign(ArithOp),
    Bin(BinOp),
    Not,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("identifier `{}`", s),
            Tok::Int(v) => alloc::format!("integer `{}`", v),
            Tok::Param => "`param`".to_string(),
            Tok::If => "`if`".to_string(),
            Tok::Else => "`else`".to_string(),
            Tok::While => "`while`".to_string(),
            Tok::Print => "`print`".to_string(),
            Tok::Return => "`return`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::LBrace => "`{`".to_string(),
            Tok::RBrace => "`}`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::Assign => "`=`".to_string(),
            Tok::CompoundAssign(op) => alloc::format!("`{}=`", op.symbol()),
            Tok::Bin(op) => alloc::format!("`{}`", op.symbol()),
            Tok::Not => "`!`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    column: u32,
}

fn lex(source: &str) -> Result<Vec<Token>, (u32, u32, ParseErrorKind)> {
    let mut out = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: start_line, column: start_col });
        if c.is_ascii_digit() {
            let mut value: i64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                let d = chars[i] as i64 - '0' as i64;
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d))
                    .ok_or((start_line, start_col, ParseErrorKind::IntegerOverflow))?;
                i += 1;
                col += 1;
            }
            push(&mut out, Tok::Int(value));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                word.push(chars[i]);
                i += 1;
                col += 1;
            }
            let tok = match word.as_str() {
                "param" => Tok::Param,
                "if" => Tok::If,
                "else" => Tok::Else,
                "while" => Tok::While,
                "print" => Tok::Print,
                "return" => Tok::Return,
                _ => Tok::Ident(word),
            };
            push(&mut out, tok);
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('&', Some('&')) => (Tok::Bin(BinOp::And), 2),
            ('|', Some('|')) => (Tok::Bin(BinOp::Or), 2),
            ('<', Some('=')) => (Tok::Bin(BinOp::Le), 2),
            ('>', Some('=')) => (Tok::Bin(BinOp::Ge), 2),
            ('=', Some('=')) => (Tok::Bin(BinOp::Eq), 2),
            ('!', Some('=')) => (Tok::Bin(BinOp::Ne), 2),
            ('+', Some('=')) => (Tok::CompoundAssign(ArithOp::Add), 2),
            ('-', Some('=')) => (Tok::CompoundAssign(ArithOp::Sub), 2),
            ('*', Some('=')) => (Tok::CompoundAssign(ArithOp::Mul), 2),
            ('/', Some('=')) => (Tok::CompoundAssign(ArithOp::Div), 2),
            ('%', Some('=')) => (Tok::CompoundAssign(ArithOp::Rem), 2),
            ('+', _) => (Tok::Bin(BinOp::Add), 1),
            ('-', _) => (Tok::Bin(BinOp::Sub), 1),
            ('*', _) => (Tok::Bin(BinOp::Mul), 1),
            ('/', _) => (Tok::Bin(BinOp::Div), 1),
            ('%', _) => (Tok::Bin(BinOp::Rem), 1),
            ('<', _) => (Tok::Bin(BinOp::Lt), 1),
            ('>', _) => (Tok::Bin(BinOp::Gt), 1),
            ('&', _) => (Tok::Bin(BinOp::BitAnd), 1),
            ('|', _) => (Tok::Bin(BinOp::BitOr), 1),
            ('^', _) => (Tok::Bin(BinOp::BitXor), 1),
            ('!', _) => (Tok::Not, 1),
            ('=', _) => (Tok::Assign, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (';', _) => (Tok::Semi, 1),
            _ => return Err((start_line, start_col, ParseErrorKind::UnexpectedChar(c))),
        };
        push(&mut out, tok);
        i += width;
        col += width as u32;
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser<'a> {
    source_name: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    symbols: Vec<String>,
    index: BTreeMap<String, VarId>,
    param_count: usize,
    assigned: Vec<bool>,
    reads: Vec<(VarId, u32, u32)>,
    last_stmt_line: u32,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError { source_name: self.source_name.to_string(), line: tok.line, column: tok.column, kind }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let t = self.peek();
        self.error_at(t, ParseErrorKind::Unexpected { expected, found: t.tok.describe() })
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn intern(&mut self, name: &str) -> VarId {
        if let Some(id) = self.index.get(name) {
            return *id;
        }
        let id = self.symbols.len() as VarId;
        self.symbols.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.assigned.push(false);
        id
    }

    fn program(&mut self) -> PResult<Block> {
        while self.peek().tok == Tok::Param {
            self.bump();
            let name_tok = self.peek().clone();
            let name = match &name_tok.tok {
                Tok::Ident(n) => n.clone(),
                _ => return Err(self.unexpected("parameter name")),
            };
            self.bump();
            if self.index.contains_key(&name) {
                return Err(self.error_at(&name_tok, ParseErrorKind::DuplicateParam(name)));
            }
            let id = self.intern(&name);
            self.assigned[id as usize] = true;
            self.param_count += 1;
            self.expect(Tok::Semi, "`;`")?;
        }
        let block = self.block_items(true)?;
        if self.peek().tok != Tok::Eof {
            return Err(self.unexpected("statement"));
        }
        Ok(block)
    }

    /// Statements until `}` (or end of input at top level).
    fn block_items(&mut self, top_level: bool) -> PResult<Block> {
        let mut out = Vec::new();
        loop {
            match self.peek().tok {
                Tok::Eof if top_level => return Ok(out),
                Tok::RBrace if !top_level => return Ok(out),
                Tok::Param => {
                    let t = self.peek().clone();
                    return Err(self.error_at(&t, ParseErrorKind::LateParam));
                }
                _ => out.push(self.statement()?),
            }
        }
    }

    fn braced_block(&mut self) -> PResult<Block> {
        self.expect(Tok::LBrace, "`{`")?;
        let block = self.block_items(false)?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(block)
    }

    fn statement(&mut self) -> PResult<Statement> {
        let start = self.peek().clone();
        if start.line == self.last_stmt_line {
            return Err(self.error_at(&start, ParseErrorKind::SharedLine));
        }
        self.last_stmt_line = start.line;
        let line = start.line;
        let kind = match &start.tok {
            Tok::If => {
                self.bump();
                let cond = self.paren_cond()?;
                let then_branch = self.braced_block()?;
                let else_branch = if self.peek().tok == Tok::Else {
                    self.bump();
                    Some(self.braced_block()?)
                } else {
                    None
                };
                StmtKind::If { cond, then_branch, else_branch }
            }
            Tok::While => {
                self.bump();
                let cond = self.paren_cond()?;
                let body = self.braced_block()?;
                StmtKind::While { cond, body }
            }
            Tok::Print => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Print(e)
            }
            Tok::Return => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Return(e)
            }
            Tok::Ident(name) => {
                let name = name.clone();
                self.bump();
                if !matches!(self.peek().tok, Tok::Assign | Tok::CompoundAssign(_)) {
                    return Err(self.unexpected("`=` or compound assignment"));
                }
                let op_tok = self.bump();
                let value = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                let target = self.intern(&name);
                match op_tok.tok {
                    Tok::CompoundAssign(op) => {
                        // `x op= e` reads x before writing it.
                        self.reads.push((target, start.line, start.column));
                        self.assigned[target as usize] = true;
                        StmtKind::CompoundAssign { target, op, value }
                    }
                    _ => {
                        self.assigned[target as usize] = true;
                        StmtKind::Assign { target, value }
                    }
                }
            }
            _ => return Err(self.unexpected("statement")),
        };
        Ok(Statement { line, kind })
    }

    fn paren_cond(&mut self) -> PResult<Expr> {
        self.expect(Tok::LParen, "`(`")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(e)
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Bin(op) if op.precedence() >= min_prec => op,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek().tok {
            Tok::Bin(BinOp::Sub) => {
                self.bump();
                let inner = self.unary()?;
                // Negative literals are constants, not negation nodes.
                Ok(match inner {
                    Expr::Int(v) => Expr::Int(v.wrapping_neg()),
                    other => Expr::Unary(UnOp::Neg, Box::new(other)),
                })
            }
            Tok::Not => {
                self.bump();
                Ok(Expr::unary(UnOp::Not, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::Ident(name) => {
                self.bump();
                let id = self.intern(&name);
                self.reads.push((id, t.line, t.column));
                Ok(Expr::Var(id))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.unexpected("expression")),
        }
    }
}

/// Parses mini-language source text into a [`Program`].
pub fn parse(source_name: &str, source: &str) -> Result<Program, ParseError> {
    let tokens = lex(source).map_err(|(line, column, kind)| ParseError {
        source_name: source_name.to_string(),
        line,
        column,
        kind,
    })?;
    let mut p = Parser {
        source_name,
        tokens,
        pos: 0,
        symbols: Vec::new(),
        index: BTreeMap::new(),
        param_count: 0,
        assigned: Vec::new(),
        reads: Vec::new(),
        last_stmt_line: 0,
    };
    let statements = p.program()?;
    if statements.is_empty() {
        let t = p.peek().clone();
        return Err(p.error_at(&t, ParseErrorKind::Empty));
    }
    for (id, line, column) in &p.reads {
        if !p.assigned[*id as usize] {
            return Err(ParseError {
                source_name: source_name.to_string(),
                line: *line,
                column: *column,
                kind: ParseErrorKind::UndefinedVariable(p.symbols[*id as usize].clone()),
            });
        }
    }
    Ok(Program::from_parts(source_name, p.symbols, p.param_count, statements))
}
