use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{lex, Tok};
use super::{check, DslError, Span};
use crate::algebra::IndexDomain;

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: i64 = 64;

/// Parses and checks a `.liealg` source. Reports the first problem found.
pub fn parse(text: &str) -> Result<AlgebraAst, DslError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        families: BTreeSet::new(),
        names: BTreeSet::new(),
        depth: 0,
    };
    let ast = p.file()?;
    check(&ast)?;
    Ok(ast)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    families: BTreeSet<String>,
    /// Parameters plus the variables of the clause being parsed.
    names: BTreeSet<String>,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<Span, DslError> {
        if self.peek() == t {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&format!("{t}")))
        }
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        DslError::syntax(self.span(), format!("expected {wanted}, found {}", self.peek()))
    }

    fn ident(&mut self) -> Result<Ident, DslError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().1;
                Ok(Ident { name, span })
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn file(&mut self) -> Result<AlgebraAst, DslError> {
        let mut items = Vec::new();
        while *self.peek() != Tok::Eof {
            items.push(self.item()?);
        }
        Ok(AlgebraAst { items })
    }

    fn item(&mut self) -> Result<Item, DslError> {
        let span = self.span();
        if *self.peek() == Tok::LBracket {
            return self.clause().map(Item::Clause);
        }
        let item = if self.keyword("algebra") {
            Item::Algebra(self.ident()?)
        } else if self.keyword("rank") {
            match self.bump() {
                (Tok::Int(n), _) if n >= 1 => Item::Rank { value: n, span },
                (_, s) => return Err(DslError::syntax(s, "rank must be a positive integer")),
            }
        } else if self.keyword("param") {
            let name = self.ident()?;
            let value = if self.eat(&Tok::Eq) { Some(self.expr()?) } else { None };
            self.names.insert(name.name.clone());
            Item::Param { name, value }
        } else if self.keyword("family") {
            Item::Family(self.family()?)
        } else {
            return Err(self.unexpected("'algebra', 'rank', 'param', 'family' or '['"));
        };
        self.expect(&Tok::Semi)?;
        Ok(item)
    }

    fn family(&mut self) -> Result<FamilyDecl, DslError> {
        let name = self.ident()?;
        let shape = if self.keyword("graded") {
            FamilyShape::Graded
        } else if self.keyword("central") {
            FamilyShape::Central
        } else if self.keyword("indexed") {
            if self.keyword("int") {
                FamilyShape::Indexed(IndexDomain::Int)
            } else if self.keyword("nat") {
                FamilyShape::Indexed(IndexDomain::Nat)
            } else {
                return Err(self.unexpected("'int' or 'nat'"));
            }
        } else {
            return Err(self.unexpected("'graded', 'indexed' or 'central'"));
        };
        let mut conditions = Vec::new();
        if self.keyword("if") {
            loop {
                let span = self.span();
                let lhs = self.expr()?;
                let op = match self.peek() {
                    Tok::Eq => CmpOp::Eq,
                    Tok::Ne => CmpOp::Ne,
                    Tok::Lt => CmpOp::Lt,
                    Tok::Le => CmpOp::Le,
                    Tok::Gt => CmpOp::Gt,
                    Tok::Ge => CmpOp::Ge,
                    _ => return Err(self.unexpected("comparison")),
                };
                self.bump();
                let rhs = self.expr()?;
                conditions.push(Condition { lhs, op, rhs, span });
                if !self.keyword("and") {
                    break;
                }
            }
        }
        self.families.insert(name.name.clone());
        Ok(FamilyDecl { name, shape, conditions })
    }

    fn clause(&mut self) -> Result<Clause, DslError> {
        let span = self.expect(&Tok::LBracket)?;
        let saved = self.names.clone();
        let left = self.operand()?;
        self.expect(&Tok::Comma)?;
        let right = self.operand()?;
        self.expect(&Tok::RBracket)?;
        self.expect(&Tok::Eq)?;
        let mut terms = Vec::new();
        if *self.peek() == Tok::Int(0) && *self.peek_at(1) == Tok::Semi {
            self.bump();
        } else {
            let mut negated = self.eat(&Tok::Minus);
            if !negated {
                self.eat(&Tok::Plus);
            }
            loop {
                terms.push(self.term(negated)?);
                if self.eat(&Tok::Plus) {
                    negated = false;
                } else if self.eat(&Tok::Minus) {
                    negated = true;
                } else {
                    break;
                }
            }
        }
        self.expect(&Tok::Semi)?;
        self.names = saved;
        Ok(Clause { left, right, terms, span })
    }

    fn operand(&mut self) -> Result<Operand, DslError> {
        let family = self.ident()?;
        if !self.families.contains(&family.name) {
            return Err(DslError::UnknownFamily { span: family.span, name: family.name });
        }
        let degree = self.ident()?;
        self.names.insert(degree.name.clone());
        let index = if matches!(self.peek(), Tok::Ident(_)) {
            let i = self.ident()?;
            self.names.insert(i.name.clone());
            Some(i)
        } else {
            None
        };
        Ok(Operand { family, degree, index })
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::LParen => true,
            Tok::Ident(s) => s != "and",
            _ => false,
        }
    }

    fn term(&mut self, negated: bool) -> Result<Term, DslError> {
        let span = self.span();
        let mut coeff: Option<Expr> = None;
        let mut guards = Vec::new();
        let mut target: Option<Target> = None;
        let mut first = true;
        loop {
            let op = if first || self.eat(&Tok::Star) {
                BinOp::Mul
            } else if self.eat(&Tok::Slash) {
                BinOp::Div
            } else if self.starts_atom() {
                BinOp::Mul
            } else {
                break;
            };
            first = false;
            let at = self.span();
            let name = match self.peek() {
                Tok::Ident(s) => Some(s.clone()),
                _ => None,
            };
            match name {
                Some(n) if n == "d" && *self.peek_at(1) == Tok::LParen && !self.names.contains("d") => {
                    if op == BinOp::Div {
                        return Err(DslError::syntax(at, "cannot divide by a delta guard"));
                    }
                    self.bump();
                    self.bump();
                    let lhs = self.expr()?;
                    self.expect(&Tok::Eq)?;
                    let rhs = self.expr()?;
                    self.expect(&Tok::RParen)?;
                    guards.push(Guard { lhs, rhs, span: at });
                }
                Some(n) if self.families.contains(&n) => {
                    if op == BinOp::Div {
                        return Err(DslError::syntax(at, "cannot divide by a basis element"));
                    }
                    if target.is_some() {
                        return Err(DslError::syntax(at, "a term has exactly one basis element"));
                    }
                    target = Some(self.target()?);
                }
                _ => {
                    let e = self.unary()?;
                    coeff = Some(match (coeff, op) {
                        (None, BinOp::Div) => Expr::bin(BinOp::Div, Expr::Int(1), e),
                        (None, _) => e,
                        (Some(c), op) => Expr::bin(op, c, e),
                    });
                }
            }
        }
        let target = target.ok_or_else(|| DslError::syntax(span, "term has no basis element"))?;
        Ok(Term { negated, coeff, guards, target, span })
    }

    fn target(&mut self) -> Result<Target, DslError> {
        let family = self.ident()?;
        let (mut degree, mut index) = (None, None);
        if self.eat(&Tok::LParen) {
            degree = Some(self.expr()?);
            if self.eat(&Tok::Semi) {
                index = Some(self.expr()?);
            }
            self.expect(&Tok::RParen)?;
        }
        Ok(Target { family, degree, index })
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(DslError::syntax(self.span(), "expression nested too deeply"));
        }
        let mut e = self.product()?;
        loop {
            let op = if self.eat(&Tok::Plus) {
                BinOp::Add
            } else if self.eat(&Tok::Minus) {
                BinOp::Sub
            } else {
                break;
            };
            e = Expr::bin(op, e, self.product()?);
        }
        self.depth -= 1;
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr, DslError> {
        let mut e = self.unary()?;
        loop {
            let op = if self.eat(&Tok::Star) {
                BinOp::Mul
            } else if self.eat(&Tok::Slash) {
                BinOp::Div
            } else if self.starts_atom() {
                BinOp::Mul
            } else {
                break;
            };
            e = Expr::bin(op, e, self.unary()?);
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.eat(&Tok::Minus) {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(DslError::syntax(self.span(), "expression nested too deeply"));
            }
            let e = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(e)));
        }
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            match self.bump() {
                (Tok::Int(n), _) if n <= MAX_EXPONENT => Ok(Expr::Pow(Box::new(base), n as u32)),
                (_, s) => Err(DslError::syntax(
                    s,
                    format!("exponent must be an integer literal in 0..={MAX_EXPONENT}"),
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr, DslError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let called = *self.peek_at(1) == Tok::LParen;
                if name == "val" && called && !self.names.contains("val") {
                    self.bump();
                    self.bump();
                    let v = self.ident()?;
                    self.expect(&Tok::RParen)?;
                    return Ok(Expr::Val(v));
                }
                if let Some(prefix) = name.strip_suffix('_').filter(|p| !p.is_empty()) {
                    if called && self.names.contains(prefix) {
                        self.bump();
                        self.bump();
                        let k = match self.bump() {
                            (Tok::Int(k), _) if (1..=u32::MAX as i64).contains(&k) => k as u32,
                            (_, s) => return Err(DslError::syntax(s, "coordinate must be a positive integer")),
                        };
                        self.expect(&Tok::RParen)?;
                        let ident = Ident { name: prefix.to_string(), span };
                        return Ok(Expr::Coord(ident, k));
                    }
                }
                if self.families.contains(&name) {
                    return Err(DslError::syntax(
                        span,
                        format!("basis element {name} inside a coefficient expression"),
                    ));
                }
                if called && !self.names.contains(&name) {
                    if name == "d" {
                        return Err(DslError::syntax(span, "delta guard inside a coefficient expression"));
                    }
                    return Err(DslError::UnknownFamily { span, name });
                }
                self.bump();
                Ok(Expr::Var(Ident { name, span }))
            }
            _ => Err(self.unexpected("expression")),
        }
    }
}
