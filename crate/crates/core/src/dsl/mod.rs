//! Text format for algebra definitions (`.liealg`).
//!
//! ```text
//! algebra witt;
//! family L graded;
//! [L a, L b] = (b - a) L(a + b);
//! ```
//!
//! See `docs/liealg.md` for the grammar.

mod ast;
mod compile;
mod lexer;
mod parser;
mod pretty;

pub use ast::{
    AlgebraAst, BinOp, Clause, CmpOp, Condition, Expr, FamilyDecl, FamilyShape, Guard, Ident,
    Item, Operand, Target, Term,
};
pub use compile::{check, compile, compile_str, CompileOptions, DEFAULT_SAMPLES};
pub use parser::parse;
pub use pretty::pretty;

use std::fmt;

use thiserror::Error;

/// Source position. Spans never take part in equality, so two ASTs parsed
/// from differently formatted text compare equal when their structure does.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{span}: syntax error: {msg}")]
    Syntax { span: Span, msg: String },
    #[error("{span}: unknown family {name:?}")]
    UnknownFamily { span: Span, name: String },
    #[error("{span}: unbound variable {name:?}")]
    UnboundVariable { span: Span, name: String },
    #[error("{span}: duplicate family {name:?}")]
    DuplicateFamily { span: Span, name: String },
    #[error("{span}: duplicate parameter {name:?}")]
    DuplicateParam { span: Span, name: String },
    #[error("{span}: second clause for [{left}, {right}]")]
    DuplicateClause { span: Span, left: String, right: String },
    #[error("{span}: {msg}")]
    Type { span: Span, msg: String },
    #[error("{span}: parameter {name:?} has no value")]
    UnboundParameter { span: Span, name: String },
    #[error("binding for undeclared parameter {name:?}")]
    UnknownParameter { span: Span, name: String },
    #[error("{span}: clause is not antisymmetric at {binding}: rule(x,y) + rule(y,x) = {sum}")]
    AntisymmetryViolation { span: Span, binding: String, sum: String },
    #[error("{span}: index domain violation at {binding}: {detail}")]
    IndexDomainViolation { span: Span, binding: String, detail: String },
    #[error("{span}: grading violation at {binding}: produced {symbol}")]
    GradingViolation { span: Span, binding: String, symbol: String },
    #[error("{span}: evaluation failed at {binding}: {msg}")]
    Eval { span: Span, binding: String, msg: String },
    #[error("{span}: {msg}")]
    Algebra { span: Span, msg: String },
}

impl DslError {
    pub(crate) fn syntax(span: Span, msg: impl Into<String>) -> Self {
        DslError::Syntax { span, msg: msg.into() }
    }

    pub fn span(&self) -> Span {
        match self {
            DslError::Syntax { span, .. }
            | DslError::UnknownFamily { span, .. }
            | DslError::UnboundVariable { span, .. }
            | DslError::DuplicateFamily { span, .. }
            | DslError::DuplicateParam { span, .. }
            | DslError::DuplicateClause { span, .. }
            | DslError::Type { span, .. }
            | DslError::UnboundParameter { span, .. }
            | DslError::UnknownParameter { span, .. }
            | DslError::AntisymmetryViolation { span, .. }
            | DslError::IndexDomainViolation { span, .. }
            | DslError::GradingViolation { span, .. }
            | DslError::Eval { span, .. }
            | DslError::Algebra { span, .. } => *span,
        }
    }

    /// Short variant name, used by the CLI's JSON diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            DslError::Syntax { .. } => "Syntax",
            DslError::UnknownFamily { .. } => "UnknownFamily",
            DslError::UnboundVariable { .. } => "UnboundVariable",
            DslError::DuplicateFamily { .. } => "DuplicateFamily",
            DslError::DuplicateParam { .. } => "DuplicateParam",
            DslError::DuplicateClause { .. } => "DuplicateClause",
            DslError::Type { .. } => "Type",
            DslError::UnboundParameter { .. } => "UnboundParameter",
            DslError::UnknownParameter { .. } => "UnknownParameter",
            DslError::AntisymmetryViolation { .. } => "AntisymmetryViolation",
            DslError::IndexDomainViolation { .. } => "IndexDomainViolation",
            DslError::GradingViolation { .. } => "GradingViolation",
            DslError::Eval { .. } => "Eval",
            DslError::Algebra { .. } => "Algebra",
        }
    }
}
