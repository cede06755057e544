use super::Span;
use crate::algebra::IndexDomain;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: &str) -> Self {
        Ident { name: name.to_string(), span: Span::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraAst {
    pub items: Vec<Item>,
}

impl AlgebraAst {
    pub fn name(&self) -> Option<&str> {
        self.items.iter().find_map(|it| match it {
            Item::Algebra(id) => Some(id.name.as_str()),
            _ => None,
        })
    }

    pub fn rank(&self) -> Option<i64> {
        self.items.iter().find_map(|it| match it {
            Item::Rank { value, .. } => Some(*value),
            _ => None,
        })
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.items.iter().filter_map(|it| match it {
            Item::Clause(c) => Some(c),
            _ => None,
        })
    }

    pub fn families(&self) -> impl Iterator<Item = &FamilyDecl> {
        self.items.iter().filter_map(|it| match it {
            Item::Family(f) => Some(f),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Algebra(Ident),
    Rank { value: i64, span: Span },
    Param { name: Ident, value: Option<Expr> },
    Family(FamilyDecl),
    Clause(Clause),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyShape {
    Graded,
    Indexed(IndexDomain),
    Central,
}

/// `family NAME shape [if cond and cond ...];`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDecl {
    pub name: Ident,
    pub shape: FamilyShape,
    pub conditions: Vec<Condition>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Comparison over parameters and `rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
    pub span: Span,
}

/// `[F a i, G b j] = terms;`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub left: Operand,
    pub right: Operand,
    pub terms: Vec<Term>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operand {
    pub family: Ident,
    pub degree: Ident,
    pub index: Option<Ident>,
}

/// `± coeff · d(..) · ... · target`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub negated: bool,
    pub coeff: Option<Expr>,
    pub guards: Vec<Guard>,
    pub target: Target,
    pub span: Span,
}

/// Kronecker delta `d(lhs = rhs)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guard {
    pub lhs: Expr,
    pub rhs: Expr,
    pub span: Span,
}

/// `F(deg)`, `F(deg; idx)` or a bare central `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub family: Ident,
    pub degree: Option<Expr>,
    pub index: Option<Expr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Var(Ident),
    /// `val(a)`
    Val(Ident),
    /// `a_(k)`, 1-based
    Coord(Ident, u32),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    /// Every identifier the expression mentions.
    pub fn idents(&self, out: &mut Vec<Ident>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) | Expr::Val(v) | Expr::Coord(v, _) => out.push(v.clone()),
            Expr::Neg(e) | Expr::Pow(e, _) => e.idents(out),
            Expr::Bin(_, l, r) => {
                l.idents(out);
                r.idents(out);
            }
        }
    }
}
