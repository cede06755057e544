use std::fmt::Write;

use super::ast::*;

/// Canonical source text. Parsing the output yields an AST equal to the input.
pub fn pretty(ast: &AlgebraAst) -> String {
    let mut out = String::new();
    for item in &ast.items {
        match item {
            Item::Algebra(name) => writeln!(out, "algebra {};", name.name),
            Item::Rank { value, .. } => writeln!(out, "rank {value};"),
            Item::Param { name, value: None } => writeln!(out, "param {};", name.name),
            Item::Param { name, value: Some(v) } => {
                writeln!(out, "param {} = {};", name.name, expr(v))
            }
            Item::Family(f) => {
                let shape = match f.shape {
                    FamilyShape::Graded => "graded".to_string(),
                    FamilyShape::Central => "central".to_string(),
                    FamilyShape::Indexed(d) => format!("indexed {d}"),
                };
                write!(out, "family {} {shape}", f.name.name).unwrap();
                for (k, c) in f.conditions.iter().enumerate() {
                    let kw = if k == 0 { "if" } else { "and" };
                    write!(out, " {kw} {} {} {}", expr(&c.lhs), c.op.symbol(), expr(&c.rhs)).unwrap();
                }
                writeln!(out, ";")
            }
            Item::Clause(c) => writeln!(out, "{}", clause(c)),
        }
        .unwrap();
    }
    out
}

pub fn clause(c: &Clause) -> String {
    let mut s = format!("[{}, {}] = ", operand(&c.left), operand(&c.right));
    if c.terms.is_empty() {
        s.push('0');
    }
    for (k, t) in c.terms.iter().enumerate() {
        match (k, t.negated) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&term(t));
    }
    s.push(';');
    s
}

fn operand(o: &Operand) -> String {
    match &o.index {
        Some(i) => format!("{} {} {}", o.family.name, o.degree.name, i.name),
        None => format!("{} {}", o.family.name, o.degree.name),
    }
}

fn term(t: &Term) -> String {
    let mut parts = Vec::new();
    if let Some(c) = &t.coeff {
        let s = expr_at(c, PROD);
        parts.push(if s.starts_with('-') { format!("({s})") } else { s });
    }
    for g in &t.guards {
        parts.push(format!("d({} = {})", expr(&g.lhs), expr(&g.rhs)));
    }
    let tg = &t.target;
    parts.push(match (&tg.degree, &tg.index) {
        (None, _) => tg.family.name.clone(),
        (Some(d), None) => format!("{}({})", tg.family.name, expr(d)),
        (Some(d), Some(i)) => format!("{}({}; {})", tg.family.name, expr(d), expr(i)),
    });
    parts.join(" * ")
}

const SUM: u8 = 1;
const PROD: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

pub fn expr(e: &Expr) -> String {
    expr_at(e, SUM)
}

fn expr_at(e: &Expr, ctx: u8) -> String {
    let (prec, s) = match e {
        Expr::Int(n) if *n < 0 => (UNARY, n.to_string()),
        Expr::Int(n) => (ATOM, n.to_string()),
        Expr::Var(v) => (ATOM, v.name.clone()),
        Expr::Val(v) => (ATOM, format!("val({})", v.name)),
        Expr::Coord(v, k) => (ATOM, format!("{}_({k})", v.name)),
        Expr::Neg(x) => (UNARY, format!("-{}", expr_at(x, UNARY))),
        Expr::Pow(x, k) => (4, format!("{}^{k}", expr_at(x, ATOM))),
        Expr::Bin(op, l, r) => {
            let (p, sym) = match op {
                BinOp::Add => (SUM, "+"),
                BinOp::Sub => (SUM, "-"),
                BinOp::Mul => (PROD, "*"),
                BinOp::Div => (PROD, "/"),
            };
            (p, format!("{} {sym} {}", expr_at(l, p), expr_at(r, p + 1)))
        }
    };
    if prec < ctx {
        format!("({s})")
    } else {
        s
    }
}
