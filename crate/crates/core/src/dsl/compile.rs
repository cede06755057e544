use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ast::*;
use super::{DslError, Span};
use crate::algebra::{AlgebraError, AlgebraSpec, BasisSymbol, Family, FamilyId, LinComb};
use crate::exactnum::Scalar;
use crate::group::{GroupElement, GroupSpec};

pub const DEFAULT_SAMPLES: usize = 200;
const COORD_RANGE: i64 = 10;
const INDEX_RANGE: i64 = 10;
const RESERVED: [&str; 3] = ["d", "val", "rank"];

#[derive(Clone, Debug)]
pub struct CompileOptions {
    /// Values for `param` declarations; override defaults given in the file.
    pub bindings: BTreeMap<String, Scalar>,
    /// Group values ε_i; its rank overrides the file's `rank`. Defaults to ℤ
    /// for rank 1 and formal generators above.
    pub group: Option<GroupSpec>,
    /// Random bindings per clause for the antisymmetry and domain checks.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            bindings: BTreeMap::new(),
            group: None,
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

pub fn compile_str(text: &str, opts: &CompileOptions) -> Result<AlgebraSpec, DslError> {
    compile(&super::parse(text)?, opts)
}

// ---------------------------------------------------------------------------
// Lowered forms. Slot 0 is the left operand, slot 1 the right.

#[derive(Clone, Debug)]
enum SExpr {
    Const(Scalar),
    Val(usize),
    Coord(usize, u32),
    Idx(usize),
    Neg(Box<SExpr>),
    Bin(BinOp, Box<SExpr>, Box<SExpr>),
    Pow(Box<SExpr>, u32),
}

#[derive(Clone, Debug)]
enum GExpr {
    Zero,
    Slot(usize),
    Neg(Box<GExpr>),
    Add(Box<GExpr>, Box<GExpr>),
    Sub(Box<GExpr>, Box<GExpr>),
    Scale(i64, Box<GExpr>),
}

#[derive(Clone, Debug)]
enum IExpr {
    Const(i64),
    Idx(usize),
    Coord(usize, u32),
    Neg(Box<IExpr>),
    Bin(BinOp, Box<IExpr>, Box<IExpr>),
}

#[derive(Clone, Debug)]
enum CGuard {
    Group(GExpr, GExpr),
    Int(IExpr, IExpr),
    Scalar(SExpr, SExpr),
}

#[derive(Clone, Debug)]
struct CTerm {
    negated: bool,
    coeff: Option<SExpr>,
    guards: Vec<CGuard>,
    family: FamilyId,
    central: bool,
    degree: Option<GExpr>,
    index: Option<IExpr>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VarKind {
    Group(usize),
    Index(usize),
    Param,
}

struct Scope<'a> {
    vars: BTreeMap<&'a str, VarKind>,
    params: &'a BTreeMap<String, Scalar>,
    span: Span,
}

impl Scope<'_> {
    fn lookup(&self, v: &Ident) -> Result<VarKind, DslError> {
        if let Some(k) = self.vars.get(v.name.as_str()) {
            return Ok(*k);
        }
        if self.params.contains_key(&v.name) {
            return Ok(VarKind::Param);
        }
        Err(DslError::UnboundVariable { span: v.span, name: v.name.clone() })
    }

    fn group_slot(&self, v: &Ident) -> Result<usize, DslError> {
        match self.lookup(v)? {
            VarKind::Group(s) => Ok(s),
            _ => Err(self.type_err(format!("{} is not a degree variable", v.name))),
        }
    }

    fn type_err(&self, msg: String) -> DslError {
        DslError::Type { span: self.span, msg }
    }

    fn scalar(&self, e: &Expr) -> Result<SExpr, DslError> {
        Ok(match e {
            Expr::Int(n) => SExpr::Const(Scalar::from_int(*n)),
            Expr::Var(v) => match self.lookup(v)? {
                VarKind::Group(s) => SExpr::Val(s),
                VarKind::Index(s) => SExpr::Idx(s),
                VarKind::Param => SExpr::Const(self.params[&v.name].clone()),
            },
            Expr::Val(v) => SExpr::Val(self.group_slot(v)?),
            Expr::Coord(v, k) => SExpr::Coord(self.group_slot(v)?, *k),
            Expr::Neg(x) => SExpr::Neg(Box::new(self.scalar(x)?)),
            Expr::Bin(op, l, r) => SExpr::Bin(*op, Box::new(self.scalar(l)?), Box::new(self.scalar(r)?)),
            Expr::Pow(x, k) => SExpr::Pow(Box::new(self.scalar(x)?), *k),
        })
    }

    fn group(&self, e: &Expr) -> Result<GExpr, DslError> {
        let bad = || self.type_err(format!("not a degree expression: {}", super::pretty::expr(e)));
        Ok(match e {
            Expr::Int(0) => GExpr::Zero,
            Expr::Var(v) => GExpr::Slot(self.group_slot(v).map_err(|err| match err {
                DslError::Type { .. } => bad(),
                other => other,
            })?),
            Expr::Neg(x) => GExpr::Neg(Box::new(self.group(x)?)),
            Expr::Bin(BinOp::Add, l, r) => GExpr::Add(Box::new(self.group(l)?), Box::new(self.group(r)?)),
            Expr::Bin(BinOp::Sub, l, r) => GExpr::Sub(Box::new(self.group(l)?), Box::new(self.group(r)?)),
            Expr::Bin(BinOp::Mul, l, r) => match (int_literal(l), int_literal(r)) {
                (Some(k), None) => GExpr::Scale(k, Box::new(self.group(r)?)),
                (None, Some(k)) => GExpr::Scale(k, Box::new(self.group(l)?)),
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        })
    }

    fn index(&self, e: &Expr) -> Result<IExpr, DslError> {
        let bad = || self.type_err(format!("not an integer expression: {}", super::pretty::expr(e)));
        Ok(match e {
            Expr::Int(n) => IExpr::Const(*n),
            Expr::Var(v) => match self.lookup(v)? {
                VarKind::Index(s) => IExpr::Idx(s),
                _ => return Err(bad()),
            },
            Expr::Coord(v, k) => IExpr::Coord(self.group_slot(v)?, *k),
            Expr::Neg(x) => IExpr::Neg(Box::new(self.index(x)?)),
            Expr::Bin(op @ (BinOp::Add | BinOp::Sub | BinOp::Mul), l, r) => {
                IExpr::Bin(*op, Box::new(self.index(l)?), Box::new(self.index(r)?))
            }
            _ => return Err(bad()),
        })
    }

    fn mentions(&self, e: &Expr, pred: impl Fn(VarKind) -> bool) -> bool {
        let mut ids = Vec::new();
        e.idents(&mut ids);
        ids.iter().any(|v| self.vars.get(v.name.as_str()).is_some_and(|k| pred(*k)))
    }

    fn guard(&self, g: &Guard) -> Result<CGuard, DslError> {
        let is_group = |e: &Expr| {
            self.mentions(e, |k| matches!(k, VarKind::Group(_)))
                && !matches!(e, Expr::Val(_) | Expr::Coord(..))
                && self.group(e).is_ok()
        };
        if is_group(&g.lhs) || is_group(&g.rhs) {
            return Ok(CGuard::Group(self.group(&g.lhs)?, self.group(&g.rhs)?));
        }
        if let (Ok(l), Ok(r)) = (self.index(&g.lhs), self.index(&g.rhs)) {
            return Ok(CGuard::Int(l, r));
        }
        Ok(CGuard::Scalar(self.scalar(&g.lhs)?, self.scalar(&g.rhs)?))
    }
}

fn int_literal(e: &Expr) -> Option<i64> {
    match e {
        Expr::Int(n) => Some(*n),
        Expr::Neg(x) => int_literal(x).map(|n| -n),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Evaluation

struct Binding<'a> {
    deg: [&'a GroupElement; 2],
    idx: [i64; 2],
}

fn eval_s(e: &SExpr, alg: &AlgebraSpec, b: &Binding) -> Result<Scalar, String> {
    Ok(match e {
        SExpr::Const(c) => c.clone(),
        SExpr::Val(s) => alg.group().value(b.deg[*s]).map_err(|e| e.to_string())?,
        SExpr::Coord(s, k) => Scalar::from_int(coord(b.deg[*s], *k)?),
        SExpr::Idx(s) => Scalar::from_int(b.idx[*s]),
        SExpr::Neg(x) => -eval_s(x, alg, b)?,
        SExpr::Pow(x, k) => eval_s(x, alg, b)?.pow(*k),
        SExpr::Bin(op, l, r) => {
            let (l, r) = (eval_s(l, alg, b)?, eval_s(r, alg, b)?);
            match op {
                BinOp::Add => &l + &r,
                BinOp::Sub => &l - &r,
                BinOp::Mul => &l * &r,
                BinOp::Div => l.checked_div(&r).map_err(|e| e.to_string())?,
            }
        }
    })
}

fn coord(g: &GroupElement, k: u32) -> Result<i64, String> {
    g.coordinate(k as usize).map_err(|e| e.to_string())
}

fn eval_g(e: &GExpr, rank: usize, b: &Binding) -> GroupElement {
    match e {
        GExpr::Zero => GroupElement::zero(rank),
        GExpr::Slot(s) => b.deg[*s].clone(),
        GExpr::Neg(x) => eval_g(x, rank, b).gneg(),
        GExpr::Add(l, r) => &eval_g(l, rank, b) + &eval_g(r, rank, b),
        GExpr::Sub(l, r) => &eval_g(l, rank, b) - &eval_g(r, rank, b),
        GExpr::Scale(k, x) => eval_g(x, rank, b).scale(*k),
    }
}

fn eval_i(e: &IExpr, b: &Binding) -> Result<i64, String> {
    let overflow = || "integer overflow".to_string();
    Ok(match e {
        IExpr::Const(n) => *n,
        IExpr::Idx(s) => b.idx[*s],
        IExpr::Coord(s, k) => coord(b.deg[*s], *k)?,
        IExpr::Neg(x) => eval_i(x, b)?.checked_neg().ok_or_else(overflow)?,
        IExpr::Bin(op, l, r) => {
            let (l, r) = (eval_i(l, b)?, eval_i(r, b)?);
            match op {
                BinOp::Add => l.checked_add(r),
                BinOp::Sub => l.checked_sub(r),
                BinOp::Mul => l.checked_mul(r),
                BinOp::Div => None,
            }
            .ok_or_else(overflow)?
        }
    })
}

fn eval_terms(terms: &[CTerm], alg: &AlgebraSpec, x: &BasisSymbol, y: &BasisSymbol) -> Result<LinComb, String> {
    let b = Binding { deg: [&x.degree, &y.degree], idx: [x.idx(), y.idx()] };
    let rank = alg.rank();
    let mut out = LinComb::zero();
    'terms: for t in terms {
        for g in &t.guards {
            let holds = match g {
                CGuard::Group(l, r) => eval_g(l, rank, &b) == eval_g(r, rank, &b),
                CGuard::Int(l, r) => eval_i(l, &b)? == eval_i(r, &b)?,
                CGuard::Scalar(l, r) => eval_s(l, alg, &b)? == eval_s(r, alg, &b)?,
            };
            if !holds {
                continue 'terms;
            }
        }
        let mut c = match &t.coeff {
            Some(e) => eval_s(e, alg, &b)?,
            None => Scalar::one(),
        };
        if c.is_zero() {
            continue;
        }
        if t.negated {
            c = -c;
        }
        let sym = if t.central {
            BasisSymbol::central(t.family, rank)
        } else {
            let deg = eval_g(t.degree.as_ref().expect("checked shape"), rank, &b);
            let idx = t.index.as_ref().map(|i| eval_i(i, &b)).transpose()?;
            BasisSymbol::new(t.family, deg, idx)
        };
        out.add_term(sym, c);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Checking

struct Decls<'a> {
    families: BTreeMap<&'a str, (&'a FamilyDecl, Option<FamilyId>)>,
}

fn clause_scope<'a>(c: &'a Clause, params: &'a BTreeMap<String, Scalar>, decls: &Decls) -> Result<Scope<'a>, DslError> {
    let mut vars = BTreeMap::new();
    for (slot, op) in [&c.left, &c.right].into_iter().enumerate() {
        let Some((decl, _)) = decls.families.get(op.family.name.as_str()) else {
            return Err(DslError::UnknownFamily { span: op.family.span, name: op.family.name.clone() });
        };
        let type_err = |msg: String| DslError::Type { span: op.family.span, msg };
        match (decl.shape, &op.index) {
            (FamilyShape::Central, _) => {
                return Err(type_err(format!("central {} cannot appear in a clause", op.family.name)))
            }
            (FamilyShape::Graded, Some(_)) => {
                return Err(type_err(format!("{} takes no index variable", op.family.name)))
            }
            (FamilyShape::Indexed(_), None) => {
                return Err(type_err(format!("{} needs an index variable", op.family.name)))
            }
            _ => {}
        }
        let mut bind = |v: &'a Ident, kind| {
            if RESERVED.contains(&v.name.as_str()) || decls.families.contains_key(v.name.as_str()) {
                return Err(DslError::Type { span: v.span, msg: format!("{} cannot name a variable", v.name) });
            }
            if vars.insert(v.name.as_str(), kind).is_some() {
                return Err(DslError::Type { span: v.span, msg: format!("variable {} bound twice", v.name) });
            }
            Ok(())
        };
        bind(&op.degree, VarKind::Group(slot))?;
        if let Some(i) = &op.index {
            bind(i, VarKind::Index(slot))?;
        }
    }
    Ok(Scope { vars, params, span: c.span })
}

fn lower_term(t: &Term, scope: &Scope, decls: &Decls) -> Result<Option<CTerm>, DslError> {
    let tg = &t.target;
    let Some((decl, id)) = decls.families.get(tg.family.name.as_str()) else {
        return Err(DslError::UnknownFamily { span: tg.family.span, name: tg.family.name.clone() });
    };
    let shape_err = |msg: &str| DslError::Type { span: tg.family.span, msg: format!("{}: {msg}", tg.family.name) };
    let scope = Scope { vars: scope.vars.clone(), params: scope.params, span: t.span };
    let (degree, index) = match (decl.shape, &tg.degree, &tg.index) {
        (FamilyShape::Central, None, None) => (None, None),
        (FamilyShape::Central, _, _) => return Err(shape_err("central element takes no arguments")),
        (FamilyShape::Graded, Some(d), None) => (Some(scope.group(d)?), None),
        (FamilyShape::Graded, _, _) => return Err(shape_err("expected a degree argument only")),
        (FamilyShape::Indexed(_), Some(d), Some(i)) => (Some(scope.group(d)?), Some(scope.index(i)?)),
        (FamilyShape::Indexed(_), _, _) => return Err(shape_err("expected degree and index arguments")),
    };
    let coeff = t.coeff.as_ref().map(|c| scope.scalar(c)).transpose()?;
    let guards = t.guards.iter().map(|g| scope.guard(g)).collect::<Result<Vec<_>, _>>()?;
    Ok(id.map(|family| CTerm {
        negated: t.negated,
        coeff,
        guards,
        family,
        central: decl.shape == FamilyShape::Central,
        degree,
        index,
    }))
}

fn eval_condition(c: &Condition, params: &BTreeMap<String, Scalar>, rank: i64) -> Result<bool, DslError> {
    let mut env = params.clone();
    env.insert("rank".into(), Scalar::from_int(rank));
    let scope = Scope { vars: BTreeMap::new(), params: &env, span: c.span };
    let dummy = GroupElement::zero(1);
    let b = Binding { deg: [&dummy, &dummy], idx: [0, 0] };
    let alg = AlgebraSpec::new("condition", GroupSpec::integers());
    let ev = |e: &Expr| {
        eval_s(&scope.scalar(e)?, &alg, &b).map_err(|msg| DslError::Type { span: c.span, msg })
    };
    let (l, r) = (ev(&c.lhs)?, ev(&c.rhs)?);
    Ok(match c.op {
        CmpOp::Eq => l == r,
        CmpOp::Ne => l != r,
        op => {
            let (Some(l), Some(r)) = (l.as_rational(), r.as_rational()) else {
                return Err(DslError::Type {
                    span: c.span,
                    msg: format!("cannot order non-rational values {l} and {r}"),
                });
            };
            match op {
                CmpOp::Lt => l < r,
                CmpOp::Le => l <= r,
                CmpOp::Gt => l > r,
                _ => l >= r,
            }
        }
    })
}

/// Names, shapes and references, without binding parameters.
pub fn check(ast: &AlgebraAst) -> Result<(), DslError> {
    resolve(ast, None).map(|_| ())
}

struct Resolved {
    params: BTreeMap<String, Scalar>,
    rank: usize,
    families: Vec<(String, Family)>,
    clauses: Vec<(FamilyId, FamilyId, Vec<CTerm>, Span, bool)>,
}

/// Walks the items in order. With `env = None` only names and shapes are
/// checked: parameters stand in as zero and every family counts as present.
fn resolve(ast: &AlgebraAst, env: Option<&CompileOptions>) -> Result<Resolved, DslError> {
    let forced = env.and_then(|o| o.group.as_ref()).map(|g| g.rank() as i64);
    let mut rank: Option<i64> = None;
    let mut params: BTreeMap<String, Scalar> = BTreeMap::new();
    let mut decls = Decls { families: BTreeMap::new() };
    let mut families = Vec::new();
    let mut clause_keys: BTreeSet<(String, String)> = BTreeSet::new();
    let mut clauses = Vec::new();
    for item in &ast.items {
        match item {
            Item::Algebra(_) => {}
            Item::Rank { value, span } => {
                if rank.is_some() {
                    return Err(DslError::syntax(*span, "rank given twice"));
                }
                if *value < 1 || *value > 64 {
                    return Err(DslError::syntax(*span, "rank must be in 1..=64"));
                }
                rank = Some(forced.unwrap_or(*value));
            }
            Item::Param { name, value } => {
                if RESERVED.contains(&name.name.as_str()) || decls.families.contains_key(name.name.as_str()) {
                    return Err(DslError::Type { span: name.span, msg: format!("{} cannot name a parameter", name.name) });
                }
                if params.contains_key(&name.name) {
                    return Err(DslError::DuplicateParam { span: name.span, name: name.name.clone() });
                }
                let scope = Scope { vars: BTreeMap::new(), params: &params, span: name.span };
                let default = value.as_ref().map(|v| scope.scalar(v)).transpose()?;
                let bound = match env {
                    None => Some(Scalar::zero()),
                    Some(opts) => match opts.bindings.get(&name.name) {
                        Some(v) => Some(v.clone()),
                        None => match default {
                            Some(d) => {
                                let dummy = GroupElement::zero(1);
                                let b = Binding { deg: [&dummy, &dummy], idx: [0, 0] };
                                let alg = AlgebraSpec::new("param", GroupSpec::integers());
                                Some(eval_s(&d, &alg, &b).map_err(|msg| DslError::Type { span: name.span, msg })?)
                            }
                            None => None,
                        },
                    },
                };
                let value = bound.ok_or_else(|| DslError::UnboundParameter { span: name.span, name: name.name.clone() })?;
                params.insert(name.name.clone(), value);
            }
            Item::Family(f) => {
                if RESERVED.contains(&f.name.name.as_str()) || params.contains_key(&f.name.name) {
                    return Err(DslError::Type { span: f.name.span, msg: format!("{} cannot name a family", f.name.name) });
                }
                if decls.families.contains_key(f.name.name.as_str()) {
                    return Err(DslError::DuplicateFamily { span: f.name.span, name: f.name.name.clone() });
                }
                let r = rank.or(forced).unwrap_or(1);
                let mut present = true;
                for c in &f.conditions {
                    let ok = eval_condition(c, &params, r)?;
                    present &= ok || env.is_none();
                }
                let id = if present {
                    families.push((
                        f.name.name.clone(),
                        match f.shape {
                            FamilyShape::Graded => Family::graded(&f.name.name),
                            FamilyShape::Indexed(d) => Family::indexed(&f.name.name, d),
                            FamilyShape::Central => Family::central(&f.name.name),
                        },
                    ));
                    Some(FamilyId(families.len() as u16 - 1))
                } else {
                    None
                };
                decls.families.insert(f.name.name.as_str(), (f, id));
            }
            Item::Clause(c) => {
                let scope = clause_scope(c, &params, &decls)?;
                let (l, r) = (c.left.family.name.clone(), c.right.family.name.clone());
                if !clause_keys.insert((l.clone(), r.clone())) || clause_keys.contains(&(r.clone(), l.clone())) && l != r {
                    return Err(DslError::DuplicateClause { span: c.span, left: l, right: r });
                }
                let mut terms = Vec::new();
                for t in &c.terms {
                    if let Some(ct) = lower_term(t, &scope, &decls)? {
                        terms.push(ct);
                    }
                }
                let lid = decls.families[c.left.family.name.as_str()].1;
                let rid = decls.families[c.right.family.name.as_str()].1;
                if let (Some(lid), Some(rid)) = (lid, rid) {
                    clauses.push((lid, rid, terms, c.span, lid == rid));
                }
            }
        }
    }
    Ok(Resolved { params, rank: rank.or(forced).unwrap_or(1) as usize, families, clauses })
}

// ---------------------------------------------------------------------------
// Compilation

pub fn compile(ast: &AlgebraAst, opts: &CompileOptions) -> Result<AlgebraSpec, DslError> {
    let declared: BTreeSet<&str> = ast
        .items
        .iter()
        .filter_map(|it| match it {
            Item::Param { name, .. } => Some(name.name.as_str()),
            _ => None,
        })
        .collect();
    if let Some(name) = opts.bindings.keys().find(|k| !declared.contains(k.as_str())) {
        return Err(DslError::UnknownParameter { span: Span::default(), name: name.clone() });
    }
    check(ast)?;
    let res = resolve(ast, Some(opts))?;
    let group = match &opts.group {
        Some(g) => g.clone(),
        None => GroupSpec::formal(res.rank).map_err(|e| DslError::Algebra { span: Span::default(), msg: e.to_string() })?,
    };
    let mut alg = AlgebraSpec::new(ast.name().unwrap_or("custom"), group);
    for (name, v) in &res.params {
        alg.set_param(name, v.clone());
    }
    for (_, fam) in &res.families {
        alg.add_family(fam.clone()).map_err(|e| DslError::Algebra { span: Span::default(), msg: e.to_string() })?;
    }
    let mut compiled = Vec::new();
    for (l, r, terms, span, _) in &res.clauses {
        let terms = Arc::new(terms.clone());
        let t2 = terms.clone();
        alg.add_rule(
            *l,
            *r,
            Arc::new(move |alg: &AlgebraSpec, x: &BasisSymbol, y: &BasisSymbol| {
                eval_terms(&t2, alg, x, y).map_err(AlgebraError::Rule)
            }),
        );
        compiled.push((*l, *r, terms, *span));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (l, r, terms, span) in &compiled {
        for _ in 0..opts.samples {
            let x = sample(&alg, *l, &mut rng);
            let y = sample(&alg, *r, &mut rng);
            sample_check(&alg, terms, &x, &y, l == r, *span)?;
        }
    }
    Ok(alg)
}

fn sample(alg: &AlgebraSpec, f: FamilyId, rng: &mut ChaCha8Rng) -> BasisSymbol {
    let coords: Vec<i64> = (0..alg.rank()).map(|_| rng.gen_range(-COORD_RANGE..=COORD_RANGE)).collect();
    let index = alg.family(f).index_domain().map(|_| rng.gen_range(0..=INDEX_RANGE));
    BasisSymbol::new(f, GroupElement::new(&coords), index)
}

fn sample_check(
    alg: &AlgebraSpec,
    terms: &[CTerm],
    x: &BasisSymbol,
    y: &BasisSymbol,
    self_clause: bool,
    span: Span,
) -> Result<(), DslError> {
    let binding = || format!("x = {}, y = {}", alg.format_symbol(x), alg.format_symbol(y));
    let eval = |u: &BasisSymbol, v: &BasisSymbol| {
        let out = eval_terms(terms, alg, u, v).map_err(|msg| DslError::Eval { span, binding: binding(), msg })?;
        let deg = &u.degree + &v.degree;
        for (s, _) in &out {
            if let Err(e) = alg.validate(s) {
                return Err(match e {
                    AlgebraError::IndexDomainViolation { detail, .. } => DslError::IndexDomainViolation {
                        span,
                        binding: binding(),
                        detail: format!("{detail} in {}", alg.format_symbol(s)),
                    },
                    other => DslError::Eval { span, binding: binding(), msg: other.to_string() },
                });
            }
            let graded_ok = if alg.is_central(s) { deg.is_zero() } else { s.degree == deg };
            if !graded_ok {
                return Err(DslError::GradingViolation { span, binding: binding(), symbol: alg.format_symbol(s) });
            }
        }
        Ok(out)
    };
    let xy = eval(x, y)?;
    if self_clause {
        let sum = xy.add(&eval(y, x)?);
        if !sum.is_zero() {
            return Err(DslError::AntisymmetryViolation { span, binding: binding(), sum: alg.format_lincomb(&sum) });
        }
    }
    Ok(())
}
