//! Transposed Poisson products and their law checks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraSpec, BasisSymbol, FamilyId, IndexDomain, LinComb};
use crate::derivations::{verify_map, DerivError, FnMap, MapReport};
use crate::exactnum::Scalar;
use crate::group::GroupElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TpError {
    #[error("product does not fit algebra {algebra}: {detail}")]
    Binding { algebra: String, detail: String },
    #[error("invalid product: {0}")]
    Invalid(String),
    #[error("malformed product file: {0}")]
    File(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Deriv(#[from] DerivError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductKind {
    /// `L_{α,i}·L_{β,j} = Σ a^{d,k} L_{d+α+β, k+i+j+1}`, zero on centrals.
    WHat { l: FamilyId, coeffs: BTreeMap<(GroupElement, i64), Scalar> },
    /// `I_0·I_0 = β C_L`, every other product zero.
    GMinus1 { i0: BasisSymbol, cl: BasisSymbol, beta: Scalar },
    /// Finite table; products of domain symbols missing from the table are
    /// zero, products leaving the domain are undefined.
    Tabulated { domain: BTreeSet<BasisSymbol>, table: BTreeMap<(BasisSymbol, BasisSymbol), LinComb> },
    Zero,
}

/// A commutative product bound to one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpec {
    kind: ProductKind,
}

fn binding(alg: &AlgebraSpec, detail: impl Into<String>) -> TpError {
    TpError::Binding { algebra: alg.name().to_string(), detail: detail.into() }
}

impl ProductSpec {
    /// Requires a family `L` indexed by ℤ₊ and `k ≥ 0` on every key.
    pub fn w_hat(alg: &AlgebraSpec, coeffs: BTreeMap<(GroupElement, i64), Scalar>) -> Result<Self, TpError> {
        let l = alg.family_id("L").ok_or_else(|| binding(alg, "no family L"))?;
        if alg.family(l).index_domain() != Some(IndexDomain::Nat) {
            return Err(binding(alg, "family L is not indexed by nonnegative integers"));
        }
        for (d, k) in coeffs.keys() {
            if *k < 0 {
                return Err(TpError::Invalid(format!("coefficient key ({d}, {k}) has negative k")));
            }
            if d.rank() != alg.rank() {
                return Err(binding(alg, format!("degree {d} has the wrong rank")));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(ProductSpec { kind: ProductKind::WHat { l, coeffs } })
    }

    /// Requires the λ = −1 algebra with families `I` and `C_L`.
    pub fn g_minus1(alg: &AlgebraSpec, beta: Scalar) -> Result<Self, TpError> {
        if alg.param("lambda") != Some(&Scalar::from_int(-1)) {
            return Err(binding(alg, "needs lambda = -1"));
        }
        let i = alg.family_id("I").ok_or_else(|| binding(alg, "no family I"))?;
        let i0 = BasisSymbol::graded(i, GroupElement::zero(alg.rank()));
        let cl = alg.central("C_L").map_err(|_| binding(alg, "no central C_L"))?;
        Ok(ProductSpec { kind: ProductKind::GMinus1 { i0, cl, beta } })
    }

    /// Every key must appear with its swap; values are taken as given.
    pub fn tabulated(
        domain: impl IntoIterator<Item = BasisSymbol>,
        table: BTreeMap<(BasisSymbol, BasisSymbol), LinComb>,
    ) -> Result<Self, TpError> {
        let mut domain: BTreeSet<BasisSymbol> = domain.into_iter().collect();
        for (x, y) in table.keys() {
            if !table.contains_key(&(y.clone(), x.clone())) {
                return Err(TpError::Invalid(format!("table has ({x:?}, {y:?}) but not its swap")));
            }
            domain.insert(x.clone());
            domain.insert(y.clone());
        }
        Ok(ProductSpec { kind: ProductKind::Tabulated { domain, table } })
    }

    pub fn zero() -> Self {
        ProductSpec { kind: ProductKind::Zero }
    }

    pub fn kind(&self) -> &ProductKind {
        &self.kind
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            ProductKind::WHat { coeffs, .. } => coeffs.is_empty(),
            ProductKind::GMinus1 { beta, .. } => beta.is_zero(),
            ProductKind::Tabulated { table, .. } => table.values().all(LinComb::is_zero),
            ProductKind::Zero => true,
        }
    }

    /// `x·y`, or `None` where a tabulated product is undefined.
    pub fn product(&self, x: &BasisSymbol, y: &BasisSymbol) -> Option<LinComb> {
        match &self.kind {
            ProductKind::WHat { l, coeffs } => {
                let mut out = LinComb::zero();
                if x.family == *l && y.family == *l {
                    let base = &x.degree + &y.degree;
                    for ((d, k), c) in coeffs {
                        out.add_term(BasisSymbol::indexed(*l, &base + d, k + x.idx() + y.idx() + 1), c.clone());
                    }
                }
                Some(out)
            }
            ProductKind::GMinus1 { i0, cl, beta } => Some(if x == i0 && y == i0 {
                LinComb::single(cl.clone(), beta.clone())
            } else {
                LinComb::zero()
            }),
            ProductKind::Tabulated { domain, table } => {
                if !domain.contains(x) || !domain.contains(y) {
                    return None;
                }
                Some(table.get(&(x.clone(), y.clone())).cloned().unwrap_or_default())
            }
            ProductKind::Zero => Some(LinComb::zero()),
        }
    }

    pub fn product_lin(&self, u: &LinComb, v: &LinComb) -> Option<LinComb> {
        let mut out = LinComb::zero();
        for (x, a) in u {
            for (y, b) in v {
                out.add_scaled(&self.product(x, y)?, &(a * b));
            }
        }
        Some(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawWitness {
    pub args: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub law: String,
    pub checks: usize,
    /// Instances whose evaluation left a tabulated product's domain.
    pub skipped: usize,
    pub failures: Vec<LawWitness>,
}

impl VerifyReport {
    fn new(law: &str) -> Self {
        VerifyReport { law: law.to_string(), checks: 0, skipped: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, alg: &AlgebraSpec, args: &[&BasisSymbol], sides: Option<(LinComb, LinComb)>) {
        match sides {
            None => self.skipped += 1,
            Some((l, r)) => {
                self.checks += 1;
                if l != r {
                    self.failures.push(LawWitness {
                        args: args.iter().map(|s| alg.format_symbol(s)).collect(),
                        lhs: alg.format_lincomb(&l),
                        rhs: alg.format_lincomb(&r),
                    });
                }
            }
        }
    }
}

fn basis(s: &BasisSymbol) -> LinComb {
    LinComb::basis(s.clone())
}

fn br(alg: &AlgebraSpec, u: &LinComb, v: &LinComb) -> Result<LinComb, TpError> {
    Ok(alg.bracket_lin(u, v)?)
}

/// `x·y = y·x`.
pub fn verify_commutative(
    alg: &AlgebraSpec,
    p: &ProductSpec,
    pairs: &[(BasisSymbol, BasisSymbol)],
) -> VerifyReport {
    let mut r = VerifyReport::new("commutative");
    for (x, y) in pairs {
        let sides = p.product(x, y).zip(p.product(y, x));
        r.record(alg, &[x, y], sides);
    }
    r
}

/// `(x·y)·z = x·(y·z)`.
pub fn verify_associative(
    alg: &AlgebraSpec,
    p: &ProductSpec,
    triples: &[(BasisSymbol, BasisSymbol, BasisSymbol)],
) -> VerifyReport {
    let mut r = VerifyReport::new("associative");
    for (x, y, z) in triples {
        let lhs = p.product(x, y).and_then(|xy| p.product_lin(&xy, &basis(z)));
        let rhs = p.product(y, z).and_then(|yz| p.product_lin(&basis(x), &yz));
        r.record(alg, &[x, y, z], lhs.zip(rhs));
    }
    r
}

/// `2z·[x,y] = [z·x, y] + [x, z·y]`, triples read as `(x, y, z)`.
pub fn verify_tp_compat(
    alg: &AlgebraSpec,
    p: &ProductSpec,
    triples: &[(BasisSymbol, BasisSymbol, BasisSymbol)],
) -> Result<VerifyReport, TpError> {
    let mut r = VerifyReport::new("tp_compat");
    let two = Scalar::from_int(2);
    for (x, y, z) in triples {
        let (bx, by, bz) = (basis(x), basis(y), basis(z));
        let xy = br(alg, &bx, &by)?;
        let sides = match (p.product_lin(&bz, &xy), p.product(z, x), p.product(z, y)) {
            (Some(l), Some(zx), Some(zy)) => Some((l.scale(&two), br(alg, &zx, &by)?.add(&br(alg, &bx, &zy)?))),
            _ => None,
        };
        r.record(alg, &[x, y, z], sides);
    }
    Ok(r)
}

/// `[x, y·z] = [x,y]·z + y·[x,z]`.
pub fn verify_poisson_leibniz(
    alg: &AlgebraSpec,
    p: &ProductSpec,
    triples: &[(BasisSymbol, BasisSymbol, BasisSymbol)],
) -> Result<VerifyReport, TpError> {
    let mut r = VerifyReport::new("poisson_leibniz");
    for (x, y, z) in triples {
        let (bx, by, bz) = (basis(x), basis(y), basis(z));
        let (xy, xz) = (br(alg, &bx, &by)?, br(alg, &bx, &bz)?);
        let sides = match (p.product(y, z), p.product_lin(&xy, &bz), p.product_lin(&by, &xz)) {
            (Some(yz), Some(a), Some(b)) => Some((br(alg, &bx, &yz)?, a.add(&b))),
            _ => None,
        };
        r.record(alg, &[x, y, z], sides);
    }
    Ok(r)
}

/// Left multiplication `x ↦ z·x` checked as a ½-derivation on the pairs
/// where it is defined.
pub fn left_mult_check(
    alg: &AlgebraSpec,
    p: &ProductSpec,
    z: &BasisSymbol,
    pairs: &[(BasisSymbol, BasisSymbol)],
) -> Result<MapReport, TpError> {
    let bz = basis(z);
    let mut usable = Vec::new();
    let mut skipped = 0;
    for (x, y) in pairs {
        let xy = alg.bracket(x, y)?;
        if p.product(z, x).is_some() && p.product(z, y).is_some() && p.product_lin(&bz, &xy).is_some() {
            usable.push((x.clone(), y.clone()));
        } else {
            skipped += 1;
        }
    }
    let map = FnMap(|s: &BasisSymbol| p.product(z, s));
    let mut report = verify_map(alg, &Scalar::ratio(1, 2).expect("nonzero"), &map, &usable, None)?;
    report.equations_skipped += skipped;
    Ok(report)
}

/// All ordered pairs.
pub fn ordered_pairs(symbols: &[BasisSymbol]) -> Vec<(BasisSymbol, BasisSymbol)> {
    symbols.iter().flat_map(|x| symbols.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

/// All ordered triples.
pub fn ordered_triples(symbols: &[BasisSymbol]) -> Vec<(BasisSymbol, BasisSymbol, BasisSymbol)> {
    let mut out = Vec::with_capacity(symbols.len().pow(3));
    for x in symbols {
        for y in symbols {
            for z in symbols {
                out.push((x.clone(), y.clone(), z.clone()));
            }
        }
    }
    out
}

/// Outcome of every law on one symbol set.
#[derive(Clone, Debug, Serialize)]
pub struct TpSuite {
    pub commutative: VerifyReport,
    pub associative: VerifyReport,
    pub tp_compat: VerifyReport,
    pub poisson_leibniz: VerifyReport,
    /// One left-multiplication check per symbol, in symbol order.
    pub left_mult: Vec<(String, MapReport)>,
}

impl TpSuite {
    /// Commutative, associative and transposed compatible.
    pub fn tp_pass(&self) -> bool {
        self.commutative.passed() && self.associative.passed() && self.tp_compat.passed()
    }

    pub fn left_mult_pass(&self) -> bool {
        self.left_mult.iter().all(|(_, r)| r.passed())
    }
}

pub fn verify_all(alg: &AlgebraSpec, p: &ProductSpec, symbols: &[BasisSymbol]) -> Result<TpSuite, TpError> {
    let pairs = ordered_pairs(symbols);
    let triples = ordered_triples(symbols);
    let unordered = crate::derivations::pairs_of(symbols);
    let mut left_mult = Vec::new();
    for z in symbols {
        left_mult.push((alg.format_symbol(z), left_mult_check(alg, p, z, &unordered)?));
    }
    Ok(TpSuite {
        commutative: verify_commutative(alg, p, &pairs),
        associative: verify_associative(alg, p, &triples),
        tp_compat: verify_tp_compat(alg, p, &triples)?,
        poisson_leibniz: verify_poisson_leibniz(alg, p, &triples)?,
        left_mult,
    })
}

/// Expectations a product file may declare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    TpPass,
    TpFail,
    Poisson,
    NonPoisson,
    LeftMult,
}

impl Expect {
    pub fn holds(&self, suite: &TpSuite) -> bool {
        match self {
            Expect::TpPass => suite.tp_pass(),
            Expect::TpFail => !suite.tp_pass(),
            Expect::Poisson => suite.poisson_leibniz.passed(),
            Expect::NonPoisson => !suite.poisson_leibniz.passed(),
            Expect::LeftMult => suite.left_mult_pass(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub d: String,
    pub k: i64,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub x: String,
    pub y: String,
    pub value: String,
}

/// JSON product description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProductFile {
    WHat {
        coeffs: Vec<CoeffEntry>,
        #[serde(default)]
        expect: Vec<Expect>,
    },
    GMinus1 {
        beta: String,
        #[serde(default)]
        expect: Vec<Expect>,
    },
    /// Symmetric table: each entry also defines the swapped product unless
    /// that is listed separately.
    Tabulated {
        entries: Vec<TableEntry>,
        #[serde(default)]
        expect: Vec<Expect>,
    },
    Zero {
        #[serde(default)]
        expect: Vec<Expect>,
    },
}

impl ProductFile {
    pub fn from_json(text: &str) -> Result<Self, TpError> {
        serde_json::from_str(text).map_err(|e| TpError::File(e.to_string()))
    }

    pub fn expect(&self) -> &[Expect] {
        match self {
            ProductFile::WHat { expect, .. }
            | ProductFile::GMinus1 { expect, .. }
            | ProductFile::Tabulated { expect, .. }
            | ProductFile::Zero { expect } => expect,
        }
    }

    pub fn build(&self, alg: &AlgebraSpec) -> Result<ProductSpec, TpError> {
        let scalar = |s: &str| s.parse::<Scalar>().map_err(|e| TpError::File(format!("{s:?}: {e}")));
        match self {
            ProductFile::WHat { coeffs, .. } => {
                let mut map = BTreeMap::new();
                for e in coeffs {
                    let d: GroupElement = e.d.parse().map_err(|e| TpError::File(format!("{e}")))?;
                    let slot: &mut Scalar = map.entry((d, e.k)).or_default();
                    *slot = &*slot + &scalar(&e.c)?;
                }
                ProductSpec::w_hat(alg, map)
            }
            ProductFile::GMinus1 { beta, .. } => ProductSpec::g_minus1(alg, scalar(beta)?),
            ProductFile::Tabulated { entries, .. } => {
                let mut table: BTreeMap<(BasisSymbol, BasisSymbol), LinComb> = BTreeMap::new();
                for e in entries {
                    let key = (alg.parse_symbol(&e.x)?, alg.parse_symbol(&e.y)?);
                    if table.contains_key(&key) {
                        return Err(TpError::File(format!("duplicate entry {} * {}", e.x, e.y)));
                    }
                    table.insert(key, alg.parse_lincomb(&e.value)?);
                }
                let swaps: Vec<_> = table
                    .iter()
                    .filter(|((x, y), _)| !table.contains_key(&(y.clone(), x.clone())))
                    .map(|((x, y), v)| ((y.clone(), x.clone()), v.clone()))
                    .collect();
                table.extend(swaps);
                ProductSpec::tabulated([], table)
            }
            ProductFile::Zero { .. } => Ok(ProductSpec::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, CatalogParams};

    #[test]
    fn file_round_trip() {
        let f = ProductFile::from_json(r#"{"kind":"w_hat","coeffs":[{"d":"(0)","k":0,"c":"1"}],"expect":["tp_pass","non_poisson"]}"#)
            .unwrap();
        assert_eq!(f.expect(), [Expect::TpPass, Expect::NonPoisson]);
        let alg = catalog("W_hat", &CatalogParams::default()).unwrap();
        let p = f.build(&alg).unwrap();
        let s = |t: &str| alg.parse_symbol(t).unwrap();
        assert_eq!(alg.format_lincomb(&p.product(&s("L(1;0)"), &s("L(2;0)")).unwrap()), "L(3;1)");
        assert!(ProductFile::from_json(r#"{"kind":"nope"}"#).is_err());
        assert!(matches!(
            ProductFile::from_json(r#"{"kind":"g_minus1","beta":"1"}"#).unwrap().build(&alg),
            Err(TpError::Binding { .. })
        ));
    }

    #[test]
    fn tabulated_file_adds_swaps() {
        let alg = catalog("witt", &CatalogParams::default()).unwrap();
        let f = ProductFile::from_json(r#"{"kind":"tabulated","entries":[{"x":"L(0)","y":"L(1)","value":"L(1)"}]}"#)
            .unwrap();
        let p = f.build(&alg).unwrap();
        let s = |t: &str| alg.parse_symbol(t).unwrap();
        assert_eq!(p.product(&s("L(1)"), &s("L(0)")), p.product(&s("L(0)"), &s("L(1)")));
        assert_eq!(p.product(&s("L(1)"), &s("L(1)")), Some(LinComb::zero()));
        assert_eq!(p.product(&s("L(5)"), &s("L(1)")), None);
    }
}
