use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::assemble::{BracketCache, Closure, OutputRegion};
use super::DerivError;
use crate::algebra::{AlgebraSpec, BasisSymbol, LinComb};
use crate::exactnum::Scalar;

/// A linear map on basis symbols; `None` where it is undefined.
pub trait LinearMap {
    fn apply(&self, s: &BasisSymbol) -> Option<LinComb>;
}

/// Closed-form map given by a function.
pub struct FnMap<F>(pub F);

impl<F: Fn(&BasisSymbol) -> Option<LinComb>> LinearMap for FnMap<F> {
    fn apply(&self, s: &BasisSymbol) -> Option<LinComb> {
        (self.0)(s)
    }
}

/// Map given by a table on a finite domain; domain symbols without an entry
/// map to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TabulatedMap {
    domain: BTreeSet<BasisSymbol>,
    images: BTreeMap<BasisSymbol, LinComb>,
}

impl TabulatedMap {
    pub fn new(domain: impl IntoIterator<Item = BasisSymbol>) -> Self {
        TabulatedMap { domain: domain.into_iter().collect(), images: BTreeMap::new() }
    }

    /// Adds `c * output` to the image of `input`, extending the domain.
    pub fn add(&mut self, input: BasisSymbol, output: BasisSymbol, c: Scalar) {
        self.domain.insert(input.clone());
        self.images.entry(input).or_default().add_term(output, c);
    }

    pub fn domain(&self) -> &BTreeSet<BasisSymbol> {
        &self.domain
    }

    pub fn images(&self) -> impl Iterator<Item = (&BasisSymbol, &LinComb)> {
        self.images.iter().filter(|(_, v)| !v.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.images.values().all(LinComb::is_zero)
    }
}

impl LinearMap for TabulatedMap {
    fn apply(&self, s: &BasisSymbol) -> Option<LinComb> {
        if !self.domain.contains(s) {
            return None;
        }
        Some(self.images.get(s).cloned().unwrap_or_default())
    }
}

/// The identity on every symbol.
pub struct Identity;

impl LinearMap for Identity {
    fn apply(&self, s: &BasisSymbol) -> Option<LinComb> {
        Some(LinComb::basis(s.clone()))
    }
}

/// `x ↦ [z, x]`.
pub struct AdjointMap<'a> {
    pub alg: &'a AlgebraSpec,
    pub z: LinComb,
}

impl LinearMap for AdjointMap<'_> {
    fn apply(&self, s: &BasisSymbol) -> Option<LinComb> {
        self.alg.bracket_lin(&self.z, &LinComb::basis(s.clone())).ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MapWitness {
    pub x: String,
    pub y: String,
    /// `φ([x,y])`, restricted to the compared outputs.
    pub lhs: String,
    /// `δ([φx,y] + [x,φy])`, restricted likewise.
    pub rhs: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MapReport {
    pub pairs_checked: usize,
    pub equations_checked: usize,
    pub equations_skipped: usize,
    pub failures: Vec<MapWitness>,
}

impl MapReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `φ([x,y]) = δ([φx,y] + [x,φy])` on each pair. With a `region`, the
/// map is taken to be the represented part of some true map and only outputs
/// whose equation closes inside the region are compared.
pub fn verify_map(
    alg: &AlgebraSpec,
    delta: &Scalar,
    map: &dyn LinearMap,
    pairs: &[(BasisSymbol, BasisSymbol)],
    region: Option<&dyn OutputRegion>,
) -> Result<MapReport, DerivError> {
    let mut cache = BracketCache::new(alg);
    let closure = region.map(|r| Closure::new(alg, r));
    let apply = |s: &BasisSymbol| {
        map.apply(s).ok_or_else(|| DerivError::MapUndefined(alg.format_symbol(s)))
    };
    let mut report = MapReport::default();
    for (x, y) in pairs {
        let xy = cache.get(x, y)?;
        let mut lhs = LinComb::zero();
        for (s, c) in xy.iter() {
            lhs.add_scaled(&apply(s)?, c);
        }
        let fx = apply(x)?;
        let fy = apply(y)?;
        let mut rhs = LinComb::zero();
        for (s, c) in fx.iter() {
            rhs.add_scaled(&*cache.get(s, y)?, c);
        }
        for (s, c) in fy.iter() {
            rhs.add_scaled(&*cache.get(x, s)?, c);
        }
        let rhs = rhs.scale(delta);
        report.pairs_checked += 1;
        let outputs: BTreeSet<BasisSymbol> = lhs.support().chain(rhs.support()).cloned().collect();
        let mut l = LinComb::zero();
        let mut r = LinComb::zero();
        let mut mismatch = false;
        for t in outputs {
            if let Some(cl) = &closure {
                if !cl.closed(&mut cache, x, y, &xy, &t)? {
                    report.equations_skipped += 1;
                    continue;
                }
            }
            report.equations_checked += 1;
            let (a, b) = (lhs.coeff(&t), rhs.coeff(&t));
            if a != b {
                mismatch = true;
            }
            l.add_term(t.clone(), a);
            r.add_term(t, b);
        }
        if mismatch {
            report.failures.push(MapWitness {
                x: alg.format_symbol(x),
                y: alg.format_symbol(y),
                lhs: alg.format_lincomb(&l),
                rhs: alg.format_lincomb(&r),
            });
        }
    }
    Ok(report)
}

/// Unordered pairs `x < y` of the given symbols.
pub fn pairs_of(symbols: &[BasisSymbol]) -> Vec<(BasisSymbol, BasisSymbol)> {
    let mut out = Vec::new();
    for (k, x) in symbols.iter().enumerate() {
        for y in &symbols[k + 1..] {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}
