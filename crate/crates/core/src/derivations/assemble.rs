use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::linalg::SparseVec;
use super::window::{enumerate_window, Window};
use super::DerivError;
use crate::algebra::{AlgebraError, AlgebraSpec, BasisSymbol, IndexDomain, IndexReach, LinComb};
use crate::exactnum::Scalar;
use crate::group::GroupElement;

/// Degree of the sought derivation: one homogeneous component, or every
/// shift the window can realise at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeSel {
    Single(GroupElement),
    All,
}

impl std::fmt::Display for DegreeSel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegreeSel::Single(g) => write!(f, "{g}"),
            DegreeSel::All => write!(f, "all"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DerivationProblem<'a> {
    pub alg: &'a AlgebraSpec,
    pub delta: Scalar,
    pub degree: DegreeSel,
    pub window: Window,
}

/// Which `(input, output)` coefficients of a map are represented. Equations
/// that could receive contributions from coefficients outside the region are
/// not trusted.
pub trait OutputRegion {
    fn contains(&self, input: &BasisSymbol, output: &BasisSymbol) -> bool;
}

/// Coefficients of a map with an allowed set of degree shifts. Outputs range
/// over the window symbols at each allowed shift of the input (plus centrals
/// when the shifted degree is zero), or over the interior only.
#[derive(Clone, Debug)]
pub struct ShiftRegion<'a> {
    alg: &'a AlgebraSpec,
    window: &'a Window,
    shifts: ShiftSet,
    interior: bool,
}

#[derive(Clone, Debug)]
enum ShiftSet {
    Single(GroupElement),
    Box(Vec<(i64, i64)>),
}

impl<'a> ShiftRegion<'a> {
    pub fn window(alg: &'a AlgebraSpec, window: &'a Window, degree: &DegreeSel) -> Self {
        ShiftRegion { alg, window, shifts: shift_set(window, degree), interior: false }
    }

    pub fn interior(alg: &'a AlgebraSpec, window: &'a Window, degree: &DegreeSel) -> Self {
        ShiftRegion { alg, window, shifts: shift_set(window, degree), interior: true }
    }

    fn shift_ok(&self, d: &GroupElement) -> bool {
        match &self.shifts {
            ShiftSet::Single(g) => g == d,
            ShiftSet::Box(b) => d.coords().iter().zip(b).all(|(c, (lo, hi))| lo <= c && c <= hi),
        }
    }
}

fn shift_set(window: &Window, degree: &DegreeSel) -> ShiftSet {
    match degree {
        DegreeSel::Single(g) => ShiftSet::Single(g.clone()),
        DegreeSel::All => ShiftSet::Box(window.gbox().iter().map(|(lo, hi)| (lo - hi, hi - lo)).collect()),
    }
}

impl OutputRegion for ShiftRegion<'_> {
    fn contains(&self, input: &BasisSymbol, output: &BasisSymbol) -> bool {
        let out_degree = if self.alg.is_central(output) {
            GroupElement::zero(self.alg.rank())
        } else {
            output.degree.clone()
        };
        if !self.shift_ok(&(&out_degree - &input.degree)) {
            return false;
        }
        if self.interior {
            return self.window.is_interior(self.alg, input) && self.window.is_interior(self.alg, output);
        }
        if !self.window.includes_family(output.family) {
            return false;
        }
        match (self.window.output_interval(self.alg, output.family), output.index) {
            (None, None) => true,
            (Some((lo, hi)), Some(i)) => lo <= i && i <= hi,
            _ => false,
        }
    }
}

/// Outputs with index at most `max_index`; unindexed symbols always count.
#[derive(Clone, Copy, Debug)]
pub struct IndexCeiling {
    pub max_index: i64,
}

impl OutputRegion for IndexCeiling {
    fn contains(&self, _input: &BasisSymbol, output: &BasisSymbol) -> bool {
        output.index.map_or(true, |i| i <= self.max_index)
    }
}

/// Memoised brackets for one assembly or verification run.
pub(crate) struct BracketCache<'a> {
    alg: &'a AlgebraSpec,
    map: HashMap<(BasisSymbol, BasisSymbol), Rc<LinComb>>,
}

impl<'a> BracketCache<'a> {
    pub fn new(alg: &'a AlgebraSpec) -> Self {
        BracketCache { alg, map: HashMap::new() }
    }

    pub fn get(&mut self, x: &BasisSymbol, y: &BasisSymbol) -> Result<Rc<LinComb>, AlgebraError> {
        if let Some(v) = self.map.get(&(x.clone(), y.clone())) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.alg.bracket(x, y)?);
        self.map.insert((x.clone(), y.clone()), v.clone());
        Ok(v)
    }
}

/// Decides whether the equation for output `t` of the pair `(x, y)` involves
/// only represented coefficients of any true map whose represented part is
/// given by `region`.
pub(crate) struct Closure<'a> {
    alg: &'a AlgebraSpec,
    region: &'a dyn OutputRegion,
    reach: IndexReach,
}

impl<'a> Closure<'a> {
    pub fn new(alg: &'a AlgebraSpec, region: &'a dyn OutputRegion) -> Self {
        Closure { alg, region, reach: alg.index_reach() }
    }

    pub fn closed(
        &self,
        cache: &mut BracketCache<'_>,
        x: &BasisSymbol,
        y: &BasisSymbol,
        xy: &LinComb,
        t: &BasisSymbol,
    ) -> Result<bool, AlgebraError> {
        if xy.support().any(|s| !self.region.contains(s, t)) {
            return Ok(false);
        }
        Ok(self.side_clean(cache, x, y, t)? && self.side_clean(cache, y, x, t)?)
    }

    /// No unrepresented coefficient `φ(u)_s` can reach `t` through `[s, w]`.
    fn side_clean(
        &self,
        cache: &mut BracketCache<'_>,
        u: &BasisSymbol,
        w: &BasisSymbol,
        t: &BasisSymbol,
    ) -> Result<bool, AlgebraError> {
        if self.alg.is_central(w) {
            return Ok(true);
        }
        let (degree, lo, hi) = if self.alg.is_central(t) {
            let (a, b) = self.reach.central;
            (w.degree.gneg(), a - w.idx() - 1, b - w.idx() + 1)
        } else {
            let (a, b) = self.reach.graded;
            (&t.degree - &w.degree, t.idx() - w.idx() - b - 1, t.idx() - w.idx() - a + 1)
        };
        for f in self.alg.graded_families() {
            let candidates: Vec<Option<i64>> = match self.alg.family(f).index_domain() {
                None => vec![None],
                Some(IndexDomain::Int) => (lo..=hi).map(Some).collect(),
                Some(IndexDomain::Nat) => (lo.max(0)..=hi).map(Some).collect(),
            };
            for index in candidates {
                let s = BasisSymbol::new(f, degree.clone(), index);
                if self.region.contains(u, &s) {
                    continue;
                }
                if cache.get(&s, w)?.get(t).is_some() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Provenance of one equation: pair `(x, y)` and the output symbol `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowTag {
    pub x: BasisSymbol,
    pub y: BasisSymbol,
    pub t: BasisSymbol,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssemblyStats {
    pub pairs: usize,
    pub pairs_skipped: usize,
    pub equations_kept: usize,
    pub equations_skipped: usize,
}

/// Homogeneous linear system in the coefficients `φ(input)_output`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    /// Window symbols first, then the out-of-window symbols their brackets
    /// reach.
    pub inputs: Vec<BasisSymbol>,
    pub window_inputs: usize,
    pub unknowns: Vec<(BasisSymbol, BasisSymbol)>,
    pub rows: Vec<SparseVec>,
    pub provenance: Vec<RowTag>,
    pub stats: AssemblyStats,
}

/// Output symbols of `x` under a map of degree `g` on the window.
fn outputs_for(alg: &AlgebraSpec, window: &Window, x: &BasisSymbol, g: &GroupElement) -> Vec<BasisSymbol> {
    let deg = if alg.is_central(x) { g.clone() } else { &x.degree + g };
    let mut out = window.outputs_at(alg, &deg);
    if deg.is_zero() {
        out.extend(window.centrals(alg));
    }
    out
}

/// Builds the δ-derivation equations `φ([x,y]) = δ([φx,y] + [x,φy])` over the
/// window, one row per pair and output symbol whose equation closes.
pub fn assemble(problem: &DerivationProblem<'_>) -> Result<LinearSystem, DerivError> {
    let alg = problem.alg;
    let window = &problem.window;
    if problem.delta.is_zero() {
        return Err(DerivError::InvalidProblem("delta must be nonzero".into()));
    }
    let shifts = match &problem.degree {
        DegreeSel::Single(g) => {
            if g.rank() != alg.rank() {
                return Err(DerivError::InvalidProblem(format!("degree {g} has the wrong rank")));
            }
            if !window.shifts().contains(g) {
                return Err(DerivError::InvalidProblem(format!("degree {g} is not reachable in the window")));
            }
            vec![g.clone()]
        }
        DegreeSel::All => window.shifts(),
    };
    let mut inputs = enumerate_window(alg, window)?;
    let n_window = inputs.len();
    inputs.extend(bracket_closure(alg, window, &inputs)?);
    let input_pos: HashMap<BasisSymbol, usize> = inputs.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();

    let mut unknowns = Vec::new();
    let mut outputs: Vec<Vec<(usize, BasisSymbol)>> = Vec::with_capacity(inputs.len());
    for x in &inputs {
        let mut outs = Vec::new();
        for g in &shifts {
            for s in outputs_for(alg, window, x, g) {
                outs.push((unknowns.len(), s.clone()));
                unknowns.push((x.clone(), s));
            }
        }
        outputs.push(outs);
    }

    let region = ShiftRegion::window(alg, window, &problem.degree);
    let closure = Closure::new(alg, &region);
    let mut cache = BracketCache::new(alg);
    let neg_delta = -&problem.delta;
    let mut rows = Vec::new();
    let mut provenance = Vec::new();
    let mut stats = AssemblyStats::default();

    for (px, x) in inputs[..n_window].iter().enumerate() {
        for (py, y) in inputs[..n_window].iter().enumerate().skip(px + 1) {
            stats.pairs += 1;
            let xy = cache.get(x, y)?;
            if xy.support().any(|s| !input_pos.contains_key(s)) {
                stats.pairs_skipped += 1;
                continue;
            }
            let mut eqs: BTreeMap<BasisSymbol, SparseVec> = BTreeMap::new();
            for (s, c) in xy.iter() {
                for (col, u) in &outputs[input_pos[s]] {
                    add_entry(eqs.entry(u.clone()).or_default(), *col, c.clone());
                }
            }
            for (col, s) in &outputs[px] {
                for (t, c) in cache.get(s, y)?.iter() {
                    add_entry(eqs.entry(t.clone()).or_default(), *col, c * &neg_delta);
                }
            }
            for (col, s) in &outputs[py] {
                for (t, c) in cache.get(x, s)?.iter() {
                    add_entry(eqs.entry(t.clone()).or_default(), *col, c * &neg_delta);
                }
            }
            for (t, row) in eqs {
                if row.is_empty() {
                    continue;
                }
                if closure.closed(&mut cache, x, y, &xy, &t)? {
                    stats.equations_kept += 1;
                    rows.push(row);
                    provenance.push(RowTag { x: x.clone(), y: y.clone(), t });
                } else {
                    stats.equations_skipped += 1;
                }
            }
        }
    }
    Ok(LinearSystem { inputs, window_inputs: n_window, unknowns, rows, provenance, stats })
}

/// Symbols of selected families outside the window that occur in brackets of
/// window pairs. Their images are unknowns too, so that `φ([x,y])` is
/// expressible for every window pair.
fn bracket_closure(
    alg: &AlgebraSpec,
    window: &Window,
    inputs: &[BasisSymbol],
) -> Result<Vec<BasisSymbol>, DerivError> {
    let mut extra = std::collections::BTreeSet::new();
    for (k, x) in inputs.iter().enumerate() {
        for y in &inputs[k + 1..] {
            for s in alg.bracket(x, y)?.support() {
                if window.includes_family(s.family) && !window.contains(alg, s) {
                    extra.insert(s.clone());
                }
            }
        }
    }
    Ok(extra.into_iter().collect())
}

fn add_entry(row: &mut SparseVec, col: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match row.get_mut(&col) {
        Some(v) => {
            let nv = &*v + &c;
            if nv.is_zero() {
                row.remove(&col);
            } else {
                *v = nv;
            }
        }
        None => {
            row.insert(col, c);
        }
    }
}
