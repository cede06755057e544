use serde::Serialize;

use super::DerivError;
use crate::algebra::{AlgebraSpec, BasisSymbol, FamilyId, IndexDomain};
use crate::group::GroupElement;

/// Finite truncation of an algebra: a box of group degrees, an index interval
/// for each indexed family, the selected families and an interior margin.
///
/// Unknown images may reach past the index intervals by `output_pad`
/// (default: the margin), so that equations near the interior can see index
/// shifts that leave the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    gbox: Vec<(i64, i64)>,
    families: Vec<FamilyId>,
    /// Index interval per selected family, `None` for unindexed families.
    index: Vec<Option<(i64, i64)>>,
    margin: i64,
    output_pad: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowReport {
    pub gbox: Vec<(i64, i64)>,
    pub families: Vec<FamilyInterval>,
    pub margin: i64,
    pub output_pad: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInterval {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<(i64, i64)>,
}

impl Window {
    /// `gbox` holds one interval per coordinate; a single interval is
    /// replicated to every coordinate. `ibox` applies to every indexed family
    /// and is clipped to the family's index domain. `families = None` selects
    /// all families.
    pub fn new(
        alg: &AlgebraSpec,
        gbox: &[(i64, i64)],
        ibox: Option<(i64, i64)>,
        families: Option<&[&str]>,
        margin: i64,
    ) -> Result<Window, DerivError> {
        let rank = alg.rank();
        let gbox: Vec<(i64, i64)> = match gbox.len() {
            1 => vec![gbox[0]; rank],
            n if n == rank => gbox.to_vec(),
            n => {
                return Err(DerivError::InvalidWindow(format!(
                    "degree box has {n} intervals, algebra has rank {rank}"
                )))
            }
        };
        if let Some((lo, hi)) = gbox.iter().find(|(lo, hi)| lo > hi) {
            return Err(DerivError::InvalidWindow(format!("empty degree interval {lo}..{hi}")));
        }
        if margin < 0 {
            return Err(DerivError::InvalidWindow("margin must be non-negative".into()));
        }
        let selected: Vec<FamilyId> = match families {
            None => alg.family_ids().collect(),
            Some(names) => {
                let mut ids = Vec::new();
                for n in names {
                    let id = alg
                        .family_id(n)
                        .ok_or_else(|| DerivError::InvalidWindow(format!("unknown family {n:?}")))?;
                    if !ids.contains(&id) {
                        ids.push(id);
                    }
                }
                ids.sort();
                ids
            }
        };
        if selected.is_empty() {
            return Err(DerivError::EmptyWindow);
        }
        let mut index = Vec::new();
        for &f in &selected {
            let fam = alg.family(f);
            index.push(match fam.index_domain() {
                None => None,
                Some(dom) => {
                    let (lo, hi) = ibox.ok_or_else(|| {
                        DerivError::InvalidWindow(format!("family {} needs an index interval", fam.name))
                    })?;
                    let lo = if dom == IndexDomain::Nat { lo.max(0) } else { lo };
                    if lo > hi {
                        return Err(DerivError::EmptyWindow);
                    }
                    Some((lo, hi))
                }
            });
        }
        Ok(Window { gbox, families: selected, index, margin, output_pad: None })
    }

    pub fn gbox(&self) -> &[(i64, i64)] {
        &self.gbox
    }

    pub fn margin(&self) -> i64 {
        self.margin
    }

    pub fn with_margin(&self, margin: i64) -> Window {
        Window { margin, ..self.clone() }
    }

    pub fn output_pad(&self) -> i64 {
        self.output_pad.unwrap_or(self.margin)
    }

    pub fn with_output_pad(&self, pad: i64) -> Window {
        Window { output_pad: Some(pad.max(0)), ..self.clone() }
    }

    /// Index range of unknown images for family `f`: the window interval
    /// widened by the output padding, clipped to the index domain.
    pub fn output_interval(&self, alg: &AlgebraSpec, f: FamilyId) -> Option<(i64, i64)> {
        let (lo, hi) = self.index_interval(f)?;
        let pad = self.output_pad();
        let lo = if alg.family(f).index_domain() == Some(IndexDomain::Nat) { (lo - pad).max(0) } else { lo - pad };
        Some((lo, hi + pad))
    }

    pub fn families(&self) -> &[FamilyId] {
        &self.families
    }

    pub fn includes_family(&self, f: FamilyId) -> bool {
        self.families.binary_search(&f).is_ok()
    }

    /// Index interval of a selected indexed family.
    pub fn index_interval(&self, f: FamilyId) -> Option<(i64, i64)> {
        self.families.binary_search(&f).ok().and_then(|k| self.index[k])
    }

    pub fn report(&self, alg: &AlgebraSpec) -> WindowReport {
        WindowReport {
            gbox: self.gbox.clone(),
            families: self
                .families
                .iter()
                .zip(&self.index)
                .map(|(&f, &index)| FamilyInterval { family: alg.family(f).name.clone(), index })
                .collect(),
            margin: self.margin,
            output_pad: self.output_pad(),
        }
    }

    /// All degrees of the box, lexicographic.
    pub fn degrees(&self) -> Vec<GroupElement> {
        box_points(&self.gbox)
    }

    /// Differences of two box degrees: the shifts a graded map can realise
    /// between window symbols.
    pub fn shifts(&self) -> Vec<GroupElement> {
        let diff: Vec<(i64, i64)> = self.gbox.iter().map(|(lo, hi)| (lo - hi, hi - lo)).collect();
        box_points(&diff)
    }

    pub fn interior_box(&self) -> Vec<(i64, i64)> {
        self.gbox.iter().map(|(lo, hi)| (lo + self.margin, hi - self.margin)).collect()
    }

    /// Shifts between two interior degrees.
    pub fn interior_shifts(&self) -> Vec<GroupElement> {
        let inner = self.interior_box();
        if inner.iter().any(|(lo, hi)| lo > hi) {
            return Vec::new();
        }
        let diff: Vec<(i64, i64)> = inner.iter().map(|(lo, hi)| (lo - hi, hi - lo)).collect();
        box_points(&diff)
    }

    /// No graded window symbol survives the margin.
    pub fn interior_is_empty(&self, alg: &AlgebraSpec) -> bool {
        if self.interior_box().iter().any(|(lo, hi)| lo > hi) {
            return true;
        }
        !self.families.iter().zip(&self.index).any(|(&f, idx)| {
            !alg.family(f).is_central()
                && match idx {
                    None => true,
                    Some((lo, hi)) => lo + self.margin <= hi - self.margin,
                }
        })
    }

    pub fn degree_in_box(&self, d: &GroupElement) -> bool {
        in_box(&self.gbox, d)
    }

    pub fn contains(&self, alg: &AlgebraSpec, s: &BasisSymbol) -> bool {
        self.contains_shifted(alg, s, 0)
    }

    /// Symbol lies at least `margin` away from every window boundary. Central
    /// symbols are interior when the zero degree is.
    pub fn is_interior(&self, alg: &AlgebraSpec, s: &BasisSymbol) -> bool {
        self.contains_shifted(alg, s, self.margin)
    }

    fn contains_shifted(&self, alg: &AlgebraSpec, s: &BasisSymbol, m: i64) -> bool {
        let Ok(k) = self.families.binary_search(&s.family) else {
            return false;
        };
        let shrunk: Vec<(i64, i64)> = self.gbox.iter().map(|(lo, hi)| (lo + m, hi - m)).collect();
        if alg.is_central(s) {
            return in_box(&shrunk, &GroupElement::zero(self.gbox.len()));
        }
        if !in_box(&shrunk, &s.degree) {
            return false;
        }
        match (self.index[k], s.index) {
            (None, None) => true,
            (Some((lo, hi)), Some(i)) => lo + m <= i && i <= hi - m,
            _ => false,
        }
    }

    /// Selected graded symbols of the given degree, ordered by family then
    /// index.
    pub fn graded_at(&self, alg: &AlgebraSpec, degree: &GroupElement) -> Vec<BasisSymbol> {
        let mut out = Vec::new();
        for (k, &f) in self.families.iter().enumerate() {
            if alg.family(f).is_central() {
                continue;
            }
            match self.index[k] {
                None => out.push(BasisSymbol::graded(f, degree.clone())),
                Some((lo, hi)) => out.extend((lo..=hi).map(|i| BasisSymbol::indexed(f, degree.clone(), i))),
            }
        }
        out
    }

    /// Graded symbols of the given degree available as unknown images.
    pub fn outputs_at(&self, alg: &AlgebraSpec, degree: &GroupElement) -> Vec<BasisSymbol> {
        let mut out = Vec::new();
        for &f in &self.families {
            if alg.family(f).is_central() {
                continue;
            }
            match self.output_interval(alg, f) {
                None => out.push(BasisSymbol::graded(f, degree.clone())),
                Some((lo, hi)) => out.extend((lo..=hi).map(|i| BasisSymbol::indexed(f, degree.clone(), i))),
            }
        }
        out
    }

    pub fn centrals(&self, alg: &AlgebraSpec) -> Vec<BasisSymbol> {
        self.families
            .iter()
            .filter(|&&f| alg.family(f).is_central())
            .map(|&f| BasisSymbol::central(f, alg.rank()))
            .collect()
    }
}

/// Window symbols in deterministic order: family, then degree
/// (lexicographic), then index. Central symbols are included iff their
/// family is selected.
pub fn enumerate_window(alg: &AlgebraSpec, window: &Window) -> Result<Vec<BasisSymbol>, DerivError> {
    let degrees = window.degrees();
    let mut out = Vec::new();
    for (k, &f) in window.families.iter().enumerate() {
        if alg.family(f).is_central() {
            out.push(BasisSymbol::central(f, alg.rank()));
            continue;
        }
        for d in &degrees {
            match window.index[k] {
                None => out.push(BasisSymbol::graded(f, d.clone())),
                Some((lo, hi)) => out.extend((lo..=hi).map(|i| BasisSymbol::indexed(f, d.clone(), i))),
            }
        }
    }
    if out.is_empty() {
        return Err(DerivError::EmptyWindow);
    }
    Ok(out)
}

fn in_box(b: &[(i64, i64)], d: &GroupElement) -> bool {
    d.coords().iter().zip(b).all(|(c, (lo, hi))| lo <= c && c <= hi)
}

fn box_points(b: &[(i64, i64)]) -> Vec<GroupElement> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for &(lo, hi) in b {
        let mut next = Vec::new();
        for p in &out {
            for c in lo..=hi {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        out = next;
    }
    out.iter().map(|c| GroupElement::new(c)).collect()
}
