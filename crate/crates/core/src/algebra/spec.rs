use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{AlgebraError, BasisSymbol, Family, FamilyId, FamilyKind, IndexDomain, LinComb};
use crate::exactnum::Scalar;
use crate::group::{GroupElement, GroupSpec};

/// Closed-form bracket for one ordered family pair. Receives its arguments in
/// the stored orientation; the swapped orientation is derived by negation.
pub type RuleFn =
    dyn Fn(&AlgebraSpec, &BasisSymbol, &BasisSymbol) -> Result<LinComb, AlgebraError> + Send + Sync;

/// Observed spread of output indices around the input index sum, used by the
/// derivation assembler to decide which window equations can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexReach {
    /// min/max of `out.index - (x.index + y.index)` over graded outputs.
    pub graded: (i64, i64),
    /// min/max of `x.index + y.index` over pairs with a central output.
    pub central: (i64, i64),
}

#[derive(Clone)]
pub struct AlgebraSpec {
    name: String,
    params: BTreeMap<String, Scalar>,
    group: GroupSpec,
    families: Vec<Family>,
    rules: HashMap<(FamilyId, FamilyId), Arc<RuleFn>>,
    trivial_half_derivations: Option<bool>,
    reach: OnceLock<IndexReach>,
}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("rank", &self.rank())
            .field("families", &self.families)
            .finish_non_exhaustive()
    }
}

impl AlgebraSpec {
    pub fn new(name: &str, group: GroupSpec) -> Self {
        AlgebraSpec {
            name: name.to_string(),
            params: BTreeMap::new(),
            group,
            families: Vec::new(),
            rules: HashMap::new(),
            trivial_half_derivations: None,
            reach: OnceLock::new(),
        }
    }

    pub fn add_family(&mut self, family: Family) -> Result<FamilyId, AlgebraError> {
        if self.family_id(&family.name).is_some() {
            return Err(AlgebraError::DuplicateFamily(family.name));
        }
        let id = FamilyId(self.families.len() as u16);
        self.families.push(family);
        Ok(id)
    }

    pub fn set_param(&mut self, name: &str, value: Scalar) {
        self.params.insert(name.to_string(), value);
    }

    pub fn add_rule(&mut self, left: FamilyId, right: FamilyId, rule: Arc<RuleFn>) {
        self.rules.insert((left, right), rule);
        self.reach = OnceLock::new();
    }

    /// Records whether every ½-derivation of this algebra is known to be a
    /// scalar multiple of the identity.
    pub fn set_trivial_half_derivations(&mut self, known: Option<bool>) {
        self.trivial_half_derivations = known;
    }

    pub fn trivial_half_derivations(&self) -> Option<bool> {
        self.trivial_half_derivations
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, Scalar> {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<&Scalar> {
        self.params.get(name)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn family(&self, id: FamilyId) -> &Family {
        &self.families[id.0 as usize]
    }

    pub fn family_id(&self, name: &str) -> Option<FamilyId> {
        self.families
            .iter()
            .position(|f| f.name == name)
            .map(|i| FamilyId(i as u16))
    }

    pub fn family_ids(&self) -> impl Iterator<Item = FamilyId> + '_ {
        (0..self.families.len()).map(|i| FamilyId(i as u16))
    }

    pub fn graded_families(&self) -> Vec<FamilyId> {
        self.family_ids()
            .filter(|&f| !self.family(f).is_central())
            .collect()
    }

    pub fn central_families(&self) -> Vec<FamilyId> {
        self.family_ids()
            .filter(|&f| self.family(f).is_central())
            .collect()
    }

    pub fn has_rule(&self, left: FamilyId, right: FamilyId) -> bool {
        self.rules.contains_key(&(left, right))
    }

    /// Evaluation of a degree in the scalar field.
    pub fn value(&self, a: &GroupElement) -> Scalar {
        self.group
            .value(a)
            .expect("degree rank checked by validate")
    }

    pub fn is_central(&self, s: &BasisSymbol) -> bool {
        self.family(s.family).is_central()
    }

    /// Builds and validates a symbol from a family name.
    pub fn symbol(
        &self,
        family: &str,
        degree: &[i64],
        index: Option<i64>,
    ) -> Result<BasisSymbol, AlgebraError> {
        let id = self
            .family_id(family)
            .ok_or_else(|| AlgebraError::UnknownFamily(family.to_string()))?;
        let s = if self.family(id).is_central() {
            BasisSymbol::central(id, self.rank())
        } else {
            BasisSymbol::new(id, GroupElement::new(degree), index)
        };
        self.validate(&s)?;
        Ok(s)
    }

    pub fn central(&self, family: &str) -> Result<BasisSymbol, AlgebraError> {
        self.symbol(family, &[], None)
    }

    pub fn validate(&self, s: &BasisSymbol) -> Result<(), AlgebraError> {
        let Some(fam) = self.families.get(s.family.0 as usize) else {
            return Err(AlgebraError::UnknownFamily(format!("#{}", s.family.0)));
        };
        if s.degree.rank() != self.rank() {
            return Err(AlgebraError::InvalidSymbol(format!(
                "{}: degree {} has rank {}, algebra has rank {}",
                fam.name,
                s.degree,
                s.degree.rank(),
                self.rank()
            )));
        }
        match (fam.kind, s.index) {
            (FamilyKind::Central, None) if s.degree.is_zero() => Ok(()),
            (FamilyKind::Central, _) => Err(AlgebraError::InvalidSymbol(format!(
                "central {} carries no degree or index",
                fam.name
            ))),
            (FamilyKind::Graded { index: None }, None) => Ok(()),
            (FamilyKind::Graded { index: Some(dom) }, Some(i)) if dom.contains(i) => Ok(()),
            (FamilyKind::Graded { index: Some(dom) }, Some(i)) => {
                Err(AlgebraError::IndexDomainViolation {
                    symbol: self.format_symbol(s),
                    detail: format!("index {i} outside {dom}"),
                })
            }
            (FamilyKind::Graded { index: None }, Some(_)) => Err(AlgebraError::InvalidSymbol(
                format!("{} takes no index", fam.name),
            )),
            (FamilyKind::Graded { index: Some(_) }, None) => Err(AlgebraError::InvalidSymbol(
                format!("{} needs an index", fam.name),
            )),
        }
    }

    /// `[x, y]` for basis symbols.
    pub fn bracket(&self, x: &BasisSymbol, y: &BasisSymbol) -> Result<LinComb, AlgebraError> {
        self.validate(x)?;
        self.validate(y)?;
        if x == y || self.is_central(x) || self.is_central(y) {
            return Ok(LinComb::zero());
        }
        let (fx, fy) = (x.family, y.family);
        let out = if fx == fy {
            match self.rules.get(&(fx, fy)) {
                None => LinComb::zero(),
                Some(rule) if x < y => rule(self, x, y)?,
                Some(rule) => rule(self, y, x)?.neg(),
            }
        } else if let Some(rule) = self.rules.get(&(fx, fy)) {
            rule(self, x, y)?
        } else if let Some(rule) = self.rules.get(&(fy, fx)) {
            rule(self, y, x)?.neg()
        } else {
            LinComb::zero()
        };
        self.check_output(x, y, &out)?;
        Ok(out)
    }

    fn check_output(
        &self,
        x: &BasisSymbol,
        y: &BasisSymbol,
        out: &LinComb,
    ) -> Result<(), AlgebraError> {
        let deg = &x.degree + &y.degree;
        for (s, _) in out {
            self.validate(s).map_err(|e| match e {
                AlgebraError::IndexDomainViolation { symbol, detail } => {
                    AlgebraError::IndexDomainViolation {
                        symbol,
                        detail: format!(
                            "{detail}, produced by [{}, {}]",
                            self.format_symbol(x),
                            self.format_symbol(y)
                        ),
                    }
                }
                other => other,
            })?;
            let ok = if self.is_central(s) {
                deg.is_zero()
            } else {
                s.degree == deg
            };
            if !ok {
                return Err(AlgebraError::GradingViolation {
                    x: self.format_symbol(x),
                    y: self.format_symbol(y),
                    out: self.format_symbol(s),
                });
            }
        }
        Ok(())
    }

    /// Bilinear extension of [`bracket`](Self::bracket).
    pub fn bracket_lin(&self, u: &LinComb, v: &LinComb) -> Result<LinComb, AlgebraError> {
        let mut out = LinComb::zero();
        for (x, a) in u {
            for (y, b) in v {
                let br = self.bracket(x, y)?;
                if !br.is_zero() {
                    out.add_scaled(&br, &(a * b));
                }
            }
        }
        Ok(out)
    }

    /// Index spread of the bracket, probed once on a small sample window.
    pub fn index_reach(&self) -> IndexReach {
        *self.reach.get_or_init(|| self.probe_reach())
    }

    fn probe_reach(&self) -> IndexReach {
        let rank = self.rank();
        let mut degrees: Vec<GroupElement> = Vec::new();
        for k in -3..=3 {
            let mut c = vec![0; rank];
            c[0] = k;
            degrees.push(GroupElement::new(&c));
        }
        for i in 1..rank {
            for k in [-1, 1] {
                let mut c = vec![0; rank];
                c[i] = k;
                degrees.push(GroupElement::new(&c));
            }
        }
        let mut sample = Vec::new();
        for f in self.graded_families() {
            let indices: Vec<Option<i64>> = match self.family(f).index_domain() {
                None => vec![None],
                Some(IndexDomain::Int) => (-4..=4).map(Some).collect(),
                Some(IndexDomain::Nat) => (0..=6).map(Some).collect(),
            };
            for d in &degrees {
                for i in &indices {
                    sample.push(BasisSymbol::new(f, d.clone(), *i));
                }
            }
        }
        let mut graded: Option<(i64, i64)> = None;
        let mut central: Option<(i64, i64)> = None;
        let widen = |acc: &mut Option<(i64, i64)>, v: i64| {
            *acc = Some(match *acc {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        };
        for (n, x) in sample.iter().enumerate() {
            for y in &sample[n + 1..] {
                let Ok(out) = self.bracket(x, y) else {
                    continue;
                };
                let sum = x.idx() + y.idx();
                for (s, _) in &out {
                    if self.is_central(s) {
                        widen(&mut central, sum);
                    } else {
                        widen(&mut graded, s.idx() - sum);
                    }
                }
            }
        }
        IndexReach {
            graded: graded.unwrap_or((0, 0)),
            central: central.unwrap_or((0, 0)),
        }
    }

    /// `L(2)`, `L(1,2)`, `L(1;0)`, `C_L`.
    pub fn format_symbol(&self, s: &BasisSymbol) -> String {
        let Some(fam) = self.families.get(s.family.0 as usize) else {
            return format!("{s:?}");
        };
        if fam.is_central() {
            return fam.name.clone();
        }
        let coords: Vec<String> = s.degree.coords().iter().map(|c| c.to_string()).collect();
        match s.index {
            Some(i) => format!("{}({};{})", fam.name, coords.join(","), i),
            None => format!("{}({})", fam.name, coords.join(",")),
        }
    }

    pub fn parse_symbol(&self, text: &str) -> Result<BasisSymbol, AlgebraError> {
        let t = text.trim();
        let bad = || AlgebraError::InvalidSymbol(t.to_string());
        let Some(open) = t.find('(') else {
            let id = self
                .family_id(t)
                .ok_or_else(|| AlgebraError::UnknownFamily(t.to_string()))?;
            if !self.family(id).is_central() {
                return Err(bad());
            }
            return Ok(BasisSymbol::central(id, self.rank()));
        };
        let name = t[..open].trim();
        let inner = t[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let (deg, idx) = match inner.split_once(';') {
            Some((d, i)) => (d, Some(i.trim().parse::<i64>().map_err(|_| bad())?)),
            None => (inner, None),
        };
        let coords: Vec<i64> = deg
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let id = self
            .family_id(name)
            .ok_or_else(|| AlgebraError::UnknownFamily(name.to_string()))?;
        let s = BasisSymbol::new(id, GroupElement::new(&coords), idx);
        self.validate(&s)?;
        Ok(s)
    }

    /// `-4*L(0) + 1/2*C_L`.
    pub fn format_lincomb(&self, v: &LinComb) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (s, c)) in v.iter().enumerate() {
            let text = match c {
                Scalar::Rat(r) => r.to_string(),
                Scalar::Frac { .. } => format!("({c})"),
            };
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&self.format_symbol(s));
        }
        out
    }

    /// Parses the output of [`format_lincomb`](Self::format_lincomb).
    pub fn parse_lincomb(&self, text: &str) -> Result<LinComb, AlgebraError> {
        let t = text.trim();
        if t == "0" {
            return Ok(LinComb::zero());
        }
        let mut out = LinComb::zero();
        let mut depth = 0i32;
        let mut start = 0usize;
        let mut pieces: Vec<(bool, &str)> = Vec::new();
        let mut neg = false;
        let bytes = t.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 => {
                    let piece = t[start..i].trim();
                    if !piece.is_empty() {
                        pieces.push((neg, piece));
                    } else if i != 0 && start != 0 {
                        return Err(AlgebraError::InvalidSymbol(t.to_string()));
                    }
                    neg = b == b'-';
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push((neg, t[start..].trim()));
        for (neg, piece) in pieces {
            let (coeff, sym) = match piece.rfind('*') {
                Some(k) if depth_zero(&piece[..k]) => (piece[..k].trim(), piece[k + 1..].trim()),
                _ => ("1", piece),
            };
            let mut c: Scalar = coeff
                .parse()
                .map_err(|e| AlgebraError::InvalidSymbol(format!("{piece}: {e}")))?;
            if neg {
                c = -c;
            }
            out.add_term(self.parse_symbol(sym)?, c);
        }
        Ok(out)
    }
}

fn depth_zero(s: &str) -> bool {
    let mut d = 0i32;
    for b in s.bytes() {
        match b {
            b'(' => d += 1,
            b')' => d -= 1,
            _ => {}
        }
    }
    d == 0
}
