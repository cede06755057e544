use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;

use super::BasisSymbol;
use crate::exactnum::Scalar;

/// Sparse Scalar-weighted combination of basis symbols; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb {
    terms: BTreeMap<BasisSymbol, Scalar>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn single(s: BasisSymbol, c: Scalar) -> Self {
        let mut out = LinComb::zero();
        out.add_term(s, c);
        out
    }

    pub fn basis(s: BasisSymbol) -> Self {
        LinComb::single(s, Scalar::one())
    }

    pub fn add_term(&mut self, s: BasisSymbol, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &LinComb, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (s, v) in &other.terms {
            self.add_term(s.clone(), v * c);
        }
    }

    pub fn add(&self, other: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> LinComb {
        if c.is_zero() {
            return LinComb::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(s, v)| (s.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> LinComb {
        LinComb {
            terms: self.terms.iter().map(|(s, v)| (s.clone(), -v)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, s: &BasisSymbol) -> Option<&Scalar> {
        self.terms.get(s)
    }

    /// Coefficient of `s`, zero if absent.
    pub fn coeff(&self, s: &BasisSymbol) -> Scalar {
        self.terms.get(s).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, BasisSymbol, Scalar> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisSymbol> {
        self.terms.keys()
    }
}

impl<'a> IntoIterator for &'a LinComb {
    type Item = (&'a BasisSymbol, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, BasisSymbol, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl FromIterator<(BasisSymbol, Scalar)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (BasisSymbol, Scalar)>>(iter: I) -> Self {
        let mut out = LinComb::zero();
        for (s, c) in iter {
            out.add_term(s, c);
        }
        out
    }
}
