use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::GroupElement;

/// Position of a family in its algebra's family table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexDomain {
    /// ℤ
    Int,
    /// ℤ₊ = {0, 1, 2, ...}
    Nat,
}

impl IndexDomain {
    pub fn contains(self, i: i64) -> bool {
        match self {
            IndexDomain::Int => true,
            IndexDomain::Nat => i >= 0,
        }
    }
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexDomain::Int => "int",
            IndexDomain::Nat => "nat",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Graded { index: Option<IndexDomain> },
    Central,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    pub kind: FamilyKind,
}

impl Family {
    pub fn graded(name: &str) -> Self {
        Family {
            name: name.into(),
            kind: FamilyKind::Graded { index: None },
        }
    }

    pub fn indexed(name: &str, domain: IndexDomain) -> Self {
        Family {
            name: name.into(),
            kind: FamilyKind::Graded {
                index: Some(domain),
            },
        }
    }

    pub fn central(name: &str) -> Self {
        Family {
            name: name.into(),
            kind: FamilyKind::Central,
        }
    }

    pub fn is_central(&self) -> bool {
        matches!(self.kind, FamilyKind::Central)
    }

    pub fn index_domain(&self) -> Option<IndexDomain> {
        match self.kind {
            FamilyKind::Graded { index } => index,
            FamilyKind::Central => None,
        }
    }
}

/// A basis element: family tag, group degree and optional integer index.
/// Central symbols carry the zero degree and no index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisSymbol {
    pub family: FamilyId,
    pub degree: GroupElement,
    pub index: Option<i64>,
}

impl BasisSymbol {
    pub fn new(family: FamilyId, degree: GroupElement, index: Option<i64>) -> Self {
        BasisSymbol {
            family,
            degree,
            index,
        }
    }

    pub fn graded(family: FamilyId, degree: GroupElement) -> Self {
        BasisSymbol {
            family,
            degree,
            index: None,
        }
    }

    pub fn indexed(family: FamilyId, degree: GroupElement, index: i64) -> Self {
        BasisSymbol {
            family,
            degree,
            index: Some(index),
        }
    }

    pub fn central(family: FamilyId, rank: usize) -> Self {
        BasisSymbol {
            family,
            degree: GroupElement::zero(rank),
            index: None,
        }
    }

    /// Index, treating unindexed families as index 0.
    pub fn idx(&self) -> i64 {
        self.index.unwrap_or(0)
    }
}

impl fmt::Debug for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{}", self.family.0, self.degree)?;
        if let Some(i) = self.index {
            write!(f, "[{i}]")?;
        }
        Ok(())
    }
}
