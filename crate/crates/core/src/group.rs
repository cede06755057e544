//! The grading group G, modelled as a free abelian group ℤ^ν together with an
//! evaluation map into the scalar field.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use thiserror::Error;

use crate::exactnum::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("coordinate {index} out of range for rank {rank}")]
    CoordinateOutOfRange { index: usize, rank: usize },
    #[error("invalid group element {0:?}")]
    Parse(String),
    #[error("invalid group spec: {0}")]
    Spec(String),
}

/// Coordinate vector of an element of ℤ^ν.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(SmallVec<[i64; 2]>);

impl GroupElement {
    pub fn new(coords: &[i64]) -> Self {
        GroupElement(SmallVec::from_slice(coords))
    }

    pub fn zero(rank: usize) -> Self {
        GroupElement(SmallVec::from_elem(0, rank))
    }

    pub fn scalar(n: i64) -> Self {
        GroupElement::new(&[n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// 1-based coordinate `a_(i)`.
    pub fn coordinate(&self, i: usize) -> Result<i64, GroupError> {
        if i == 0 || i > self.rank() {
            return Err(GroupError::CoordinateOutOfRange {
                index: i,
                rank: self.rank(),
            });
        }
        Ok(self.0[i - 1])
    }

    pub fn gadd(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_rank(other)?;
        Ok(GroupElement(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn gsub(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_rank(other)?;
        Ok(GroupElement(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn gneg(&self) -> GroupElement {
        GroupElement(self.0.iter().map(|a| -a).collect())
    }

    pub fn geq(&self, other: &GroupElement) -> Result<bool, GroupError> {
        self.check_rank(other)?;
        Ok(self == other)
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        GroupElement(self.0.iter().map(|a| a * k).collect())
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    fn check_rank(&self, other: &GroupElement) -> Result<(), GroupError> {
        if self.rank() != other.rank() {
            return Err(GroupError::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        Ok(())
    }
}

impl std::ops::Add for &GroupElement {
    type Output = GroupElement;
    /// Panics on rank mismatch; see [`GroupElement::gadd`].
    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.gadd(rhs).expect("group rank mismatch")
    }
}

impl std::ops::Sub for &GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self.gsub(rhs).expect("group rank mismatch")
    }
}

impl std::ops::Neg for &GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        self.gneg()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GroupElement {
    type Err = GroupError;

    /// Accepts `(a1,...,aN)`; a bare integer is read as rank 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) => inner,
            None => t,
        };
        let coords: Result<SmallVec<[i64; 2]>, _> =
            inner.split(',').map(|c| c.trim().parse::<i64>()).collect();
        match coords {
            Ok(c) if !c.is_empty() => Ok(GroupElement(c)),
            _ => Err(GroupError::Parse(s.to_string())),
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rank and generator values ε₁ = 1, ε₂, ..., ε_ν.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    gens: Vec<Scalar>,
}

impl GroupSpec {
    pub fn new(gens: Vec<Scalar>) -> Result<Self, GroupError> {
        match gens.first() {
            None => Err(GroupError::Spec("rank must be at least 1".into())),
            Some(g) if !g.is_one() => Err(GroupError::Spec(format!(
                "first generator must be 1, got {g}"
            ))),
            Some(_) => Ok(GroupSpec { gens }),
        }
    }

    /// G = ℤ.
    pub fn integers() -> Self {
        GroupSpec {
            gens: vec![Scalar::one()],
        }
    }

    /// Rank ν with formal generators (1, e2, ..., eν).
    pub fn formal(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 {
            return Err(GroupError::Spec("rank must be at least 1".into()));
        }
        let mut gens = vec![Scalar::one()];
        gens.extend((0..rank - 1).map(Scalar::generator));
        Ok(GroupSpec { gens })
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Scalar] {
        &self.gens
    }

    /// Σ a_(i) ε_i.
    pub fn value(&self, a: &GroupElement) -> Result<Scalar, GroupError> {
        if a.rank() != self.rank() {
            return Err(GroupError::RankMismatch {
                left: a.rank(),
                right: self.rank(),
            });
        }
        let mut acc = Scalar::zero();
        for (c, g) in a.coords().iter().zip(&self.gens) {
            if *c != 0 {
                acc = &acc + &(&Scalar::from_int(*c) * g);
            }
        }
        Ok(acc)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::zero(self.rank())
    }
}
