//! Basis symbols, linear combinations, closed-form brackets and the catalog.

mod catalog;
mod jacobi;
mod lincomb;
mod spec;
mod symbol;

pub use catalog::{catalog, entries, CatalogEntry, CatalogParams, CATALOG_NAMES};
pub use jacobi::{
    jacobi_audit, jacobi_defect, random_symbol, JacobiAudit, JacobiWitness, SampleRange, PRNG_NAME,
};
pub use lincomb::LinComb;
pub use spec::{AlgebraSpec, IndexReach, RuleFn};
pub use symbol::{BasisSymbol, Family, FamilyId, FamilyKind, IndexDomain};

use thiserror::Error;

use crate::exactnum::NumError;
use crate::group::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("duplicate family {0:?}")]
    DuplicateFamily(String),
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("index domain violation at {symbol}: {detail}")]
    IndexDomainViolation { symbol: String, detail: String },
    #[error("grading violation: [{x}, {y}] produced {out}")]
    GradingViolation { x: String, y: String, out: String },
    #[error("rule evaluation failed: {0}")]
    Rule(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Num(#[from] NumError),
}
