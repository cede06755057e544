//! δ-derivation spaces on finite windows.

mod assemble;
mod linalg;
mod solve;
mod verify;
mod window;

pub use assemble::{
    assemble, AssemblyStats, DegreeSel, DerivationProblem, IndexCeiling, LinearSystem, OutputRegion, RowTag,
    ShiftRegion,
};
pub use linalg::{canonical_rref, Rref, SparseVec};
pub use solve::{
    degree_reports, interior_rank, nullspace, solve, solve_all_degrees, DegreeReport, DegreeSolve, InteriorSpace,
    SolutionSpace, SolveOptions, Triple,
};
pub use verify::{pairs_of, verify_map, AdjointMap, FnMap, Identity, LinearMap, MapReport, MapWitness, TabulatedMap};
pub use window::{enumerate_window, FamilyInterval, Window, WindowReport};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::exactnum::NumError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivError {
    #[error("empty window")]
    EmptyWindow,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("map undefined on {0}")]
    MapUndefined(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Num(#[from] NumError),
}
