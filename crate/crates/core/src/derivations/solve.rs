use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::assemble::{assemble, AssemblyStats, DegreeSel, DerivationProblem, LinearSystem};
use super::linalg::{canonical_rref, Rref, SparseVec};
use super::verify::TabulatedMap;
use super::window::Window;
use super::DerivError;
use crate::algebra::{AlgebraSpec, BasisSymbol};
use crate::exactnum::Scalar;
use crate::group::GroupElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Abort when a scalar grows beyond this many polynomial terms.
    pub term_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { term_limit: 10_000 }
    }
}

/// Kernel of a derivation system. Vectors are sparse over the system's
/// unknown columns.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub inputs: Arc<Vec<BasisSymbol>>,
    pub unknowns: Arc<Vec<(BasisSymbol, BasisSymbol)>>,
    pub basis: Vec<SparseVec>,
    pub full_rank: usize,
    pub matrix_rank: usize,
}

/// Exact kernel of `system`.
pub fn nullspace(system: &LinearSystem, opts: &SolveOptions) -> Result<SolutionSpace, DerivError> {
    let mut m = Rref::new(system.unknowns.len(), opts.term_limit);
    for row in &system.rows {
        if m.rank() == m.ncols() {
            break;
        }
        m.push(row.clone())?;
    }
    let basis = m.kernel();
    Ok(SolutionSpace {
        inputs: Arc::new(system.inputs.clone()),
        unknowns: Arc::new(system.unknowns.clone()),
        full_rank: basis.len(),
        matrix_rank: m.rank(),
        basis,
    })
}

/// Projection of a solution space onto the coefficients whose input and
/// output both lie in the window interior, in canonical echelon form.
#[derive(Clone, Debug)]
pub struct InteriorSpace {
    pub columns: Vec<usize>,
    pub basis: Vec<SparseVec>,
}

impl InteriorSpace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

impl SolutionSpace {
    pub fn interior_columns(&self, alg: &AlgebraSpec, window: &Window) -> Vec<usize> {
        self.unknowns
            .iter()
            .enumerate()
            .filter(|(_, (x, s))| window.is_interior(alg, x) && window.is_interior(alg, s))
            .map(|(k, _)| k)
            .collect()
    }

    pub fn interior(&self, alg: &AlgebraSpec, window: &Window) -> Result<InteriorSpace, DerivError> {
        let columns = self.interior_columns(alg, window);
        let keep: std::collections::HashSet<usize> = columns.iter().copied().collect();
        let projected: Vec<SparseVec> = self
            .basis
            .iter()
            .map(|v| v.iter().filter(|(c, _)| keep.contains(c)).map(|(c, x)| (*c, x.clone())).collect())
            .collect();
        Ok(InteriorSpace { columns, basis: canonical_rref(&projected)? })
    }

    /// A kernel vector as a map on the window inputs.
    pub fn to_map(&self, v: &SparseVec) -> TabulatedMap {
        self.to_map_on(v, self.inputs.iter().cloned())
    }

    /// A kernel (or projected) vector as a map with the given domain.
    pub fn to_map_on(&self, v: &SparseVec, domain: impl IntoIterator<Item = BasisSymbol>) -> TabulatedMap {
        let mut map = TabulatedMap::new(domain);
        for (c, x) in v {
            let (input, output) = &self.unknowns[*c];
            map.add(input.clone(), output.clone(), x.clone());
        }
        map
    }

    pub fn triples(&self, alg: &AlgebraSpec, v: &SparseVec) -> Vec<Triple> {
        v.iter()
            .map(|(c, x)| {
                let (i, o) = &self.unknowns[*c];
                Triple { in_symbol: alg.format_symbol(i), out_symbol: alg.format_symbol(o), coeff: x.clone() }
            })
            .collect()
    }
}

/// Rank of `space` projected onto interior coefficients.
pub fn interior_rank(space: &SolutionSpace, alg: &AlgebraSpec, window: &Window) -> Result<usize, DerivError> {
    Ok(space.interior(alg, window)?.rank())
}

#[derive(Clone, Debug, Serialize)]
pub struct Triple {
    pub in_symbol: String,
    pub out_symbol: String,
    pub coeff: Scalar,
}

/// Result of one degree solve.
#[derive(Clone, Debug)]
pub struct DegreeSolve {
    pub degree: DegreeSel,
    pub stats: AssemblyStats,
    pub unknowns: usize,
    pub space: SolutionSpace,
    pub interior: InteriorSpace,
}

impl DegreeSolve {
    pub fn interior_rank(&self) -> usize {
        self.interior.rank()
    }

    pub fn report(&self, alg: &AlgebraSpec) -> DegreeReport {
        DegreeReport {
            degree: self.degree.to_string(),
            solved: true,
            unknowns: self.unknowns,
            equations_kept: self.stats.equations_kept,
            equations_skipped: self.stats.equations_skipped,
            pairs_skipped: self.stats.pairs_skipped,
            full_rank: self.space.full_rank,
            interior_rank: self.interior.rank(),
            interior_basis: self.interior.basis.iter().map(|v| self.space.triples(alg, v)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub degree: String,
    /// `false` when the degree cannot carry interior coefficients and the
    /// solve was skipped; ranks are then reported as zero.
    pub solved: bool,
    pub unknowns: usize,
    pub equations_kept: usize,
    pub equations_skipped: usize,
    pub pairs_skipped: usize,
    pub full_rank: usize,
    pub interior_rank: usize,
    pub interior_basis: Vec<Vec<Triple>>,
}

impl DegreeReport {
    fn skipped(degree: &GroupElement) -> Self {
        DegreeReport {
            degree: degree.to_string(),
            solved: false,
            unknowns: 0,
            equations_kept: 0,
            equations_skipped: 0,
            pairs_skipped: 0,
            full_rank: 0,
            interior_rank: 0,
            interior_basis: Vec::new(),
        }
    }
}

/// Assembles, solves and projects one problem.
pub fn solve(problem: &DerivationProblem<'_>, opts: &SolveOptions) -> Result<DegreeSolve, DerivError> {
    if problem.window.interior_is_empty(problem.alg) {
        return Err(DerivError::InvalidWindow("window interior is empty; reduce the margin".into()));
    }
    let system = assemble(problem)?;
    let space = nullspace(&system, opts)?;
    let interior = space.interior(problem.alg, &problem.window)?;
    Ok(DegreeSolve {
        degree: problem.degree.clone(),
        stats: system.stats,
        unknowns: system.unknowns.len(),
        space,
        interior,
    })
}

/// One solve per reachable shift, in parallel. Shifts that cannot connect two
/// interior degrees are not solved and report rank zero. Results are ordered
/// by degree.
pub fn solve_all_degrees(
    alg: &AlgebraSpec,
    delta: &Scalar,
    window: &Window,
    opts: &SolveOptions,
) -> Result<Vec<(GroupElement, Option<DegreeSolve>)>, DerivError> {
    if window.interior_is_empty(alg) {
        return Err(DerivError::InvalidWindow("window interior is empty; reduce the margin".into()));
    }
    let interior = window.interior_shifts();
    window
        .shifts()
        .into_par_iter()
        .map(|g| {
            if !interior.contains(&g) {
                return Ok((g, None));
            }
            let problem =
                DerivationProblem { alg, delta: delta.clone(), degree: DegreeSel::Single(g.clone()), window: window.clone() };
            Ok((g, Some(solve(&problem, opts)?)))
        })
        .collect()
}

pub fn degree_reports(alg: &AlgebraSpec, solves: &[(GroupElement, Option<DegreeSolve>)]) -> Vec<DegreeReport> {
    solves
        .iter()
        .map(|(g, s)| match s {
            Some(s) => s.report(alg),
            None => DegreeReport::skipped(g),
        })
        .collect()
}
