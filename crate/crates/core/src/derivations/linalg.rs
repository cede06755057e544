//! Sparse exact elimination over [`Scalar`].

use std::collections::BTreeMap;

use crate::exactnum::{NumError, Scalar};

pub type SparseVec = BTreeMap<usize, Scalar>;

/// `dst -= f * src`, dropping cancelled entries.
fn axpy_neg(dst: &mut SparseVec, f: &Scalar, src: &SparseVec, limit: usize) -> Result<(), NumError> {
    for (&c, v) in src {
        let t = f * v;
        match dst.get_mut(&c) {
            Some(d) => {
                let nv = &*d - &t;
                if nv.is_zero() {
                    dst.remove(&c);
                } else {
                    nv.check_ceiling(limit)?;
                    *d = nv;
                }
            }
            None => {
                t.check_ceiling(limit)?;
                dst.insert(c, -t);
            }
        }
    }
    Ok(())
}

/// Incrementally maintained reduced row echelon form. Each stored row has a
/// unit pivot and every pivot column is zero in all other rows.
///
/// Pivots are chosen per inserted row to minimise elimination fill: among the
/// row's surviving columns, the one occurring in the fewest stored rows,
/// ties broken by lowest column index.
#[derive(Clone, Debug)]
pub struct Rref {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
    limit: usize,
}

impl Rref {
    pub fn new(ncols: usize, term_limit: usize) -> Self {
        Rref { ncols, rows: Vec::new(), pivots: Vec::new(), row_of_col: vec![None; ncols], limit: term_limit }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `row` against the stored rows.
    pub fn reduce(&self, mut row: SparseVec) -> Result<SparseVec, NumError> {
        let hits: Vec<(usize, Scalar)> = row
            .iter()
            .filter_map(|(&c, v)| self.row_of_col[c].map(|r| (r, v.clone())))
            .collect();
        for (r, f) in hits {
            axpy_neg(&mut row, &f, &self.rows[r], self.limit)?;
        }
        Ok(row)
    }

    /// Inserts a row; returns whether the rank grew.
    pub fn push(&mut self, row: SparseVec) -> Result<bool, NumError> {
        debug_assert!(row.keys().all(|&c| c < self.ncols));
        let mut row = self.reduce(row)?;
        if row.is_empty() {
            return Ok(false);
        }
        let mut best: Option<(usize, usize)> = None;
        for &c in row.keys() {
            let count = self.rows.iter().filter(|r| r.contains_key(&c)).count();
            if best.map_or(true, |(bc, _)| count < bc) {
                best = Some((count, c));
            }
        }
        let (_, p) = best.expect("nonempty row");
        let inv = row[&p].inv()?;
        for v in row.values_mut() {
            *v = &*v * &inv;
            v.check_ceiling(self.limit)?;
        }
        for r in self.rows.iter_mut() {
            if let Some(f) = r.get(&p).cloned() {
                axpy_neg(r, &f, &row, self.limit)?;
            }
        }
        self.row_of_col[p] = Some(self.rows.len());
        self.rows.push(row);
        self.pivots.push(p);
        Ok(true)
    }

    /// Kernel basis, one vector per free column in increasing column order.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut by_free: BTreeMap<usize, SparseVec> = (0..self.ncols)
            .filter(|&c| self.row_of_col[c].is_none())
            .map(|c| (c, SparseVec::from([(c, Scalar::one())])))
            .collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            for (&c, v) in row {
                if c != p {
                    if let Some(k) = by_free.get_mut(&c) {
                        k.insert(p, -v);
                    }
                }
            }
        }
        by_free.into_values().collect()
    }
}

/// Canonical reduced row echelon form of the span of `vectors`: pivots are
/// leading columns, rows sorted by pivot. Two spans are equal iff their
/// canonical forms are.
pub fn canonical_rref(vectors: &[SparseVec]) -> Result<Vec<SparseVec>, NumError> {
    let mut rows: Vec<SparseVec> = vectors.iter().filter(|v| !v.is_empty()).cloned().collect();
    let mut out: Vec<SparseVec> = Vec::new();
    loop {
        rows.retain(|r| !r.is_empty());
        let Some(p) = rows.iter().filter_map(|r| r.keys().next().copied()).min() else {
            break;
        };
        let k = rows.iter().position(|r| r.keys().next() == Some(&p)).unwrap();
        let mut pivot = rows.swap_remove(k);
        let inv = pivot[&p].inv()?;
        for v in pivot.values_mut() {
            *v = &*v * &inv;
        }
        for r in rows.iter_mut().chain(out.iter_mut()) {
            if let Some(f) = r.get(&p).cloned() {
                axpy_neg(r, &f, &pivot, usize::MAX)?;
            }
        }
        out.push(pivot);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(c, x)| (c, Scalar::from_int(x))).collect()
    }

    #[test]
    fn kernel_of_single_equation() {
        let mut m = Rref::new(2, usize::MAX);
        assert!(m.push(v(&[(0, 1), (1, -1)])).unwrap());
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(canonical_rref(&k).unwrap(), vec![v(&[(0, 1), (1, 1)])]);
    }

    #[test]
    fn dependent_rows_do_not_grow_rank() {
        let mut m = Rref::new(3, usize::MAX);
        assert!(m.push(v(&[(0, 1), (1, 2)])).unwrap());
        assert!(m.push(v(&[(1, 1), (2, 1)])).unwrap());
        assert!(!m.push(v(&[(0, 1), (1, 3), (2, 1)])).unwrap());
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        for row in [v(&[(0, 1), (1, 2)]), v(&[(1, 1), (2, 1)])] {
            let dot: Scalar = row.iter().map(|(c, a)| a * &k[0].get(c).cloned().unwrap_or_default()).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn term_ceiling_aborts() {
        let e2 = Scalar::generator(0);
        let mut m = Rref::new(2, 1);
        let row: SparseVec = [(0, e2.clone()), (1, &e2 + &Scalar::one())].into_iter().collect();
        assert!(matches!(m.push(row), Err(NumError::TermCeiling { .. })));
    }
}
