//! Exact sparse rational linear algebra: rank, row echelon form and kernels.
//!
//! Pivots are chosen per column by smallest coefficient bit size, with the
//! sparser row winning ties.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::{bit_size, Q};

pub type SparseVec = BTreeMap<usize, Q>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

fn axpy(target: &mut SparseVec, c: &Q, src: &SparseVec) {
    for (k, v) in src {
        let entry = target.entry(*k).or_insert_with(Q::zero);
        *entry += c * v;
        if entry.is_zero() {
            target.remove(k);
        }
    }
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![SparseVec::new(); nrows] }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        Self { nrows: rows.len(), ncols, rows }
    }

    /// Builds a matrix whose `c`-th column is `cols[c]`.
    pub fn from_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col {
                m.add_entry(*r, c, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.nrows && c < self.ncols, "entry ({r},{c}) out of bounds");
        let mut single = SparseVec::new();
        single.insert(c, v);
        axpy(&mut self.rows[r], &Q::from_integer(1.into()), &single);
    }

    pub fn entry(&self, r: usize, c: usize) -> Q {
        self.rows[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                t.rows[*c].insert(r, v.clone());
            }
        }
        t
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, v) in row {
                axpy(&mut acc, v, &other.rows[*k]);
            }
            out.rows[r] = acc;
        }
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut s = Q::zero();
            for (c, x) in v {
                if let Some(a) = row.get(c) {
                    s += a * x;
                }
            }
            if !s.is_zero() {
                out.insert(r, s);
            }
        }
        out
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.nrows, other.nrows, "row mismatch in hstack");
        let mut out = self.clone();
        out.ncols += other.ncols;
        for (r, row) in other.rows.iter().enumerate() {
            for (c, v) in row {
                out.rows[r].insert(c + self.ncols, v.clone());
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (SparseMatrix, Vec<usize>) {
        self.eliminate(true)
    }

    pub fn rank(&self) -> usize {
        if self.nrows == 0 || self.ncols == 0 {
            return 0;
        }
        self.eliminate(false).1.len()
    }

    fn eliminate(&self, reduce: bool) -> (SparseMatrix, Vec<usize>) {
        let mut pending: Vec<SparseVec> =
            self.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut done: Vec<(usize, SparseVec)> = Vec::new();
        while !pending.is_empty() {
            let col = pending.iter().filter_map(|r| r.keys().next().copied()).min().expect("rows are nonzero");
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, r)| r.keys().next() == Some(&col))
                .min_by_key(|(_, r)| (bit_size(&r[&col]), r.len()))
                .map(|(i, _)| i)
                .expect("some row has the pivot column");
            let mut pivot = pending.swap_remove(best);
            let inv = pivot[&col].recip();
            for v in pivot.values_mut() {
                *v *= &inv;
            }
            for row in pending.iter_mut() {
                if let Some(c) = row.get(&col).cloned() {
                    axpy(row, &-c, &pivot);
                }
            }
            pending.retain(|r| !r.is_empty());
            done.push((col, pivot));
        }
        if reduce {
            for i in (0..done.len()).rev() {
                let (col, pivot) = done[i].clone();
                for (_, row) in done[..i].iter_mut() {
                    if let Some(c) = row.get(&col).cloned() {
                        axpy(row, &-c, &pivot);
                    }
                }
            }
        }
        let pivots: Vec<usize> = done.iter().map(|(c, _)| *c).collect();
        let rows: Vec<SparseVec> = done.into_iter().map(|(_, r)| r).collect();
        (SparseMatrix { nrows: rows.len(), ncols: self.ncols, rows }, pivots)
    }

    /// A basis of the null space {v : self·v = 0}.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !pivot_set.contains(c)) {
            let mut v = SparseVec::new();
            v.insert(free, Q::from_integer(1.into()));
            for (row, p) in r.rows.iter().zip(&pivots) {
                if let Some(c) = row.get(&free) {
                    v.insert(*p, -c.clone());
                }
            }
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = SparseMatrix::zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                if *v != 0 {
                    m.add_entry(i, j, q(*v));
                }
            }
        }
        m
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(dense(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(dense(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).rank(), 3);
        assert_eq!(dense(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
        assert_eq!(SparseMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(SparseMatrix::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = dense(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = m.kernel();
        assert_eq!(k.len(), 4 - m.rank());
        for v in &k {
            assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn rref_is_reduced() {
        let m = dense(&[&[2, 4], &[1, 3]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.entry(0, 0), q(1));
        assert_eq!(r.entry(0, 1), q(0));
        let m = dense(&[&[3, 1]]);
        let (r, _) = m.rref();
        assert_eq!(r.entry(0, 1), qf(1, 3));
    }

    #[test]
    fn product_and_transpose() {
        let a = dense(&[&[1, 2], &[0, 1]]);
        let b = dense(&[&[1, -2], &[0, 1]]);
        assert_eq!(a.mul(&b), dense(&[&[1, 0], &[0, 1]]));
        assert_eq!(a.transpose().entry(1, 0), q(2));
        assert_eq!(a.hstack(&b).ncols(), 4);
    }
}
