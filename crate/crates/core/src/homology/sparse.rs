//! Compressed sparse column matrices with integer entries.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, col_ptr: vec![0; ncols + 1], row_idx: Vec::new(), vals: Vec::new() }
    }

    /// Starts an empty matrix to be filled column by column with [`push_column`](Self::push_column).
    pub fn builder(nrows: usize) -> Self {
        SparseMatrix { nrows, ncols: 0, col_ptr: vec![0], row_idx: Vec::new(), vals: Vec::new() }
    }

    /// Appends a column; duplicate rows are summed and zeros dropped.
    pub fn push_column(&mut self, entries: &mut Vec<(u32, i64)>) {
        entries.sort_unstable_by_key(|e| e.0);
        let mut i = 0;
        while i < entries.len() {
            let r = entries[i].0;
            let mut v = 0i64;
            while i < entries.len() && entries[i].0 == r {
                v += entries[i].1;
                i += 1;
            }
            if v != 0 {
                debug_assert!((r as usize) < self.nrows);
                self.row_idx.push(r);
                self.vals.push(v);
            }
        }
        self.ncols += 1;
        self.col_ptr.push(self.row_idx.len());
        entries.clear();
    }

    pub fn from_columns(nrows: usize, columns: Vec<Vec<(u32, i64)>>) -> Self {
        let mut m = Self::builder(nrows);
        for mut c in columns {
            m.push_column(&mut c);
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::builder(nrows);
        for j in 0..ncols {
            let mut col: Vec<(u32, i64)> =
                (0..nrows).filter(|&i| rows[i][j] != 0).map(|i| (i as u32, rows[i][j])).collect();
            m.push_column(&mut col);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (u32, i64)> + '_ {
        let (a, b) = (self.col_ptr[j], self.col_ptr[j + 1]);
        self.row_idx[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    pub fn column_len(&self, j: usize) -> usize {
        self.col_ptr[j + 1] - self.col_ptr[j]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.column(j).find(|e| e.0 as usize == i).map_or(0, |e| e.1)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.nrows + 1];
        for &r in &self.row_idx {
            counts[r as usize + 1] += 1;
        }
        for i in 0..self.nrows {
            counts[i + 1] += counts[i];
        }
        let col_ptr = counts.clone();
        let mut next = counts;
        let mut row_idx = vec![0u32; self.nnz()];
        let mut vals = vec![0i64; self.nnz()];
        for j in 0..self.ncols {
            for (r, v) in self.column(j) {
                let slot = next[r as usize];
                row_idx[slot] = j as u32;
                vals[slot] = v;
                next[r as usize] += 1;
            }
        }
        SparseMatrix { nrows: self.ncols, ncols: self.nrows, col_ptr, row_idx, vals }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0i64; self.ncols]; self.nrows];
        for j in 0..self.ncols {
            for (r, v) in self.column(j) {
                d[r as usize][j] = v;
            }
        }
        d
    }

    /// `self · other`, entries reduced mod `modulus` when given.
    pub fn mul(&self, other: &SparseMatrix, modulus: Option<u32>) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch");
        let mut out = Self::builder(self.nrows);
        let mut acc: Vec<(u32, i64)> = Vec::new();
        for j in 0..other.ncols {
            for (k, v) in other.column(j) {
                for (i, w) in self.column(k as usize) {
                    acc.push((i, v * w));
                }
            }
            if let Some(p) = modulus {
                acc.sort_unstable_by_key(|e| e.0);
                let mut merged: Vec<(u32, i64)> = Vec::new();
                for (i, v) in acc.drain(..) {
                    match merged.last_mut() {
                        Some(last) if last.0 == i => last.1 = (last.1 + v).rem_euclid(p as i64),
                        _ => merged.push((i, v.rem_euclid(p as i64))),
                    }
                }
                acc = merged;
            }
            out.push_column(&mut acc);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// Entries reduced into `[0, p)`, zeros dropped.
    pub fn mod_p(&self, p: u32) -> SparseMatrix {
        let mut out = Self::builder(self.nrows);
        let mut col = Vec::new();
        for j in 0..self.ncols {
            col.extend(self.column(j).map(|(r, v)| (r, v.rem_euclid(p as i64))));
            out.push_column(&mut col);
        }
        out
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hcat(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.nrows, other.nrows);
        let mut out = self.clone();
        let shift = out.row_idx.len();
        out.row_idx.extend_from_slice(&other.row_idx);
        out.vals.extend_from_slice(&other.vals);
        out.col_ptr.extend(other.col_ptr[1..].iter().map(|&p| p + shift));
        out.ncols += other.ncols;
        out
    }

    /// Block-diagonal `[self 0; 0 other]`.
    pub fn block_diag(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = Self::builder(self.nrows + other.nrows);
        let mut col = Vec::new();
        for j in 0..self.ncols {
            col.extend(self.column(j));
            out.push_column(&mut col);
        }
        for j in 0..other.ncols {
            col.extend(other.column(j).map(|(r, v)| (r + self.nrows as u32, v)));
            out.push_column(&mut col);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_transpose_multiply() {
        let m = SparseMatrix::from_dense(&[vec![1, 0, 2], vec![0, -3, 0]]);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(1, 1), -3);
        let t = m.transpose();
        assert_eq!(t.to_dense(), vec![vec![1, 0], vec![0, -3], vec![2, 0]]);
        let p = m.mul(&t, None);
        assert_eq!(p.to_dense(), vec![vec![5, 0], vec![0, 9]]);
        assert_eq!(m.mul(&t, Some(3)).to_dense(), vec![vec![2, 0], vec![0, 0]]);
    }

    #[test]
    fn duplicates_merge_and_cancel() {
        let m = SparseMatrix::from_columns(3, vec![vec![(2, 1), (0, 4), (2, -1)]]);
        assert_eq!(m.column(0).collect::<Vec<_>>(), vec![(0, 4)]);
    }

    #[test]
    fn concatenation() {
        let a = SparseMatrix::from_dense(&[vec![1], vec![0]]);
        let b = SparseMatrix::from_dense(&[vec![0], vec![7]]);
        assert_eq!(a.hcat(&b).to_dense(), vec![vec![1, 0], vec![0, 7]]);
        assert_eq!(a.block_diag(&b).to_dense(), vec![vec![1, 0], vec![0, 0], vec![0, 0], vec![0, 7]]);
    }
}
