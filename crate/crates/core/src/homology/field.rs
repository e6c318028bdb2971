//! Column reduction over a prime field `F_p`.
//!
//! Columns are reduced left to right so that no two nonzero columns share
//! a pivot (largest row index). Optionally the reduction records `V` with
//! `R = D·V`, which turns zero columns into kernel vectors. A `clear` mask
//! skips columns known in advance to reduce to zero.

use super::SparseMatrix;

/// Sorted `(index, value)` pairs with values in `[1, p)`.
pub type SparseVec = Vec<(u32, u32)>;

const NONE: u32 = u32::MAX;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// `a + c·b` over `F_p`.
pub fn axpy(a: &[(u32, u32)], c: u32, b: &[(u32, u32)], p: u32) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, mul_mod(c, b[j].1, p)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = (a[i].1 + mul_mod(c, b[j].1, p)) % p;
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|&(r, v)| (r, mul_mod(c, v, p))));
    out
}

/// Symmetric difference of sorted index lists (`F_2` addition).
fn xor_merge(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn dot(a: &[(u32, u32)], b: &[(u32, u32)], p: u32) -> u32 {
    let (mut i, mut j, mut acc) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = (acc + a[i].1 as u64 * b[j].1 as u64) % p as u64;
                i += 1;
                j += 1;
            }
        }
    }
    acc as u32
}

pub fn column_mod_p(m: &SparseMatrix, j: usize, p: u32) -> SparseVec {
    m.column(j)
        .filter_map(|(r, v)| {
            let v = v.rem_euclid(p as i64) as u32;
            (v != 0).then_some((r, v))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ColumnReduction {
    pub p: u32,
    pub nrows: usize,
    pub ncols: usize,
    /// For each row, the column whose reduced pivot it is (`u32::MAX` if none).
    pub pivot_of_row: Vec<u32>,
    /// Reduced columns; empty unless the column has a pivot.
    pub reduced: Vec<SparseVec>,
    /// `V` columns when tracked, for every column that was not skipped.
    pub v: Option<Vec<SparseVec>>,
    /// Columns that reduced to zero (skipped ones excluded).
    pub zero_columns: Vec<usize>,
    pub rank: usize,
}

impl ColumnReduction {
    pub fn pivot_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of_row.iter().enumerate().filter(|(_, &c)| c != NONE).map(|(r, _)| r)
    }

    pub fn is_pivot_row(&self, r: usize) -> bool {
        self.pivot_of_row[r] != NONE
    }

    /// Reduces an extra vector against the pivots; returns the remainder.
    pub fn reduce_vector(&self, mut col: SparseVec) -> SparseVec {
        let p = self.p;
        while let Some(&(low, val)) = col.last() {
            let k = self.pivot_of_row[low as usize];
            if k == NONE {
                break;
            }
            let piv = &self.reduced[k as usize];
            let c = mul_mod(p - val, inv_mod(piv.last().unwrap().1, p), p);
            col = axpy(&col, c, piv, p);
        }
        col
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReduceOptions<'a> {
    pub track_v: bool,
    pub clear: Option<&'a [bool]>,
}

pub fn reduce_columns(m: &SparseMatrix, p: u32, opts: ReduceOptions<'_>) -> ColumnReduction {
    if p == 2 && !opts.track_v {
        return reduce_columns_f2(m, opts.clear);
    }
    let (nrows, ncols) = (m.nrows(), m.ncols());
    let mut pivot_of_row = vec![NONE; nrows];
    let mut reduced: Vec<SparseVec> = vec![Vec::new(); ncols];
    let mut v: Option<Vec<SparseVec>> = opts.track_v.then(|| vec![Vec::new(); ncols]);
    let mut zero_columns = Vec::new();
    let mut rank = 0;
    for j in 0..ncols {
        if opts.clear.is_some_and(|c| c[j]) {
            continue;
        }
        let mut col = column_mod_p(m, j, p);
        let mut vj: SparseVec = vec![(j as u32, 1)];
        while let Some(&(low, val)) = col.last() {
            let k = pivot_of_row[low as usize];
            if k == NONE {
                break;
            }
            let piv = &reduced[k as usize];
            let c = mul_mod(p - val, inv_mod(piv.last().unwrap().1, p), p);
            col = axpy(&col, c, piv, p);
            if let Some(vs) = &v {
                vj = axpy(&vj, c, &vs[k as usize], p);
            }
        }
        match col.last() {
            Some(&(low, _)) => {
                pivot_of_row[low as usize] = j as u32;
                reduced[j] = col;
                rank += 1;
            }
            None => zero_columns.push(j),
        }
        if let Some(vs) = &mut v {
            vs[j] = vj;
        }
    }
    ColumnReduction { p, nrows, ncols, pivot_of_row, reduced, v, zero_columns, rank }
}

fn reduce_columns_f2(m: &SparseMatrix, clear: Option<&[bool]>) -> ColumnReduction {
    let (nrows, ncols) = (m.nrows(), m.ncols());
    let mut pivot_of_row = vec![NONE; nrows];
    let mut reduced_f2: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut zero_columns = Vec::new();
    let mut rank = 0;
    for j in 0..ncols {
        if clear.is_some_and(|c| c[j]) {
            continue;
        }
        let mut col: Vec<u32> = m.column(j).filter(|e| e.1 % 2 != 0).map(|e| e.0).collect();
        while let Some(&low) = col.last() {
            let k = pivot_of_row[low as usize];
            if k == NONE {
                break;
            }
            col = xor_merge(&col, &reduced_f2[k as usize]);
        }
        match col.last() {
            Some(&low) => {
                pivot_of_row[low as usize] = j as u32;
                reduced_f2[j] = col;
                rank += 1;
            }
            None => zero_columns.push(j),
        }
    }
    let reduced = reduced_f2.into_iter().map(|c| c.into_iter().map(|r| (r, 1)).collect()).collect();
    ColumnReduction { p: 2, nrows, ncols, pivot_of_row, reduced, v: None, zero_columns, rank }
}

/// Rank over `F_p`, reducing along the shorter side.
pub fn rank_mod_p(m: &SparseMatrix, p: u32) -> usize {
    if m.ncols() > m.nrows() {
        reduce_columns(&m.transpose(), p, ReduceOptions::default()).rank
    } else {
        reduce_columns(m, p, ReduceOptions::default()).rank
    }
}

/// Basis of the kernel of `m` over `F_p`.
pub fn kernel_basis(m: &SparseMatrix, p: u32) -> Vec<SparseVec> {
    let red = reduce_columns(m, p, ReduceOptions { track_v: true, clear: None });
    let v = red.v.expect("tracked");
    red.zero_columns.iter().map(|&j| v[j].clone()).collect()
}

/// Rank of a list of vectors of length `n` over `F_p`.
pub fn rank_of_vectors(vectors: &[SparseVec], n: usize, p: u32) -> usize {
    let cols = vectors.iter().map(|v| v.iter().map(|&(r, x)| (r, x as i64)).collect()).collect();
    let m = SparseMatrix::from_columns(n, cols);
    reduce_columns(&m, p, ReduceOptions::default()).rank
}
