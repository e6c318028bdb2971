//! Smith normal form over ℤ.
//!
//! Unit pivots are eliminated sparsely in `i64`, choosing the pivot with the
//! smallest Markowitz count `(r-1)(c-1)`. Whatever remains (or everything
//! after an overflow) is diagonalized densely over `BigInt`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    /// Nonzero invariant factors `d_1 | d_2 | …`.
    pub diagonal: Vec<BigUint>,
    pub rank: usize,
}

impl Snf {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigUint> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

struct Sparse {
    cols: Vec<BTreeMap<u32, i64>>,
    rows: Vec<BTreeSet<u32>>,
    alive: Vec<bool>,
}

impl Sparse {
    fn new(m: &SparseMatrix) -> Self {
        let mut cols = Vec::with_capacity(m.ncols());
        let mut rows = vec![BTreeSet::new(); m.nrows()];
        for j in 0..m.ncols() {
            let mut col = BTreeMap::new();
            for (i, v) in m.column(j) {
                col.insert(i, v);
                rows[i as usize].insert(j as u32);
            }
            cols.push(col);
        }
        let alive = vec![true; m.ncols()];
        Sparse { cols, rows, alive }
    }

    fn best_unit_pivot(&self) -> Option<(u32, u32)> {
        let mut best: Option<(usize, u32, u32)> = None;
        for (j, col) in self.cols.iter().enumerate() {
            if !self.alive[j] {
                continue;
            }
            for (&i, &v) in col {
                if v.abs() == 1 {
                    let cost = (col.len() - 1) * (self.rows[i as usize].len() - 1);
                    if best.is_none_or(|(c, _, _)| cost < c) {
                        best = Some((cost, i, j as u32));
                        if cost == 0 {
                            return Some((i, j as u32));
                        }
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Clears row `i` with column operations against column `j`, then drops
    /// row `i` and column `j`. Returns false without changes on overflow.
    fn eliminate(&mut self, i: u32, j: u32) -> bool {
        let pivot = self.cols[j as usize][&i];
        let others: Vec<u32> = self.rows[i as usize].iter().copied().filter(|&k| k != j).collect();
        let mut updated = Vec::with_capacity(others.len());
        for &k in &others {
            let factor = self.cols[k as usize][&i] * pivot;
            let mut col = self.cols[k as usize].clone();
            for (&r, &v) in &self.cols[j as usize] {
                let Some(delta) = v.checked_mul(factor) else { return false };
                let e = col.entry(r).or_insert(0);
                let Some(nv) = e.checked_sub(delta) else { return false };
                *e = nv;
            }
            col.retain(|_, v| *v != 0);
            updated.push((k, col));
        }
        for (k, col) in updated {
            for r in self.cols[k as usize].keys() {
                self.rows[*r as usize].remove(&k);
            }
            for r in col.keys() {
                self.rows[*r as usize].insert(k);
            }
            self.cols[k as usize] = col;
        }
        for r in self.cols[j as usize].keys() {
            self.rows[*r as usize].remove(&j);
        }
        self.cols[j as usize].clear();
        self.alive[j as usize] = false;
        true
    }
}

pub fn smith_normal_form(m: &SparseMatrix) -> Snf {
    let mut sp = Sparse::new(m);
    let mut units = 0;
    while let Some((i, j)) = sp.best_unit_pivot() {
        if !sp.eliminate(i, j) {
            break;
        }
        units += 1;
    }
    let live_cols: Vec<usize> = (0..sp.cols.len()).filter(|&j| sp.alive[j] && !sp.cols[j].is_empty()).collect();
    let live_rows: Vec<usize> = (0..sp.rows.len()).filter(|&i| !sp.rows[i].is_empty()).collect();
    let row_pos: BTreeMap<usize, usize> = live_rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (c, &j) in live_cols.iter().enumerate() {
        for (&i, &v) in &sp.cols[j] {
            dense[row_pos[&(i as usize)]][c] = BigInt::from(v);
        }
    }
    let mut diagonal = vec![BigUint::one(); units];
    diagonal.extend(dense_snf(dense));
    Snf { rank: diagonal.len(), diagonal }
}

/// Diagonalizes a dense integer matrix; returns the nonzero invariant factors.
pub fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigUint> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                    if a[i][t].abs() < a[t][t].abs() {
                        a.swap(t, i);
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                    if a[t][j].abs() < a[t][t].abs() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into row t
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offending {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs().to_biguint().expect("absolute value"));
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn snf_of(rows: &[Vec<i64>]) -> Vec<u64> {
        let s = smith_normal_form(&SparseMatrix::from_dense(rows));
        s.diagonal.iter().map(|d| u64::try_from(d.clone()).unwrap()).collect()
    }

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }

    fn det(m: &[Vec<i128>]) -> i128 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|c| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect()).collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum()
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
    }

    /// Invariant factors as ratios of determinantal divisors `gcd of k×k minors`.
    fn determinantal_oracle(rows: &[Vec<i64>]) -> Vec<u64> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut out = Vec::new();
        let mut prev = 1i128;
        for k in 1..=r.min(c) {
            let mut g = 0i128;
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect()).collect();
                    g = gcd(g, det(&minor));
                }
            }
            if g == 0 {
                break;
            }
            out.push((g / prev) as u64);
            prev = g;
        }
        out
    }

    #[test]
    fn examples() {
        assert_eq!(snf_of(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(determinantal_oracle(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf_of(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), vec![1, 1, 1]);
        assert_eq!(smith_normal_form(&SparseMatrix::zeros(3, 4)).rank, 0);
        assert_eq!(snf_of(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
    }

    #[test]
    fn overflow_escalates() {
        let big = 1i64 << 40;
        let rows = vec![vec![1, big, 0], vec![big, 1, big], vec![0, big, 1]];
        let s = smith_normal_form(&SparseMatrix::from_dense(&rows));
        assert_eq!(s.rank, 3);
        // det = 1 - 2^81, computed exactly
        let det: BigInt = BigInt::one() - (BigInt::one() << 81usize);
        assert_eq!(s.diagonal[2], det.abs().to_biguint().unwrap());
    }

    proptest! {
        #[test]
        fn matches_determinantal_divisors(rows in proptest::collection::vec(proptest::collection::vec(-6i64..7, 4), 1..5)) {
            let s = snf_of(&rows);
            prop_assert_eq!(&s, &determinantal_oracle(&rows));
            for w in s.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }
}
