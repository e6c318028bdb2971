//! Bar complexes `C_l = M ⊗ F[G^l]` of a finite group with coefficients in
//! a permutation module `M`.
//!
//! `M` is a left permutation module turned into a right module by
//! `m·g = g^{-1}·m`; the boundary is
//! `∂(m⊗[g_1|…|g_l]) = m·g_1⊗[g_2|…] + Σ (−1)^i m⊗[…|g_i g_{i+1}|…] + (−1)^l m⊗[g_1|…|g_{l−1}]`.
//! In the normalized complex bar cells never contain the identity and
//! terms producing it are dropped.

use crate::engine::{CosetTable, ElementTable};
use crate::homology::SparseMatrix;

use super::StabilityError;

/// Permutation module on a finite basis with the action of every element tabulated.
#[derive(Debug, Clone)]
pub struct PermutationModule {
    dim: usize,
    order: usize,
    /// `left[g * dim + m] = g·m`
    left: Vec<u32>,
}

impl PermutationModule {
    pub fn trivial(group: &ElementTable) -> Self {
        PermutationModule { dim: 1, order: group.len(), left: vec![0; group.len()] }
    }

    /// `F[G/H]` from a coset table of `G`, with the left action `g·cH`.
    pub fn from_cosets(group: &ElementTable, cosets: &CosetTable) -> Self {
        let dim = cosets.len();
        let mut left = vec![0u32; group.len() * dim];
        for m in 0..dim {
            left[m] = m as u32;
        }
        for g in 1..group.len() {
            let a = group.first_letter(g).expect("non-identity");
            let q = group.left_mul(a, g);
            for m in 0..dim {
                let qm = left[q * dim + m] as usize;
                left[g * dim + m] = cosets.act(qm, a) as u32;
            }
        }
        PermutationModule { dim, order: group.len(), left }
    }

    /// Module from explicit generator permutations (`perm[s][m] = s·m`).
    pub fn from_generator_perms(group: &ElementTable, perms: &[Vec<u32>]) -> Self {
        let dim = perms.first().map_or(1, |p| p.len());
        let mut left = vec![0u32; group.len() * dim];
        for m in 0..dim {
            left[m] = m as u32;
        }
        for g in 1..group.len() {
            let a = group.first_letter(g).expect("non-identity");
            let q = group.left_mul(a, g);
            for m in 0..dim {
                left[g * dim + m] = perms[a][left[q * dim + m] as usize];
            }
        }
        PermutationModule { dim, order: group.len(), left }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self, g: usize, m: usize) -> usize {
        self.left[g * self.dim + m] as usize
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

pub struct BarComplex<'a> {
    group: &'a ElementTable,
    module: &'a PermutationModule,
    normalized: bool,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl<'a> BarComplex<'a> {
    pub fn new(group: &'a ElementTable, module: &'a PermutationModule, normalized: bool) -> Self {
        let n = group.len();
        let mut mul = vec![0u32; n * n];
        for g in 0..n {
            mul[g * n] = g as u32;
        }
        // g·h built along the normal form of h
        for h in 1..n {
            let w = group.word(h);
            let (last, prefix) = w.split_last().unwrap();
            let hp = group.element_of(prefix);
            for g in 0..n {
                mul[g * n + h] = group.right_mul(mul[g * n + hp] as usize, *last) as u32;
            }
        }
        let inv = (0..n).map(|g| group.inverse(g) as u32).collect();
        BarComplex { group, module, normalized, mul, inv }
    }

    pub fn group(&self) -> &ElementTable {
        self.group
    }

    pub fn module(&self) -> &PermutationModule {
        self.module
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    /// Number of bar letters available per slot.
    pub fn base(&self) -> usize {
        if self.normalized {
            self.group.len() - 1
        } else {
            self.group.len()
        }
    }

    pub fn dim(&self, l: usize) -> usize {
        self.module.dim() * self.base().pow(l as u32)
    }

    /// Sparse entries of `∂_l`, for budget checks before building it.
    pub fn boundary_nnz_estimate(&self, l: usize) -> u128 {
        if l == 0 {
            return 0;
        }
        (l as u128 + 1) * self.module.dim() as u128 * (self.base() as u128).pow(l as u32)
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.group.len() + h] as usize
    }

    fn digit(&self, g: usize) -> usize {
        if self.normalized {
            g - 1
        } else {
            g
        }
    }

    fn elem(&self, d: usize) -> usize {
        if self.normalized {
            d + 1
        } else {
            d
        }
    }

    pub fn encode(&self, m: usize, bars: &[usize]) -> usize {
        let b = self.base();
        bars.iter().fold(m, |acc, &g| acc * b + self.digit(g))
    }

    pub fn decode(&self, l: usize, mut idx: usize) -> (usize, Vec<usize>) {
        let b = self.base();
        let mut bars = vec![0; l];
        for k in (0..l).rev() {
            bars[k] = self.elem(idx % b);
            idx /= b;
        }
        (idx, bars)
    }

    /// Boundary of one cell, as signed `(index, coefficient)` pairs in degree `l−1`.
    pub fn boundary_of(&self, m: usize, bars: &[usize], out: &mut Vec<(u32, i64)>) {
        let l = bars.len();
        if l == 0 {
            return;
        }
        let mg = self.module.left(self.inv[bars[0]] as usize, m);
        out.push((self.encode(mg, &bars[1..]) as u32, 1));
        let mut buf = Vec::with_capacity(l);
        for i in 1..l {
            let prod = self.mul(bars[i - 1], bars[i]);
            if self.normalized && prod == 0 {
                continue;
            }
            buf.clear();
            buf.extend_from_slice(&bars[..i - 1]);
            buf.push(prod);
            buf.extend_from_slice(&bars[i + 1..]);
            out.push((self.encode(m, &buf) as u32, if i % 2 == 0 { 1 } else { -1 }));
        }
        out.push((self.encode(m, &bars[..l - 1]) as u32, if l % 2 == 0 { 1 } else { -1 }));
    }

    /// `∂_l : C_l → C_{l−1}`; `budget` bounds the number of sparse entries.
    pub fn boundary(&self, l: usize, budget: u128) -> Result<SparseMatrix, StabilityError> {
        assert!(l >= 1);
        let est = self.boundary_nnz_estimate(l);
        if est > budget || self.dim(l) > u32::MAX as usize {
            return Err(StabilityError::BudgetExceeded { needed: est, budget });
        }
        let mut mat = SparseMatrix::builder(self.dim(l - 1));
        let mut col = Vec::with_capacity(l + 1);
        for idx in 0..self.dim(l) {
            let (m, bars) = self.decode(l, idx);
            self.boundary_of(m, &bars, &mut col);
            mat.push_column(&mut col);
        }
        Ok(mat)
    }
}
