//! Homology of bar complexes over `F_p` with explicit representatives, and
//! integral homology of small groups.

use std::collections::HashMap;

use crate::engine::{CoxeterSystem, ElementTable};
use crate::homology::{
    dot, reduce_columns, smith_normal_form, Coefficients, DegreeHomology, HomologyTable, ReduceOptions, SparseMatrix,
    SparseVec,
};

use super::{BarComplex, PermutationModule, StabilityError};

/// Default bound on the sparse entries of any single bar differential.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Integral homology is limited to small groups and low degrees.
pub const INTEGER_MAX_ORDER: usize = 120;
pub const INTEGER_MAX_DEGREE: usize = 2;

/// Result of reducing the coboundaries `δ^0, δ^1, …` with clearing.
#[derive(Debug, Clone)]
pub struct BarReduction {
    /// `dim H_l` for the degrees that fit the budget.
    pub dims: Vec<usize>,
    /// `rank ∂_l` for `l = 0..=dims.len()`.
    pub ranks: Vec<usize>,
    /// Cocycles whose classes form a basis of `H^l`, when requested.
    pub cocycles: Vec<Vec<SparseVec>>,
    /// Why the computation stopped early, if it did.
    pub exceeded: Option<StabilityError>,
}

/// `δ^l = ∂_{l+1}^T`.
fn coboundary(bar: &BarComplex<'_>, l: usize, budget: u128) -> Result<SparseMatrix, StabilityError> {
    Ok(bar.boundary(l + 1, budget)?.transpose())
}

/// Reduces `δ^0, …, δ^maxdeg` in turn; pivots of `δ^{l-1}` clear columns of `δ^l`.
pub fn reduce_bar(
    bar: &BarComplex<'_>,
    maxdeg: usize,
    p: u32,
    budget: u128,
    want_cocycles: bool,
) -> BarReduction {
    let mut ranks = vec![0usize];
    let mut dims = Vec::new();
    let mut cocycles = Vec::new();
    let mut clear = vec![false; bar.dim(0)];
    for l in 0..=maxdeg {
        let delta = match coboundary(bar, l, budget) {
            Ok(d) => d,
            Err(e) => return BarReduction { dims, ranks, cocycles, exceeded: Some(e) },
        };
        let red = reduce_columns(&delta, p, ReduceOptions { track_v: want_cocycles, clear: Some(&clear) });
        ranks.push(red.rank);
        dims.push(bar.dim(l) - ranks[l] - red.rank);
        if want_cocycles {
            let v = red.v.as_ref().expect("tracked");
            cocycles.push(red.zero_columns.iter().map(|&j| v[j].clone()).collect());
        }
        let mut next = vec![false; bar.dim(l + 1)];
        for r in red.pivot_rows() {
            next[r] = true;
        }
        clear = next;
    }
    BarReduction { dims, ranks, cocycles, exceeded: None }
}

/// Cycles whose classes form a basis of `H_l`: zero columns of `∂_l`
/// that are not cleared by pivots of `∂_{l+1}`.
pub fn cycle_basis(bar: &BarComplex<'_>, l: usize, p: u32, budget: u128) -> Result<Vec<SparseVec>, StabilityError> {
    let upper = bar.boundary(l + 1, budget)?;
    let up = reduce_columns(&upper, p, ReduceOptions::default());
    let mut clear = vec![false; bar.dim(l)];
    for r in up.pivot_rows() {
        clear[r] = true;
    }
    let lower = if l == 0 { SparseMatrix::zeros(0, bar.dim(0)) } else { bar.boundary(l, budget)? };
    let red = reduce_columns(&lower, p, ReduceOptions { track_v: true, clear: Some(&clear) });
    let v = red.v.expect("tracked");
    Ok(red.zero_columns.iter().map(|&j| v[j].clone()).collect())
}

/// Rank of the pairing matrix `⟨φ_j, x_i⟩`.
pub fn pairing_rank(cocycles: &[SparseVec], chains: &[SparseVec], p: u32) -> usize {
    let rows: Vec<SparseVec> = pairing_matrix(cocycles, chains, p)
        .into_iter()
        .map(|row| row.into_iter().enumerate().filter(|&(_, v)| v != 0).map(|(j, v)| (j as u32, v)).collect())
        .collect();
    crate::homology::rank_of_vectors(&rows, cocycles.len(), p)
}

/// Dense `⟨φ_j, x_i⟩`, one row per chain.
pub fn pairing_matrix(cocycles: &[SparseVec], chains: &[SparseVec], p: u32) -> Vec<Vec<u32>> {
    chains.iter().map(|x| cocycles.iter().map(|phi| dot(phi, x, p)).collect()).collect()
}

/// Pushes a chain of one bar complex into another along a group
/// homomorphism (`elem[g]`) and a module map (`module(m)`, a formal sum).
pub fn map_chain(
    src: &BarComplex<'_>,
    tgt: &BarComplex<'_>,
    l: usize,
    chain: &[(u32, u32)],
    elem: &[usize],
    module: &dyn Fn(usize) -> Vec<(usize, u32)>,
    p: u32,
) -> SparseVec {
    let mut acc: HashMap<u32, u32> = HashMap::new();
    let mut bars_t = Vec::with_capacity(l);
    for &(idx, c) in chain {
        let (m, bars) = src.decode(l, idx as usize);
        bars_t.clear();
        bars_t.extend(bars.iter().map(|&g| elem[g]));
        if tgt.normalized() && bars_t.contains(&0) {
            continue;
        }
        for (mt, coef) in module(m) {
            let k = tgt.encode(mt, &bars_t) as u32;
            let e = acc.entry(k).or_insert(0);
            *e = ((*e as u64 + coef as u64 * c as u64) % p as u64) as u32;
        }
    }
    let mut out: SparseVec = acc.into_iter().filter(|&(_, v)| v != 0).collect();
    out.sort_unstable();
    out
}

/// `H_l(G; M)` over `F_p` for `l ≤ maxdeg` from the normalized bar complex.
pub fn homology_with_coefficients(
    group: &ElementTable,
    module: &PermutationModule,
    maxdeg: usize,
    p: u32,
    budget: u128,
) -> Result<HomologyTable, StabilityError> {
    let bar = BarComplex::new(group, module, true);
    let red = reduce_bar(&bar, maxdeg, p, budget, false);
    if let Some(e) = red.exceeded {
        return Err(e);
    }
    Ok(table(Coefficients::Field(p), red.dims.into_iter().map(|d| (d, Vec::new())).collect()))
}

fn table(ring: Coefficients, degrees: Vec<(usize, Vec<num_bigint::BigUint>)>) -> HomologyTable {
    HomologyTable {
        ring,
        reduced: false,
        degrees: degrees.into_iter().map(|(rank, torsion)| DegreeHomology { rank, torsion }).collect(),
    }
}

/// `H_l(G)` with trivial coefficients for `l ≤ maxdeg`.
pub fn group_homology(
    group: &ElementTable,
    coeff: Coefficients,
    maxdeg: usize,
    budget: u128,
) -> Result<HomologyTable, StabilityError> {
    let module = PermutationModule::trivial(group);
    match coeff {
        Coefficients::Field(p) => homology_with_coefficients(group, &module, maxdeg, p, budget),
        Coefficients::Integers => {
            if group.len() > INTEGER_MAX_ORDER || maxdeg > INTEGER_MAX_DEGREE {
                let bar = BarComplex::new(group, &module, true);
                return Err(StabilityError::BudgetExceeded {
                    needed: bar.boundary_nnz_estimate(maxdeg + 1),
                    budget: 0,
                });
            }
            let bar = BarComplex::new(group, &module, true);
            let mut snfs = Vec::new();
            for l in 1..=maxdeg + 1 {
                snfs.push(smith_normal_form(&bar.boundary(l, budget)?));
            }
            let degrees = (0..=maxdeg)
                .map(|l| {
                    let below = if l == 0 { 0 } else { snfs[l - 1].rank };
                    (bar.dim(l) - below - snfs[l].rank, snfs[l].torsion())
                })
                .collect();
            Ok(table(Coefficients::Integers, degrees))
        }
    }
}

/// Classes of generators under `s ~ t` when `m_st` is odd; returns the
/// class of every generator, numbered by first appearance.
pub fn odd_classes(system: &CoxeterSystem) -> Vec<usize> {
    let n = system.rank();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for s in 0..n {
        for t in s + 1..n {
            if system.m(s, t).is_some_and(|m| m % 2 == 1) {
                let (a, b) = (find(&mut parent, s), find(&mut parent, t));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut number = HashMap::new();
    (0..n)
        .map(|s| {
            let r = find(&mut parent, s);
            let next = number.len();
            *number.entry(r).or_insert(next)
        })
        .collect()
}

/// `dim_{F_2} H_1(W)`: the number of odd classes of generators.
pub fn h1_formula(system: &CoxeterSystem) -> usize {
    odd_classes(system).into_iter().max().map_or(0, |m| m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{builtin_family, parse_diagram, Builtin};
    use crate::engine::{enumerate_group, Tower};
    use crate::homology::{rank_mod_p, universal_coefficients_consistent};

    fn tower(b: Builtin, n: i64) -> (Tower, ElementTable) {
        let t = Tower::new(&builtin_family(b).unwrap(), n).unwrap();
        let e = t.elements(100_000).unwrap();
        (t, e)
    }

    fn system(text: &str) -> CoxeterSystem {
        CoxeterSystem::new(parse_diagram(text).unwrap().matrix())
    }

    /// Ranks without clearing, straight from the boundary matrices.
    fn plain_dims(bar: &BarComplex<'_>, maxdeg: usize, p: u32) -> Vec<usize> {
        let ranks: Vec<usize> =
            (0..=maxdeg + 1).map(|l| if l == 0 { 0 } else { rank_mod_p(&bar.boundary(l, u128::MAX).unwrap(), p) }).collect();
        (0..=maxdeg).map(|l| bar.dim(l) - ranks[l] - ranks[l + 1]).collect()
    }

    #[test]
    fn cyclic_group_of_order_two() {
        let (_, g) = tower(Builtin::A, 1);
        let h = group_homology(&g, Coefficients::F2, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.ranks(), vec![1; 5]);
        let m = PermutationModule::trivial(&g);
        let bar = BarComplex::new(&g, &m, true);
        assert_eq!(plain_dims(&bar, 4, 2), vec![1; 5]);
        let h3 = group_homology(&g, Coefficients::Field(3), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(h3.ranks(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn symmetric_groups() {
        let (_, s3) = tower(Builtin::A, 2);
        assert_eq!(group_homology(&s3, Coefficients::F2, 2, DEFAULT_BUDGET).unwrap().ranks(), vec![1, 1, 1]);
        let (_, s4) = tower(Builtin::A, 3);
        let f2 = group_homology(&s4, Coefficients::F2, 2, DEFAULT_BUDGET).unwrap();
        let f3 = group_homology(&s4, Coefficients::Field(3), 2, DEFAULT_BUDGET).unwrap();
        let z = group_homology(&s4, Coefficients::Integers, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(f2.ranks(), vec![1, 1, 2]);
        assert!(universal_coefficients_consistent(&z, &f2));
        assert!(universal_coefficients_consistent(&z, &f3));
        assert_eq!(z.ranks(), vec![1, 0, 0]);
    }

    #[test]
    fn normalized_equals_unnormalized() {
        for (b, n, deg) in [(Builtin::A, 2, 3), (Builtin::B, 1, 2), (Builtin::I(5), 1, 2)] {
            let (_, g) = tower(b, n);
            let m = PermutationModule::trivial(&g);
            let norm = BarComplex::new(&g, &m, true);
            let full = BarComplex::new(&g, &m, false);
            assert_eq!(plain_dims(&norm, deg, 2), plain_dims(&full, deg, 2));
            assert_eq!(reduce_bar(&norm, deg, 2, DEFAULT_BUDGET, false).dims, plain_dims(&full, deg, 2));
        }
    }

    #[test]
    fn representatives_have_the_right_count() {
        let (_, g) = tower(Builtin::B, 1);
        let m = PermutationModule::trivial(&g);
        let bar = BarComplex::new(&g, &m, true);
        let red = reduce_bar(&bar, 2, 2, DEFAULT_BUDGET, true);
        for l in 0..=2 {
            let z = cycle_basis(&bar, l, 2, DEFAULT_BUDGET).unwrap();
            assert_eq!(z.len(), red.dims[l]);
            assert_eq!(red.cocycles[l].len(), red.dims[l]);
            // cohomology pairs perfectly with homology
            assert_eq!(pairing_rank(&red.cocycles[l], &z, 2), red.dims[l]);
        }
    }

    #[test]
    fn shapiro_small_cases() {
        let (t, g) = tower(Builtin::A, 2);
        let module = PermutationModule::from_cosets(&g, &t.cosets(1, 100).unwrap());
        let h = homology_with_coefficients(&g, &module, 2, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.ranks(), vec![1, 1, 1]);
        let (t, g) = tower(Builtin::B, 1);
        let module = PermutationModule::from_cosets(&g, &t.cosets(0, 100).unwrap());
        let (_, w0) = tower(Builtin::B, 0);
        assert_eq!(
            homology_with_coefficients(&g, &module, 1, 2, DEFAULT_BUDGET).unwrap().ranks(),
            group_homology(&w0, Coefficients::F2, 1, DEFAULT_BUDGET).unwrap().ranks()
        );
        let trivial = PermutationModule::trivial(&g);
        assert_eq!(
            homology_with_coefficients(&g, &trivial, 2, 2, DEFAULT_BUDGET).unwrap(),
            group_homology(&g, Coefficients::F2, 2, DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn h1_formula_against_bar_resolution() {
        let systems = [
            "vertices a",
            "vertices a b; edge a b",
            "vertices a b; edge a b 4",
            "vertices a b; edge a b 5",
            "vertices a b; edge a b 6",
            "vertices a b c",
            "vertices a b c; edge a b; edge b c 4",
            "vertices a b c; edge a b; edge b c",
        ];
        for text in systems {
            let sys = system(text);
            let g = enumerate_group(&sys, 10_000).unwrap();
            let h = group_homology(&g, Coefficients::F2, 1, DEFAULT_BUDGET).unwrap();
            assert_eq!(h.rank(1), h1_formula(&sys), "{text}");
        }
        assert_eq!(h1_formula(&system("vertices a b; edge a b 4")), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let (_, g) = tower(Builtin::A, 3);
        let err = group_homology(&g, Coefficients::F2, 3, 1000).unwrap_err();
        assert!(matches!(err, StabilityError::BudgetExceeded { .. }));
        assert!(group_homology(&g, Coefficients::Integers, 3, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn trivial_group() {
        let sys = CoxeterSystem::new(crate::diagrams::Diagram::empty().matrix());
        let g = enumerate_group(&sys, 10).unwrap();
        assert_eq!(group_homology(&g, Coefficients::F2, 3, DEFAULT_BUDGET).unwrap().ranks(), vec![1, 0, 0, 0]);
    }
}
