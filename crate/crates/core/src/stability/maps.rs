//! Stabilization maps `H_l(W_{m-1}) → H_l(W_m)` on explicit bases.

use serde::Serialize;

use crate::diagrams::FamilySpec;
use crate::engine::{ElementTable, Tower};

use super::groups::{cycle_basis, map_chain, pairing_matrix, pairing_rank, reduce_bar};
use super::{BarComplex, PermutationModule, StabilityError};

/// One group `W_m` of a tower together with its elements.
pub struct Level {
    pub m: i64,
    pub tower: Tower,
    pub elements: ElementTable,
}

impl Level {
    pub fn new(spec: &FamilySpec, m: i64, cap: usize) -> Result<Self, StabilityError> {
        let tower = Tower::new(spec, m)?;
        let elements = tower.elements(cap)?;
        Ok(Level { m, tower, elements })
    }
}

/// Images of the elements of `small` under the inclusion into `big`.
pub fn inclusion(small: &Level, big: &Level) -> Vec<usize> {
    (0..small.elements.len())
        .map(|g| {
            let word = small.elements.word(g);
            big.elements.element_of(&big.tower.import_word(&small.tower, &word))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapVerdict {
    Iso,
    InjectionOnly,
    SurjectionOnly,
    Fail,
    Untested,
}

impl MapVerdict {
    pub fn classify(source: usize, target: usize, rank: usize) -> Self {
        match (rank == source, rank == target) {
            (true, true) => MapVerdict::Iso,
            (true, false) => MapVerdict::InjectionOnly,
            (false, true) => MapVerdict::SurjectionOnly,
            (false, false) => MapVerdict::Fail,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MapVerdict::Iso => "iso",
            MapVerdict::InjectionOnly => "injection-only",
            MapVerdict::SurjectionOnly => "surjection-only",
            MapVerdict::Fail => "fail",
            MapVerdict::Untested => "untested",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizationMap {
    pub m: i64,
    pub l: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    /// `matrix[i][j] = ⟨φ_j, ι(z_i)⟩` for cycle representatives `z_i` of the
    /// source and cocycle representatives `φ_j` of the target.
    pub matrix: Vec<Vec<u32>>,
    pub verdict: MapVerdict,
}

/// Pushes source cycles along the inclusion and pairs them with target cocycles.
pub fn induced_on_homology(
    small: &Level,
    big: &Level,
    l: usize,
    p: u32,
    budget: u128,
) -> Result<StabilizationMap, StabilityError> {
    let ms = PermutationModule::trivial(&small.elements);
    let mb = PermutationModule::trivial(&big.elements);
    let src = BarComplex::new(&small.elements, &ms, true);
    let tgt = BarComplex::new(&big.elements, &mb, true);
    let cycles = cycle_basis(&src, l, p, budget)?;
    let red = reduce_bar(&tgt, l, p, budget, true);
    if let Some(e) = red.exceeded {
        return Err(e);
    }
    let cocycles = &red.cocycles[l];
    let elem = inclusion(small, big);
    let images: Vec<_> =
        cycles.iter().map(|z| map_chain(&src, &tgt, l, z, &elem, &|_| vec![(0, 1)], p)).collect();
    let rank = pairing_rank(cocycles, &images, p);
    Ok(StabilizationMap {
        m: big.m,
        l,
        source_dim: cycles.len(),
        target_dim: cocycles.len(),
        rank,
        matrix: pairing_matrix(cocycles, &images, p),
        verdict: MapVerdict::classify(cycles.len(), cocycles.len(), rank),
    })
}

/// The map induced by `W_{m-1} ↪ W_m` in degree `l` over `F_p`.
pub fn stabilization_map(
    spec: &FamilySpec,
    m: i64,
    l: usize,
    p: u32,
    budget: u128,
    cap: usize,
) -> Result<StabilizationMap, StabilityError> {
    let small = Level::new(spec, m - 1, cap)?;
    let big = Level::new(spec, m, cap)?;
    induced_on_homology(&small, &big, l, p, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{builtin_family, Builtin};
    use crate::stability::DEFAULT_BUDGET;

    fn stab(b: Builtin, m: i64, l: usize) -> StabilizationMap {
        stabilization_map(&builtin_family(b).unwrap(), m, l, 2, DEFAULT_BUDGET, 100_000).unwrap()
    }

    #[test]
    fn degree_zero_is_identity() {
        for m in 0..=3 {
            let s = stab(Builtin::A, m, 0);
            assert_eq!(s.matrix, vec![vec![1]]);
            assert_eq!(s.verdict, MapVerdict::Iso);
        }
    }

    #[test]
    fn transposition_into_s3() {
        let s = stab(Builtin::A, 2, 1);
        assert_eq!((s.source_dim, s.target_dim, s.rank), (1, 1, 1));
        assert_eq!(s.verdict, MapVerdict::Iso);
    }

    #[test]
    fn outside_the_range() {
        // W_0 → W_1 in family A is 1 → C_2: H_1 goes from 0 to 1
        let s = stab(Builtin::A, 1, 1);
        assert_eq!((s.source_dim, s.target_dim), (0, 1));
        assert_eq!(s.verdict, MapVerdict::InjectionOnly);
        // iso in degree 2 already at m = 2, then injective only
        let s = stab(Builtin::A, 2, 2);
        assert_eq!((s.source_dim, s.target_dim, s.rank), (1, 1, 1));
        let s = stab(Builtin::A, 3, 2);
        assert_eq!((s.source_dim, s.target_dim), (1, 2));
        assert_eq!(s.verdict, MapVerdict::InjectionOnly);
    }

    #[test]
    fn classify_cases() {
        assert_eq!(MapVerdict::classify(2, 2, 2), MapVerdict::Iso);
        assert_eq!(MapVerdict::classify(1, 2, 1), MapVerdict::InjectionOnly);
        assert_eq!(MapVerdict::classify(2, 1, 1), MapVerdict::SurjectionOnly);
        assert_eq!(MapVerdict::classify(2, 2, 1), MapVerdict::Fail);
        assert_eq!(MapVerdict::classify(0, 0, 0), MapVerdict::Iso);
    }

    #[test]
    fn b_family_first_homology() {
        // the 4-labelled edge keeps t and s1 apart from W_1 on
        let s = stab(Builtin::B, 2, 1);
        assert_eq!((s.source_dim, s.target_dim, s.rank), (2, 2, 2));
    }
}
