//! The tower `W_{-1} ⊂ W_0 ⊂ W_1 ⊂ … ⊂ W_n` inside `W_n`.

use crate::diagrams::{family_term, Diagram, FamilySpec};

use super::{coset_enumerate, enumerate_group, CosetTable, CoxeterSystem, ElementTable, EngineError};

#[derive(Debug, Clone)]
pub struct Tower {
    pub n: i64,
    pub diagram: Diagram,
    pub system: CoxeterSystem,
    level: Vec<i64>,
    chain: Vec<usize>,
}

impl Tower {
    pub fn new(spec: &FamilySpec, n: i64) -> Result<Self, EngineError> {
        let diagram = family_term(spec, n)?;
        let system = CoxeterSystem::new(diagram.matrix());
        let g0 = family_term(spec, 0)?;
        let gm1 = family_term(spec, -1)?;
        let mut level = Vec::with_capacity(system.rank());
        let mut chain = Vec::new();
        for i in 1..=n.max(0) as usize {
            chain.push(system.index_of(&spec.preferred_name(i)).expect("chain vertex present"));
        }
        for s in 0..system.rank() {
            let name = system.name(s);
            let l = if gm1.vertices.iter().any(|v| v == name) {
                -1
            } else if g0.vertices.iter().any(|v| v == name) {
                0
            } else {
                chain.iter().position(|&c| c == s).expect("vertex is on the chain") as i64 + 1
            };
            level.push(l);
        }
        Ok(Tower { n, diagram, system, level, chain })
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    /// Smallest `m` with `s ∈ S_m`.
    pub fn level(&self, s: usize) -> i64 {
        self.level[s]
    }

    /// Generator indices of `S_m`.
    pub fn gens_at(&self, m: i64) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.level[s] <= m).collect()
    }

    pub fn mask_at(&self, m: i64) -> u64 {
        self.gens_at(m).into_iter().fold(0, |acc, s| acc | 1 << s)
    }

    /// Generator index of `s_i`, `1 <= i <= n`.
    pub fn s(&self, i: usize) -> usize {
        self.chain[i - 1]
    }

    /// The word `s_j s_{j+1} ⋯ s_n`; empty when `j = n + 1`.
    pub fn suffix(&self, j: usize) -> Vec<usize> {
        (j..=self.n as usize).map(|i| self.s(i)).collect()
    }

    /// `S_{=0}`: generators of `S_0` that do not commute with `s_1`
    /// (for `n = 0` this is just `S_0 ∖ S_{-1}`).
    pub fn s_eq0(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.level[s] == 0).collect()
    }

    pub fn elements(&self, cap: usize) -> Result<ElementTable, EngineError> {
        enumerate_group(&self.system, cap)
    }

    /// `W_n / W_m`.
    pub fn cosets(&self, m: i64, cap: usize) -> Result<CosetTable, EngineError> {
        coset_enumerate(&self.system, &self.gens_at(m), cap)
    }

    /// Smallest `m >= -1` with the element in `W_m`, given its support mask.
    pub fn level_of_support(&self, support: u64) -> i64 {
        (0..self.rank()).filter(|&s| support >> s & 1 == 1).map(|s| self.level[s]).max().unwrap_or(-1).max(-1)
    }

    /// Maps a word of a smaller tower of the same family into this one, by name.
    pub fn import_word(&self, other: &Tower, word: &[usize]) -> Vec<usize> {
        word.iter()
            .map(|&s| self.system.index_of(other.system.name(s)).expect("generator present in larger tower"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{builtin_family, Builtin};

    #[test]
    fn levels_for_d() {
        let t = Tower::new(&builtin_family(Builtin::D).unwrap(), 3).unwrap();
        assert_eq!(t.rank(), 5);
        assert_eq!(t.gens_at(-1).len(), 0);
        assert_eq!(t.gens_at(0).len(), 2);
        assert_eq!(t.gens_at(2).len(), 4);
        assert_eq!(t.system.name(t.s(1)), "s1");
        assert_eq!(t.suffix(2).len(), 2);
        assert!(t.suffix(4).is_empty());
        // S_{=0} is S_0 minus S_{-1} and consists of neighbours of s_1
        for s in t.s_eq0() {
            assert_ne!(t.system.m(s, t.s(1)), Some(2));
        }
    }

    #[test]
    fn coset_indices_match_subgroup_orders() {
        for b in [Builtin::A, Builtin::B, Builtin::D] {
            let t = Tower::new(&builtin_family(b).unwrap(), 2).unwrap();
            let all = t.elements(100_000).unwrap();
            for m in -1..=2 {
                let c = t.cosets(m, 100_000).unwrap();
                let sub = (0..all.len()).filter(|&g| t.level_of_support(all.support_mask(g)) <= m).count();
                assert_eq!(c.len() * sub, all.len(), "{b} m={m}");
            }
        }
    }
}
