//! The base chamber `Δ = {a_0, …, a_n}` of `sd C^n` and its faces `Δ_s`.
//!
//! `a_i` is the simplex `{s_{i+1}⋯s_n W_{n-1}, …, s_n W_{n-1}, W_{n-1}}` of
//! `C^n` (an `(n-i)`-simplex) seen as a vertex of the subdivision.
//! `Δ_s = Δ` for `s ∈ S_{-1}`, `Δ_s = Δ ∖ {a_0}` for `s ∈ S_0 ∖ S_{-1}`, and
//! `Δ_s = Δ ∖ {a_i}` for `s = s_i`.

use super::{CosetComplex, Simplex, Subdivision};

#[derive(Debug, Clone)]
pub struct BaseChamber {
    pub n: usize,
    /// Vertices `a_0, …, a_n` of `sd C^n`.
    pub a: Vec<u32>,
    /// `a_i` as simplices of `C^n`.
    pub a_simplices: Vec<Simplex>,
    /// For each generator, the indices `i` with `a_i ∈ Δ_s`.
    pub mirror: Vec<Vec<usize>>,
    /// Generators in `S_0 ∖ S_{-1}`.
    pub s_eq0: Vec<usize>,
}

impl BaseChamber {
    /// `S_{=i}`: the generators whose face omits `a_i`.
    pub fn s_eq(&self, i: usize) -> Vec<usize> {
        (0..self.mirror.len()).filter(|&s| !self.mirror[s].contains(&i)).collect()
    }

    /// Bitmask of `{s : F ⊆ Δ_s}` for a face given by indices into `a`.
    pub fn face_type(&self, face: &[usize]) -> u64 {
        (0..self.mirror.len())
            .filter(|&s| face.iter().all(|i| self.mirror[s].contains(i)))
            .fold(0, |m, s| m | 1 << s)
    }
}

pub fn base_chamber(cn: &CosetComplex, sd: &Subdivision) -> BaseChamber {
    let n = cn.n();
    let a_simplices: Vec<Simplex> = (0..=n)
        .map(|i| {
            let mut s: Simplex = (i + 1..=n + 1).map(|j| cn.proj[cn.suffix_element(j)]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let a = a_simplices.iter().map(|s| sd.vertex_of(s).expect("a_i is a simplex of C^n")).collect();
    let tower = &cn.tower;
    let s_eq0 = tower.s_eq0();
    let mirror = (0..tower.rank())
        .map(|s| {
            let omit = match tower.level(s) {
                -1 => None,
                l => Some(l as usize),
            };
            (0..=n).filter(|&i| Some(i) != omit).collect()
        })
        .collect();
    BaseChamber { n, a, a_simplices, mirror, s_eq0 }
}
