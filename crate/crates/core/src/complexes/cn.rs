//! The coset complex `C^n`: vertices `W_n/W_{n-1}`, and a `k`-simplex for
//! every `c ∈ W_n`, namely `{c s_{n-k+1}⋯s_n W_{n-1}, …, c s_n W_{n-1}, c W_{n-1}}`.

use std::collections::HashMap;

use crate::diagrams::FamilySpec;
use crate::engine::{CosetTable, ElementTable, Tower};

use super::{ComplexError, GroupAction, Simplex, SimplicialComplex};

#[derive(Debug, Clone)]
pub struct CosetComplex {
    pub tower: Tower,
    pub elements: ElementTable,
    /// `W_n / W_{n-1}`
    pub cosets: CosetTable,
    /// Coset row of every element.
    pub proj: Vec<u32>,
    pub complex: SimplicialComplex,
    pub action: GroupAction,
    /// Element `s_j ⋯ s_n` at index `j - 1`, for `j = 1..=n+1`.
    suffix_elem: Vec<usize>,
}

pub fn build_cn(spec: &FamilySpec, n: i64, cap: usize) -> Result<CosetComplex, ComplexError> {
    if n < 0 {
        return Err(ComplexError::BadIndex(n));
    }
    let tower = Tower::new(spec, n)?;
    let elements = tower.elements(cap)?;
    let cosets = tower.cosets(n - 1, cap)?;
    let proj = elements.project(&cosets);
    let nu = n as usize;
    let suffix_elem: Vec<usize> = (1..=nu + 1).map(|j| elements.element_of(&tower.suffix(j))).collect();
    let labels = (0..cosets.len())
        .map(|r| {
            let w = cosets.representative(r);
            if w.is_empty() {
                "W".to_string()
            } else {
                format!("{}.W", w.iter().map(|&s| tower.system.name(s)).collect::<Vec<_>>().join("."))
            }
        })
        .collect();
    let perms: Vec<Vec<u32>> =
        (0..tower.rank()).map(|s| (0..cosets.len()).map(|r| cosets.act(r, s) as u32).collect()).collect();
    let action = GroupAction { points: cosets.len(), perms };

    // orbit closure of the base simplices under the generators
    let mut simplices: Vec<Simplex> = Vec::new();
    let mut seen: std::collections::HashSet<Simplex> = std::collections::HashSet::new();
    for k in 0..=nu {
        let mut base: Simplex = (nu - k + 1..=nu + 1).map(|j| proj[suffix_elem[j - 1]]).collect();
        base.sort_unstable();
        if !seen.insert(base.clone()) {
            continue;
        }
        let start = simplices.len();
        simplices.push(base);
        let mut head = start;
        while head < simplices.len() {
            for p in &action.perms {
                let img = GroupAction::apply(p, &simplices[head]);
                if seen.insert(img.clone()) {
                    simplices.push(img);
                }
            }
            head += 1;
        }
    }
    let complex = SimplicialComplex::from_simplices(labels, simplices)?;
    Ok(CosetComplex { tower, elements, cosets, proj, complex, action, suffix_elem })
}

impl CosetComplex {
    pub fn n(&self) -> usize {
        self.tower.n as usize
    }

    /// Element `s_j ⋯ s_n` (identity for `j = n + 1`).
    pub fn suffix_element(&self, j: usize) -> usize {
        self.suffix_elem[j - 1]
    }

    /// Vertex `c s_j ⋯ s_n W_{n-1}`.
    pub fn vertex_of(&self, c: usize, j: usize) -> u32 {
        self.proj[self.elements.multiply(c, self.suffix_elem[j - 1])]
    }

    /// The `k`-simplex with lift `c`, in the order induced by `c`:
    /// position `j` holds `c s_{n-k+j+1} ⋯ s_n W_{n-1}`.
    pub fn lift(&self, c: usize, k: usize) -> Vec<u32> {
        let n = self.n();
        (0..=k).map(|j| self.vertex_of(c, n - k + j + 1)).collect()
    }

    /// First lift (in element order) of every `k`-simplex.
    pub fn first_lifts(&self, k: usize) -> HashMap<Simplex, usize> {
        let mut out = HashMap::new();
        for c in 0..self.elements.len() {
            let mut s = self.lift(c, k);
            s.sort_unstable();
            out.entry(s).or_insert(c);
        }
        out
    }

    /// `g·v` for every element and vertex.
    pub fn element_perms(&self) -> Vec<Vec<u32>> {
        self.action.element_perms(&self.elements)
    }

    pub fn generator_names(&self) -> Vec<String> {
        (0..self.tower.rank()).map(|s| self.tower.system.name(s).to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{iso_check, oracle};
    use crate::diagrams::{builtin_family, Builtin};

    fn cn(b: Builtin, n: i64) -> CosetComplex {
        build_cn(&builtin_family(b).unwrap(), n, 100_000).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn small_examples() {
        assert_eq!(cn(Builtin::A, 2).complex.f_vector(), vec![3, 3, 1]);
        let b1 = cn(Builtin::B, 1);
        assert_eq!(b1.complex.f_vector(), vec![4, 4]);
        assert!(iso_check(&b1.complex, &oracle::hyperoctahedron(1), 1000).unwrap().is_some());
        assert_eq!(cn(Builtin::D, 1).complex.f_vector(), vec![6, 12]);
        assert_eq!(cn(Builtin::A, 0).complex.f_vector(), vec![1]);
        assert_eq!(cn(Builtin::D, 0).complex.f_vector(), vec![4]);
    }

    #[test]
    fn simplex_counts() {
        for n in 1..=4 {
            let a = cn(Builtin::A, n);
            let b = cn(Builtin::B, n.min(3));
            let h = oracle::hyperoctahedron(n.min(3) as usize);
            for k in 0..=n as usize {
                assert_eq!(a.complex.count(k), binom(n as usize + 1, k + 1));
            }
            assert_eq!(b.complex.f_vector(), h.f_vector());
        }
    }

    #[test]
    fn action_is_valid() {
        for (b, n) in [(Builtin::A, 3), (Builtin::B, 2), (Builtin::D, 2)] {
            let c = cn(b, n);
            assert!(c.action.preserves(&c.complex));
            assert!(c.action.satisfies_relations(&c.tower.system));
            assert!(c.complex.is_closed());
        }
    }

    #[test]
    fn lifts_cover_simplices_and_reorder() {
        let c = cn(Builtin::B, 2);
        let n = c.n();
        for k in 0..=n {
            let lifts = c.first_lifts(k);
            assert_eq!(lifts.len(), c.complex.count(k));
            for (s, &g) in &lifts {
                let ordered = c.lift(g, k);
                let mut sorted = ordered.clone();
                sorted.sort_unstable();
                assert_eq!(&sorted, s);
                // c·s_{n-k+i+1} swaps positions i and i+1
                for i in 0..k {
                    let g2 = c.elements.right_mul(g, c.tower.s(n - k + i + 1));
                    let mut expected = ordered.clone();
                    expected.swap(i, i + 1);
                    assert_eq!(c.lift(g2, k), expected);
                }
            }
        }
    }
}
