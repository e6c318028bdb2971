//! Barycentric subdivision: vertices are the simplices of `K`, simplices
//! are chains under inclusion.

use std::collections::HashMap;

use super::{GroupAction, Simplex, SimplicialComplex};

#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// Simplex of the original complex carried by each new vertex.
    pub carrier: Vec<Simplex>,
    vertex_of: HashMap<Simplex, u32>,
}

impl Subdivision {
    pub fn vertex_of(&self, s: &[u32]) -> Option<u32> {
        self.vertex_of.get(s).copied()
    }

    /// Action on `sd K` induced by an action on `K`.
    pub fn induced_action(&self, action: &GroupAction) -> GroupAction {
        let perms = action
            .perms
            .iter()
            .map(|p| self.carrier.iter().map(|s| self.vertex_of[&GroupAction::apply(p, s)]).collect())
            .collect();
        GroupAction { points: self.carrier.len(), perms }
    }

    /// Induced permutation of one original vertex permutation.
    pub fn induced_perm(&self, perm: &[u32]) -> Vec<u32> {
        self.carrier.iter().map(|s| self.vertex_of[&GroupAction::apply(perm, s)]).collect()
    }
}

pub fn barycentric_subdivision(k: &SimplicialComplex) -> Subdivision {
    let carrier: Vec<Simplex> = k.all_simplices().cloned().collect();
    let vertex_of: HashMap<Simplex, u32> = carrier.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    let labels = carrier
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(|&v| k.label(v)).collect::<Vec<_>>().join(",")))
        .collect();

    // strict cofaces one dimension up
    let mut up: Vec<Vec<u32>> = vec![Vec::new(); carrier.len()];
    for (i, s) in carrier.iter().enumerate() {
        if s.len() > 1 {
            for drop in 0..s.len() {
                let mut f = s.clone();
                f.remove(drop);
                up[vertex_of[&f] as usize].push(i as u32);
            }
        }
    }
    // a chain σ_0 ⊂ … ⊂ σ_r extends to a maximal one through codimension-one steps,
    // so every chain is a subset of a maximal flag; enumerate maximal flags
    let mut facets: Vec<Simplex> = Vec::new();
    let mut stack: Vec<Vec<u32>> = k.simplices(0).iter().map(|s| vec![vertex_of[s]]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap() as usize;
        if up[top].is_empty() {
            facets.push(chain);
        } else {
            for &next in &up[top] {
                let mut c = chain.clone();
                c.push(next);
                stack.push(c);
            }
        }
    }
    let complex = SimplicialComplex::from_facets(labels, facets);
    Subdivision { complex, carrier, vertex_of }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::oracle::{hyperoctahedron, simplex};

    #[test]
    fn counts() {
        assert_eq!(barycentric_subdivision(&simplex(1)).complex.f_vector(), vec![3, 2]);
        assert_eq!(barycentric_subdivision(&simplex(2)).complex.f_vector(), vec![7, 12, 6]);
        let sq = barycentric_subdivision(&hyperoctahedron(1));
        assert_eq!(sq.complex.f_vector(), vec![8, 8]);
    }

    #[test]
    fn euler_characteristic_is_preserved() {
        for k in [simplex(3), hyperoctahedron(2), hyperoctahedron(3).skeleton(2)] {
            let sd = barycentric_subdivision(&k);
            assert_eq!(sd.complex.euler_characteristic(), k.euler_characteristic());
            assert!(sd.complex.is_closed());
        }
    }

    #[test]
    fn chains_are_nested() {
        let sd = barycentric_subdivision(&simplex(2));
        for s in sd.complex.all_simplices() {
            let mut car: Vec<&Simplex> = s.iter().map(|&v| &sd.carrier[v as usize]).collect();
            car.sort_by_key(|c| c.len());
            for w in car.windows(2) {
                assert!(w[0].len() < w[1].len());
                assert!(w[0].iter().all(|v| w[1].contains(v)));
            }
        }
    }
}
