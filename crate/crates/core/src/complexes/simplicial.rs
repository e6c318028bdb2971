//! Finite abstract simplicial complexes over a fixed labelled vertex universe.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::engine::{CoxeterSystem, ElementTable};

use super::ComplexError;

/// Sorted vertex indices.
pub type Simplex = Vec<u32>;

/// Simplices are stored per dimension in lexicographic order. The label
/// list is a universe: a vertex is in the complex iff `[v]` is a 0-simplex,
/// so subcomplexes can share the universe of their parent.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.by_dim == other.by_dim
    }
}

impl SimplicialComplex {
    pub fn empty(labels: Vec<String>) -> Self {
        SimplicialComplex { labels, by_dim: Vec::new(), index: HashMap::new() }
    }

    fn assemble(labels: Vec<String>, set: BTreeSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in set {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        let mut index = HashMap::new();
        for list in &by_dim {
            for (i, s) in list.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        SimplicialComplex { labels, by_dim, index }
    }

    /// Builds a complex from a face-closed family; fails if some face is missing.
    pub fn from_simplices(
        labels: Vec<String>,
        simplices: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self, ComplexError> {
        let mut set = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if let Some(&v) = s.iter().find(|&&v| v as usize >= labels.len()) {
                return Err(ComplexError::VertexOutOfRange(v));
            }
            set.insert(s);
        }
        for s in &set {
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    if !set.contains(&f) {
                        return Err(ComplexError::NotClosed(f));
                    }
                }
            }
        }
        Ok(Self::assemble(labels, set))
    }

    /// Closure of a list of facets under taking nonempty faces.
    pub fn from_facets(labels: Vec<String>, facets: impl IntoIterator<Item = Simplex>) -> Self {
        let mut set = BTreeSet::new();
        for mut f in facets {
            f.sort_unstable();
            f.dedup();
            assert!(f.len() < 32, "facet too large");
            if set.contains(&f) {
                continue;
            }
            for mask in 1u32..(1 << f.len()) {
                let face: Simplex = (0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                set.insert(face);
            }
        }
        Self::assemble(labels, set)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn universe_size(&self) -> usize {
        self.labels.len()
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.by_dim.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn count(&self, k: usize) -> usize {
        self.by_dim.get(k).map_or(0, |l| l.len())
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], |l| l.as_slice())
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|l| l.len()).collect()
    }

    pub fn num_simplices(&self) -> usize {
        self.by_dim.iter().map(|l| l.len()).sum()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index.contains_key(s)
    }

    /// Position of a simplex within its dimension.
    pub fn position(&self, s: &[u32]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    pub fn is_closed(&self) -> bool {
        self.all_simplices().all(|s| {
            s.len() == 1
                || (0..s.len()).all(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    self.contains(&f)
                })
        })
    }

    /// Simplices not contained in a larger simplex.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&Simplex> = BTreeSet::new();
        let mut out = Vec::new();
        for list in self.by_dim.iter().rev() {
            for s in list {
                if !covered.contains(s) {
                    out.push(s.clone());
                }
            }
            for s in list {
                if s.len() > 1 {
                    for i in 0..s.len() {
                        let mut f = s.clone();
                        f.remove(i);
                        if let Some((k, _)) = self.index.get_key_value(&f) {
                            covered.insert(k);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// `lk(σ) = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}`, in the same universe.
    pub fn link(&self, sigma: &[u32]) -> Result<SimplicialComplex, ComplexError> {
        let mut sigma = sigma.to_vec();
        sigma.sort_unstable();
        if !self.contains(&sigma) {
            return Err(ComplexError::SimplexAbsent(sigma));
        }
        let mut set = BTreeSet::new();
        for list in self.by_dim.iter().skip(sigma.len()) {
            for t in list {
                if sigma.iter().all(|v| t.binary_search(v).is_ok()) {
                    let rest: Simplex = t.iter().copied().filter(|v| sigma.binary_search(v).is_err()).collect();
                    set.insert(rest);
                }
            }
        }
        Ok(Self::assemble(self.labels.clone(), set))
    }

    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let set = self.by_dim.iter().take(k + 1).flatten().cloned().collect();
        Self::assemble(self.labels.clone(), set)
    }

    /// Subcomplex generated by the given simplices of `self` (closure taken).
    pub fn subcomplex(&self, generators: impl IntoIterator<Item = Simplex>) -> SimplicialComplex {
        Self::from_facets(self.labels.clone(), generators)
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        assert_eq!(self.labels.len(), other.labels.len(), "different universes");
        let set = self.all_simplices().chain(other.all_simplices()).cloned().collect();
        Self::assemble(self.labels.clone(), set)
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        assert_eq!(self.labels.len(), other.labels.len(), "different universes");
        let set = self.all_simplices().filter(|s| other.contains(s)).cloned().collect();
        Self::assemble(self.labels.clone(), set)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.all_simplices().all(|s| other.contains(s))
    }

    /// Same simplices (labels ignored).
    pub fn same_simplices(&self, other: &SimplicialComplex) -> bool {
        self.by_dim == other.by_dim
    }

    /// Relabels vertices `0..k` in order of appearance, dropping unused labels.
    pub fn compacted(&self) -> SimplicialComplex {
        let verts = self.vertices();
        let mut new_id = HashMap::new();
        for (i, &v) in verts.iter().enumerate() {
            new_id.insert(v, i as u32);
        }
        let labels = verts.iter().map(|&v| self.labels[v as usize].clone()).collect();
        let set = self.all_simplices().map(|s| s.iter().map(|v| new_id[v]).collect()).collect();
        Self::assemble(labels, set)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexJson {
    pub schema: u32,
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<Simplex>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub action: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    pub fn to_json(&self, generators: Vec<String>, action: Option<&GroupAction>) -> ComplexJson {
        ComplexJson {
            schema: 1,
            vertices: self.labels.clone(),
            simplices: self.by_dim.clone(),
            generators,
            action: action.map(|a| a.perms.clone()).unwrap_or_default(),
        }
    }

    /// Reads the `{vertices, simplices}` document written by [`to_json`](Self::to_json).
    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        #[derive(serde::Deserialize)]
        struct Doc {
            vertices: Vec<String>,
            simplices: Vec<Vec<Simplex>>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| ComplexError::Json(e.to_string()))?;
        Self::from_simplices(doc.vertices, doc.simplices.into_iter().flatten())
    }
}

/// Permutations of the vertex universe, one per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    /// Size of the vertex universe.
    pub points: usize,
    pub perms: Vec<Vec<u32>>,
}

impl GroupAction {
    pub fn apply(perm: &[u32], s: &[u32]) -> Simplex {
        let mut out: Simplex = s.iter().map(|&v| perm[v as usize]).collect();
        out.sort_unstable();
        out
    }

    pub fn preserves(&self, k: &SimplicialComplex) -> bool {
        self.perms.iter().all(|p| k.all_simplices().all(|s| k.contains(&Self::apply(p, s))))
    }

    /// Involutions and `(st)^{m_st} = 1` on the vertex set.
    pub fn satisfies_relations(&self, system: &CoxeterSystem) -> bool {
        let n = self.points;
        for (s, p) in self.perms.iter().enumerate() {
            if (0..n).any(|v| p[p[v] as usize] as usize != v) {
                return false;
            }
            for t in s + 1..self.perms.len() {
                if let Some(m) = system.m(s, t) {
                    let q = &self.perms[t];
                    for v in 0..n {
                        let mut x = v;
                        for _ in 0..m {
                            x = p[q[x] as usize] as usize;
                        }
                        if x != v {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Permutation of every element of the group, `result[g][v] = g·v`.
    pub fn element_perms(&self, elements: &ElementTable) -> Vec<Vec<u32>> {
        let mut out = vec![(0..self.points as u32).collect::<Vec<u32>>()];
        for g in 1..elements.len() {
            let a = elements.first_letter(g).expect("non-identity");
            let q = elements.left_mul(a, g);
            let row = out[q].iter().map(|&v| self.perms[a][v as usize]).collect();
            out.push(row);
        }
        out
    }

    /// Orbits of the simplices of dimension `k`, as lists of positions.
    pub fn orbits(&self, k: &SimplicialComplex, dim: usize) -> Vec<Vec<usize>> {
        let list = k.simplices(dim);
        let mut seen = vec![false; list.len()];
        let mut orbits = Vec::new();
        for start in 0..list.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut head = 0;
            while head < orbit.len() {
                let cur = &list[orbit[head]];
                for p in &self.perms {
                    let img = Self::apply(p, cur);
                    let pos = k.position(&img).expect("action preserves the complex");
                    if !seen[pos] {
                        seen[pos] = true;
                        orbit.push(pos);
                    }
                }
                head += 1;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }
}
