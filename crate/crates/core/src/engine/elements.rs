//! Element tables of finite Coxeter groups in ShortLex-BFS order.

use std::collections::BTreeSet;

use super::{CosetTable, CoxeterSystem};

const NONE: u32 = u32::MAX;

/// Elements `w_0 = e, w_1, …` of a finite `W`, numbered so that the
/// normal-form words are in ShortLex order. Element `g` is the index into
/// every per-element array.
#[derive(Debug, Clone)]
pub struct ElementTable {
    rank: usize,
    right: Vec<u32>,
    left: Vec<u32>,
    parent: Vec<u32>,
    last: Vec<u32>,
    first: Vec<u32>,
    lengths: Vec<u32>,
    inverse: Vec<u32>,
}

impl ElementTable {
    /// Builds the table from the regular coset table (`J = ∅`). The action
    /// `p·s := s·p` on rows is a right action of `W` whose orbit map from
    /// row 0 is a bijection; BFS along it gives ShortLex normal forms.
    pub fn from_regular_table(system: &CoxeterSystem, table: &CosetTable) -> Self {
        let rank = system.rank();
        let n = table.len();
        let mut id_of_row = vec![NONE; n];
        let mut row_of_id = Vec::with_capacity(n);
        let mut parent = Vec::with_capacity(n);
        let mut last = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        id_of_row[0] = 0;
        row_of_id.push(0usize);
        parent.push(NONE);
        last.push(NONE);
        lengths.push(0u32);
        let mut head = 0;
        while head < row_of_id.len() {
            let r = row_of_id[head];
            for s in 0..rank {
                let q = table.act(r, s);
                if id_of_row[q] == NONE {
                    id_of_row[q] = row_of_id.len() as u32;
                    row_of_id.push(q);
                    parent.push(head as u32);
                    last.push(s as u32);
                    lengths.push(lengths[head] + 1);
                }
            }
            head += 1;
        }
        let mut right = vec![0u32; n * rank];
        for g in 0..n {
            for s in 0..rank {
                right[g * rank + s] = id_of_row[table.act(row_of_id[g], s)];
            }
        }
        let mut first = vec![NONE; n];
        for g in 1..n {
            let p = parent[g] as usize;
            first[g] = if p == 0 { last[g] } else { first[p] };
        }
        let mut left = vec![0u32; n * rank];
        for s in 0..rank {
            left[s * n] = right[s];
        }
        for g in 1..n {
            let p = parent[g] as usize;
            let t = last[g] as usize;
            for s in 0..rank {
                let sp = left[s * n + p] as usize;
                left[s * n + g] = right[sp * rank + t];
            }
        }
        let mut inverse = vec![0u32; n];
        for g in 1..n {
            let p = parent[g] as usize;
            let t = last[g] as usize;
            inverse[g] = left[t * n + inverse[p] as usize];
        }
        ElementTable { rank, right, left, parent, last, first, lengths, inverse }
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn length(&self, g: usize) -> usize {
        self.lengths[g] as usize
    }

    /// `g·s`.
    pub fn right_mul(&self, g: usize, s: usize) -> usize {
        self.right[g * self.rank + s] as usize
    }

    /// `s·g`.
    pub fn left_mul(&self, s: usize, g: usize) -> usize {
        self.left[s * self.len() + g] as usize
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }

    /// ShortLex normal form of element `g`.
    pub fn word(&self, g: usize) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.length(g));
        let mut x = g;
        while x != 0 {
            w.push(self.last[x] as usize);
            x = self.parent[x] as usize;
        }
        w.reverse();
        w
    }

    /// First letter of the normal form, `None` for the identity.
    pub fn first_letter(&self, g: usize) -> Option<usize> {
        (g != 0).then(|| self.first[g] as usize)
    }

    pub fn element_of(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |g, &s| self.right_mul(g, s))
    }

    pub fn multiply(&self, x: usize, y: usize) -> usize {
        self.word(y).into_iter().fold(x, |g, s| self.right_mul(g, s))
    }

    pub fn normal_form(&self, word: &[usize]) -> Vec<usize> {
        self.word(self.element_of(word))
    }

    /// `In(w) = {s : ℓ(ws) < ℓ(w)}`.
    pub fn in_set(&self, g: usize) -> BTreeSet<usize> {
        (0..self.rank).filter(|&s| self.lengths[self.right_mul(g, s)] < self.lengths[g]).collect()
    }

    pub fn in_mask(&self, g: usize) -> u64 {
        (0..self.rank)
            .filter(|&s| self.lengths[self.right_mul(g, s)] < self.lengths[g])
            .fold(0, |m, s| m | 1 << s)
    }

    /// Bitmask of the letters in the normal form (the support of `g`).
    pub fn support_mask(&self, g: usize) -> u64 {
        let mut m = 0;
        let mut x = g;
        while x != 0 {
            m |= 1 << self.last[x];
            x = self.parent[x] as usize;
        }
        m
    }

    /// Row `gW_J` of each element for a coset table of the same system.
    pub fn project(&self, cosets: &CosetTable) -> Vec<u32> {
        let mut proj = vec![0u32; self.len()];
        for g in 1..self.len() {
            let a = self.first[g] as usize;
            let q = self.left_mul(a, g);
            proj[g] = cosets.act(proj[q] as usize, a) as u32;
        }
        proj
    }

    /// Minimal-length representative of `gW_T` (`T` a bitmask), by descent.
    pub fn min_coset_rep(&self, g: usize, t_mask: u64) -> usize {
        let mut x = g;
        'outer: loop {
            for s in 0..self.rank {
                if t_mask >> s & 1 == 1 {
                    let y = self.right_mul(x, s);
                    if self.lengths[y] < self.lengths[x] {
                        x = y;
                        continue 'outer;
                    }
                }
            }
            return x;
        }
    }

    /// Length generating function coefficients `#{w : ℓ(w) = k}`.
    pub fn length_distribution(&self) -> Vec<usize> {
        let max = self.lengths.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0; max + 1];
        for &l in &self.lengths {
            counts[l as usize] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use std::collections::{HashMap, VecDeque};

    use super::*;
    use crate::diagrams::{builtin_family, family_term, Builtin};
    use crate::engine::{coset_enumerate, enumerate_group, WordReducer};

    fn system(b: Builtin, n: i64) -> CoxeterSystem {
        CoxeterSystem::new(family_term(&builtin_family(b).unwrap(), n).unwrap().matrix())
    }

    /// Independent model: permutations of 1..=n+1 with s_i = (i, i+1).
    fn symmetric_oracle(n: usize) -> HashMap<Vec<u8>, usize> {
        let start: Vec<u8> = (0..=n as u8).collect();
        let mut dist = HashMap::from([(start.clone(), 0usize)]);
        let mut q = VecDeque::from([start]);
        while let Some(p) = q.pop_front() {
            for i in 0..n {
                let mut r = p.clone();
                r.swap(i, i + 1);
                if !dist.contains_key(&r) {
                    dist.insert(r.clone(), dist[&p] + 1);
                    q.push_back(r);
                }
            }
        }
        dist
    }

    #[test]
    fn symmetric_group_lengths_match_oracle() {
        let n = 4;
        let t = enumerate_group(&system(Builtin::A, n as i64), 1000).unwrap();
        let oracle = symmetric_oracle(n);
        assert_eq!(t.len(), oracle.len());
        let mut expected = vec![0usize; 11];
        for d in oracle.values() {
            expected[*d] += 1;
        }
        assert_eq!(t.length_distribution(), expected);
        let longest = (0..t.len()).max_by_key(|&g| t.length(g)).unwrap();
        assert_eq!(t.length(longest), 10);
    }

    #[test]
    fn sigma3_examples() {
        let sys = system(Builtin::A, 2);
        let t = enumerate_group(&sys, 100).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.length(0), 0);
        assert_eq!(t.length(t.element_of(&[1])), 1);
        let w0 = t.element_of(&[1, 0, 1]);
        assert_eq!(t.length(w0), 3);
        assert_eq!(t.word(w0), vec![0, 1, 0]);
        assert_eq!(t.in_set(w0), BTreeSet::from([0, 1]));
        assert_eq!(t.in_set(t.element_of(&[0, 1])), BTreeSet::from([1]));
        assert!(t.in_set(0).is_empty());
    }

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_group(&system(Builtin::A, 3), 100_000).unwrap().len(), 24);
        assert_eq!(enumerate_group(&system(Builtin::B, 1), 100_000).unwrap().len(), 8);
        assert!(enumerate_group(&system(Builtin::I(7), 2), 100_000).is_err());
    }

    #[test]
    fn order_is_shortlex() {
        let t = enumerate_group(&system(Builtin::D, 2), 10_000).unwrap();
        for g in 1..t.len() {
            let (a, b) = (t.word(g - 1), t.word(g));
            assert!(crate::engine::shortlex_less(&a, &b));
        }
    }

    #[test]
    fn table_and_word_reduction_agree() {
        let sys = system(Builtin::B, 2);
        let t = enumerate_group(&sys, 10_000).unwrap();
        let r = WordReducer::new(&sys);
        for g in 0..t.len() {
            let w = t.word(g);
            assert_eq!(r.reduce(&w).unwrap(), w);
            assert_eq!(r.in_set(&w).unwrap(), t.in_set(g));
        }
    }

    #[test]
    fn left_right_inverse_consistency() {
        let t = enumerate_group(&system(Builtin::D, 2), 10_000).unwrap();
        for g in 0..t.len() {
            assert_eq!(t.multiply(g, t.inverse(g)), 0);
            for s in 0..t.rank() {
                assert_eq!(t.left_mul(s, g), t.multiply(t.element_of(&[s]), g));
            }
        }
    }

    #[test]
    fn in_set_matches_bfs_discovery() {
        // s ∈ In(w) iff w·s precedes w in BFS order
        let t = enumerate_group(&system(Builtin::B, 3), 10_000).unwrap();
        for g in 0..t.len() {
            let early: BTreeSet<usize> = (0..t.rank()).filter(|&s| t.right_mul(g, s) < g).collect();
            assert_eq!(early, t.in_set(g));
        }
    }

    #[test]
    fn projection_and_index() {
        let sys = system(Builtin::B, 2);
        let t = enumerate_group(&sys, 10_000).unwrap();
        let j: Vec<usize> = (0..sys.rank() - 1).collect();
        let c = coset_enumerate(&sys, &j, 1000).unwrap();
        let proj = t.project(&c);
        for g in 0..t.len() {
            assert_eq!(proj[g] as usize, c.act_word(&t.word(g), 0));
        }
        let in_subgroup = proj.iter().filter(|&&p| p == 0).count();
        assert_eq!(c.len() * in_subgroup, t.len());
    }

    #[test]
    fn minimal_coset_reps() {
        let t = enumerate_group(&system(Builtin::A, 3), 1000).unwrap();
        let mask = 0b011;
        for g in 0..t.len() {
            let m = t.min_coset_rep(g, mask);
            let x = t.multiply(t.inverse(m), g);
            assert_eq!(t.support_mask(x) & !mask, 0);
            assert!(t.in_mask(m) & mask == 0);
        }
    }
}
