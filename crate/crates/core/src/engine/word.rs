//! Word-level reduction by M-moves (braid moves plus `ss -> e`).
//!
//! A word `u` is reduced iff no braid-equivalent word contains `ss`, and
//! `ℓ(us) < ℓ(u)` iff some reduced word for `u` ends in `s`. Reducing letter
//! by letter therefore only ever needs the braid class of a reduced word.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{CoxeterSystem, EngineError};

pub const DEFAULT_WORD_BOUND: usize = 16;
const DEFAULT_CLASS_BUDGET: usize = 2_000_000;

pub fn shortlex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn shortlex_less(a: &[usize], b: &[usize]) -> bool {
    shortlex_cmp(a, b) == Ordering::Less
}

pub struct WordReducer<'a> {
    system: &'a CoxeterSystem,
    pub max_len: usize,
    pub class_budget: usize,
}

impl<'a> WordReducer<'a> {
    pub fn new(system: &'a CoxeterSystem) -> Self {
        WordReducer { system, max_len: DEFAULT_WORD_BOUND, class_budget: DEFAULT_CLASS_BUDGET }
    }

    /// Every word obtained from the reduced word `w` by braid moves.
    pub fn braid_class(&self, w: &[usize]) -> Result<HashSet<Vec<usize>>, EngineError> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.to_vec());
        queue.push_back(w.to_vec());
        while let Some(cur) = queue.pop_front() {
            for p in 0..cur.len().saturating_sub(1) {
                let (s, t) = (cur[p], cur[p + 1]);
                if s == t {
                    continue;
                }
                let Some(m) = self.system.m(s, t) else { continue };
                let m = m as usize;
                if p + m > cur.len() {
                    continue;
                }
                let alternates = (0..m).all(|k| cur[p + k] == if k % 2 == 0 { s } else { t });
                if !alternates {
                    continue;
                }
                let mut next = cur.clone();
                for k in 0..m {
                    next[p + k] = if k % 2 == 0 { t } else { s };
                }
                if seen.insert(next.clone()) {
                    if seen.len() > self.class_budget {
                        return Err(EngineError::CapExceeded { cap: self.class_budget });
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(seen)
    }

    /// ShortLex-least reduced word for the element represented by `word`.
    pub fn reduce(&self, word: &[usize]) -> Result<Vec<usize>, EngineError> {
        let mut class = self.reduce_to_class(word)?;
        Ok(class.drain().min_by(|a, b| shortlex_cmp(a, b)).unwrap_or_default())
    }

    fn reduce_to_class(&self, word: &[usize]) -> Result<HashSet<Vec<usize>>, EngineError> {
        let rank = self.system.rank();
        let mut class: HashSet<Vec<usize>> = HashSet::from([Vec::new()]);
        for &s in word {
            if s >= rank {
                return Err(EngineError::BadLetter(s));
            }
            let cancel = class.iter().find(|w| w.last() == Some(&s)).cloned();
            let next = match cancel {
                Some(mut w) => {
                    w.pop();
                    w
                }
                None => {
                    let mut w = class.iter().next().cloned().unwrap_or_default();
                    w.push(s);
                    if w.len() > self.max_len {
                        return Err(EngineError::WordTooLong { len: w.len(), bound: self.max_len });
                    }
                    w
                }
            };
            class = self.braid_class(&next)?;
        }
        Ok(class)
    }

    /// Right descent set `In(w)`: letters some reduced word for `w` ends with.
    pub fn in_set(&self, word: &[usize]) -> Result<BTreeSet<usize>, EngineError> {
        let class = self.reduce_to_class(word)?;
        Ok(class.iter().filter_map(|w| w.last().copied()).collect())
    }
}

pub fn in_set_word(system: &CoxeterSystem, word: &[usize]) -> Result<BTreeSet<usize>, EngineError> {
    WordReducer::new(system).in_set(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{builtin_family, family_term, parse_diagram, Builtin};

    fn system(b: Builtin, n: i64) -> CoxeterSystem {
        CoxeterSystem::new(family_term(&builtin_family(b).unwrap(), n).unwrap().matrix())
    }

    #[test]
    fn involution_and_braid() {
        let s = system(Builtin::A, 2);
        assert_eq!(WordReducer::new(&s).reduce(&[0, 0]).unwrap(), Vec::<usize>::new());
        assert!(WordReducer::new(&s).reduce(&[0, 1, 0, 1, 0, 1]).unwrap().is_empty());
    }

    #[test]
    fn shortlex_form_of_longest_sigma3() {
        let s = system(Builtin::A, 2);
        let w = s.parse_word("s2 s1 s2").unwrap();
        assert_eq!(s.format_word(&WordReducer::new(&s).reduce(&w).unwrap()), "s1 s2 s1");
    }

    #[test]
    fn descent_sets() {
        let s = system(Builtin::A, 2);
        let r = WordReducer::new(&s);
        assert!(r.in_set(&[]).unwrap().is_empty());
        assert_eq!(r.in_set(&[0, 1]).unwrap(), BTreeSet::from([1]));
        assert_eq!(r.in_set(&[0, 1, 0]).unwrap(), BTreeSet::from([0, 1]));
    }

    #[test]
    fn infinite_label_words_stay_reduced() {
        let d = parse_diagram("vertices a b; edge a b inf").unwrap();
        let s = CoxeterSystem::new(d.matrix());
        let r = WordReducer::new(&s);
        assert_eq!(r.reduce(&[0, 1, 0, 1, 0, 1]).unwrap(), vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(r.reduce(&[0, 1, 1, 0]).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn length_bound_is_enforced() {
        let d = parse_diagram("vertices a b; edge a b inf").unwrap();
        let s = CoxeterSystem::new(d.matrix());
        let mut r = WordReducer::new(&s);
        r.max_len = 4;
        assert!(matches!(r.reduce(&[0, 1, 0, 1, 0]), Err(EngineError::WordTooLong { .. })));
    }

    #[test]
    fn bad_letter() {
        let s = system(Builtin::A, 2);
        assert_eq!(WordReducer::new(&s).reduce(&[5]), Err(EngineError::BadLetter(5)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn reduce_is_idempotent_and_shortening(word in proptest::collection::vec(0usize..3, 0..12)) {
                let s = system(Builtin::B, 2);
                let r = WordReducer::new(&s);
                let once = r.reduce(&word).unwrap();
                prop_assert!(once.len() <= word.len());
                prop_assert_eq!(r.reduce(&once).unwrap(), once.clone());
                // w · w^{-1} = e
                let mut both = word.clone();
                both.extend(word.iter().rev());
                prop_assert!(r.reduce(&both).unwrap().is_empty());
            }

            #[test]
            fn squares_and_braids_vanish(s_idx in 0usize..4, t_idx in 0usize..4) {
                let sys = system(Builtin::D, 2);
                let r = WordReducer::new(&sys);
                prop_assert!(r.reduce(&[s_idx, s_idx]).unwrap().is_empty());
                if s_idx != t_idx {
                    let m = sys.m(s_idx, t_idx).unwrap() as usize;
                    let word: Vec<usize> = (0..2 * m).map(|k| if k % 2 == 0 { s_idx } else { t_idx }).collect();
                    prop_assert!(r.reduce(&word).unwrap().is_empty());
                }
            }
        }
    }
}
