//! Felsch-style Todd–Coxeter enumeration of `W/W_J`.
//!
//! All generators are involutions, so an entry `c·s = d` is stored in both
//! rows. The only relators are `(st)^{m_st}` for finite `m_st`; the cyclic
//! conjugates starting with `s` are all equal to `(st)^m`, which keeps the
//! deduction scan short. Coincidences are processed with a union-find queue.

use std::collections::VecDeque;

use super::{CoxeterSystem, EngineError};

const NONE: u32 = u32::MAX;

/// Completed coset table; rows are cosets `gW_J`, row 0 is `W_J`, and the
/// transition is the left action `s·gW_J`.
#[derive(Debug, Clone)]
pub struct CosetTable {
    rank: usize,
    subgroup: Vec<usize>,
    act: Vec<u32>,
    parent: Vec<u32>,
    via: Vec<u32>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn act(&self, row: usize, s: usize) -> usize {
        if self.rank == 0 {
            return row;
        }
        self.act[row * self.rank + s] as usize
    }

    /// `w·row`, letters applied right to left.
    pub fn act_word(&self, word: &[usize], row: usize) -> usize {
        word.iter().rev().fold(row, |r, &s| self.act(r, s))
    }

    /// Shortest word `w` (first in discovery order) with `w·W_J = row`.
    pub fn representative(&self, row: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut r = row;
        while r != 0 {
            word.push(self.via[r] as usize);
            r = self.parent[r] as usize;
        }
        word
    }

    /// Checks involutions, relators on every row and that `W_J` fixes row 0.
    pub fn verify(&self, system: &CoxeterSystem) -> bool {
        let n = self.len();
        for r in 0..n {
            for s in 0..self.rank {
                if self.act(self.act(r, s), s) != r {
                    return false;
                }
                for t in s + 1..self.rank {
                    if let Some(m) = system.m(s, t) {
                        let mut x = r;
                        for _ in 0..m {
                            x = self.act(self.act(x, t), s);
                        }
                        if x != r {
                            return false;
                        }
                    }
                }
            }
        }
        self.subgroup.iter().all(|&j| self.act(0, j) == 0)
            && (0..n).all(|r| self.act_word(&self.representative(r), 0) == r)
    }
}

struct Enumerator<'a> {
    system: &'a CoxeterSystem,
    rank: usize,
    table: Vec<u32>,
    forward: Vec<u32>,
    live: usize,
    deductions: Vec<(u32, u32)>,
    queue: VecDeque<u32>,
    partners: Vec<Vec<(usize, usize)>>,
    alloc_limit: usize,
    cap: usize,
}

impl<'a> Enumerator<'a> {
    fn get(&self, c: u32, s: usize) -> u32 {
        self.table[c as usize * self.rank + s]
    }

    fn set(&mut self, c: u32, s: usize, d: u32) {
        self.table[c as usize * self.rank + s] = d;
    }

    fn is_live(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.forward[r as usize] != r {
            r = self.forward[r as usize];
        }
        let mut x = c;
        while self.forward[x as usize] != r {
            let next = self.forward[x as usize];
            self.forward[x as usize] = r;
            x = next;
        }
        r
    }

    fn new_coset(&mut self) -> Result<u32, EngineError> {
        let id = self.forward.len();
        if id >= self.alloc_limit {
            return Err(EngineError::CapExceeded { cap: self.cap });
        }
        self.forward.push(id as u32);
        self.table.extend(std::iter::repeat(NONE).take(self.rank));
        self.live += 1;
        if self.live > self.cap {
            return Err(EngineError::CapExceeded { cap: self.cap });
        }
        Ok(id as u32)
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.forward[kill as usize] = keep;
        self.live -= 1;
        self.queue.push_back(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for x in 0..self.rank {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                self.set(f, x, NONE);
                self.set(e, x, NONE);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let g = self.get(e1, x);
                if g != NONE {
                    self.merge(f1, g);
                    continue;
                }
                let h = self.get(f1, x);
                if h != NONE {
                    self.merge(e1, h);
                    continue;
                }
                self.set(e1, x, f1);
                self.set(f1, x, e1);
                self.deductions.push((e1, x as u32));
            }
        }
    }

    /// Scans `(xy)^m` at coset `c`: fills a single gap or records a coincidence.
    fn scan(&mut self, c: u32, x: usize, y: usize, m: usize) {
        let len = 2 * m;
        let letter = |i: usize| if i % 2 == 0 { x } else { y };
        let mut f = c;
        let mut i = 0;
        while i < len {
            let nf = self.get(f, letter(i));
            if nf == NONE {
                break;
            }
            f = nf;
            i += 1;
        }
        if i == len {
            if f != c {
                self.coincidence(f, c);
            }
            return;
        }
        let mut b = c;
        let mut j = len as isize - 1;
        while j >= i as isize {
            let nb = self.get(b, letter(j as usize));
            if nb == NONE {
                break;
            }
            b = nb;
            j -= 1;
        }
        if j < i as isize {
            self.coincidence(f, b);
        } else if j == i as isize {
            let s = letter(i);
            self.set(f, s, b);
            self.set(b, s, f);
            self.deductions.push((f, s as u32));
        }
    }

    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.is_live(c) {
                continue;
            }
            let x = x as usize;
            let d = self.get(c, x);
            for k in 0..self.partners[x].len() {
                let (y, m) = self.partners[x][k];
                for start in [c, d] {
                    if start != NONE && self.is_live(start) {
                        self.scan(start, x, y, m);
                    }
                }
            }
        }
    }
}

/// Enumerates `W/W_J`; rows are renumbered by BFS from the trivial coset,
/// scanning generators in order.
pub fn coset_enumerate(system: &CoxeterSystem, subgroup: &[usize], cap: usize) -> Result<CosetTable, EngineError> {
    let rank = system.rank();
    for &j in subgroup {
        if j >= rank {
            return Err(EngineError::BadLetter(j));
        }
    }
    let mut subgroup = subgroup.to_vec();
    subgroup.sort_unstable();
    subgroup.dedup();
    if rank == 0 {
        return Ok(CosetTable { rank, subgroup, act: Vec::new(), parent: vec![NONE], via: vec![NONE] });
    }
    let partners = (0..rank)
        .map(|x| {
            (0..rank)
                .filter(|&y| y != x)
                .filter_map(|y| system.m(x, y).map(|m| (y, m as usize)))
                .collect()
        })
        .collect();
    let mut en = Enumerator {
        system,
        rank,
        table: Vec::new(),
        forward: Vec::new(),
        live: 0,
        deductions: Vec::new(),
        queue: VecDeque::new(),
        partners,
        alloc_limit: cap.saturating_mul(4).max(64),
        cap,
    };
    en.new_coset()?;
    for &j in &subgroup {
        en.set(0, j, 0);
        en.deductions.push((0, j as u32));
    }
    en.process_deductions();
    let mut cur = 0usize;
    while cur < en.forward.len() {
        if en.is_live(cur as u32) {
            for x in 0..rank {
                if !en.is_live(cur as u32) {
                    break;
                }
                if en.get(cur as u32, x) == NONE {
                    let d = en.new_coset()?;
                    en.set(cur as u32, x, d);
                    en.set(d, x, cur as u32);
                    en.deductions.push((cur as u32, x as u32));
                    en.process_deductions();
                }
            }
        }
        cur += 1;
    }
    let _ = en.system;

    // BFS renumbering from coset 0.
    let total = en.forward.len();
    let mut newid = vec![NONE; total];
    let mut order = Vec::with_capacity(en.live);
    let mut parent = Vec::with_capacity(en.live);
    let mut via = Vec::with_capacity(en.live);
    newid[0] = 0;
    order.push(0u32);
    parent.push(NONE);
    via.push(NONE);
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        for x in 0..rank {
            let d = en.get(c, x);
            debug_assert!(d != NONE && en.is_live(d));
            if newid[d as usize] == NONE {
                newid[d as usize] = order.len() as u32;
                order.push(d);
                parent.push(head as u32);
                via.push(x as u32);
            }
        }
        head += 1;
    }
    if order.len() > cap {
        return Err(EngineError::CapExceeded { cap });
    }
    let mut act = Vec::with_capacity(order.len() * rank);
    for &c in &order {
        for x in 0..rank {
            act.push(newid[en.get(c, x) as usize]);
        }
    }
    Ok(CosetTable { rank, subgroup, act, parent, via })
}
