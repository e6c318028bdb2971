//! Homological connectivity reports, with a best-effort certificate for
//! triviality of the edge-path group.

use std::collections::{HashMap, VecDeque};

use serde_json::json;

use super::{chain_complex_of, homology, Coefficients};
use crate::complexes::SimplicialComplex;
use crate::report::Report;

/// Outcome of the Tietze simplifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pi1Verdict {
    Certified,
    Inconclusive,
}

const WORD_BUDGET: usize = 1 << 20;

fn free_reduce(w: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &x in w.iter() {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    // cyclic reduction
    let mut a = 0;
    let mut b = out.len();
    while b - a >= 2 && out[a] == -out[b - 1] {
        a += 1;
        b -= 1;
    }
    *w = out[a..b].to_vec();
}

fn invert(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|&x| -x).collect()
}

/// Edge-path presentation of `π_1` at the first vertex: generators are the
/// edges outside a BFS spanning tree, one relator per triangle. Letters are
/// `±(generator + 1)`.
pub fn edge_path_presentation(k: &SimplicialComplex) -> (usize, Vec<Vec<i32>>) {
    let verts = k.vertices();
    let Some(&root) = verts.first() else { return (0, Vec::new()) };
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for e in k.simplices(1) {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    let mut tree = std::collections::HashSet::new();
    let mut seen = std::collections::HashSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    let mut gen_of: HashMap<(u32, u32), i32> = HashMap::new();
    for e in k.simplices(1) {
        if seen.contains(&e[0]) && !tree.contains(&(e[0], e[1])) {
            let g = gen_of.len() as i32 + 1;
            gen_of.insert((e[0], e[1]), g);
        }
    }
    let letter = |a: u32, b: u32| -> Option<i32> {
        let g = *gen_of.get(&(a.min(b), a.max(b)))?;
        Some(if a < b { g } else { -g })
    };
    let mut relators = Vec::new();
    if k.dim() >= 2 {
        for t in k.simplices(2) {
            if !seen.contains(&t[0]) {
                continue;
            }
            let mut r: Vec<i32> = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
                .iter()
                .filter_map(|&(a, b)| letter(a, b))
                .collect();
            free_reduce(&mut r);
            relators.push(r);
        }
    }
    (gen_of.len(), relators)
}

/// Greedy Tietze elimination: repeatedly solve a shortest relator for a
/// generator occurring in it exactly once.
pub fn simplify_presentation(gens: usize, mut relators: Vec<Vec<i32>>) -> Pi1Verdict {
    let mut remaining = gens;
    loop {
        relators.iter_mut().for_each(free_reduce);
        relators.retain(|r| !r.is_empty());
        if remaining == 0 {
            return Pi1Verdict::Certified;
        }
        let mut choice: Option<(usize, usize)> = None;
        for (ri, r) in relators.iter().enumerate() {
            if choice.is_some_and(|(cj, _)| relators[cj].len() <= r.len()) {
                continue;
            }
            let mut counts: HashMap<i32, usize> = HashMap::new();
            for &x in r {
                *counts.entry(x.abs()).or_default() += 1;
            }
            if let Some(pos) = r.iter().position(|x| counts[&x.abs()] == 1) {
                choice = Some((ri, pos));
            }
        }
        let Some((ri, pos)) = choice else { return Pi1Verdict::Inconclusive };
        let r = relators.swap_remove(ri);
        let x = r[pos];
        // r = u x v  ⇒  x = u^{-1} v^{-1}
        let mut value = invert(&r[..pos]);
        value.extend(invert(&r[pos + 1..]));
        let (g, image) = if x > 0 { (x, value) } else { (-x, invert(&value)) };
        let inv_image = invert(&image);
        let mut total = 0;
        for rel in relators.iter_mut() {
            if rel.iter().any(|y| y.abs() == g) {
                let mut out = Vec::new();
                for &y in rel.iter() {
                    if y == g {
                        out.extend_from_slice(&image);
                    } else if y == -g {
                        out.extend_from_slice(&inv_image);
                    } else {
                        out.push(y);
                    }
                }
                *rel = out;
            }
            total += rel.len();
        }
        if total > WORD_BUDGET {
            return Pi1Verdict::Inconclusive;
        }
        remaining -= 1;
    }
}

pub fn pi1_certificate(k: &SimplicialComplex) -> Pi1Verdict {
    let (gens, relators) = edge_path_presentation(k);
    simplify_presentation(gens, relators)
}

/// Checks that `k` is homologically `conn`-connected: nonempty when
/// `conn ≥ -1` and vanishing reduced integral homology through degree `conn`.
pub fn connectivity_report(k: &SimplicialComplex, conn: i64, pi1: bool) -> Report {
    let mut report = Report::new("connectivity", json!({"k": conn, "pi1": pi1, "f_vector": k.f_vector()}));
    if conn < -1 {
        report.push("vacuous", true, json!(null));
        return report;
    }
    report.push("nonempty", !k.is_empty(), json!(null));
    if conn >= 0 && !k.is_empty() {
        let h = homology(&chain_complex_of(k, true), Coefficients::Integers);
        for d in 0..=conn as usize {
            let deg = h.degrees.get(d);
            let ok = deg.is_none_or(|x| x.rank == 0 && x.torsion.is_empty());
            let detail = match deg {
                Some(x) => json!({"rank": x.rank, "torsion": x.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()}),
                None => json!({"rank": 0}),
            };
            report.push(format!("reduced_h{d}"), ok, detail);
        }
    }
    if pi1 && conn >= 1 && !k.is_empty() {
        match pi1_certificate(k) {
            Pi1Verdict::Certified => report.push("pi1_trivial", true, json!("certified")),
            Pi1Verdict::Inconclusive => report.skip("pi1_trivial", "inconclusive"),
        }
    }
    report
}
