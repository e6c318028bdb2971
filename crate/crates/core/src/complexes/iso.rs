//! Simplicial isomorphism search by backtracking.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{ComplexError, SimplicialComplex};

pub const DEFAULT_ISO_BUDGET: u64 = 5_000_000;

/// Number of simplices of each dimension containing `v`.
fn star_signatures(k: &SimplicialComplex) -> HashMap<u32, Vec<usize>> {
    let dim = k.f_vector().len();
    let mut sig: HashMap<u32, Vec<usize>> = k.vertices().into_iter().map(|v| (v, vec![0; dim])).collect();
    for s in k.all_simplices() {
        for v in s {
            sig.get_mut(v).expect("vertex of a simplex is a 0-simplex")[s.len() - 1] += 1;
        }
    }
    sig
}

fn adjacency(k: &SimplicialComplex) -> HashMap<u32, HashSet<u32>> {
    let mut adj: HashMap<u32, HashSet<u32>> = k.vertices().into_iter().map(|v| (v, HashSet::new())).collect();
    for e in k.simplices(1) {
        adj.get_mut(&e[0]).unwrap().insert(e[1]);
        adj.get_mut(&e[1]).unwrap().insert(e[0]);
    }
    adj
}

/// Returns a vertex map `a → b` (pairs of universe indices) that is a
/// simplicial isomorphism, or `None` when none exists.
pub fn iso_check(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    budget: u64,
) -> Result<Option<Vec<(u32, u32)>>, ComplexError> {
    if a.f_vector() != b.f_vector() {
        return Ok(None);
    }
    let (sig_a, sig_b) = (star_signatures(a), star_signatures(b));
    let mut hist_a: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
    let mut hist_b: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
    for s in sig_a.values() {
        *hist_a.entry(s).or_default() += 1;
    }
    for s in sig_b.values() {
        *hist_b.entry(s).or_default() += 1;
    }
    if hist_a != hist_b {
        return Ok(None);
    }
    let (adj_a, adj_b) = (adjacency(a), adjacency(b));

    // BFS order on `a` so that each vertex has mapped neighbours early.
    let mut order = Vec::new();
    let mut placed = HashSet::new();
    for start in a.vertices() {
        if !placed.insert(start) {
            continue;
        }
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let mut nbrs: Vec<u32> = adj_a[&order[head]].iter().copied().collect();
            nbrs.sort_unstable();
            for w in nbrs {
                if placed.insert(w) {
                    order.push(w);
                }
            }
            head += 1;
        }
    }
    let candidates: Vec<Vec<u32>> = order
        .iter()
        .map(|v| {
            let mut c: Vec<u32> = b.vertices().into_iter().filter(|w| sig_b[w] == sig_a[v]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    // simplices of `a` whose last vertex in `order` is `order[i]`
    let pos: HashMap<u32, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut closing: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); order.len()];
    for s in a.all_simplices().filter(|s| s.len() > 2) {
        let last = s.iter().map(|v| pos[v]).max().unwrap();
        closing[last].push(s);
    }

    let mut map: HashMap<u32, u32> = HashMap::new();
    let mut used: HashSet<u32> = HashSet::new();
    let mut nodes = 0u64;
    let mut choice = vec![0usize; order.len()];
    let mut depth = 0usize;
    loop {
        if depth == order.len() {
            let mut out: Vec<(u32, u32)> = map.iter().map(|(&x, &y)| (x, y)).collect();
            out.sort_unstable();
            return Ok(Some(out));
        }
        let v = order[depth];
        let mut advanced = false;
        while choice[depth] < candidates[depth].len() {
            let w = candidates[depth][choice[depth]];
            choice[depth] += 1;
            if used.contains(&w) {
                continue;
            }
            nodes += 1;
            if nodes > budget {
                return Err(ComplexError::SearchBudget(budget));
            }
            let edges_ok = order[..depth].iter().all(|u| adj_a[&v].contains(u) == adj_b[&w].contains(&map[u]));
            if !edges_ok {
                continue;
            }
            map.insert(v, w);
            let simplices_ok = closing[depth].iter().all(|s| {
                let mut img: Vec<u32> = s.iter().map(|x| map[x]).collect();
                img.sort_unstable();
                b.contains(&img)
            });
            if !simplices_ok {
                map.remove(&v);
                continue;
            }
            used.insert(w);
            advanced = true;
            break;
        }
        if advanced {
            depth += 1;
            if depth < order.len() {
                choice[depth] = 0;
            }
        } else {
            if depth == 0 {
                return Ok(None);
            }
            depth -= 1;
            let v = order[depth];
            let w = map.remove(&v).expect("mapped");
            used.remove(&w);
        }
    }
}
