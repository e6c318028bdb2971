//! The Mayer–Vietoris sequence of a triad `(X; A, B)` of simplicial complexes.

use serde_json::json;

use super::{chain_complex_of, kernel_basis, rank_mod_p, rank_of_vectors, HomologyError, SparseMatrix, SparseVec};
use crate::complexes::SimplicialComplex;
use crate::report::Report;

/// Rank of the map on homology induced by a chain map whose values on a
/// cycle basis are `images`: `rank[f(Z) | B] - rank B` in the target.
pub fn induced_map_rank(images: &[SparseVec], target_next: &SparseMatrix, p: u32) -> usize {
    let n = target_next.nrows();
    let boundaries: Vec<SparseVec> = (0..target_next.ncols())
        .map(|j| {
            target_next
                .column(j)
                .filter_map(|(r, v)| {
                    let v = v.rem_euclid(p as i64) as u32;
                    (v != 0).then_some((r, v))
                })
                .collect()
        })
        .collect();
    let mut all = images.to_vec();
    all.extend(boundaries);
    rank_of_vectors(&all, n, p) - rank_mod_p(target_next, p)
}

struct Side {
    complex: SimplicialComplex,
    boundaries: Vec<SparseMatrix>,
}

impl Side {
    fn new(k: &SimplicialComplex, top: usize) -> Self {
        let cc = chain_complex_of(k, false);
        let (mut dims, mut boundaries) = (cc.dims, cc.boundaries);
        // pad with zero chain groups up to a common top degree
        while boundaries.len() <= top + 1 {
            boundaries.push(SparseMatrix::zeros(*dims.last().unwrap(), 0));
            dims.push(0);
        }
        Side { complex: k.clone(), boundaries }
    }

    fn dim(&self, k: usize) -> usize {
        self.boundaries[k].ncols()
    }

    fn pos(&self, s: &[u32]) -> u32 {
        self.complex.position(s).expect("subcomplex") as u32
    }
}

fn sorted(mut v: SparseVec) -> SparseVec {
    v.sort_unstable();
    v
}

/// Checks exactness of `0 → C(A∩B) → C(A) ⊕ C(B) → C(X) → 0` and of the
/// long exact sequence over `F_p`, and reports the connecting ranks.
pub fn mayer_vietoris_check(
    whole: &SimplicialComplex,
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    p: u32,
) -> Result<Report, HomologyError> {
    if !a.union(b).same_simplices(whole) {
        return Err(HomologyError::PartsDoNotCover);
    }
    let top = whole.dim().max(0) as usize;
    let i = a.intersection(b);
    let (si, sa, sb, sx) = (Side::new(&i, top), Side::new(a, top), Side::new(b, top), Side::new(whole, top));
    let minus = p - 1;

    let mut report = Report::new("mayer-vietoris", json!({"p": p, "dim": whole.dim()}));
    let mut chain_exact = true;
    let (mut h_i, mut h_ab, mut h_x, mut r_alpha, mut r_beta) = (vec![], vec![], vec![], vec![], vec![]);
    for k in 0..=top {
        // chain level
        let alpha_cols: Vec<SparseVec> = i
            .simplices(k)
            .iter()
            .map(|s| sorted(vec![(sa.pos(s), 1), (sa.dim(k) as u32 + sb.pos(s), minus)]))
            .collect();
        let beta_cols: Vec<SparseVec> = [&sa, &sb]
            .iter()
            .flat_map(|side| side.complex.simplices(k).iter().map(|s| vec![(sx.pos(s), 1)]))
            .collect();
        let mid = sa.dim(k) + sb.dim(k);
        let ra = rank_of_vectors(&alpha_cols, mid, p);
        let rb = rank_of_vectors(&beta_cols, sx.dim(k), p);
        chain_exact &= ra == si.dim(k) && rb == sx.dim(k) && si.dim(k) + sx.dim(k) == mid;

        // homology level
        let hom = |side: &Side| side.dim(k) - rank_mod_p(&side.boundaries[k], p) - rank_mod_p(&side.boundaries[k + 1], p);
        let ab_next = sa.boundaries[k + 1].block_diag(&sb.boundaries[k + 1]);
        h_i.push(hom(&si));
        h_ab.push(hom(&sa) + hom(&sb));
        h_x.push(hom(&sx));
        let zi = kernel_basis(&si.boundaries[k], p);
        let img: Vec<SparseVec> = zi
            .iter()
            .map(|z| {
                let mut out: SparseVec = Vec::new();
                for &(r, v) in z {
                    let s = &si.complex.simplices(k)[r as usize];
                    out.push((sa.pos(s), v));
                    out.push((sa.dim(k) as u32 + sb.pos(s), (p - v) % p));
                }
                sorted(out)
            })
            .collect();
        r_alpha.push(induced_map_rank(&img, &ab_next, p));
        let za = kernel_basis(&sa.boundaries[k], p);
        let zb = kernel_basis(&sb.boundaries[k], p);
        let mut img: Vec<SparseVec> = Vec::new();
        for (side, z) in [(&sa, za), (&sb, zb)] {
            for c in z {
                img.push(sorted(c.iter().map(|&(r, v)| (sx.pos(&side.complex.simplices(k)[r as usize]), v)).collect()));
            }
        }
        r_beta.push(induced_map_rank(&img, &sx.boundaries[k + 1], p));
    }
    report.push("chain_level_exact", chain_exact, json!(null));

    let middle_exact = (0..=top).all(|k| r_alpha[k] + r_beta[k] == h_ab[k]);
    report.push("exact_at_middle", middle_exact, json!({"alpha_ranks": r_alpha, "beta_ranks": r_beta}));
    // δ_k: H_k(X) → H_{k-1}(A∩B), once from each side
    let from_x: Vec<usize> = (0..=top).map(|k| h_x[k] - r_beta[k]).collect();
    let from_i: Vec<usize> = (0..=top).map(|k| if k == 0 { 0 } else { h_i[k - 1] - r_alpha[k - 1] }).collect();
    report.push(
        "connecting_ranks",
        from_x == from_i,
        json!({"rank": from_x, "h_intersection": h_i, "h_parts": h_ab, "h_whole": h_x}),
    );
    Ok(report)
}

/// `rank δ_k` per degree from a passing report.
pub fn connecting_ranks(report: &Report) -> Vec<usize> {
    report
        .get("connecting_ranks")
        .and_then(|c| serde_json::from_value(c.detail["rank"].clone()).ok())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::oracle::{hyperoctahedron, simplex};

    #[test]
    fn octahedron_hemispheres() {
        let o = hyperoctahedron(2);
        // vertices 4 and 5 are ±3; hemispheres are the stars of ±3
        let upper = o.subcomplex(o.facets().into_iter().filter(|f| !f.contains(&5)));
        let lower = o.subcomplex(o.facets().into_iter().filter(|f| !f.contains(&4)));
        for p in [2, 3] {
            let r = mayer_vietoris_check(&o, &upper, &lower, p).unwrap();
            assert!(r.passed(), "{}", r.to_text());
            assert_eq!(connecting_ranks(&r), vec![0, 0, 1]);
        }
    }

    #[test]
    fn disjoint_parts_give_direct_sum() {
        let labels: Vec<String> = (0..6).map(|i| i.to_string()).collect();
        let a = SimplicialComplex::from_facets(labels.clone(), vec![vec![0, 1, 2]]);
        let b = SimplicialComplex::from_facets(labels, vec![vec![3, 4], vec![4, 5], vec![3, 5]]);
        let x = a.union(&b);
        let r = mayer_vietoris_check(&x, &a, &b, 2).unwrap();
        assert!(r.passed());
        assert_eq!(connecting_ranks(&r), vec![0, 0, 0]);
        assert_eq!(r.get("connecting_ranks").unwrap().detail["h_whole"], json!([2, 1, 0]));
    }

    #[test]
    fn part_equal_to_whole() {
        let x = hyperoctahedron(1);
        let b = x.subcomplex(vec![vec![0, 2]]);
        let r = mayer_vietoris_check(&x, &x, &b, 2).unwrap();
        assert!(r.passed());
        assert!(connecting_ranks(&r).iter().all(|&c| c == 0));
    }

    #[test]
    fn non_cover_is_an_error() {
        let x = simplex(2);
        let a = x.subcomplex(vec![vec![0, 1]]);
        assert_eq!(mayer_vietoris_check(&x, &a, &a, 2).unwrap_err(), HomologyError::PartsDoNotCover);
    }
}
