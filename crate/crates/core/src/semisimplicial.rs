//! Semisimplicial sets: `D^n` with levels `W_n/W_{n-k-1}`, ordered simplices
//! of a simplicial complex, and the comparison `D^n ≅ (C^n)^{ord}`.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::json;

use crate::complexes::{build_cn, ComplexError, SimplicialComplex};
use crate::diagrams::FamilySpec;
use crate::engine::{CosetTable, ElementTable, Tower};
use crate::homology::{homology, ChainComplex, Coefficients, SparseMatrix};
use crate::report::Report;

/// Levels `0..=top`; `faces[k][i][x] = d_i(x)` for `k ≥ 1`, `0 ≤ i ≤ k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemisimplicialSet {
    pub levels: Vec<usize>,
    pub faces: Vec<Vec<Vec<u32>>>,
    pub labels: Vec<Vec<String>>,
}

/// The two candidate exchange identities for `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceIdentity {
    /// `d_i d_j = d_{j-1} d_i`
    Lower,
    /// `d_i d_j = d_{j+1} d_i`
    Upper,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityOutcome {
    pub holds: bool,
    /// Number of `(k, i, j, x)` instances compared.
    pub instances: usize,
    /// First `(k, i, j, x)` where the identity fails.
    pub counterexample: Option<(usize, usize, usize, usize)>,
}

impl SemisimplicialSet {
    pub fn top(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn face(&self, k: usize, i: usize, x: usize) -> usize {
        self.faces[k][i][x] as usize
    }

    /// Tests an exchange identity on every instance where both sides are defined.
    pub fn test_identity(&self, which: FaceIdentity) -> IdentityOutcome {
        let mut instances = 0;
        for k in 2..self.levels.len() {
            for j in 0..=k {
                for i in 0..j {
                    let other = match which {
                        FaceIdentity::Lower => j - 1,
                        FaceIdentity::Upper => j + 1,
                    };
                    if other > k - 1 || i > k - 1 {
                        continue;
                    }
                    for x in 0..self.levels[k] {
                        instances += 1;
                        let lhs = self.face(k - 1, i, self.face(k, j, x));
                        let rhs = self.face(k - 1, other, self.face(k, i, x));
                        if lhs != rhs {
                            return IdentityOutcome { holds: false, instances, counterexample: Some((k, i, j, x)) };
                        }
                    }
                }
            }
        }
        IdentityOutcome { holds: true, instances, counterexample: None }
    }
}

/// Chains free on each level, `∂ = Σ (-1)^i d_i`.
pub fn realization_chain_complex(ss: &SemisimplicialSet, reduced: bool) -> ChainComplex {
    let mut higher = Vec::new();
    for k in 1..ss.levels.len() {
        let mut m = SparseMatrix::builder(ss.levels[k - 1]);
        let mut col = Vec::new();
        for x in 0..ss.levels[k] {
            col.clear();
            for i in 0..=k {
                col.push((ss.faces[k][i][x], if i % 2 == 0 { 1 } else { -1 }));
            }
            m.push_column(&mut col);
        }
        higher.push(m);
    }
    let mut cc = ChainComplex::from_boundaries(ss.levels.first().copied().unwrap_or(0), higher, reduced);
    cc.labels = Some(ss.labels.clone());
    cc
}

/// Level `k` holds the orderings of the `k`-simplices; `d_i` deletes position `i`.
pub fn ordered_simplices(k: &SimplicialComplex) -> (SemisimplicialSet, Vec<HashMap<Vec<u32>, u32>>) {
    let top = k.dim();
    let mut tuples: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut index: Vec<HashMap<Vec<u32>, u32>> = Vec::new();
    for d in 0..=top.max(-1) {
        let mut list = Vec::new();
        for s in k.simplices(d as usize) {
            let mut perm = s.clone();
            // all permutations, lexicographic
            loop {
                list.push(perm.clone());
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        index.push(list.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect());
        tuples.push(list);
    }
    let levels = tuples.iter().map(|l| l.len()).collect();
    let mut faces = vec![Vec::new()];
    for d in 1..tuples.len() {
        let per_i = (0..=d)
            .map(|i| {
                tuples[d]
                    .iter()
                    .map(|t| {
                        let mut f = t.clone();
                        f.remove(i);
                        index[d - 1][&f]
                    })
                    .collect()
            })
            .collect();
        faces.push(per_i);
    }
    let labels = tuples
        .iter()
        .map(|l| l.iter().map(|t| t.iter().map(|&v| k.label(v)).collect::<Vec<_>>().join(">")).collect())
        .collect();
    (SemisimplicialSet { levels, faces, labels }, index)
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `D^n` with the data used to build it.
#[derive(Debug, Clone)]
pub struct Dn {
    pub tower: Tower,
    pub elements: ElementTable,
    /// `W_n / W_{n-k-1}` for each level `k`.
    pub cosets: Vec<CosetTable>,
    /// Row of every element in each level.
    pub proj: Vec<Vec<u32>>,
    pub ss: SemisimplicialSet,
    /// Every lift gave the same face.
    pub well_defined: bool,
}

/// `d_i(c W_{n-k-1}) = c s_{n-k+i} ⋯ s_{n-k+1} W_{n-k}`, evaluated on every lift `c`.
pub fn build_dn(spec: &FamilySpec, n: i64, cap: usize) -> Result<Dn, ComplexError> {
    if n < 0 {
        return Err(ComplexError::BadIndex(n));
    }
    let nu = n as usize;
    let tower = Tower::new(spec, n)?;
    let elements = tower.elements(cap)?;
    let mut cosets = Vec::new();
    let mut proj = Vec::new();
    for k in 0..=nu {
        let t = tower.cosets(n - k as i64 - 1, cap)?;
        proj.push(elements.project(&t));
        cosets.push(t);
    }
    let levels: Vec<usize> = cosets.iter().map(|t| t.len()).collect();
    let mut faces = vec![Vec::new()];
    let mut well_defined = true;
    for k in 1..=nu {
        let mut per_i = Vec::new();
        for i in 0..=k {
            let word: Vec<usize> = (1..=i).rev().map(|j| tower.s(nu - k + j)).collect();
            let u = elements.element_of(&word);
            let mut map = vec![u32::MAX; levels[k]];
            for g in 0..elements.len() {
                let x = proj[k][g] as usize;
                let y = proj[k - 1][elements.multiply(g, u)];
                if map[x] == u32::MAX {
                    map[x] = y;
                } else if map[x] != y {
                    well_defined = false;
                }
            }
            per_i.push(map);
        }
        faces.push(per_i);
    }
    let labels = cosets
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let sub = n - k as i64 - 1;
            (0..t.len())
                .map(|r| {
                    let w = t.representative(r);
                    let prefix = if w.is_empty() { String::new() } else { format!("{}.", tower.system.format_word(&w)) };
                    format!("{prefix}W{sub}")
                })
                .collect()
        })
        .collect();
    let ss = SemisimplicialSet { levels, faces, labels };
    Ok(Dn { tower, elements, cosets, proj, ss, well_defined })
}

/// `φ_k(c W_{n-k-1})` is the `k`-simplex of `C^n` with lift `c`, ordered by
/// `c`; checks it is well defined, bijective and commutes with faces.
pub fn check_phi_iso(spec: &FamilySpec, n: i64, cap: usize) -> Result<Report, ComplexError> {
    let mut report = Report::new("check phi", json!({"family": spec.name(), "n": n}));
    let dn = build_dn(spec, n, cap)?;
    let cn = build_cn(spec, n, cap)?;
    let (ord, index) = ordered_simplices(&cn.complex);
    let nu = n as usize;
    report.push("level_sizes", dn.ss.levels == ord.levels, json!({"dn": dn.ss.levels, "ordered": ord.levels}));
    if dn.ss.levels != ord.levels {
        return Ok(report);
    }
    let mut phi: Vec<Vec<u32>> = dn.ss.levels.iter().map(|&l| vec![u32::MAX; l]).collect();
    let mut well_defined = true;
    for g in 0..dn.elements.len() {
        for (k, row) in phi.iter_mut().enumerate() {
            let x = dn.proj[k][g] as usize;
            let y = index[k][&cn.lift(g, k)];
            if row[x] == u32::MAX {
                row[x] = y;
            } else if row[x] != y {
                well_defined = false;
            }
        }
    }
    report.push("phi_well_defined", well_defined, json!(null));
    let bijective = phi.iter().all(|row| {
        let mut s = row.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == row.len() && !s.contains(&u32::MAX)
    });
    report.push("phi_bijective", bijective, json!(null));
    let mut commute_fail = None;
    for k in 1..=nu {
        for i in 0..=k {
            for x in 0..dn.ss.levels[k] {
                let lhs = phi[k - 1][dn.ss.face(k, i, x)] as usize;
                let rhs = ord.face(k, i, phi[k][x] as usize);
                if lhs != rhs && commute_fail.is_none() {
                    commute_fail = Some(json!({"k": k, "i": i, "x": dn.ss.labels[k][x]}));
                }
            }
        }
    }
    report.push_witness("phi_commutes_with_faces", commute_fail.is_none(), json!(null), commute_fail);
    report.push("level0_identity", (0..dn.ss.levels[0]).all(|x| phi[0][x] as usize == x), json!(null));
    Ok(report)
}

/// `∂∂ = 0`, the recorded face identity, level sizes and connectivity of `‖D^n‖`.
pub fn check_dn(spec: &FamilySpec, n: i64, cap: usize) -> Result<Report, ComplexError> {
    let mut report = Report::new("check dn-connectivity", json!({"family": spec.name(), "n": n}));
    let dn = build_dn(spec, n, cap)?;
    report.push("faces_well_defined", dn.well_defined, json!(null));
    let cc = realization_chain_complex(&dn.ss, true);
    report.push("boundary_squared_zero", cc.check_boundary().is_ok(), json!(null));
    let lower = dn.ss.test_identity(FaceIdentity::Lower);
    let upper = dn.ss.test_identity(FaceIdentity::Upper);
    // at least one convention must hold; which one is reported
    report.push(
        "face_identity",
        lower.holds || upper.holds,
        json!({"d_i d_j = d_(j-1) d_i": lower, "d_i d_j = d_(j+1) d_i": upper}),
    );
    let order = dn.elements.len();
    let index_ok = dn.ss.levels.iter().enumerate().all(|(k, &l)| {
        let sub = dn.elements.len() / l;
        order % l == 0 && sub == subgroup_order(&dn, n - k as i64 - 1)
    });
    report.push("level_sizes", index_ok, json!({"levels": dn.ss.levels}));
    let h = homology(&cc, Coefficients::Integers);
    report.push(
        "reduced_homology_vanishes",
        h.vanishes_through(n - 1),
        json!({"reduced_betti": h.ranks()}),
    );
    Ok(report)
}

fn subgroup_order(dn: &Dn, m: i64) -> usize {
    let mask = dn.tower.mask_at(m);
    (0..dn.elements.len()).filter(|&g| dn.elements.support_mask(g) & !mask == 0).count()
}
