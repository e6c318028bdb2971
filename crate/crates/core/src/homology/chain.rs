//! Chain complexes of free modules and their homology over ℤ or `F_p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{rank_mod_p, smith_normal_form, HomologyError, SparseMatrix};
use crate::complexes::SimplicialComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Field(u32),
}

impl Coefficients {
    pub const F2: Coefficients = Coefficients::Field(2);
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "z"),
            Coefficients::Field(p) => write!(f, "f{p}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = HomologyError;

    /// `z`, or `f<p>` for a prime `p < 2^16`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "z" {
            return Ok(Coefficients::Integers);
        }
        let p: u32 = t
            .strip_prefix('f')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| HomologyError::BadCoefficients(s.to_string()))?;
        if p >= 1 << 16 || !super::is_prime(p) {
            return Err(HomologyError::BadCoefficients(s.to_string()));
        }
        Ok(Coefficients::Field(p))
    }
}

impl Serialize for Coefficients {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `boundaries[k]: C_k → C_{k-1}`. `boundaries[0]` is the augmentation
/// `C_0 → ℤ` in a reduced complex and has zero rows otherwise.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
    pub labels: Option<Vec<Vec<String>>>,
    pub reduced: bool,
}

impl ChainComplex {
    /// Assembles a complex from `∂_1, …, ∂_top`, adding `∂_0`.
    pub fn from_boundaries(dim0: usize, higher: Vec<SparseMatrix>, reduced: bool) -> Self {
        let mut dims = vec![dim0];
        dims.extend(higher.iter().map(|m| m.ncols()));
        let aug = if reduced {
            SparseMatrix::from_columns(1, (0..dim0).map(|_| vec![(0, 1)]).collect())
        } else {
            SparseMatrix::zeros(0, dim0)
        };
        let mut boundaries = vec![aug];
        boundaries.extend(higher);
        ChainComplex { dims, boundaries, labels: None, reduced }
    }

    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// First `k` with `∂_{k-1} ∂_k ≠ 0`, if any.
    pub fn boundary_failure(&self) -> Option<usize> {
        (1..self.boundaries.len()).find(|&k| !self.boundaries[k - 1].mul(&self.boundaries[k], None).is_zero())
    }

    pub fn check_boundary(&self) -> Result<(), HomologyError> {
        match self.boundary_failure() {
            Some(k) => Err(HomologyError::NotAComplex(k)),
            None => Ok(()),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

/// Oriented simplicial chains, each simplex oriented by its sorted vertices.
pub fn chain_complex_of(k: &SimplicialComplex, reduced: bool) -> ChainComplex {
    let top = k.dim();
    let dim0 = if top >= 0 { k.count(0) } else { 0 };
    let mut higher = Vec::new();
    for d in 1..=top.max(0) as usize {
        let mut m = SparseMatrix::builder(k.count(d - 1));
        let mut col = Vec::new();
        for s in k.simplices(d) {
            col.clear();
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                let row = k.position(&f).expect("faces are present") as u32;
                col.push((row, if i % 2 == 0 { 1 } else { -1 }));
            }
            m.push_column(&mut col);
        }
        higher.push(m);
    }
    let mut cc = ChainComplex::from_boundaries(dim0, higher, reduced);
    if top >= 0 {
        let labels = (0..=top as usize)
            .map(|d| {
                k.simplices(d)
                    .iter()
                    .map(|s| s.iter().map(|&v| k.label(v)).collect::<Vec<_>>().join(","))
                    .collect()
            })
            .collect();
        cc.labels = Some(labels);
    }
    cc
}

fn serialize_torsion<S: Serializer>(t: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|d| d.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    /// Free rank, or dimension over a field.
    pub rank: usize,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub ring: Coefficients,
    pub reduced: bool,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyTable {
    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.rank).collect()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.rank)
    }

    /// Vanishing in degrees `0..=k` (ranks and torsion).
    pub fn vanishes_through(&self, k: i64) -> bool {
        self.degrees.iter().take((k + 1).max(0) as usize).all(|d| d.rank == 0 && d.torsion.is_empty())
    }

    pub fn first_nonvanishing(&self) -> Option<usize> {
        self.degrees.iter().position(|d| d.rank != 0 || !d.torsion.is_empty())
    }

    /// Torsion coefficients exceed one and form a divisibility chain.
    pub fn torsion_is_normalized(&self) -> bool {
        self.degrees.iter().all(|d| {
            d.torsion.iter().all(|t| t > &BigUint::one())
                && d.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("coefficients {}{}\n", self.ring, if self.reduced { ", reduced" } else { "" });
        for (k, d) in self.degrees.iter().enumerate() {
            let tors: Vec<String> = d.torsion.iter().map(|t| format!("Z/{t}")).collect();
            out.push_str(&format!("H_{k:<3} rank {:<6} {}\n", d.rank, tors.join(" + ")));
        }
        out
    }
}

/// Homology in degrees `0..=top`, using Smith normal form over ℤ and
/// elimination over `F_p`.
pub fn homology(cc: &ChainComplex, ring: Coefficients) -> HomologyTable {
    let n = cc.dims.len();
    let degrees = match ring {
        Coefficients::Field(p) => {
            let ranks: Vec<usize> = cc.boundaries.par_iter().map(|m| rank_mod_p(m, p)).collect();
            (0..n)
                .map(|k| {
                    let next = ranks.get(k + 1).copied().unwrap_or(0);
                    DegreeHomology { rank: cc.dims[k] - ranks[k] - next, torsion: Vec::new() }
                })
                .collect()
        }
        Coefficients::Integers => {
            let snfs: Vec<_> = cc.boundaries.par_iter().map(smith_normal_form).collect();
            (0..n)
                .map(|k| {
                    let next = snfs.get(k + 1);
                    let rank = cc.dims[k] - snfs[k].rank - next.map_or(0, |s| s.rank);
                    DegreeHomology { rank, torsion: next.map_or(Vec::new(), |s| s.torsion()) }
                })
                .collect()
        }
    };
    HomologyTable { ring, reduced: cc.reduced, degrees }
}

/// Alternating sum of ranks agrees with the alternating count of cells.
pub fn euler_consistent(cc: &ChainComplex, table: &HomologyTable) -> bool {
    let alt: i64 = table.ranks().iter().enumerate().map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) }).sum();
    let shift = if cc.reduced { 1 } else { 0 };
    alt == cc.euler_characteristic() - shift
}

/// `dim_{F_p} H_k = rank H_k + #{torsion in degrees k and k-1 divisible by p}`.
pub fn universal_coefficients_consistent(z: &HomologyTable, fp: &HomologyTable) -> bool {
    let Coefficients::Field(p) = fp.ring else { return false };
    let p = BigUint::from(p);
    let divisible = |k: usize| {
        z.degrees.get(k).map_or(0, |d| d.torsion.iter().filter(|t| (*t % &p).is_zero()).count())
    };
    z.degrees.len() == fp.degrees.len()
        && (0..z.degrees.len()).all(|k| {
            let below = if k > 0 { divisible(k - 1) } else { 0 };
            fp.degrees[k].rank == z.degrees[k].rank + divisible(k) + below
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::oracle::{hyperoctahedron, simplex, skeleton};
    use proptest::prelude::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn rp2() -> SimplicialComplex {
        // six-vertex real projective plane
        let f = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        SimplicialComplex::from_facets(labels(6), f.iter().map(|s| s.to_vec()))
    }

    #[test]
    fn simplices_are_acyclic() {
        for n in 0..=6 {
            let cc = chain_complex_of(&simplex(n), true);
            assert!(cc.check_boundary().is_ok());
            assert!(homology(&cc, Coefficients::Integers).vanishes_through(n as i64));
            assert!(homology(&cc, Coefficients::F2).vanishes_through(n as i64));
        }
    }

    #[test]
    fn spheres_and_graphs() {
        let h = homology(&chain_complex_of(&hyperoctahedron(2), true), Coefficients::Integers);
        assert_eq!(h.ranks(), vec![0, 0, 1]);
        let h = homology(&chain_complex_of(&hyperoctahedron(3), false), Coefficients::Integers);
        assert_eq!(h.ranks(), vec![1, 0, 0, 1]);
        let h = homology(&chain_complex_of(&skeleton(2, 1).unwrap(), false), Coefficients::Integers);
        // connected graph: rank H_1 = 1 - χ
        assert_eq!(h.ranks(), vec![1, (1i64 - (6 - 12)) as usize]);
        let two_points = SimplicialComplex::from_facets(labels(2), vec![vec![0], vec![1]]);
        assert_eq!(homology(&chain_complex_of(&two_points, true), Coefficients::Integers).ranks(), vec![1]);
    }

    #[test]
    fn projective_plane_torsion() {
        let k = rp2();
        let cc = chain_complex_of(&k, false);
        let z = homology(&cc, Coefficients::Integers);
        assert_eq!(z.ranks(), vec![1, 0, 0]);
        assert_eq!(z.degrees[1].torsion, vec![BigUint::from(2u32)]);
        let f2 = homology(&cc, Coefficients::F2);
        assert_eq!(f2.ranks(), vec![1, 1, 1]);
        let f3 = homology(&cc, Coefficients::Field(3));
        assert_eq!(f3.ranks(), vec![1, 0, 0]);
        assert!(universal_coefficients_consistent(&z, &f2));
        assert!(universal_coefficients_consistent(&z, &f3));
        assert!(euler_consistent(&cc, &f2) && euler_consistent(&cc, &z));
        assert!(z.torsion_is_normalized());
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("z".parse::<Coefficients>().unwrap(), Coefficients::Integers);
        assert_eq!("f2".parse::<Coefficients>().unwrap(), Coefficients::F2);
        assert_eq!("F65521".parse::<Coefficients>().unwrap(), Coefficients::Field(65521));
        assert!("f4".parse::<Coefficients>().is_err());
        assert!("f65537".parse::<Coefficients>().is_err());
        assert!("q".parse::<Coefficients>().is_err());
    }

    #[test]
    fn broken_boundary_detected() {
        let d1 = SparseMatrix::from_dense(&[vec![1], vec![1]]);
        let cc = ChainComplex::from_boundaries(2, vec![d1], true);
        assert_eq!(cc.check_boundary(), Err(HomologyError::NotAComplex(1)));
    }

    fn random_complex() -> impl Strategy<Value = SimplicialComplex> {
        proptest::collection::vec(proptest::collection::btree_set(0u32..7, 1..5), 1..8).prop_map(|fs| {
            SimplicialComplex::from_facets(labels(7), fs.into_iter().map(|s| s.into_iter().collect()))
        })
    }

    proptest! {
        #[test]
        fn invariants_on_random_complexes(k in random_complex(), reduced in any::<bool>()) {
            let cc = chain_complex_of(&k, reduced);
            prop_assert!(cc.check_boundary().is_ok());
            let z = homology(&cc, Coefficients::Integers);
            prop_assert!(z.torsion_is_normalized());
            prop_assert!(euler_consistent(&cc, &z));
            for p in [2, 3, 5] {
                let fp = homology(&cc, Coefficients::Field(p));
                prop_assert!(euler_consistent(&cc, &fp));
                prop_assert!(universal_coefficients_consistent(&z, &fp));
            }
        }
    }
}
