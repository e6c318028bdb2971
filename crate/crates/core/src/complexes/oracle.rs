//! Explicit complexes independent of any group computation: the simplex,
//! the boundary of the hyperoctahedron and its skeleta.

use super::{ComplexError, Simplex, SimplicialComplex};

/// The full `n`-simplex on `{1, …, n+1}`.
pub fn simplex(n: usize) -> SimplicialComplex {
    let labels = (1..=n + 1).map(|i| i.to_string()).collect();
    SimplicialComplex::from_facets(labels, vec![(0..=n as u32).collect()])
}

/// Boundary of the `(n+1)`-dimensional hyperoctahedron on `{±1, …, ±(n+1)}`:
/// simplices are nonempty subsets containing no pair `{i, -i}`.
/// Vertex `2(i-1)` is `+i` and `2(i-1)+1` is `-i`.
pub fn hyperoctahedron(n: usize) -> SimplicialComplex {
    let coords = n + 1;
    let labels = (1..=coords).flat_map(|i| [format!("{i}"), format!("-{i}")]).collect();
    let mut facets: Vec<Simplex> = Vec::new();
    for signs in 0u32..(1 << coords) {
        facets.push((0..coords as u32).map(|i| 2 * i + (signs >> i & 1)).collect());
    }
    SimplicialComplex::from_facets(labels, facets)
}

/// `k`-skeleton of [`hyperoctahedron`]`(big_n)`.
pub fn skeleton(big_n: usize, k: usize) -> Result<SimplicialComplex, ComplexError> {
    if k > big_n {
        return Err(ComplexError::SkeletonTooHigh { k, n: big_n });
    }
    Ok(hyperoctahedron(big_n).skeleton(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn octahedron_counts() {
        let o = hyperoctahedron(2);
        assert_eq!(o.f_vector(), vec![6, 12, 8]);
        assert_eq!(o.euler_characteristic(), 2);
        let s = skeleton(2, 1).unwrap();
        assert_eq!(s.f_vector(), vec![6, 12]);
        assert!(matches!(skeleton(1, 2), Err(ComplexError::SkeletonTooHigh { k: 2, n: 1 })));
    }

    #[test]
    fn simplex_counts() {
        assert_eq!(simplex(3).num_simplices(), 15);
        for n in 0..6 {
            let s = simplex(n);
            for k in 0..=n {
                assert_eq!(s.count(k), binom(n + 1, k + 1));
            }
        }
    }

    #[test]
    fn sign_subsets() {
        for n in 0..4 {
            let h = hyperoctahedron(n);
            for k in 0..=n {
                assert_eq!(h.count(k), (1 << (k + 1)) * binom(n + 1, k + 1));
            }
        }
    }

    #[test]
    fn octahedron_vertex_link_is_square() {
        let o = hyperoctahedron(2);
        let l = o.link(&[0]).unwrap();
        assert_eq!(l.f_vector(), vec![4, 4]);
        assert!(!l.contains(&[1]));
    }
}
