//! Chain complexes, Smith normal form and ranks over prime fields.

mod chain;
mod cm;
mod connectivity;
mod field;
mod mv;
mod snf;
mod sparse;

pub use chain::{
    chain_complex_of, euler_consistent, homology, universal_coefficients_consistent, ChainComplex, Coefficients,
    DegreeHomology, HomologyTable,
};
pub use cm::check_weakly_cm;
pub use connectivity::{connectivity_report, edge_path_presentation, pi1_certificate, simplify_presentation, Pi1Verdict};
pub use field::{
    axpy, column_mod_p, dot, inv_mod, is_prime, kernel_basis, rank_mod_p, rank_of_vectors, reduce_columns,
    ColumnReduction, ReduceOptions, SparseVec,
};
pub use mv::{connecting_ranks, induced_map_rank, mayer_vietoris_check};
pub use snf::{dense_snf, smith_normal_form, Snf};
pub use sparse::SparseMatrix;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("∂∂ is nonzero on chains of degree {0}")]
    NotAComplex(usize),
    #[error("the two parts do not cover the whole complex")]
    PartsDoNotCover,
    #[error("unknown coefficients {0:?} (expected z or f<p> with p prime < 65536)")]
    BadCoefficients(String),
}
