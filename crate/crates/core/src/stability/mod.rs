//! Group homology via bar complexes and stabilization maps.

mod bar;
mod groups;
mod maps;
mod spectral;
mod table;

pub use bar::{BarComplex, PermutationModule};
pub use groups::{
    cycle_basis, group_homology, h1_formula, homology_with_coefficients, map_chain, odd_classes, pairing_matrix,
    pairing_rank, reduce_bar, BarReduction, DEFAULT_BUDGET, INTEGER_MAX_DEGREE, INTEGER_MAX_ORDER,
};
pub use maps::{inclusion, induced_on_homology, stabilization_map, Level, MapVerdict, StabilizationMap};
pub use spectral::{borel_spectral_sequence, D1Entry, E1Cell, E2Cell, SpectralPage};
pub use table::{
    h1_base_case, induction_report, lemma83_check, main_theorem_report, verify_main_theorem, StabilityTable,
    TableEntry,
};

use thiserror::Error;

use crate::complexes::ComplexError;
use crate::engine::EngineError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error("computation needs about {needed} sparse entries, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("stability table incomplete: {0}")]
    IncompleteTable(String),
}
