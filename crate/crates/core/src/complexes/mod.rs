//! Simplicial complexes: the coset complex `C^n` with its `W_n`-action,
//! oracle complexes, links, barycentric subdivision and the base chamber.

mod chamber;
mod checks;
mod cn;
mod iso;
pub mod oracle;
mod sd;
mod simplicial;

pub use chamber::{base_chamber, BaseChamber};
pub use checks::{check_link_iso, check_links, check_stabilizers, check_transitivity, fixed_point_violation};
pub use cn::{build_cn, CosetComplex};
pub use iso::{iso_check, DEFAULT_ISO_BUDGET};
pub use sd::{barycentric_subdivision, Subdivision};
pub use simplicial::{ComplexJson, GroupAction, Simplex, SimplicialComplex};

use thiserror::Error;

use crate::engine::EngineError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("simplex {0:?} is not in the complex")]
    SimplexAbsent(Simplex),
    #[error("face {0:?} is missing")]
    NotClosed(Simplex),
    #[error("vertex {0} outside the vertex universe")]
    VertexOutOfRange(u32),
    #[error("skeleton dimension {k} exceeds {n}")]
    SkeletonTooHigh { k: usize, n: usize },
    #[error("isomorphism search exceeded {0} nodes")]
    SearchBudget(u64),
    #[error("index must be non-negative, got {0}")]
    BadIndex(i64),
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
