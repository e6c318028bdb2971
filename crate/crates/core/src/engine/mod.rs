//! Coxeter group computation: word reduction, coset enumeration, element
//! tables and the tower `W_{-1} ⊂ W_0 ⊂ … ⊂ W_n` of a family.

mod elements;
mod section3;
mod todd_coxeter;
mod tower;
mod word;

pub use elements::ElementTable;
pub use section3::check_section3;
pub use todd_coxeter::{coset_enumerate, CosetTable};
pub use tower::Tower;
pub use word::{in_set_word, shortlex_less, WordReducer};

use thiserror::Error;

use crate::diagrams::{CoxeterMatrix, Label};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;
pub const DEFAULT_COSET_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("enumeration exceeded cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("word of reduced length {len} exceeds the supported bound {bound}")]
    WordTooLong { len: usize, bound: usize },
    #[error("letter {0} is not a generator")]
    BadLetter(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error(transparent)]
    Diagram(#[from] crate::diagrams::DiagramError),
}

/// A Coxeter matrix together with the generator order used for ShortLex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix) -> Self {
        CoxeterSystem { matrix }
    }

    /// Reorders the generators; `order` must be a permutation of `0..rank`.
    pub fn with_order(matrix: &CoxeterMatrix, order: &[usize]) -> Self {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        assert!(sorted.iter().copied().eq(0..matrix.rank()), "order is not a permutation");
        CoxeterSystem { matrix: matrix.restrict(order) }
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// `m_st`, `None` for infinity.
    pub fn m(&self, s: usize, t: usize) -> Option<u32> {
        self.matrix.entry(s, t).finite()
    }

    pub fn label(&self, s: usize, t: usize) -> Label {
        self.matrix.entry(s, t)
    }

    pub fn name(&self, s: usize) -> &str {
        self.matrix.name(s)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.matrix.index_of(name)
    }

    pub fn is_infinite_labelled(&self) -> bool {
        self.matrix.has_infinity()
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, EngineError> {
        text.split(|c: char| c.is_whitespace() || c == '.' || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| self.index_of(t).ok_or_else(|| EngineError::UnknownGenerator(t.to_string())))
            .collect()
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(" ")
    }
}

/// All elements of a finite system in ShortLex-BFS order.
pub fn enumerate_group(system: &CoxeterSystem, cap: usize) -> Result<ElementTable, EngineError> {
    let table = coset_enumerate(system, &[], cap)?;
    Ok(ElementTable::from_regular_table(system, &table))
}

/// Reduced ShortLex normal form of a word via M-moves; works for infinite systems.
pub fn reduce_word(system: &CoxeterSystem, word: &[usize]) -> Result<Vec<usize>, EngineError> {
    WordReducer::new(system).reduce(word)
}
