use thiserror::Error;

use crate::subsets::format_subset;

/// Errors raised by the library. Each variant names a domain condition the
/// caller can act on; nothing here signals an internal panic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("bad shape: need 32 >= n > m > 1 and exactly m columns (n = {n}, m = {m})")]
    BadShape { n: usize, m: usize },

    #[error("rows {} are linearly dependent", format_subset(.subset))]
    DependentRows { subset: Vec<usize> },

    #[error("no valid normal system found after {attempts} attempts")]
    GivesUp { attempts: usize },

    #[error("subset {} does not have size m + 1 = {expected}", format_subset(.subset))]
    BadSubsetSize { subset: Vec<usize>, expected: usize },

    #[error("collection is not concurrency closed")]
    NotClosed,

    #[error("{what} exceeds the configured limit ({size} > {limit})")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("region count {0} is odd; antipodal pairing impossible")]
    OddRegionCount(u64),

    #[error("chamber {0} has no antipode in the catalog")]
    UnpairedChamber(String),

    #[error("sign vector {0} is not in the catalog")]
    NotInCatalog(String),

    #[error("arrangement is not generic: hyperplanes {} concur", format_subset(.subset))]
    NotGeneric { subset: Vec<usize> },

    #[error("operation requires m = {required}, got m = {got}")]
    UnsupportedDimension { required: usize, got: usize },

    #[error("operation requires n = {n_required}, m = {m_required}")]
    WrongShape { n_required: usize, m_required: usize },

    #[error("chambers {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),

    #[error("count does not fit in 64 bits")]
    CountOverflow,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "not_square",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::BadShape { .. } => "bad_shape",
            Error::DependentRows { .. } => "dependent_rows",
            Error::GivesUp { .. } => "gives_up",
            Error::BadSubsetSize { .. } => "bad_subset_size",
            Error::NotClosed => "not_closed",
            Error::TooLarge { .. } => "too_large",
            Error::OddRegionCount(_) => "odd_region_count",
            Error::UnpairedChamber(_) => "unpaired_chamber",
            Error::NotInCatalog(_) => "not_in_catalog",
            Error::NotGeneric { .. } => "not_generic",
            Error::UnsupportedDimension { .. } => "unsupported_dimension",
            Error::WrongShape { .. } => "wrong_shape",
            Error::NotAdjacent(..) => "not_adjacent",
            Error::CountOverflow => "count_overflow",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
