use thiserror::Error;

/// Errors raised while building pattern data structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("duplicate entry at ({0}, {1})")]
    DuplicateEntry(usize, usize),
    #[error("index ({row}, {col}) out of range for a {nrows}x{ncols} pattern")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error(
        "pattern has {ncols} columns but {nrows} states; need at least as many columns as states"
    )]
    TooFewColumns { nrows: usize, ncols: usize },
    #[error("malformed compressed pattern: {0}")]
    Malformed(String),
}

/// Element outside the universe of an index set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("element {element} outside universe of size {capacity}")]
pub struct IndexOutOfRange {
    pub element: usize,
    pub capacity: usize,
}
