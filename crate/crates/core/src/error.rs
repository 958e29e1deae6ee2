use std::io;
use std::path::PathBuf;

use crate::store::ElementKind;

/// Errors produced by the crate's fallible operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An array size or extent of zero was requested.
    #[error("array size must be at least 1")]
    ZeroSize,

    /// A 1-D index fell outside `[0, len)`.
    #[error("index {index} out of bounds for length {len}")]
    OutOfBounds { index: usize, len: usize },

    /// A 2-D coordinate fell outside the shape.
    #[error("coordinate ({row}, {col}) out of bounds for {rows}x{cols}")]
    OutOfBounds2 {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    /// The affine map is not a bijection (gcd(k, n) != 1).
    #[error("affine map with k={k}, n={n} is not invertible")]
    NotInvertible { k: usize, n: usize },

    /// Wrong number of extents or coordinates for the restructuring.
    #[error("expected {expected} coordinate(s)/extent(s), got {got}")]
    WrongArity { expected: usize, got: usize },

    /// A value of one element kind was written into a store of another.
    #[error("value kind {got:?} does not match store kind {expected:?}")]
    KindMismatch {
        expected: ElementKind,
        got: ElementKind,
    },

    /// The hiding chain's final modulus is 5, so only 0..=4 can be hidden.
    #[error("F can only hide constants below 5, got {value}")]
    HiddenTooLarge { value: u64 },

    /// Chain depth outside the 13-pair table.
    #[error("chain depth must be in 1..=13, got {count}")]
    DepthOutOfRange { count: u32 },

    /// A ratio metric needs a positive baseline.
    #[error("{what} must be positive to form a ratio")]
    ZeroBaseline { what: &'static str },

    /// Composite LOC of an entirely empty program is undefined.
    #[error("composite LOC of an empty program is undefined")]
    EmptyProgram,

    /// A workspace file could not be written.
    #[error("cannot write {path}: {source}")]
    Workspace {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
