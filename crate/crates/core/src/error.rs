use std::fmt;

use thiserror::Error;

/// Which half of the lattice property a witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Join,
    Meet,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Join => f.write_str("upper"),
            Bound::Meet => f.write_str("lower"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("a lattice needs at least one element")]
    Empty,

    #[error("cover ({upper}, {lower}) listed more than once")]
    DuplicateCover { upper: usize, lower: usize },

    #[error("covers contain a directed cycle through element {element}")]
    Cycle { element: usize },

    #[error("cover ({upper}, {lower}) is implied by a path through {via}")]
    NotReduced {
        upper: usize,
        lower: usize,
        via: usize,
    },

    #[error("elements {x} and {y} have {found} minimal common {bound} bounds")]
    NotLattice {
        x: usize,
        y: usize,
        bound: Bound,
        found: usize,
    },

    #[error("elements {x} and {y} are not comparable with {x} <= {y}")]
    NotComparable { x: usize, y: usize },

    #[error("{operation} refuses size {size} (limit {limit}); raise the limit to force it")]
    SizeLimit {
        operation: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("lattice is not polygonal: interval [{bottom}, {top}] is not a polygon")]
    NotPolygonal { bottom: usize, top: usize },

    #[error("forcing contracts surviving labels {spilled:?}")]
    NotExactlyRealizable { spilled: Vec<String> },

    #[error("cross-validation `{check}` failed with {} differences", diff.len())]
    CrossValidation { check: String, diff: Vec<String> },

    #[error("position {position} is not a descent of {permutation}")]
    NotDescent {
        permutation: String,
        position: usize,
    },

    #[error("ideals {first} and {second} give the same congruence")]
    Injectivity { first: String, second: String },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<u8>),

    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quotient arrow between classes {upper} and {lower} carries labels {labels:?}")]
    LabelConflict {
        upper: usize,
        lower: usize,
        labels: Vec<String>,
    },

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
