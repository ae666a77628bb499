use thiserror::Error;

use crate::point_set::DiscrepancyKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate ({point}, {axis}) = {value} lies outside [0, 1]")]
    OutOfUnitCube {
        point: usize,
        axis: usize,
        value: f64,
    },

    #[error("row {row} has {found} coordinates, expected {expected}")]
    RaggedInput {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("point set is empty")]
    EmptyInput,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("Fibonacci index {0} is outside the supported range 2..=92")]
    IndexTooLarge(u32),

    #[error("dimension {requested} unsupported (direction table covers 1..={max})")]
    DimensionUnsupported { requested: usize, max: usize },

    #[error("direction table line {line}: {message}")]
    DirectionTable { line: usize, message: String },

    #[error("operation not defined for {0}")]
    KindUnsupported(DiscrepancyKind),

    #[error("quadrature needs {cells} cells, budget is {budget}")]
    TooExpensive { cells: u128, budget: u128 },

    #[error("exact L-infinity evaluation needs {estimated_boxes} boxes, budget is {budget}")]
    BudgetExceeded { estimated_boxes: u128, budget: u128 },

    #[error("expected dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("non-finite gradient at point {point}, axis {axis}")]
    NonFiniteGradient { point: usize, axis: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
