use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("convex hull is a point or a segment (dimension below 2)")]
    DimensionTooLow,

    #[error("point set is not closed: {missing} lattice point(s) of its hull are missing")]
    NotClosed { missing: usize },

    #[error("segment endpoints coincide")]
    DegenerateSegment,

    #[error("point ({x}, {y}) is not a vertex of the polygon")]
    NotAVertex { x: i64, y: i64 },

    #[error("region contains no lattice points")]
    EmptyRegion,

    #[error("region is unbounded or malformed: {0}")]
    InvalidRegion(String),

    #[error("brute force is limited to {limit} lattice points, region has {count}")]
    TooManyPoints { count: usize, limit: usize },

    #[error("tau^2 = {0} is below the minimum of 2")]
    TauTooSmall(String),

    #[error("selector has length {got}, expected {expected}")]
    SelectorLengthMismatch { expected: usize, got: usize },

    #[error("construction invariant violated: {0}")]
    ConstructionInvariantViolated(String),

    #[error("Q_u #{index} has {partners} equivalent partners (at most 1 allowed)")]
    PairingViolation { index: usize, partners: usize },

    #[error("failed to write level output: {0}")]
    CheckpointWriteFailure(#[source] io::Error),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("invalid input document: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
