use thiserror::Error;

/// A violated metric axiom, with the witnessing indices.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricViolation {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry ({i},{j}) is not a finite number")]
    NonFinite { i: usize, j: usize },
    #[error("entry ({i},{j}) is negative: {value}")]
    Negative { i: usize, j: usize, value: f64 },
    #[error("diagonal entry ({i},{i}) is {value}, expected 0")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("asymmetry at ({i},{j}): {forward} != {backward}")]
    Asymmetric {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },
    #[error("distinct points {i} and {j} are at distance 0")]
    ZeroDistance { i: usize, j: usize },
    #[error(
        "triangle violation ({i},{j},{k}): d({i},{k}) = {direct} > {via} = d({i},{j}) + d({j},{k})"
    )]
    Triangle {
        i: usize,
        j: usize,
        k: usize,
        direct: f64,
        via: f64,
    },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric: {0}")]
    Metric(#[from] MetricViolation),
    #[error("space has {count} points, exceeding the cap of {cap}")]
    TooManyPoints { count: usize, cap: usize },
    #[error("space is empty")]
    EmptySpace,
    #[error("{0} labels given for {1} points")]
    LabelCount(usize, usize),
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("point index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("space has no base point")]
    Unpointed,
    #[error("space already has a base point")]
    AlreadyPointed,
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("length {length} is not a whole multiple of spacing {spacing}")]
    NotDivisible { length: f64, spacing: f64 },
    #[error("operation needs at least {needed} points, space has {actual}")]
    TooFewPoints { needed: usize, actual: usize },
    #[error("objects live on different spaces")]
    SpaceMismatch,
    #[error("expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("non-finite value at point {0}")]
    NonFiniteValue(usize),
    #[error("empty family")]
    EmptyFamily,
    #[error("subset does not contain the base point")]
    SubsetMissingBase,
    #[error(
        "radius {radius} is not a grid point strictly inside (0, {length}) at spacing {spacing}"
    )]
    NotInteriorGridPoint {
        radius: f64,
        length: f64,
        spacing: f64,
    },
    #[error("example index {0} out of range 0..=25")]
    ExampleOutOfRange(usize),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("missing value for point {0:?}")]
    MissingPoint(String),
    #[error("malformed case: {0}")]
    MalformedCase(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
