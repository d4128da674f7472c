use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate interpolation point {0}")]
    DuplicatePoints(f64),

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("the infinity point must be the last point")]
    InfinityNotLast,

    #[error("zero scaling factor at point index {0}")]
    ZeroFactor(usize),

    #[error("family parameter must be positive and finite, got {0}")]
    NonPositiveC(f64),

    #[error("degenerate point family: {0}")]
    DegenerateFamily(String),

    #[error("summation of an empty list")]
    EmptyInput,

    #[error("tile F({m},{k}) too large for a {h}x{w} feature map")]
    TileTooLarge { m: usize, k: usize, h: usize, w: usize },

    #[error("every grid point was degenerate")]
    EmptyGrid,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn bad_shape(msg: impl Into<String>) -> Error {
    Error::BadShape(msg.into())
}
