use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate polyline")]
    DegeneratePolyline,

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("curve not regular at sample {0}")]
    NotRegular(usize),

    #[error("eps = {eps} outside the admissible range ({lo}, {hi})")]
    EpsOutOfRange { eps: f64, lo: f64, hi: f64 },

    #[error("modulus out of range: k = {0}")]
    ModulusOutOfRange(f64),

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("sin-integral obstruction: r = {0} is odd, the pendulum curve cannot close")]
    OddWinding(i64),

    #[error("winding count r must be nonzero")]
    ZeroWinding,

    #[error("codimension-one configuration ({kind}) at ({x}, {y})")]
    CodimensionOne { kind: String, x: f64, y: f64 },

    #[error("cycle explosion: more than {limit} cycles (partial count {partial})")]
    CycleExplosion { limit: u64, partial: u64 },

    #[error("singular diagram: alternated cycle with area {0}")]
    SingularDiagram(f64),

    #[error("stalled: step fell below {0}")]
    Stalled(f64),

    #[error("argument out of supported range: {0}")]
    OutOfRange(String),

    #[error("crossing specification mismatch: {0}")]
    CrossingMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
