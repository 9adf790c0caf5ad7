use thiserror::Error;

/// Errors raised by the model, evaluation and quadrature routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parameters outside the orthogonality domain (need 0 < |q| < 1 and real roots r1, r2 in (-1, 1)): q={q}, a={a}, c={c}")]
    OutsideOrthogonalityDomain { q: f64, a: f64, c: f64 },

    #[error("part {part} is absent from partition {partition:?}")]
    PartAbsent { part: u32, partition: Vec<u32> },

    #[error("grade mismatch: {left} vs {right}")]
    GradeMismatch { left: i64, right: i64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular factor {factor}: |denominator| = {magnitude:e}")]
    Singular { factor: String, magnitude: f64 },

    #[error("spectral point {xi:?} is not generic (margin {margin:e})")]
    NonGeneric { xi: Vec<f64>, margin: f64 },

    #[error("spectral point {xi:?} is not in the open alcove pi > xi_1 > ... > xi_n > 0")]
    OutsideAlcove { xi: Vec<f64> },

    #[error("spectral point {xi:?} lies outside A_r: {reason}")]
    OutsideRegular { xi: Vec<f64>, reason: String },

    #[error("index {j} not admissible for {partition:?}: {reason}")]
    NotAdmissible {
        j: usize,
        partition: Vec<u32>,
        reason: &'static str,
    },

    #[error("norm N({partition:?}) = {value} is not positive")]
    NonPositiveNorm { partition: Vec<u32>, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
