use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation of U^dag U from I is {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("factor dimensions {factors:?} do not multiply to {dim}")]
    FactorDims { factors: Vec<usize>, dim: usize },

    #[error("slot {slot} out of range for {n_factors} factors")]
    SlotOutOfRange { slot: usize, n_factors: usize },

    #[error("operator Schmidt rank needs exactly two factors, got {0}")]
    NotBipartite(usize),

    #[error("operator does not commute with the process (commutator norm {residual:e})")]
    NotCommuting { residual: f64 },

    #[error("parameter {name} = {value} out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("total momentum {p} is not commensurate with box length {box_length}")]
    Incommensurate { p: f64, box_length: f64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
