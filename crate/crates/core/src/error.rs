use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not a projector (max defect {defect:e})")]
    NotProjector { defect: f64 },

    #[error("not an isometry (max defect of V^dagger V - I is {defect:e})")]
    NotIsometry { defect: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("state is not normalised (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("unknown register `{0}`")]
    UnknownRegister(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid strategy `{name}`: {reason}")]
    InvalidStrategy { name: String, reason: String },

    #[error("strategy `{name}` cannot play as {seat}")]
    WrongSeat { name: String, seat: &'static str },

    #[error("degenerate chart point: {0}")]
    Decode(String),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
