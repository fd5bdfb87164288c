use thiserror::Error;

/// Errors produced by the toolkit. Every variant maps to a stable name used
/// by the command-line reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Kraus operators do not define an isometry (deviation {deviation:e})")]
    NotIsometry { deviation: f64 },

    #[error("noise dimensions differ: {0} vs {1}")]
    NoiseDimMismatch(usize, usize),

    #[error("eigenvalue 1 of the predual channel is not simple (fixed space dimension {0})")]
    DegenerateFixedSpace(usize),

    #[error("fixed point is not a state (min eigenvalue {0:e})")]
    NotAState(f64),

    #[error("channel is not primitive")]
    NotPrimitive,

    #[error("operator is outside the resolvent domain (tr[rho_ss X] = {0:e})")]
    NotInDomain(f64),

    #[error("size guard exceeded: {required} > {limit}")]
    SizeGuardExceeded { required: u128, limit: u128 },

    #[error("peripheral eigenvalue {modulus} found but its eigenvector is not proportional to a unitary (deviation {deviation:e})")]
    AmbiguousPeripheral { modulus: f64, deviation: f64 },

    #[error("observable is not centered (mean {0:e})")]
    NotCentered(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("Fisher information must be non-negative, got {0}")]
    NegativeFisher(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPSD(f64),

    #[error("model sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotIsometry { .. } => "NotIsometry",
            Error::NoiseDimMismatch(..) => "NoiseDimMismatch",
            Error::DegenerateFixedSpace(_) => "DegenerateFixedSpace",
            Error::NotAState(_) => "NotAState",
            Error::NotPrimitive => "NotPrimitive",
            Error::NotInDomain(_) => "NotInDomain",
            Error::SizeGuardExceeded { .. } => "SizeGuardExceeded",
            Error::AmbiguousPeripheral { .. } => "AmbiguousPeripheral",
            Error::NotCentered(_) => "NotCentered",
            Error::NotHermitian(_) => "NotHermitian",
            Error::NegativeFisher(_) => "NegativeFisher",
            Error::NotNormalized(_) => "NotNormalized",
            Error::NotPSD(_) => "NotPSD",
            Error::SizeMismatch(..) => "SizeMismatch",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
