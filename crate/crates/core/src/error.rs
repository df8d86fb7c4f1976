use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("invalid algebra descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("unsupported factor kind `{0}` (only real/complex hermitian matrices, spin factors and the real line are supported)")]
    UnsupportedFactor(String),

    #[error("block {block} has the wrong shape: {reason}")]
    BlockShape { block: usize, reason: String },

    #[error("block {block} is not self-adjoint (deviation {deviation:.3e})")]
    NotSelfAdjoint { block: usize, deviation: f64 },

    #[error("element is not a projection (idempotency defect {defect:.3e})")]
    NotProjection { defect: f64 },

    #[error("element is not positive (minimal spectral value {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("spectrum [{min:.3e}, {max:.3e}] is not contained in [0, 1]")]
    OutsideUnitInterval { min: f64, max: f64 },

    #[error(
        "generators {first} and {second} do not operator commute (commutator norm {defect:.3e})"
    )]
    NotOperatorCommuting {
        first: usize,
        second: usize,
        defect: f64,
    },

    #[error("frame projections {first} and {second} are not orthogonal")]
    NotOrthogonal { first: usize, second: usize },

    #[error("frame projection {0} is zero")]
    ZeroProjection(usize),

    #[error("projections sum to something other than the unit (defect {defect:.3e})")]
    NotUnital { defect: f64 },

    #[error("frame has {size} projections, at least {required} are required")]
    FrameTooSmall { size: usize, required: usize },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
