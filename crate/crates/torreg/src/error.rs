use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported grading: cokernel has torsion (non-smooth input)")]
    UnsupportedGrading,

    #[error("unsupported rank {0}: chamber and cone machinery is limited to rank <= 3")]
    UnsupportedRank(usize),

    #[error("fan is not complete: facet {0:?} is not shared by exactly two maximal cones")]
    IncompleteFan(Vec<usize>),

    #[error("non-smooth maximal cone at index {0}")]
    NonSmooth(usize),

    #[error("cone is not pointed")]
    NonPointed,

    #[error("witness not needed: degree is already nef")]
    WitnessNotNeeded,

    #[error("degree is outside the effective cone")]
    OutsideEffectiveCone,

    #[error("witness not found within the search cap {0}")]
    WitnessNotFound(usize),

    #[error("module is not asserted torsion-free")]
    NotTorsionFree,

    #[error("certificate inapplicable: no single chamber contains all generator offsets")]
    CertificateInapplicable,

    #[error("unbounded active slice: graded piece is infinite-dimensional")]
    UnboundedActiveSlice,

    #[error("unsupported module shape for this operation: {0}")]
    UnsupportedModuleShape(&'static str),

    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(&'static str),

    #[error("sheaf is zero")]
    ZeroSheaf,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
