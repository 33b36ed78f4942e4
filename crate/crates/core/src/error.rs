use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("product manifold needs at least one factor")]
    EmptyProduct,

    #[error("total dimension {0} is below 2")]
    DimensionTooSmall(u32),

    #[error("sphere factor dimension must be at least 1")]
    ZeroDimension,

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: String },

    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("mode has {got} components but the manifold has {expected} factors")]
    FactorCountMismatch { expected: usize, got: usize },

    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(String),

    #[error("coefficient expansion is empty")]
    EmptyExpansion,

    #[error("coefficient expansion repeats the mode with levels {0:?}")]
    DuplicateMode(alloc::vec::Vec<u32>),

    #[error("coefficient expansion has zero L2 norm")]
    ZeroNorm,

    #[error("manifold is Ricci-flat; the zeroth-order term vanishes")]
    RicciFlat,

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("tangent vector is not tangent to the factor sphere (p.v = {0:e})")]
    NotTangent(f64),

    #[error("zero tangent vector")]
    ZeroTangent,

    #[error("degenerate tangent frame")]
    DegenerateFrame,

    #[error("quadrature limited to total dimension 4, got {0}")]
    DimensionTooLarge(u32),

    #[error("harmonic polynomial degree {0} exceeds the supported maximum")]
    DegreeTooLarge(u32),

    #[error("finite-difference step {0:e} is outside (0, injectivity radius / 4)")]
    BadStep(f64),

    #[error("basis index {index} out of range: level {level} has {available} harmonics")]
    BasisIndex {
        level: u32,
        index: usize,
        available: usize,
    },

    #[error("{0}")]
    Tolerance(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
