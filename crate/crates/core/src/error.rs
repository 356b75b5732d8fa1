use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("massless zero mode excluded: max_index must be >= 1 when m = 0")]
    MasslessZeroMode,

    #[error("box geometry invalid: {0}")]
    BadGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mode index {index} out of range for basis of {len} modes")]
    BadModeIndex { index: usize, len: usize },

    #[error("derivative order above 2 is not supported")]
    DerivativeOrder,

    #[error("insufficient quadrature points: need at least {needed}, got {got} (aliasing risk)")]
    InsufficientQuadrature { needed: usize, got: usize },

    #[error("operands live on different mode bases")]
    BasisMismatch,

    #[error("amplitude length {got} does not match basis size {expected}")]
    AmplitudeLength { got: usize, expected: usize },

    #[error("cat state vanishes: norm of a|alpha> + b|-alpha> is numerically zero")]
    DegenerateCat,

    #[error("degree cap exceeded: monomial degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("unassigned point label '{0}'")]
    UnassignedLabel(String),

    #[error("component index {index} out of range for spacetime dimension {dim}")]
    BadComponent { index: usize, dim: usize },

    #[error("moment order cap exceeded: order {order} exceeds cap {cap}")]
    MomentCap { order: usize, cap: usize },

    #[error("diagonal expectation has spurious imaginary part {imag:.3e} (scale {scale:.3e})")]
    SpuriousImaginary { imag: f64, scale: f64 },

    #[error(
        "Fock cutoff too small: coherent truncation bound {bound:.3e} exceeds {limit:.0e}; \
         raise the per-mode cutoff"
    )]
    CutoffTooSmall { bound: f64, limit: f64 },

    #[error("dense operator budget exceeded: dimension {dim} needs {entries} complex entries (budget {budget})")]
    DenseBudget { dim: usize, entries: usize, budget: usize },

    #[error("state vector not normalized: |norm - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("operator dimensions {got} do not match Fock space dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("mode count mismatch: Fock space has {space} modes, basis has {basis}")]
    ModeCountMismatch { space: usize, basis: usize },

    #[error("invalid serialized data: {0}")]
    BadSerialization(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
