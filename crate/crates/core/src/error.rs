//! Crate-wide error type.

use thiserror::Error;

/// Errors shared across the walk, symmetry, spectral, invariant and boundary
/// modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not unitary within tolerance")]
    NotUnitary,
    #[error("evaluation point λ = 0 is not allowed")]
    ZeroArgument,
    #[error("spectral gap violation: eigenvalue within tolerance of ±1 at k = {k}")]
    GapViolation { k: f64 },
    #[error("walk is gapless (minimal gap {gap:.3e} below threshold)")]
    Gapless { gap: f64 },
    #[error("chiral block is singular (gap failure)")]
    SingularBlock,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("cell is unbalanced: chiral eigenspaces have dimensions {plus} and {minus}")]
    UnbalancedCell { plus: usize, minus: usize },
    #[error("kernel detection is ambiguous: singular value {sigma:.3e} inside ({tol:.1e}, {high:.1e})")]
    KernelAmbiguous { sigma: f64, tol: f64, high: f64 },
    #[error("winding refinement exhausted (suspected origin crossing)")]
    WindingRefinement,
    #[error("phase curve value too close to the origin: |c| = {0:.3e}")]
    CurveNearZero(f64),
    #[error("winding sum {0} is not close to an integer")]
    WindingNotInteger(f64),
    #[error("matrix is not antisymmetric within tolerance")]
    NotAntisymmetric,
    #[error("antisymmetric matrix must have even dimension, got {0}")]
    OddDimension(usize),
    #[error("flip sign determinant {0:.6} is not unimodular ±1")]
    FlipSignNotUnimodular(f64),
    #[error("projection is not η-flipped within tolerance")]
    NotEtaFlipped,
    #[error("symmetry operators do not satisfy the declared type relations")]
    InvalidRep,
    #[error("unsupported symmetry type `{0}` (only D, AIII, BDI, CII, DIII carry a nontrivial index)")]
    UnsupportedSymmetry(String),
    #[error("walk is not admissible for the given symmetry representation")]
    Inadmissible,
    #[error("decoupling coin is not admissible: {0}")]
    InadmissibleCoin(String),
    #[error("index formulas disagree: {0}")]
    FormulaMismatch(String),
    #[error("boundary mode localization is ambiguous (right-side weight {0:.3})")]
    AmbiguousLocalization(f64),
    #[error("no decay modes inside the unit disk")]
    NoDecayModes,
    #[error("determinant polynomial is identically zero (invariant component at the eigenvalue)")]
    ZeroPolynomial,
    #[error("root within 1e-6 of the unit circle (gap failure)")]
    RootOnCircle,
    #[error("antisymmetric closure failed: {0}")]
    ClosureFailure(String),
    #[error("principal logarithm hit the branch cut at -1")]
    LogBranchCut,
    #[error("linear algebra backend error: {0}")]
    Linalg(String),
    #[error("invalid JSON document: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Json(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
