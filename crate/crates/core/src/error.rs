use alloc::string::String;

use thiserror::Error;

/// Every failure mode of the library.
///
/// Resource caps are always reported through [`Error::ResourceCap`], never
/// by silently truncating a result.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero pivot at index {0} in LDL^T factorization")]
    SingularPivot(usize),
    #[error("degenerate lattice or form")]
    Degenerate,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("zero vector")]
    ZeroVector,
    #[error("spanning vectors are linearly dependent")]
    DependentSpan,
    #[error("lattice is not even")]
    OddLattice,
    #[error("bilinear form on the finite group is degenerate")]
    DegenerateForm,
    #[error("input too large for brute force: {size} > cap {cap}")]
    TooLarge { size: u64, cap: u64 },
    #[error("lattice is not positive definite")]
    NotPositiveDefinite,
    #[error("lattice is not negative definite")]
    NotNegativeDefinite,
    #[error("resource cap exceeded: {what} (cap {cap})")]
    ResourceCap { what: &'static str, cap: u64 },
    #[error("orthogonal complement of the subspace is not definite")]
    ComplementNotDefinite,
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("permutation is not an automorphism of the Golay code")]
    NotCodeAutomorphism,
    #[error("sublattice is not stable under the action")]
    NotStable,
    #[error("extension by identity is not integral")]
    NotIntegral,
    #[error("matrix does not preserve the Gram form")]
    NotIsometry,
    #[error("lattice has no ambient embedding")]
    NoAmbient,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("nothing found within the search bounds")]
    NotFoundWithinBounds,
    #[error("integer does not fit the machine type used here")]
    Overflow,
}

pub type Result<T> = core::result::Result<T, Error>;
