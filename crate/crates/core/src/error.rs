use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Every variant maps to a stable
/// machine-readable code through [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("lattice matrix must have positive determinant, got {0}")]
    NotOriented(String),
    #[error("imaginary part of the period matrix is singular")]
    DegeneratePeriods,
    #[error("B·Sᵀ is not symmetric positive definite")]
    NoTropicalPolarization,
    #[error("all coefficients of the scalar Riemann condition vanish")]
    DegenerateB,
    #[error("exponents b_ij/{delta} are not all integral for B = {b}")]
    NonIntegralExponents { b: String, delta: i64 },
    #[error("curve degree {found} does not match the family degree {expected}")]
    DegreeMismatch { expected: String, found: String },
    #[error("S⁻¹·Σ l_e n_e n_e[j] is not integral: {0}")]
    NonIntegralDegree(String),
    #[error("an edge lies in a fundamental-domain wall for every tried offset")]
    WallDegeneracy,
    #[error("vertex {vertex} is not trivalent")]
    NotTrivalent { vertex: usize },
    #[error("vertex {vertex} is flat (parallel outgoing slopes)")]
    FlatVertex { vertex: usize },
    #[error("{k} does not divide every edge slope")]
    NotDivisible { k: i64 },
    #[error("curve fails validation: {0}")]
    InvalidCurve(String),
    #[error("genus {0} is outside the supported range 1..=3")]
    UnsupportedGenus(usize),
    #[error("point configuration is not generic: {0}")]
    NonGenericConfig(String),
    #[error("enumeration is not bounds-stable; refusing to certify")]
    BoundsUnstable,
    #[error("missing primitive invariant N_(g,1,{0})")]
    MissingPrimitiveValue(i64),
    #[error("lattice matrix must have integer entries for a Mumford family")]
    NonIntegralTorus,
    #[error("family check failed: {0}")]
    InvalidFamily(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::NotSymmetric => "NotSymmetric",
            Error::NotHermitian => "NotHermitian",
            Error::NotOriented(_) => "NotOriented",
            Error::DegeneratePeriods => "DegeneratePeriods",
            Error::NoTropicalPolarization => "NoTropicalPolarization",
            Error::DegenerateB => "DegenerateB",
            Error::NonIntegralExponents { .. } => "NonIntegralExponents",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NonIntegralDegree(_) => "NonIntegralDegree",
            Error::WallDegeneracy => "WallDegeneracy",
            Error::NotTrivalent { .. } => "NotTrivalent",
            Error::FlatVertex { .. } => "FlatVertex",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::UnsupportedGenus(_) => "UnsupportedGenus",
            Error::NonGenericConfig(_) => "NonGenericConfig",
            Error::BoundsUnstable => "BoundsUnstable",
            Error::MissingPrimitiveValue(_) => "MissingPrimitiveValue",
            Error::NonIntegralTorus => "NonIntegralTorus",
            Error::InvalidFamily(_) => "InvalidFamily",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
            Error::Internal(_) => "Internal",
        }
    }
}
