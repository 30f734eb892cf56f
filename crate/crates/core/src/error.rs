use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid pole location {0}")]
    InvalidPole(f64),
    #[error("evaluation point lies within tolerance of a pole")]
    PoleProximity,
    #[error("function is not in class G: {0}")]
    NotClassG(&'static str),
    #[error("translation would leave class G (min eigenvalue {min_eigenvalue})")]
    TranslationViolation { min_eigenvalue: f64 },
    #[error("kernel certificate requested at a real point")]
    RealAxisPoint,
    #[error("function has no finite poles")]
    DegreeZero,
    #[error("all residues vanish")]
    NullFunction,
    #[error("inverse has a zero off the negative real axis ({0})")]
    ComplexZero(f64),
    #[error("reduction step did not decrease the degree ({before} -> {after})")]
    NonDecreasingDegree { before: usize, after: usize },
    #[error("continued fraction has no levels")]
    EmptyFraction,
    #[error("operation requires a scalar function, got dimension {0}")]
    NotScalar(usize),
    #[error("coefficient {index} is not positive ({value})")]
    NonPositiveCoefficient { index: usize, value: f64 },
    #[error("expected a pure measure transform (no linear or constant part)")]
    NotMeasureTransform,
    #[error("reciprocal undefined: linear term must be invertible or vanish with an invertible constant")]
    NotInvertible,
    #[error("invalid conductivity pair: {0}")]
    InvalidConductivity(&'static str),
    #[error("volume fraction {0} outside the open interval (0, 1)")]
    InvalidFraction(f64),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("degenerate denominator in effective-conductivity formula")]
    DegenerateDenominator,
    #[error("core tensor makes sigma2*I - core singular")]
    SingularCore,
    #[error("lamination matrix M1 must be real symmetric PSD with unit trace")]
    BadM1,
    #[error("harmonic average divides by zero for a layer with nonzero weight")]
    ZeroPhase,
    #[error("perpendicular laminate conductivity has a zero denominator")]
    ZeroDenominator,
    #[error("invalid laminate: {0}")]
    InvalidLaminate(&'static str),
    #[error("laminate weights sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("function is not realizable as a multicoated assemblage: {0}")]
    NotRealizable(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
