use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant maps to a short stable token (see [`Error::token`]) which the
/// command-line front end prints verbatim on domain errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not antisymmetric (deviation {0:.3e})")]
    NotAntisymmetric(f64),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("commutator is not central (deviation {0:.3e})")]
    NotCentral(f64),
    #[error("Fock space needs at least two levels, got {0}")]
    TooSmall(usize),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("no unitary representation: norm becomes negative at level {level}")]
    NoUnitaryRep { level: usize },
    #[error("mode count {0} exceeds the supported maximum")]
    SizeCap(usize),
    #[error("invalid spin {0}: 2j must be a nonnegative integer")]
    BadSpin(String),
    #[error("generators do not close under the commutator (residual {0:.3e})")]
    NotSubalgebra(f64),
    #[error("value out of floating-point range: {0}")]
    Range(String),
    #[error("expectation value vanishes")]
    ZeroMean,
    #[error("mole fractions must be positive and sum to one")]
    BadFractions,
    #[error("need at least two energy levels, got {0}")]
    TooFew(usize),
    #[error("undamped oscillator driven exactly at resonance")]
    UndampedResonance,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable token for the error kind.
    pub fn token(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::NotHermitian(_) => "not_hermitian",
            Error::NotAntisymmetric(_) => "not_antisymmetric",
            Error::UnknownAlgebra(_) => "unknown_algebra",
            Error::NotCentral(_) => "not_central",
            Error::TooSmall(_) => "too_small",
            Error::Truncation(_) => "truncation",
            Error::NoUnitaryRep { .. } => "no_unitary_rep",
            Error::SizeCap(_) => "size_cap",
            Error::BadSpin(_) => "bad_spin",
            Error::NotSubalgebra(_) => "not_subalgebra",
            Error::Range(_) => "range",
            Error::ZeroMean => "zero_mean",
            Error::BadFractions => "bad_fractions",
            Error::TooFew(_) => "too_few",
            Error::UndampedResonance => "undamped_resonance",
            Error::Invalid(_) => "invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
