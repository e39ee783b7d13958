use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not integral")]
    NotIntegral,
    #[error("characteristic two is not allowed here")]
    CharTwo,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("an enumeration bound is required for inseparable polynomials")]
    InsepBoundRequired,
    #[error("characteristic polynomial mismatch")]
    CharPolyMismatch,
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("basis does not span an ideal")]
    NotAnIdeal,
    #[error("not an imaginary quadratic ring of integers with d = 2, 3 mod 4")]
    NotImaginaryQuadratic,
    #[error("indefinite form")]
    IndefiniteForm,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("ring not supported for this operation")]
    UnsupportedRing,
    #[error("lattice does not have full rank")]
    NotFullRank,
    #[error("x0 lies in the base field")]
    X0InBase,
    #[error("lattice is not free")]
    NotFree,
    #[error("search needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Variant name as reported by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NotIntegral => "NotIntegral",
            Error::CharTwo => "CharTwo",
            Error::InvalidRing(_) => "InvalidRing",
            Error::Unsupported(_) => "Unsupported",
            Error::InvalidParams(_) => "InvalidParams",
            Error::InsepBoundRequired => "InsepBoundRequired",
            Error::CharPolyMismatch => "CharPolyMismatch",
            Error::NotSeparable => "NotSeparable",
            Error::NotIrreducible => "NotIrreducible",
            Error::NotAnIdeal => "NotAnIdeal",
            Error::NotImaginaryQuadratic => "NotImaginaryQuadratic",
            Error::IndefiniteForm => "IndefiniteForm",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::UnsupportedRing => "UnsupportedRing",
            Error::NotFullRank => "NotFullRank",
            Error::X0InBase => "X0InBase",
            Error::NotFree => "NotFree",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
