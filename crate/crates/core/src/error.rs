use thiserror::Error;

use crate::field::FieldTag;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mismatched context: {0}")]
    MismatchedContext(String),

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("polynomial involves the u (xi) variables; a pure z-polynomial is required")]
    NonZPure,

    #[error("operation requires characteristic zero, field is {0}")]
    PositiveCharacteristic(FieldTag),

    #[error("not integrable: d{j}(h{i}) != d{i}(h{j}) (1-based)", i = .i + 1, j = .j + 1)]
    NotIntegrable { i: usize, j: usize },

    #[error("operator has non-constant leading coefficients")]
    NonConstantLeading,

    #[error("operators {i} and {j} do not commute (0-based)")]
    NonCommuting { i: usize, j: usize },

    #[error("family contains no operator of order one")]
    AllZeroOrder,

    #[error("membership oracles disagree: {0}")]
    OracleDisagreement(String),

    #[error("j(z - H) is not identically 1")]
    NotUnimodular,

    #[error("map is not homogeneous of a single degree >= 2")]
    NotHomogeneous,

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("imaginary unit used outside the gaussian field")]
    ImaginaryInNonGaussianField,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable variant name, used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MismatchedContext(_) => "MismatchedContext",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::SingularMatrix => "SingularMatrix",
            Error::NonZPure => "NonZPure",
            Error::PositiveCharacteristic(_) => "PositiveCharacteristic",
            Error::NotIntegrable { .. } => "NotIntegrable",
            Error::NonConstantLeading => "NonConstantLeading",
            Error::NonCommuting { .. } => "NonCommuting",
            Error::AllZeroOrder => "AllZeroOrder",
            Error::OracleDisagreement(_) => "OracleDisagreement",
            Error::NotUnimodular => "NotUnimodular",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::Syntax { .. } => "SyntaxError",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::ImaginaryInNonGaussianField => "ImaginaryInNonGaussianField",
            Error::InvalidField(_) => "InvalidField",
            Error::Invalid(_) => "Invalid",
        }
    }
}
