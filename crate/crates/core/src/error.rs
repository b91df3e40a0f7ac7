use thiserror::Error;

use crate::measure::Cell;

/// Errors raised by measure construction, divergence evaluation and refinement.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("measure is not normalized (total mass = {0})")]
    NotNormalized(f64),

    #[error("negative density {value} at {at}")]
    NegativeDensity { at: String, value: f64 },

    #[error("invalid support: {0}")]
    InvalidSupport(String),

    #[error("cell lies outside the support of the measure")]
    CellOutsideSupport,

    #[error("measures are defined over incompatible reference measures")]
    MismatchedReference,

    #[error("P is not absolutely continuous with respect to R")]
    NotAbsolutelyContinuous { witness: Cell },

    #[error("adaptive quadrature did not converge (max depth {0})")]
    QuadratureDidNotConverge(u32),

    #[error("invalid order {0}: must be finite, positive and different from 1")]
    InvalidOrder(f64),

    #[error("order {0} is outside the range where the partition functional is certified (needs > 1)")]
    OrderOutOfRange(f64),

    #[error("q-logarithm needs a positive argument, got {0}")]
    NonPositiveArgument(f64),

    #[error("transform is undefined: {0}")]
    DomainError(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("cell admits no valid split")]
    NoValidSplit,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("level-set root isolation failed: {0}")]
    LevelSetResolutionFailure(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl Error {
    /// Stable short name of the variant, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotNormalized(_) => "NotNormalized",
            Error::NegativeDensity { .. } => "NegativeDensity",
            Error::InvalidSupport(_) => "InvalidSupport",
            Error::CellOutsideSupport => "CellOutsideSupport",
            Error::MismatchedReference => "MismatchedReference",
            Error::NotAbsolutelyContinuous { .. } => "NotAbsolutelyContinuous",
            Error::QuadratureDidNotConverge(_) => "QuadratureDidNotConverge",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::OrderOutOfRange(_) => "OrderOutOfRange",
            Error::NonPositiveArgument(_) => "NonPositiveArgument",
            Error::DomainError(_) => "DomainError",
            Error::InvalidSplit(_) => "InvalidSplit",
            Error::NoValidSplit => "NoValidSplit",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::LevelSetResolutionFailure(_) => "LevelSetResolutionFailure",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureDidNotConverge(_) | Error::LevelSetResolutionFailure(_) | Error::DomainError(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
