use thiserror::Error;

/// Errors raised by the exact core, the polynomial front end and the sampler.
///
/// The variant names double as the error identifiers printed by the CLI, so
/// `Display` always starts with the variant name.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("EmptyGenerators: a polyhedron needs at least one generator")]
    EmptyGenerators,
    #[error("InvalidExponent: generator {0} has a negative coordinate")]
    InvalidExponent(String),
    #[error("InvalidDirection: direction {0} is not admissible")]
    InvalidDirection(String),
    #[error("DimensionMismatch: expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ZeroPoint: the gauge is undefined at the origin")]
    ZeroPoint,
    #[error("NotAWeight: the origin is a generator, so the germ is bounded")]
    NotAWeight,
    #[error("NotConvenient: the polyhedron does not meet every coordinate axis")]
    NotConvenient,
    #[error("NonConvenientArgument: argument {0} of the mixed mass is not convenient")]
    NonConvenientArgument(usize),
    #[error("NoStabilization: truncated values still changing at N = {0}")]
    NoStabilization(u64),
    #[error("ParseError: {message} at byte {offset}")]
    Parse { offset: usize, message: String },
    #[error("VariableOutOfRange: z{index} is outside 1..={n}")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("ZeroPolynomial: component {0} is identically zero")]
    ZeroPolynomial(usize),
    #[error("NotAZero: component {0} does not vanish at the center")]
    NotAZero(usize),
    #[error("EmptyShell: no accepted samples at r = {0}; increase box_depth")]
    EmptyShell(f64),
    #[error("TooFewPoints: need at least {needed} grid points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("Json: {0}")]
    Json(String),
}

impl Error {
    /// Identifier of the error kind, identical to the variant name.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyGenerators => "EmptyGenerators",
            Error::InvalidExponent(_) => "InvalidExponent",
            Error::InvalidDirection(_) => "InvalidDirection",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroPoint => "ZeroPoint",
            Error::NotAWeight => "NotAWeight",
            Error::NotConvenient => "NotConvenient",
            Error::NonConvenientArgument(_) => "NonConvenientArgument",
            Error::NoStabilization(_) => "NoStabilization",
            Error::Parse { .. } => "ParseError",
            Error::VariableOutOfRange { .. } => "VariableOutOfRange",
            Error::ZeroPolynomial(_) => "ZeroPolynomial",
            Error::NotAZero(_) => "NotAZero",
            Error::EmptyShell(_) => "EmptyShell",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Json(_) => "Json",
        }
    }

    /// True for malformed input (as opposed to a violated precondition).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Json(_) | Error::VariableOutOfRange { .. }
        )
    }

    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
