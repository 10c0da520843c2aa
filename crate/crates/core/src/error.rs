use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("parameters {0} are not a union of full Galois orbits")]
    NotGaloisStable(String),
    #[error("polynomial degrees differ ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("invalid parameter pair: {0}")]
    InvalidPair(String),
    #[error("no non-zero invariant form exists")]
    NoInvariantForm,
    #[error("invariant form is not unique (solution space has dimension {0})")]
    NonUniqueForm(usize),
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("vectors v, Bv, ... are linearly dependent")]
    DependentBasis,
    #[error("basis change matrix is singular")]
    SingularP,
    #[error("form is not in standard (antidiagonal) shape")]
    NotStandardShape,
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("base symbol `{0}` is bound to a singular matrix")]
    SingularBase(String),
    #[error("parse error{}: {message}", location_suffix(.line, .column))]
    Parse {
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },
}

fn location_suffix(line: &Option<usize>, column: &Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l}, column {c}"),
        (None, Some(c)) => format!(" at position {c}"),
        (Some(l), None) => format!(" at line {l}"),
        (None, None) => String::new(),
    }
}

impl Error {
    pub fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            column: None,
            message: message.into(),
        }
    }

    pub fn parse_at(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            column: Some(column),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
