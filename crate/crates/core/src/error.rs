use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("argument error: {0}")]
    Arg(String),
    #[error("not a Maurer-Cartan element; residual {residual}")]
    NotMaurerCartan { residual: String },
    #[error("series does not terminate: {0}")]
    NonTerminating(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    OutOfCategory(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn arg(msg: impl Into<String>) -> Self {
        Error::Arg(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
