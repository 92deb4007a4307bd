use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("automata with {0} states are not supported (maximum is {max})", max = crate::MAX_STATES)]
    TooManyStates(usize),

    #[error("state {state} is out of range 1..={n}")]
    StateOutOfRange { state: usize, n: usize },

    #[error("transformations act on different sets ({left} vs {right} states)")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid transformation: {0}")]
    InvalidTransformation(String),

    #[error("letter '{0}' is not in the alphabet")]
    UnknownLetter(char),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameter constraint violated for {family}: {constraint}")]
    Constraint { family: String, constraint: String },

    #[error("unknown witness family '{0}'")]
    UnknownFamily(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("final-state count k = {k} is out of range 0..={m}")]
    FinalCountOutOfRange { k: usize, m: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
