use std::{fmt, io};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: a dataset line, an annotation block or an edit file.
    #[error("{}", DataFormatDisplay(.line, .message))]
    DataFormat { line: Option<usize>, message: String },

    /// An annotation or sentence id referenced by a dataset item could not be found.
    #[error("no annotation found for id `{0}`")]
    MissingAnnotation(String),

    /// Inputs that violate an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn data(line: usize, message: impl Into<String>) -> Self {
        Error::DataFormat { line: Some(line), message: message.into() }
    }

    pub(crate) fn data_no_line(message: impl Into<String>) -> Self {
        Error::DataFormat { line: None, message: message.into() }
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }
}

struct DataFormatDisplay<'a>(&'a Option<usize>, &'a String);

impl fmt::Display for DataFormatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(line) => write!(f, "data format error at line {line}: {}", self.1),
            None => write!(f, "data format error: {}", self.1),
        }
    }
}
