use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root system `{0}`: {1}")]
    InvalidSystem(String, String),

    #[error("not a finite-type Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("{0} is not a positive root of this system")]
    NotPositive(String),

    #[error("letter {letter} out of range for rank {rank}")]
    BadLetter { letter: usize, rank: usize },

    #[error("cannot parse `{0}`: {1}")]
    Parse(String, String),

    #[error("subset is not {0}")]
    WrongClass(&'static str),

    #[error("budget exceeded: {what} (estimated {estimate}, limit {limit})")]
    Budget {
        what: &'static str,
        estimate: u128,
        limit: u128,
    },

    #[error("freeness could not be decided for {0}")]
    Ambiguous(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index {0} out of range")]
    Index(usize),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
