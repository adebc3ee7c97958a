use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alist parse error on line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("regular sampling failed: {0}")]
    Sampling(String),

    #[error("invalid channel parameter: {0}")]
    Channel(String),

    #[error("llr length {got} does not match code length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("linear program: {0}")]
    Program(String),

    #[error("solver failed at iteration {iteration}: {detail}")]
    Solver { iteration: usize, detail: String },

    #[error("parity violated by integral LP output (check {check})")]
    ParityViolation { check: usize },

    #[error("clique membership: {0}")]
    Membership(String),

    #[error("cycle projection: {0}")]
    Projection(String),

    #[error("triangulation: {0}")]
    Triangulation(String),

    #[error("no progress: {0}")]
    NoProgress(String),

    #[error("code dimension {0} exceeds the enumeration bound")]
    DimensionTooLarge(usize),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
