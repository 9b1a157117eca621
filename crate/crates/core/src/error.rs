use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph must be connected")]
    Disconnected,

    #[error("game needs at least 2 players, got {0}")]
    TooFewPlayers(usize),

    #[error("{what} limit exceeded: {got} > {limit}")]
    GuardExceeded {
        what: &'static str,
        got: u128,
        limit: u128,
    },

    #[error("vertex {vertex}: strategy {target} is not home or a neighbor")]
    Inadmissible { vertex: usize, target: usize },

    #[error("not a derangement: {0}")]
    NotDerangement(String),

    #[error("random graph gave up after {attempts} attempts; p={p} is too small for n={n}")]
    SamplingGaveUp { n: usize, p: f64, attempts: u32 },
}
