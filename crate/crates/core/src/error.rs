use thiserror::Error;

/// Errors raised across the library. Variants carry enough context to be
/// reported directly to a user.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate vertex identifier `{0}`")]
    DuplicateVertex(String),
    #[error("edge endpoint `{0}` is not a declared vertex")]
    UnknownVertex(String),
    #[error("loop at vertex `{0}`")]
    Loop(String),
    #[error("duplicate edge {{{0}, {1}}}")]
    MultiEdge(String, String),
    #[error("empty graph")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word token `{0}`")]
    BadToken(String),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("{{{0}, {1}}} is not an edge of the defining graph")]
    NotAnEdge(String, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cycle required: {0}")]
    CycleRequired(String),
    #[error("not induced by isomorphism: {0}")]
    NotInduced(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
