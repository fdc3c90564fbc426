use thiserror::Error;

use crate::graph::CAPACITY;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown graph format `{0}` (expected `edges` or `dot`)")]
    UnknownFormat(String),
    #[error("graph declares no vertices")]
    EmptyGraph,
    #[error("graph has {0} vertices, capacity is {CAPACITY}")]
    Capacity(usize),
    #[error("operands are bound to different graphs")]
    GraphMismatch,
    #[error("vertex index {0} is out of range")]
    VertexIndex(usize),
    #[error("malformed word token `{0}`")]
    BadToken(String),
    #[error("the identity element has no root")]
    Identity,
    #[error("{what} limited to {limit} vertices, got {got}")]
    SizeGuard { what: &'static str, limit: usize, got: usize },
    #[error("not an element of this lattice")]
    ForeignElement,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
