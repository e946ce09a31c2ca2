use thiserror::Error;

/// Errors raised by graph construction, set operations and the solver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node {node} out of range (graph has {node_count} nodes)")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("disjoint union of an empty sequence of graphs")]
    EmptyUnion,

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("partition is not stable: block {block} mixes nodes {left} and {right}")]
    UnstablePartition {
        block: usize,
        left: usize,
        right: usize,
    },

    #[error("handle belongs to a different universe")]
    UniverseMismatch,

    #[error("resource bound exceeded: {what} needs {requested}, limit is {limit}")]
    Resource {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),

    #[error("variable `{0}` is defined twice")]
    DuplicateVariable(String),

    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` has arity {expected}, got {found} children")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("signature must contain at least one symbol")]
    EmptySignature,

    #[error("unknown axiom `{name}`; supported: {supported}")]
    UnknownAxiom { name: String, supported: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
