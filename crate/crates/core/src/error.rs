use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no edges")]
    NoEdges,

    #[error("node {node} out of range for a graph with {num_nodes} nodes")]
    NodeOutOfRange { node: usize, num_nodes: usize },

    #[error("node {0} is isolated: no walk distribution")]
    IsolatedNode(usize),

    #[error("node set has zero total degree")]
    ZeroDegreeSet,

    #[error("k = {k} exceeds the {usable} non-isolated nodes")]
    TooManyComponents { k: usize, usable: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("every community is empty")]
    NoCommunities,

    #[error("empty membership distribution")]
    EmptyMembership,

    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    #[error("node id {0} is not present in the network")]
    UnknownNode(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
