use std::path::PathBuf;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("coloring is incomplete: node {0} has no color")]
    IncompleteColoring(NodeId),

    #[error("tree does not span the graph: {0}")]
    NotSpanning(String),

    #[error("graph is disconnected: node {node} is unreachable from node {root}")]
    Disconnected { node: NodeId, root: NodeId },

    #[error("unsupported transmission range {range}; supported ranges: {supported}")]
    UnsupportedRange { range: String, supported: String },

    #[error("no lattice basis tiles the pattern validly (pattern is probably mistranscribed)")]
    NoValidLattice,

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable, machine-readable category used by the CLI and the C ABI.
    pub fn category(&self) -> &'static str {
        match self {
            Error::UnknownNode(_) | Error::InvalidInput(_) | Error::UnsupportedRange { .. } => {
                "invalid-input"
            }
            Error::IncompleteColoring(_) => "incomplete-coloring",
            Error::NotSpanning(_) | Error::Disconnected { .. } => "topology",
            Error::NoValidLattice => "no-lattice",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
            Error::Internal(_) => "internal",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
