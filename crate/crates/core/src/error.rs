use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("arcs {0}->{1} and {1}->{0} both present")]
    Antisymmetry(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("duplicate arc {0}->{1}")]
    DuplicateArc(usize, usize),
    #[error("arc {0}->{1} is not in the graph")]
    MissingArc(usize, usize),
    #[error("{what}: {n} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is not an absolute oriented clique")]
    NotAClique,
    #[error("parts do not form a partition: {0}")]
    BadPartition(String),
    #[error("partition is not extending: {0}")]
    NotExtending(String),
    #[error("no deeply critical oriented clique of order {0} exists")]
    NoSuchOrder(usize),
    #[error("order {0} is even")]
    EvenOrder(usize),
    #[error("invalid connection set: {0}")]
    BadConnectionSet(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SelfLoop(_) => "SelfLoop",
            Error::Antisymmetry(..) => "Antisymmetry",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::DuplicateArc(..) => "DuplicateArc",
            Error::MissingArc(..) => "MissingArc",
            Error::Capacity { .. } => "Capacity",
            Error::EmptyGraph => "EmptyGraph",
            Error::NotAClique => "NotAClique",
            Error::BadPartition(_) => "BadPartition",
            Error::NotExtending(_) => "NotExtending",
            Error::NoSuchOrder(_) => "NoSuchOrder",
            Error::EvenOrder(_) => "EvenOrder",
            Error::BadConnectionSet(_) => "BadConnectionSet",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::Parse { .. } => "Parse",
        }
    }
}
