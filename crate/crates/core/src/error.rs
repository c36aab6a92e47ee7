use std::path::PathBuf;

/// Errors raised anywhere in the library.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("unknown group family {0:?}")]
    UnknownFamily(String),
    #[error("group order exceeds cap {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("more than {cap} subgroups")]
    SubgroupCountCapExceeded { cap: usize },
    #[error("more than {cap} candidate cliques")]
    CliqueCapExceeded { cap: usize },
    #[error("census of {size} coset triples exceeds cap {cap}")]
    CensusCapExceeded { size: u64, cap: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("operands belong to different parent groups")]
    ParentMismatch,
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("empty coset list")]
    EmptyList,
    #[error("expected 2 or 3 subgroups, got {0}")]
    Arity(usize),
    #[error("k = {0} outside the supported range 2..=6")]
    InvalidK(usize),
    #[error("element id {id} out of range for group of order {order}")]
    ElementOutOfRange { id: usize, order: usize },
    #[error("counter overflow while computing {0}")]
    Overflow(&'static str),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("lattice cache {path:?} is corrupt: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("i/o error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Whether the error comes from hitting a configured resource cap.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::OrderCapExceeded { .. }
                | Error::SubgroupCountCapExceeded { .. }
                | Error::CliqueCapExceeded { .. }
                | Error::CensusCapExceeded { .. }
        )
    }
}
